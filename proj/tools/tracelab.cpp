#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "tracelab/dixmier.hpp"
#include "tracelab/geomspec.hpp"
#include "tracelab/matrixlab.hpp"
#include "tracelab/report.hpp"
#include "tracelab/seqfile.hpp"
#include "tracelab/sequence.hpp"
#include "tracelab/wodzicki.hpp"
#include "tracelab/zetalab.hpp"

namespace tl = tracelab;

namespace {

struct RunConfig {
  std::string command;
  std::string model = "harmonic";
  int n = 2;
  double R_max = 100.0;
  int L_max = 256;
  int H = 20;
  int J = 12;
  int G = 8;
  int sphere_order = 32;
  std::uint64_t seed = 0x72616365ull;
  int threads = 0;  // 0: TRACE_LAB_THREADS or hardware
  std::string format = "json";
  std::string out;
  std::string csv_out;
  double L = 1.0;
  double delta = 0.0;
  double ratio = 0.5;
  std::uint64_t trials = 1000;
  int dim_min = 2;
  int dim_max = 16;
  double gap_tol = 0.02;
  double cauchy_tol = 5e-3;
  double window_ratio = 0.125;
  double t_max = 1e6;
  std::string seq_file;
  std::string symbol_kind = "norm_power";
  int symbol_fiber = 0;  // 0: scalar (or 2^[n/2] for diint-style symbols)
  std::string symbol_fourier;
  std::string symbol_csv;
  double symbol_scale = 1.0;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tl::ConfigError("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

void apply_config_file(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  auto get = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("model.name")) cfg.model = *v;
  if (auto v = get("model.n")) cfg.n = std::stoi(*v);
  if (auto v = get("model.R_max")) cfg.R_max = std::stod(*v);
  if (auto v = get("model.L_max")) cfg.L_max = std::stoi(*v);
  if (auto v = get("model.L")) cfg.L = std::stod(*v);
  if (auto v = get("model.delta")) cfg.delta = std::stod(*v);
  if (auto v = get("model.ratio")) cfg.ratio = std::stod(*v);
  if (auto v = get("estimator.H")) cfg.H = std::stoi(*v);
  if (auto v = get("estimator.J")) cfg.J = std::stoi(*v);
  if (auto v = get("estimator.cauchy_tol")) cfg.cauchy_tol = std::stod(*v);
  if (auto v = get("estimator.window_ratio")) cfg.window_ratio = std::stod(*v);
  if (auto v = get("grid.G")) cfg.G = std::stoi(*v);
  if (auto v = get("grid.sphere_order")) cfg.sphere_order = std::stoi(*v);
  if (auto v = get("output.format")) cfg.format = *v;
  if (auto v = get("output.out")) cfg.out = *v;
  if (auto v = get("output.csv_out")) cfg.csv_out = *v;
  if (auto v = get("seed")) cfg.seed = std::stoull(*v);
  if (auto v = get("threads")) cfg.threads = std::stoi(*v);
  if (auto v = get("trials")) cfg.trials = std::stoull(*v);
  if (auto v = get("dim_min")) cfg.dim_min = std::stoi(*v);
  if (auto v = get("dim_max")) cfg.dim_max = std::stoi(*v);
  if (auto v = get("gap_tol")) cfg.gap_tol = std::stod(*v);
  if (auto v = get("t_max")) cfg.t_max = std::stod(*v);
  if (auto v = get("seq_file")) cfg.seq_file = *v;
  if (auto v = get("symbol.kind")) cfg.symbol_kind = *v;
  if (auto v = get("symbol.fiber")) cfg.symbol_fiber = std::stoi(*v);
  if (auto v = get("symbol.fourier")) cfg.symbol_fourier = *v;
  if (auto v = get("symbol.csv")) cfg.symbol_csv = *v;
  if (auto v = get("symbol.scale")) cfg.symbol_scale = std::stod(*v);
}

struct ModelBundle {
  tl::CharacteristicSequence seq;
  std::optional<tl::SpectralModel> spectral;
  std::optional<double> expected;  // analytic limit when the class pins one
};

ModelBundle resolve_model(const RunConfig& cfg) {
  if (!cfg.seq_file.empty()) {
    for (auto& named : tl::load_sequence_file(cfg.seq_file)) {
      if (named.name == cfg.model) {
        std::optional<double> expected;
        const auto& t = named.sequence.tail();
        if (t.kind == tl::TailKind::inverse_asymptotic) expected = t.L;
        if (t.summable()) expected = 0.0;
        return ModelBundle{std::move(named.sequence), std::nullopt, expected};
      }
    }
    throw tl::ConfigError("model '" + cfg.model + "' not found in " + cfg.seq_file);
  }
  if (cfg.model == "torus") {
    tl::SpectralModel m = tl::torus_model(cfg.n, cfg.R_max);
    auto seq = m.to_sequence();
    const double L = m.expected_weyl;
    return ModelBundle{std::move(seq), std::move(m), L};
  }
  if (cfg.model == "sphere") {
    tl::SpectralModel m = tl::sphere_model(cfg.n, cfg.L_max);
    auto seq = m.to_sequence();
    const double L = m.expected_weyl;
    return ModelBundle{std::move(seq), std::move(m), L};
  }
  if (cfg.model == "varilly")
    return ModelBundle{tl::varilly_model(), std::nullopt, std::nullopt};
  if (cfg.model == "harmonic")
    return ModelBundle{tl::synthetic_model(tl::SyntheticKind::harmonic), std::nullopt, 1.0};
  if (cfg.model == "scaled-harmonic" || cfg.model == "scaled_harmonic") {
    tl::SyntheticParams p;
    p.L = cfg.L;
    return ModelBundle{tl::synthetic_model(tl::SyntheticKind::scaled_harmonic, p),
                       std::nullopt, cfg.L};
  }
  if (cfg.model == "geometric") {
    tl::SyntheticParams p;
    p.ratio = cfg.ratio;
    return ModelBundle{tl::synthetic_model(tl::SyntheticKind::geometric, p), std::nullopt,
                       0.0};
  }
  if (cfg.model == "perturbed") {
    tl::SyntheticParams p;
    p.L = cfg.L;
    p.delta = cfg.delta;
    return ModelBundle{tl::synthetic_model(tl::SyntheticKind::perturbed, p), std::nullopt,
                       cfg.L};
  }
  if (cfg.model == "oscillating")
    return ModelBundle{tl::synthetic_model(tl::SyntheticKind::oscillating), std::nullopt,
                       std::nullopt};
  if (cfg.model == "zero")
    return ModelBundle{tl::CharacteristicSequence::zero(), std::nullopt, 0.0};
  throw tl::ConfigError("unknown model '" + cfg.model + "'");
}

tl::PrincipalSymbol resolve_symbol(const RunConfig& cfg, const tl::QuadratureGrid& grid) {
  tl::PrincipalSymbol sym;
  if (cfg.symbol_kind == "norm_power") {
    sym = tl::norm_power_symbol(cfg.n);
  } else if (cfg.symbol_kind == "f_norm_power") {
    // fourier spec: "k1,..,kn:re,im;k1,..,kn:re,im;..."
    tl::FourierSeries series;
    std::stringstream ss(cfg.symbol_fourier);
    std::string term;
    while (std::getline(ss, term, ';')) {
      if (term.empty()) continue;
      const auto colon = term.find(':');
      if (colon == std::string::npos)
        throw tl::ConfigError("symbol.fourier: expected k1,..,kn:re,im terms");
      tl::FourierTerm ft;
      std::stringstream ks(term.substr(0, colon));
      std::string cell;
      while (std::getline(ks, cell, ',')) ft.k.push_back(std::stoi(cell));
      std::stringstream cs(term.substr(colon + 1));
      double re = 0, im = 0;
      char comma = 0;
      cs >> re >> comma >> im;
      ft.coeff = {re, im};
      series.push_back(ft);
    }
    const int fiber = cfg.symbol_fiber > 0 ? cfg.symbol_fiber : 1;
    sym = tl::f_times_norm_power(cfg.n, std::move(series), fiber);
  } else if (cfg.symbol_kind == "csv") {
    const int fiber = cfg.symbol_fiber > 0 ? cfg.symbol_fiber : 1;
    sym = tl::symbol_from_csv(cfg.symbol_csv, cfg.n, fiber, grid);
  } else {
    throw tl::ConfigError("unknown symbol kind '" + cfg.symbol_kind + "'");
  }
  if (cfg.symbol_scale != 1.0) sym = tl::scale_symbol(sym, cfg.symbol_scale);
  return sym;
}

// config echo: every result-affecting knob; thread count deliberately absent
// (results are thread-count invariant and summaries must compare bytewise)
tl::Json config_echo(const RunConfig& cfg) {
  tl::Json j = tl::Json::object();
  j.set("command", cfg.command);
  j.set("model", cfg.model);
  j.set("n", static_cast<std::int64_t>(cfg.n));
  j.set("R_max", cfg.R_max);
  j.set("L_max", static_cast<std::int64_t>(cfg.L_max));
  j.set("H", static_cast<std::int64_t>(cfg.H));
  j.set("J", static_cast<std::int64_t>(cfg.J));
  j.set("G", static_cast<std::int64_t>(cfg.G));
  j.set("sphere_order", static_cast<std::int64_t>(cfg.sphere_order));
  j.set("seed", cfg.seed);
  j.set("format", cfg.format);
  j.set("L", cfg.L);
  j.set("delta", cfg.delta);
  j.set("ratio", cfg.ratio);
  j.set("trials", cfg.trials);
  j.set("dim_min", static_cast<std::int64_t>(cfg.dim_min));
  j.set("dim_max", static_cast<std::int64_t>(cfg.dim_max));
  j.set("gap_tol", cfg.gap_tol);
  j.set("cauchy_tol", cfg.cauchy_tol);
  j.set("window_ratio", cfg.window_ratio);
  j.set("t_max", cfg.t_max);
  if (!cfg.seq_file.empty()) j.set("seq_file", cfg.seq_file);
  if (cfg.command == "connes") {
    j.set("symbol_kind", cfg.symbol_kind);
    j.set("symbol_scale", cfg.symbol_scale);
  }
  return j;
}

struct Verdicts {
  tl::Json rows = tl::Json::array();
  bool all_pass = true;

  void add(const std::string& name, bool pass, std::string detail) {
    tl::Json row = tl::Json::object();
    row.set("name", name);
    row.set("pass", pass);
    row.set("detail", std::move(detail));
    rows.push(std::move(row));
    all_pass = all_pass && pass;
  }
};

// flat per-estimator record: {name, method, value, error, measurable,
// schedule_max}
tl::Json estimator_record(const std::string& name, const char* method, double value,
                          double error, const char* measurable,
                          std::uint64_t schedule_max) {
  tl::Json j = tl::Json::object();
  j.set("name", name);
  j.set("method", method);
  j.set("value", value);
  j.set("error", error);
  j.set("measurable", measurable);
  j.set("schedule_max", schedule_max);
  return j;
}

tl::Json estimate_json(const tl::ResidueEstimate& e) {
  tl::Json j = tl::Json::object();
  j.set("method", tl::method_name(e.method));
  j.set("value", e.value);
  j.set("error", e.error_estimate);
  if (e.method == tl::EstimateMethod::weyl_ratio) j.set("diverged", e.diverged);
  return j;
}

tl::Json bracket_json(const tl::LimitBracket& b) {
  tl::Json j = tl::Json::object();
  j.set("liminf", b.liminf_estimate);
  j.set("limsup", b.limsup_estimate);
  j.set("measurable", tl::measurable_name(b.measurable));
  if (b.value) j.set("value", *b.value);
  j.set("schedule_max", b.schedule_max);
  j.set("slope_oscillation", b.slope_oscillation);
  j.set("gamma_oscillation", b.gamma_oscillation);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tl::ConfigError("cannot open output file " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int finish(const RunConfig& cfg, tl::Json& report, Verdicts& verdicts,
           const std::string& csv) {
  report.set("verdicts", std::move(verdicts.rows));
  report.set("pass", verdicts.all_pass);
  if (cfg.format == "csv") {
    write_text(cfg.out, csv);
  } else {
    write_text(cfg.out, report.dump(2) + "\n");
    if (!cfg.csv_out.empty()) write_text(cfg.csv_out, csv);
  }
  return verdicts.all_pass ? 0 : 1;
}

int cmd_gamma(const RunConfig& cfg) {
  ModelBundle mb = resolve_model(cfg);
  tl::IndexSchedule schedule = tl::IndexSchedule::dyadic(cfg.H);

  const tl::L1InfReport ideal = tl::l1inf_diagnostic(mb.seq, schedule);

  tl::DixmierConfig dc;
  dc.schedule_exponent = cfg.H;
  dc.cauchy_tol = cfg.cauchy_tol;
  dc.window_ratio = cfg.window_ratio;
  const tl::DixmierValue dv = tl::dixmier_value(mb.seq, dc);

  // CSV along the schedule (clamped exactly like the bracket clamps)
  tl::PrefixSumTable table(mb.seq);
  std::string csv = "k,sigma_k,gamma_k\n";
  for (const std::uint64_t k : schedule.indices) {
    if (const auto len = mb.seq.length();
        len && mb.seq.tail().kind != tl::TailKind::finite && k > *len)
      break;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                  static_cast<unsigned long long>(k), table.sigma(k), table.gamma(k));
    csv += buf;
  }

  tl::Json report = tl::Json::object();
  report.set("command", "gamma");
  report.set("config", config_echo(cfg));
  tl::Json results = tl::Json::object();
  results.set("membership", tl::verdict_name(ideal.verdict));
  results.set("sup_gamma_observed", ideal.sup_gamma_observed);
  if (ideal.witness) {
    tl::Json w = tl::Json::object();
    w.set("C0", ideal.witness->C0);
    w.set("C1", ideal.witness->C1);
    w.set("description", ideal.witness->description);
    results.set("witness", std::move(w));
  }
  results.set("bracket", bracket_json(dv.bracket));
  results.set("slope", estimate_json(dv.slope));
  results.set("value", dv.value());
  results.set("consistent", dv.consistent);
  tl::Json records = tl::Json::array();
  const char* meas = tl::measurable_name(dv.bracket.measurable);
  records.push(estimator_record(
      mb.seq.name(), "bracket",
      dv.bracket.value ? *dv.bracket.value : dv.bracket.limsup_estimate,
      0.5 * (dv.bracket.limsup_estimate - dv.bracket.liminf_estimate), meas,
      dv.bracket.schedule_max));
  records.push(estimator_record(mb.seq.name(), tl::method_name(dv.slope.method),
                                dv.slope.value, dv.slope.error_estimate, meas,
                                dv.bracket.schedule_max));
  results.set("records", std::move(records));
  report.set("results", std::move(results));

  Verdicts v;
  v.add("ideal_membership", ideal.verdict != tl::IdealVerdict::non_member,
        std::string("verdict ") + tl::verdict_name(ideal.verdict));
  v.add("estimators_consistent", dv.consistent, "bracket vs slope");
  if (mb.expected) {
    const double tol = cfg.gap_tol * std::max(1.0, std::abs(*mb.expected));
    const double diff = std::abs(dv.value() - *mb.expected);
    v.add("expected_value", diff <= tol,
          "|" + tl::format_double_17(dv.value()) + " - " +
              tl::format_double_17(*mb.expected) + "| <= " + tl::format_double_17(tol));
  }
  return finish(cfg, report, v, csv);
}

int cmd_zeta(const RunConfig& cfg) {
  ModelBundle mb = resolve_model(cfg);
  tl::ResidueConfig rc;
  rc.levels = cfg.J;
  const tl::ResidueEstimate est = tl::residue_at_one(mb.seq, rc);

  std::string csv;
  if (cfg.format == "csv" || !cfg.csv_out.empty()) {
    std::ostringstream os;
    tl::write_residue_csv(os, mb.seq, rc);
    csv = os.str();
  }

  tl::Json report = tl::Json::object();
  report.set("command", "zeta");
  report.set("config", config_echo(cfg));
  tl::Json results = tl::Json::object();
  results.set("residue", estimate_json(est));
  tl::Json records = tl::Json::array();
  records.push(estimator_record(mb.seq.name(), tl::method_name(est.method), est.value,
                                est.error_estimate, "n/a", rc.N_cut));
  results.set("records", std::move(records));
  report.set("results", std::move(results));

  Verdicts v;
  if (mb.expected) {
    const double tol =
        cfg.gap_tol * std::max(1.0, std::abs(*mb.expected)) + est.error_estimate;
    v.add("expected_residue", std::abs(est.value - *mb.expected) <= tol,
          tl::format_double_17(est.value) + " vs " + tl::format_double_17(*mb.expected));
  } else {
    v.add("computed", true, "no analytic expectation for this model");
  }
  return finish(cfg, report, v, csv);
}

int cmd_connes(const RunConfig& cfg) {
  ModelBundle mb = resolve_model(cfg);
  if (!mb.spectral)
    throw tl::ConfigError("connes: model must be a spectral model");
  // the symbol quadrature lives on the flat torus; pairing it with any other
  // base manifold would compare different operators
  if (cfg.model != "torus")
    throw tl::ConfigError("connes: only torus models pair with the torus-based "
                          "symbol quadrature");

  tl::ConnesConfig cc;
  cc.dixmier.schedule_exponent = cfg.H;
  cc.dixmier.cauchy_tol = cfg.cauchy_tol;
  cc.dixmier.window_ratio = cfg.window_ratio;
  cc.residue.levels = cfg.J;
  cc.grid_G = cfg.G;
  cc.sphere_order = cfg.sphere_order;
  cc.threads = cfg.threads;

  const tl::QuadratureGrid grid =
      tl::QuadratureGrid::make(cfg.n, cfg.G, cfg.sphere_order);
  const tl::PrincipalSymbol symbol = resolve_symbol(cfg, grid);
  // the spectral stream scales with the symbol so the three routes stay paired
  tl::CharacteristicSequence seq = mb.spectral->to_sequence();
  if (cfg.symbol_scale != 1.0) seq = tl::scale_sequence(seq, cfg.symbol_scale);
  const tl::ConnesReport rep = tl::connes_check(seq, symbol, cc);

  const double dix = rep.dixmier, res = rep.residue_zeta, wod = rep.wodzicki;
  const double gap = rep.max_pairwise_gap;

  std::string csv = "route,value\n";
  csv += "dixmier," + tl::format_double_17(dix) + "\n";
  csv += "zeta_residue," + tl::format_double_17(res) + "\n";
  csv += "wodzicki," + tl::format_double_17(wod) + "\n";

  tl::Json report = tl::Json::object();
  report.set("command", "connes");
  report.set("config", config_echo(cfg));
  tl::Json results = tl::Json::object();
  results.set("dixmier", dix);
  results.set("zeta_residue", res);
  results.set("wodzicki", wod);
  results.set("max_pairwise_gap", gap);
  results.set("bracket", bracket_json(rep.dixmier_detail.bracket));
  report.set("results", std::move(results));

  Verdicts v;
  v.add("three_way_gap", gap <= cfg.gap_tol,
        tl::format_double_17(gap) + " <= " + tl::format_double_17(cfg.gap_tol));
  return finish(cfg, report, v, csv);
}

int cmd_matrix_props(const RunConfig& cfg) {
  tl::CampaignConfig cc;
  cc.trials = cfg.trials;
  cc.dim_min = cfg.dim_min;
  cc.dim_max = cfg.dim_max;
  cc.seed = cfg.seed;
  cc.threads = cfg.threads;
  const auto results = tl::run_matrix_campaigns(cc);

  std::string csv = "family,trials,max_violation,worst_seed\n";
  tl::Json rows = tl::Json::array();
  Verdicts v;
  for (const auto& r : results) {
    tl::Json row = tl::Json::object();
    row.set("family", r.family);
    row.set("trials", r.trials);
    row.set("max_violation", r.max_violation);
    row.set("worst_seed", r.worst_seed);
    rows.push(std::move(row));
    csv += r.family + "," + std::to_string(r.trials) + "," +
           tl::format_double_17(r.max_violation) + "," + std::to_string(r.worst_seed) +
           "\n";
    v.add(r.family, r.max_violation <= 1e-9,
          "max relative violation " + tl::format_double_17(r.max_violation));
  }

  tl::Json report = tl::Json::object();
  report.set("command", "matrix-props");
  report.set("config", config_echo(cfg));
  tl::Json res = tl::Json::object();
  res.set("campaigns", std::move(rows));
  report.set("results", std::move(res));
  return finish(cfg, report, v, csv);
}

int cmd_constants(const RunConfig& cfg) {
  std::string csv = "n,omega,c,lambda,g0\n";
  tl::Json rows = tl::Json::array();
  Verdicts v;
  double worst_lc = 0.0, worst_g0 = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double om = tl::omega(n);
    const double c = tl::c_constant(n);
    const double lam = tl::lambda_constant(n);
    const double g0 = tl::g0_constant(n);
    worst_lc = std::max(worst_lc, std::abs(lam * c - 1.0));
    worst_g0 = std::max(worst_g0, std::abs(g0 * std::pow(2.0 * M_PI, n) - 1.0));
    tl::Json row = tl::Json::object();
    row.set("n", static_cast<std::int64_t>(n));
    row.set("omega", om);
    row.set("c", c);
    row.set("lambda", lam);
    row.set("g0", g0);
    rows.push(std::move(row));
    csv += std::to_string(n) + "," + tl::format_double_17(om) + "," +
           tl::format_double_17(c) + "," + tl::format_double_17(lam) + "," +
           tl::format_double_17(g0) + "\n";
  }
  v.add("lambda_c_identity", worst_lc <= 1e-14,
        "max |lambda(n)c(n)-1| = " + tl::format_double_17(worst_lc));
  v.add("g0_identity", worst_g0 <= 1e-14,
        "max |g0 (2pi)^n - 1| = " + tl::format_double_17(worst_g0));

  double worst_resw = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const tl::QuadratureGrid grid = tl::QuadratureGrid::make(n, 2, cfg.sphere_order);
    const double rw = tl::res_w(tl::norm_power_symbol(n), grid);
    worst_resw = std::max(worst_resw, std::abs(rw - tl::omega(n) / n));
  }
  v.add("res_w_norm_power", worst_resw <= 1e-12,
        "max |Res_W(||xi||^-n) - Omega_n/n| = " + tl::format_double_17(worst_resw));

  tl::Json report = tl::Json::object();
  report.set("command", "constants");
  report.set("config", config_echo(cfg));
  tl::Json res = tl::Json::object();
  res.set("table", std::move(rows));
  res.set("max_lambda_c_defect", worst_lc);
  res.set("max_g0_defect", worst_g0);
  res.set("max_res_w_defect", worst_resw);
  report.set("results", std::move(res));
  return finish(cfg, report, v, csv);
}

int cmd_spectrum_dump(const RunConfig& cfg) {
  ModelBundle mb = resolve_model(cfg);
  if (!mb.spectral)
    throw tl::ConfigError("spectrum-dump: model must be a spectral model");
  const tl::SpectralModel& m = *mb.spectral;

  std::ostringstream csv;
  tl::write_spectrum_csv(csv, m);

  tl::Json report = tl::Json::object();
  report.set("command", "spectrum-dump");
  report.set("config", config_echo(cfg));
  tl::Json res = tl::Json::object();
  res.set("shells", static_cast<std::uint64_t>(m.shells.size()));
  res.set("total_multiplicity", m.total_multiplicity());
  report.set("results", std::move(res));

  Verdicts v;
  if (cfg.model == "torus") {
    const tl::LatticeCount lc = tl::lattice_count(cfg.n, cfg.R_max);
    v.add("shell_sum_conservation", lc.count == m.total_multiplicity(),
          std::to_string(lc.count) + " lattice points vs shell sum " +
              std::to_string(m.total_multiplicity()));
  } else {
    v.add("computed", true, "sphere spectrum");
  }
  return finish(cfg, report, v, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"numerical laboratory for singular traces and symbol residues"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--model", cfg.model, "model name");
    sub->add_option("--n", cfg.n, "base dimension");
    sub->add_option("--R-max", cfg.R_max, "torus shell radius");
    sub->add_option("--L-max", cfg.L_max, "sphere degree cut");
    sub->add_option("--H", cfg.H, "dyadic schedule exponent");
    sub->add_option("--J", cfg.J, "zeta extrapolation levels");
    sub->add_option("--G", cfg.G, "torus grid points per axis");
    sub->add_option("--sphere-order", cfg.sphere_order, "cosphere rule order");
    sub->add_option("--seed", cfg.seed, "campaign seed");
    sub->add_option("--threads", cfg.threads, "worker threads (0: env/hardware)");
    sub->add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "write the selected format here");
    sub->add_option("--csv-out", cfg.csv_out, "also write the CSV table here");
    sub->add_option("--L", cfg.L, "synthetic model constant");
    sub->add_option("--delta", cfg.delta, "synthetic perturbation amplitude");
    sub->add_option("--ratio", cfg.ratio, "geometric ratio");
    sub->add_option("--trials", cfg.trials, "campaign trials per family");
    sub->add_option("--dim-min", cfg.dim_min, "campaign min dimension");
    sub->add_option("--dim-max", cfg.dim_max, "campaign max dimension");
    sub->add_option("--gap-tol", cfg.gap_tol, "relative agreement tolerance");
    sub->add_option("--cauchy-tol", cfg.cauchy_tol, "bracket collapse tolerance");
    sub->add_option("--window-ratio", cfg.window_ratio, "slope fit window");
    sub->add_option("--t-max", cfg.t_max, "weyl schedule upper end");
    sub->add_option("--seq-file", cfg.seq_file, "sequence definition file");
    sub->add_option("--symbol", cfg.symbol_kind, "norm_power | f_norm_power | csv");
    sub->add_option("--symbol-fiber", cfg.symbol_fiber, "fiber dimension");
    sub->add_option("--symbol-fourier", cfg.symbol_fourier,
                    "k1,..,kn:re,im;... truncated series");
    sub->add_option("--symbol-csv", cfg.symbol_csv, "sampled symbol CSV path");
    sub->add_option("--symbol-scale", cfg.symbol_scale, "scalar factor on the symbol");
  };

  CLI::App* gamma = app.add_subcommand("gamma", "gamma drift, bracket and slope");
  CLI::App* zetac = app.add_subcommand("zeta", "residue of (s-1) zeta(s) at 1");
  CLI::App* connes = app.add_subcommand("connes", "three-way trace comparison");
  CLI::App* props = app.add_subcommand("matrix-props", "inequality campaigns");
  CLI::App* consts = app.add_subcommand("constants", "constant tables and identities");
  CLI::App* dump = app.add_subcommand("spectrum-dump", "shell table CSV");
  for (CLI::App* sub : {gamma, zetac, connes, props, consts, dump}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  // config file first, then flags override whatever was passed explicitly
  try {
    if (!config_path.empty()) {
      RunConfig from_file;
      apply_config_file(from_file, read_config_file(config_path));
      // flags that were not given on the command line adopt file values
      RunConfig merged = from_file;
      CLI::App* sub = app.get_subcommands().front();
      auto passed = [&](const std::string& flag) {
        return sub->count(flag) > 0;
      };
      RunConfig& c = cfg;
      if (!passed("--model")) c.model = merged.model; else merged.model = c.model;
      if (!passed("--n")) c.n = merged.n;
      if (!passed("--R-max")) c.R_max = merged.R_max;
      if (!passed("--L-max")) c.L_max = merged.L_max;
      if (!passed("--H")) c.H = merged.H;
      if (!passed("--J")) c.J = merged.J;
      if (!passed("--G")) c.G = merged.G;
      if (!passed("--sphere-order")) c.sphere_order = merged.sphere_order;
      if (!passed("--seed")) c.seed = merged.seed;
      if (!passed("--threads")) c.threads = merged.threads;
      if (!passed("--format")) c.format = merged.format;
      if (!passed("--out")) c.out = merged.out;
      if (!passed("--csv-out")) c.csv_out = merged.csv_out;
      if (!passed("--L")) c.L = merged.L;
      if (!passed("--delta")) c.delta = merged.delta;
      if (!passed("--ratio")) c.ratio = merged.ratio;
      if (!passed("--trials")) c.trials = merged.trials;
      if (!passed("--dim-min")) c.dim_min = merged.dim_min;
      if (!passed("--dim-max")) c.dim_max = merged.dim_max;
      if (!passed("--gap-tol")) c.gap_tol = merged.gap_tol;
      if (!passed("--cauchy-tol")) c.cauchy_tol = merged.cauchy_tol;
      if (!passed("--window-ratio")) c.window_ratio = merged.window_ratio;
      if (!passed("--t-max")) c.t_max = merged.t_max;
      if (!passed("--seq-file")) c.seq_file = merged.seq_file;
      if (!passed("--symbol")) c.symbol_kind = merged.symbol_kind;
      if (!passed("--symbol-fiber")) c.symbol_fiber = merged.symbol_fiber;
      if (!passed("--symbol-fourier")) c.symbol_fourier = merged.symbol_fourier;
      if (!passed("--symbol-csv")) c.symbol_csv = merged.symbol_csv;
      if (!passed("--symbol-scale")) c.symbol_scale = merged.symbol_scale;
    }
  } catch (const tl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (gamma->parsed()) {
      cfg.command = "gamma";
      rc = cmd_gamma(cfg);
    } else if (zetac->parsed()) {
      cfg.command = "zeta";
      rc = cmd_zeta(cfg);
    } else if (connes->parsed()) {
      cfg.command = "connes";
      rc = cmd_connes(cfg);
    } else if (props->parsed()) {
      cfg.command = "matrix-props";
      rc = cmd_matrix_props(cfg);
    } else if (consts->parsed()) {
      cfg.command = "constants";
      rc = cmd_constants(cfg);
    } else if (dump->parsed()) {
      cfg.command = "spectrum-dump";
      rc = cmd_spectrum_dump(cfg);
    }
  } catch (const tl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const tl::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::cerr << "timing: " << cfg.command << " "
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
            << " ms\n";
  return rc;
}
