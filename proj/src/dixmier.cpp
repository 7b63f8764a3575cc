#include "tracelab/dixmier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tracelab {

BoundedSequence scaling_map(const BoundedSequence& beta) {
  auto rule = beta.rule;
  return BoundedSequence{[rule](std::uint64_t j) { return rule(2 * j); }, beta.bound};
}

BoundedSequence doubling_map(const BoundedSequence& beta) {
  auto rule = beta.rule;
  return BoundedSequence{[rule](std::uint64_t j) { return rule((1 + j) / 2); },
                         beta.bound};
}

BoundedSequence m_map(const BoundedSequence& beta) {
  auto rule = beta.rule;
  const double log2 = std::log(2.0);
  return BoundedSequence{
      [rule, log2](std::uint64_t j) {
        return log2 / std::log(static_cast<double>(j) + 1.0) * rule(j);
      },
      beta.bound};
}

namespace {

void require_member(const CharacteristicSequence& seq, const IndexSchedule& schedule,
                    const char* who) {
  const L1InfReport r = l1inf_diagnostic(seq, schedule);
  if (r.verdict != IdealVerdict::member)
    throw ConfigError(std::string(who) + ": sequence '" + seq.name() +
                      "' has no logarithmic-ideal membership certificate (" +
                      verdict_name(r.verdict) + ")");
}

// centered least-squares line through (x_i, y_i); returns {intercept, slope}
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const Eigen::Map<const Eigen::ArrayXd> ax(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::ArrayXd> ay(y.data(), static_cast<Eigen::Index>(y.size()));
  const double xm = ax.mean();
  const double ym = ay.mean();
  const double sxx = ((ax - xm) * (ax - xm)).sum();
  const double sxy = ((ax - xm) * (ay - ym)).sum();
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {ym - slope * xm, slope};
}

}  // namespace

ChainReport additivity_chain_check(const CharacteristicSequence& x,
                                   const CharacteristicSequence& y,
                                   const IndexSchedule& schedule) {
  if (schedule.empty()) throw std::invalid_argument("additivity_chain_check: empty schedule");
  require_member(x, schedule, "additivity_chain_check");
  require_member(y, schedule, "additivity_chain_check");

  const std::uint64_t kmax = schedule.max_index();
  CharacteristicSequence z = merge_sequences(x, y, 2 * kmax + 2);
  PrefixSumTable tx(x), ty(y), tz(z);

  double sup_gamma_z = 0.0;
  for (const std::uint64_t k : schedule.indices) {
    sup_gamma_z = std::max(sup_gamma_z, tz.gamma(k));
    sup_gamma_z = std::max(sup_gamma_z, tz.gamma(k + 1));
  }

  const double log2 = std::log(2.0);
  const double mu1z = z.mu(1);
  ChainReport rep;
  for (const std::uint64_t k : schedule.indices) {
    const double lk = std::log(static_cast<double>(k));
    const double chain = tx.gamma(k) + ty.gamma(k) - tz.sigma(2 * k) / lk;
    rep.max_violation_chain = std::max(rep.max_violation_chain, chain);

    const double defect = tz.gamma(k) - tz.gamma(k + 1);
    rep.max_violation_shift_upper =
        std::max(rep.max_violation_shift_upper, defect - (log2 / lk) * sup_gamma_z);
    rep.max_violation_shift_lower = std::max(
        rep.max_violation_shift_lower,
        -mu1z / std::log(static_cast<double>(k) + 1.0) - defect);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// measurability bracket
// ---------------------------------------------------------------------------

LimitBracket measurability_bracket(const CharacteristicSequence& seq,
                                   const IndexSchedule& schedule,
                                   double cauchy_tol) {
  BracketConfig cfg;
  cfg.cauchy_tol = cauchy_tol;
  return measurability_bracket(seq, schedule, cfg);
}

LimitBracket measurability_bracket(const CharacteristicSequence& seq,
                                   const IndexSchedule& schedule,
                                   const BracketConfig& config) {
  if (schedule.empty()) throw std::invalid_argument("measurability_bracket: empty schedule");
  require_member(seq, schedule, "measurability_bracket");

  LimitBracket out;
  const auto len = seq.length();

  // evaluation nodes: schedule, clamped to the materialized extent and, for
  // run-structured streams, snapped up to cumulative-multiplicity indices so
  // the block-subsequence criterion applies
  std::vector<std::uint64_t> nodes;
  const RunsRep* runs = std::get_if<RunsRep>(&seq.rep());
  for (std::uint64_t k : schedule.indices) {
    if (len && seq.tail().kind != TailKind::finite && k > *len) break;
    if (runs && config.use_multiplicity_blocks) {
      const auto it = std::lower_bound(runs->cum.begin(), runs->cum.end(), k);
      if (it == runs->cum.end()) break;
      k = *it;
    }
    if (k >= 2 && (nodes.empty() || k > nodes.back())) nodes.push_back(k);
  }
  if (nodes.size() < 4)
    throw NumericError("measurability_bracket: fewer than 4 usable schedule nodes");
  out.schedule_max = nodes.back();

  if (runs) {
    // boundedness of m_{k+1} / sum_{j<=k} m_j past the first shells (the head
    // ratios are finite-rank noise; the criterion cares about the tail)
    for (std::size_t i = 0; i + 1 < runs->runs.size(); ++i) {
      if (runs->cum[i] < 64) continue;
      const double ratio = static_cast<double>(runs->runs[i + 1].count) /
                           static_cast<double>(runs->cum[i]);
      out.idcrit_ratio_sup = std::max(out.idcrit_ratio_sup, ratio);
    }
    // block correction factors at the sampled tail boundaries; they widen the
    // bracket to cover gamma between consecutive block ends
    for (std::size_t j = nodes.size() / 2; j < nodes.size(); ++j) {
      const auto it = std::lower_bound(runs->cum.begin(), runs->cum.end(), nodes[j]);
      const std::size_t i = static_cast<std::size_t>(it - runs->cum.begin());
      if (i + 1 < runs->runs.size() && runs->cum[i] >= 2) {
        const double ratio = static_cast<double>(runs->runs[i + 1].count) /
                             static_cast<double>(runs->cum[i]);
        const double c =
            1.0 + std::log1p(ratio) / std::log(static_cast<double>(runs->cum[i]));
        out.correction_factor_max = std::max(out.correction_factor_max, c);
        if (j + 1 == nodes.size()) out.correction_factor_last = c;
      }
    }
  }

  PrefixSumTable table(seq);
  std::vector<double> logn(nodes.size()), sig(nodes.size()), gam(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    logn[i] = std::log(static_cast<double>(nodes[i]));
    sig[i] = table.sigma(nodes[i]);
    gam[i] = sig[i] / logn[i];
  }

  const std::size_t tail0 = nodes.size() / 2;
  double gmin = gam[tail0], gmax = gam[tail0];
  double smin = 0.0, smax = 0.0;
  bool first_slope = true;
  for (std::size_t i = tail0; i < nodes.size(); ++i) {
    gmin = std::min(gmin, gam[i]);
    gmax = std::max(gmax, gam[i]);
    if (i + 1 < nodes.size()) {
      const double sl = (sig[i + 1] - sig[i]) / (logn[i + 1] - logn[i]);
      if (first_slope) {
        smin = smax = sl;
        first_slope = false;
      } else {
        smin = std::min(smin, sl);
        smax = std::max(smax, sl);
      }
    }
  }
  out.gamma_oscillation = gmax - gmin;
  out.slope_oscillation = first_slope ? 0.0 : smax - smin;

  // transient-corrected limit estimate: LS slope of sigma vs log N on the tail
  std::vector<double> lx(logn.begin() + static_cast<std::ptrdiff_t>(tail0), logn.end());
  std::vector<double> ly(sig.begin() + static_cast<std::ptrdiff_t>(tail0), sig.end());
  const double limit_est = fit_line(lx, ly).second;

  const double c = out.correction_factor_max;
  out.liminf_estimate = std::min({gmin / c, first_slope ? gmin : smin, limit_est});
  out.limsup_estimate = std::max({gmax * c, first_slope ? gmax : smax, limit_est});

  const TailDescriptor& t = seq.tail();
  if (t.summable()) {
    // sigma converges, gamma is analytically a null sequence
    out.measurable = Measurable::yes;
    out.value = 0.0;
    out.liminf_estimate = std::min(out.liminf_estimate, 0.0);
    return out;
  }
  if (t.kind == TailKind::inverse_asymptotic) {
    const double scale = std::max(1.0, t.L);
    const double wander = 2.0 * t.eps_at(static_cast<double>(nodes[tail0])) +
                          config.cauchy_tol * scale;
    const double drift = t.eps_at(static_cast<double>(nodes.back())) +
                         config.cauchy_tol * scale;
    if (out.slope_oscillation <= wander && std::abs(limit_est - t.L) <= drift) {
      out.measurable = Measurable::yes;
      out.value = limit_est;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// slope estimator
// ---------------------------------------------------------------------------

ResidueEstimate slope_estimator(const CharacteristicSequence& seq,
                                std::uint64_t N_max, double window_ratio) {
  if (N_max < 64) throw std::invalid_argument("slope_estimator: N_max must be >= 64");
  if (!(window_ratio > 0.0 && window_ratio < 1.0))
    throw std::invalid_argument("slope_estimator: window_ratio must be in (0,1)");
  if (const auto len = seq.length();
      len && seq.tail().kind != TailKind::finite && *len > 0)
    N_max = std::min(N_max, *len);

  // geometric node grid with 8 nodes per octave
  std::vector<std::uint64_t> nodes;
  const double lo = window_ratio * static_cast<double>(N_max);
  for (int i = 0;; ++i) {
    const double v = static_cast<double>(N_max) * std::pow(2.0, -i / 8.0);
    if (v < lo || v < 2.0) break;
    const std::uint64_t n = static_cast<std::uint64_t>(std::llround(v));
    if (nodes.empty() || n < nodes.back()) nodes.push_back(n);
  }
  std::reverse(nodes.begin(), nodes.end());
  if (nodes.size() < 4) throw NumericError("slope_estimator: degenerate window");

  PrefixSumTable table(seq);
  std::vector<double> x(nodes.size()), y(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    x[i] = std::log(static_cast<double>(nodes[i]));
    y[i] = table.sigma(nodes[i]);
  }
  const auto [intercept, slope] = fit_line(x, y);

  ResidueEstimate est;
  est.method = EstimateMethod::slope_fit;
  est.value = slope;
  double max_resid = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    max_resid = std::max(max_resid, std::abs(y[i] - (intercept + slope * x[i])));
    EstimateRow row;
    row.parameter = x[i];
    row.raw = y[i];
    row.extrapolated = i + 1 < nodes.size()
                           ? (y[i + 1] - y[i]) / (x[i + 1] - x[i])
                           : slope;
    est.table.push_back(row);
  }
  est.error_estimate = max_resid / (x.back() - x.front());
  return est;
}

DixmierValue dixmier_value(const CharacteristicSequence& seq,
                           const DixmierConfig& config) {
  DixmierValue out;
  IndexSchedule schedule = IndexSchedule::dyadic(config.schedule_exponent);
  out.bracket = measurability_bracket(seq, schedule, config.cauchy_tol);

  std::uint64_t N_max = config.N_max;
  if (N_max == 0) {
    N_max = 1ull << config.schedule_exponent;
    if (const auto len = seq.length(); len && *len > N_max) N_max = *len;
  }
  N_max = std::max<std::uint64_t>(N_max, 64);
  out.slope = slope_estimator(seq, N_max, config.window_ratio);

  const double halfwidth =
      0.5 * (out.bracket.limsup_estimate - out.bracket.liminf_estimate);
  out.combined_error = out.slope.error_estimate + halfwidth +
                       config.cauchy_tol * std::max(1.0, std::abs(out.slope.value));
  if (out.bracket.measurable == Measurable::yes) {
    out.consistent =
        std::abs(*out.bracket.value - out.slope.value) <= out.combined_error;
  } else {
    out.consistent =
        out.slope.value >= out.bracket.liminf_estimate - out.combined_error &&
        out.slope.value <= out.bracket.limsup_estimate + out.combined_error;
  }
  return out;
}

const char* measurable_name(Measurable m) {
  switch (m) {
    case Measurable::yes: return "yes";
    case Measurable::no: return "no";
    case Measurable::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::slope_fit: return "slope_fit";
    case EstimateMethod::zeta_extrapolation: return "zeta_extrapolation";
    case EstimateMethod::weyl_ratio: return "weyl_ratio";
  }
  return "?";
}

}  // namespace tracelab
