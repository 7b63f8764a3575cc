#include "tracelab/zetalab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace tracelab {

namespace {

double pow_sum_explicit(const std::vector<double>& v, std::uint64_t n, double s) {
  KahanSum acc;
  const std::uint64_t stop = std::min<std::uint64_t>(n, v.size());
  for (std::uint64_t i = 0; i < stop; ++i)
    acc.add(std::pow(v[static_cast<std::size_t>(i)], s));
  return acc.value();
}

// partial sum of mu_k^s over k <= n, exploiting run structure when present
double partial_power_sum(const CharacteristicSequence& seq, std::uint64_t n,
                         double s) {
  if (const auto* ex = std::get_if<ExplicitRep>(&seq.rep()))
    return pow_sum_explicit(ex->values, n, s);
  if (const auto* runs = std::get_if<RunsRep>(&seq.rep())) {
    KahanSum acc;
    std::uint64_t pos = 0;
    for (const Run& r : runs->runs) {
      if (pos >= n) break;
      const std::uint64_t take = std::min<std::uint64_t>(r.count, n - pos);
      acc.add(static_cast<double>(take) * std::pow(r.value, s));
      pos += take;
    }
    return acc.value();
  }
  KahanSum acc;
  for (std::uint64_t k = 1; k <= n; ++k) acc.add(std::pow(seq.mu(k), s));
  return acc.value();
}

}  // namespace

ZetaEval zeta(const CharacteristicSequence& seq, double s, std::uint64_t N_cut) {
  if (!(s > 1.0)) throw std::invalid_argument("zeta: s must be > 1");
  if (N_cut == 0) throw std::invalid_argument("zeta: N_cut must be >= 1");

  const double mu1 = seq.mu(1);
  if (mu1 > 1.0) {
    // zeta_{lambda x}(s) = lambda^s zeta_x(s)
    ZetaEval inner = zeta(scale_sequence(seq, 1.0 / mu1), s, N_cut);
    const double f = std::pow(mu1, s);
    inner.partial_sum *= f;
    inner.tail_low *= f;
    inner.tail_high *= f;
    return inner;
  }

  const TailDescriptor& t = seq.tail();
  ZetaEval out;
  out.s = s;

  std::uint64_t n = N_cut;
  if (const auto len = seq.length(); len) n = std::min(n, *len);
  if (t.kind == TailKind::finite) n = std::max(n, t.last);
  if (t.kind != TailKind::finite && t.from > n) n = t.from;
  if (t.kind == TailKind::geometric && t.exact && t.ratio > 0.0 && t.ratio < 1.0) {
    // terms below the subnormal floor contribute nothing; the exact tail
    // formula absorbs everything beyond the clamp
    const double k_floor =
        (750.0 + std::log(std::max(t.coeff, 1e-30))) / -std::log(t.ratio);
    const std::uint64_t clamp =
        t.from + static_cast<std::uint64_t>(std::max(k_floor, 64.0));
    n = std::min(n, clamp);
  }

  out.terms = n;
  out.partial_sum = partial_power_sum(seq, n, s);

  const double dn = static_cast<double>(n);
  switch (t.kind) {
    case TailKind::finite:
      out.tail_low = out.tail_high = 0.0;
      break;
    case TailKind::geometric: {
      if (!(t.ratio > 0.0 && t.ratio < 1.0))
        throw NumericError("zeta: geometric descriptor needs ratio in (0,1)");
      const double rs = std::pow(t.ratio, s);
      const double hi =
          std::pow(t.coeff, s) * std::pow(t.ratio, (dn + 1.0) * s) / (1.0 - rs);
      out.tail_high = hi;
      out.tail_low = t.exact ? hi : 0.0;
      break;
    }
    case TailKind::inverse_bound:
      out.tail_low = 0.0;
      out.tail_high = std::pow(t.C, s) * std::pow(dn, 1.0 - s) / (s - 1.0);
      break;
    case TailKind::inverse_asymptotic: {
      const double eps = t.eps_at(dn);
      const double lo = std::max(t.L - eps, 0.0);
      out.tail_low = std::pow(lo, s) * std::pow(dn + 1.0, 1.0 - s) / (s - 1.0);
      out.tail_high = std::pow(t.L + eps, s) * std::pow(dn, 1.0 - s) / (s - 1.0);
      break;
    }
    case TailKind::vanishing:
      throw NumericError("zeta: sequence '" + seq.name() +
                         "' has no tail descriptor admitting integral bounds");
  }
  return out;
}

namespace {

std::uint64_t default_cut(const CharacteristicSequence& seq, std::uint64_t requested) {
  if (requested != 0) return requested;
  if (const auto len = seq.length(); len && *len > 0) return *len;
  return 1ull << 20;
}

}  // namespace

ResidueEstimate residue_at_one(const CharacteristicSequence& seq,
                               const ResidueConfig& config) {
  if (config.levels < 3) throw std::invalid_argument("residue_at_one: need >= 3 levels");
  const std::uint64_t n = default_cut(seq, config.N_cut);

  ResidueEstimate est;
  est.method = EstimateMethod::zeta_extrapolation;

  std::vector<double> f, hw;
  for (int j = 2; j <= config.levels; ++j) {
    const double h = std::ldexp(1.0, -j);
    const ZetaEval z = zeta(seq, 1.0 + h, n);
    f.push_back(h * z.value_mid());
    hw.push_back(h * z.halfwidth());
    EstimateRow row;
    row.parameter = h;
    row.raw = f.back();
    row.extrapolated = f.size() >= 2 ? 2.0 * f.back() - f[f.size() - 2] : f.back();
    est.table.push_back(row);
  }

  const std::size_t m = f.size();
  const double g_last = 2.0 * f[m - 1] - f[m - 2];
  const double g_prev = 2.0 * f[m - 2] - f[m - 3];
  est.value = g_last;
  est.error_estimate =
      std::abs(g_last - g_prev) + 2.0 * std::max(hw[m - 1], hw[m - 2]);

  if (hw[m - 1] > config.bracket_limit * std::max(std::abs(f[m - 1]), 1e-12) &&
      hw[m - 1] > 1e-12)
    throw NumericError("residue_at_one: tail bracket too wide at s = 1 + 2^-" +
                       std::to_string(config.levels));

  // A summable tail certifies zeta(1) < inf, so the residue is exactly zero;
  // first-order extrapolation alone floors at O(h^2).
  if (seq.tail().summable()) {
    est.value = 0.0;
    est.error_estimate = 0.0;
  }
  return est;
}

std::uint64_t counting(const CharacteristicSequence& seq, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("counting: t must be >= 0");
  if (t == 0.0) return 0;
  const double v = 1.0 / t;
  if (seq.mu(1) < v) return 0;
  return seq.count_at_least(v);
}

std::vector<double> geometric_t_schedule(double t_min, double t_max, int per_octave) {
  if (!(t_min > 0.0 && t_max > t_min) || per_octave < 1)
    throw std::invalid_argument("geometric_t_schedule: bad range");
  std::vector<double> out;
  const double step = std::pow(2.0, 1.0 / per_octave);
  for (double t = t_min; t <= t_max * (1.0 + 1e-12); t *= step) out.push_back(t);
  return out;
}

ResidueEstimate weyl_slope(const CharacteristicSequence& seq,
                           const std::vector<double>& t_schedule) {
  if (t_schedule.size() < 8)
    throw std::invalid_argument("weyl_slope: need at least 8 schedule points");

  std::vector<double> ratio(t_schedule.size());
  for (std::size_t i = 0; i < t_schedule.size(); ++i) {
    const double t = t_schedule[i];
    ratio[i] = static_cast<double>(counting(seq, t)) / t;
  }

  const std::size_t half = t_schedule.size() / 2;
  // fit ratio = a + b / log t over the tail; intercept estimates the limit
  double sxx = 0, sxy = 0, sx = 0, sy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = half; i < t_schedule.size(); ++i) {
    const double x = 1.0 / std::log(std::max(t_schedule[i], 2.0));
    sx += x;
    sy += ratio[i];
    sxx += x * x;
    sxy += x * ratio[i];
    ++cnt;
  }
  const double denom = cnt * sxx - sx * sx;
  const double b = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  const double a = (sy - b * sx) / static_cast<double>(cnt);

  ResidueEstimate est;
  est.method = EstimateMethod::weyl_ratio;
  est.value = a;
  for (std::size_t i = 0; i < t_schedule.size(); ++i)
    est.table.push_back(EstimateRow{t_schedule[i], ratio[i], a});

  double tail_min = ratio[half], tail_max = ratio[half];
  double head_max = 0.0;
  for (std::size_t i = 0; i < t_schedule.size(); ++i) {
    if (i < half) head_max = std::max(head_max, ratio[i]);
    else {
      tail_min = std::min(tail_min, ratio[i]);
      tail_max = std::max(tail_max, ratio[i]);
    }
  }
  est.error_estimate = tail_max - tail_min;
  const double osc_rel = (tail_max - tail_min) / std::max(tail_max, 1e-300);
  est.diverged = osc_rel > 0.5 || tail_max > 1.5 * head_max + 1e-9;
  return est;
}

void write_residue_csv(std::ostream& os, const CharacteristicSequence& seq,
                       const ResidueConfig& config) {
  const std::uint64_t n = default_cut(seq, config.N_cut);
  os << "s,partial_sum,tail_low,tail_high,residue_mid\n";
  char buf[256];
  for (int j = 2; j <= config.levels; ++j) {
    const double h = std::ldexp(1.0, -j);
    const ZetaEval z = zeta(seq, 1.0 + h, n);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", z.s,
                  z.partial_sum, z.tail_low, z.tail_high, h * z.value_mid());
    os << buf;
  }
}

}  // namespace tracelab
