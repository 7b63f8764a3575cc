#include "tracelab/geomspec.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tracelab/wodzicki.hpp"

namespace tracelab {

double SpectralModel::mu_of_lambda(std::uint64_t lambda) const {
  return std::pow(1.0 + static_cast<double>(lambda), -0.5 * dim);
}

std::uint64_t SpectralModel::total_multiplicity() const {
  std::uint64_t total = 0;
  for (const Shell& s : shells) total += s.mult;
  return total;
}

std::uint64_t SpectralModel::count_within(double lambda_max) const {
  std::uint64_t total = 0;
  for (const Shell& s : shells) {
    if (static_cast<double>(s.lambda) > lambda_max) break;
    total += s.mult;
  }
  return total;
}

CharacteristicSequence SpectralModel::to_sequence() const {
  RunsRep rep;
  rep.runs.reserve(shells.size());
  for (const Shell& s : shells)
    rep.runs.push_back(Run{mu_of_lambda(s.lambda), s.mult});

  // measure |n*mu_n - L| at run boundaries over the tail half of the stream;
  // the asymptotic count law makes the deviation shrink beyond the cut, so
  // the observed envelope (with margin) certifies the extension
  const double L = expected_weyl;
  std::uint64_t total = 0;
  for (const Shell& s : shells) total += s.mult;
  const std::uint64_t from = std::max<std::uint64_t>(total / 2, 1);
  double eps_obs = 0.0;
  std::uint64_t cum = 0;
  for (const Shell& s : shells) {
    const std::uint64_t lo = cum + 1;
    cum += s.mult;
    if (cum < from) continue;
    const double v = mu_of_lambda(s.lambda);
    eps_obs = std::max(eps_obs, std::abs(static_cast<double>(cum) * v - L));
    eps_obs = std::max(eps_obs, std::abs(static_cast<double>(lo) * v - L));
  }
  const double eps = 1.5 * eps_obs + 1e-9 * L;
  TailDescriptor tail = TailDescriptor::asymptotic_const_eps(L, eps, from);
  return CharacteristicSequence(name, std::move(rep), std::move(tail));
}

// ---------------------------------------------------------------------------
// lattice enumeration
// ---------------------------------------------------------------------------

namespace {

void enumerate_octant(int dims_left, std::uint64_t budget, std::uint64_t partial,
                      std::uint32_t factor, std::vector<std::uint32_t>& counts) {
  if (dims_left == 0) {
    counts[static_cast<std::size_t>(partial)] += factor;
    return;
  }
  for (std::uint64_t k = 0;; ++k) {
    const std::uint64_t k2 = k * k;
    if (k2 > budget) break;
    enumerate_octant(dims_left - 1, budget - k2, partial + k2,
                     factor * (k == 0 ? 1u : 2u), counts);
  }
}

}  // namespace

std::vector<std::uint32_t> sum_of_squares_counts(int n, std::uint64_t lambda_max,
                                                 std::uint64_t memory_budget_bytes) {
  if (n < 1 || n > 4) throw ConfigError("sum_of_squares_counts: n must be 1..4");
  if ((lambda_max + 1) * sizeof(std::uint32_t) > memory_budget_bytes)
    throw ConfigError("sum_of_squares_counts: shell table exceeds memory budget");
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(lambda_max + 1), 0);
  enumerate_octant(n, lambda_max, 0, 1, counts);
  return counts;
}

SpectralModel torus_model(int n, double R_max, std::uint64_t memory_budget_bytes) {
  if (n < 1 || n > 4) throw ConfigError("torus_model: n must be 1..4");
  if (!(R_max >= 2.0)) throw ConfigError("torus_model: R_max must be >= 2");

  SpectralModel model;
  model.name = "torus" + std::to_string(n);
  model.dim = n;
  model.expected_weyl = omega(n) / n;

  const std::uint64_t lambda_max =
      static_cast<std::uint64_t>(std::floor(R_max * R_max + 1e-9));
  if (n == 1) {
    // shells are k^2 with multiplicity 2 (and 1 at k = 0); no table needed
    const std::uint64_t kmax = static_cast<std::uint64_t>(std::floor(R_max + 1e-9));
    model.shells.reserve(static_cast<std::size_t>(kmax + 1));
    model.shells.push_back(Shell{0, 1});
    for (std::uint64_t k = 1; k <= kmax; ++k)
      model.shells.push_back(Shell{k * k, 2});
    return model;
  }

  const auto counts = sum_of_squares_counts(n, lambda_max, memory_budget_bytes);
  for (std::uint64_t lam = 0; lam <= lambda_max; ++lam) {
    const std::uint32_t m = counts[static_cast<std::size_t>(lam)];
    if (m != 0) model.shells.push_back(Shell{lam, m});
  }
  return model;
}

SpectralModel sphere_model(int n, int L_max) {
  if (n < 1 || n > 3) throw ConfigError("sphere_model: n must be 1..3");
  if (L_max < 1) throw ConfigError("sphere_model: L_max must be >= 1");

  SpectralModel model;
  model.name = "sphere" + std::to_string(n);
  model.dim = n;
  // vol(S^n) * Omega_n / (n (2pi)^n); the sphere volume is Omega_{n+1}
  model.expected_weyl =
      omega(n + 1) * omega(n) / (n * std::pow(2.0 * M_PI, n));

  for (int l = 0; l <= L_max; ++l) {
    const std::uint64_t lam =
        static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(l + n - 1);
    std::uint64_t mult = 0;
    switch (n) {
      case 1: mult = (l == 0) ? 1 : 2; break;
      case 2: mult = static_cast<std::uint64_t>(2 * l + 1); break;
      case 3: mult = static_cast<std::uint64_t>(l + 1) * static_cast<std::uint64_t>(l + 1); break;
    }
    model.shells.push_back(Shell{lam, mult});
  }
  return model;
}

LatticeCount lattice_count(int n, double R) {
  if (n < 1 || n > 4) throw ConfigError("lattice_count: n must be 1..4");
  if (!(R >= 0.0)) throw ConfigError("lattice_count: R must be >= 0");

  LatticeCount out;
  const double R2 = R * R;
  if (n == 1) {
    out.count = 2 * static_cast<std::uint64_t>(std::floor(R + 1e-9)) + 1;
  } else {
    const std::uint64_t lambda_max =
        static_cast<std::uint64_t>(std::floor(R2 + 1e-9));
    const auto counts = sum_of_squares_counts(n, lambda_max);
    std::uint64_t total = 0;
    for (const std::uint32_t c : counts) {
      if (total > (1ull << 62) - c)
        throw NumericError("lattice_count: count exceeds 2^62");
      total += c;
    }
    out.count = total;
  }
  const double ball = omega(n) / n * std::pow(R, n);
  out.volume_ratio = ball > 0.0 ? static_cast<double>(out.count) / ball : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// named counterexample and synthetic families
// ---------------------------------------------------------------------------

CharacteristicSequence varilly_model(int m_max) {
  if (m_max < 2) throw ConfigError("varilly_model: m_max must be >= 2");

  LogBlockRep rep;
  rep.head = {1.0};
  rep.head_sigma = 1.0;

  KahanSum sigma;   // sum_{j=2..m} (1 - 1/j) log j, added to the head term
  sigma.add(1.0);
  // 2^62 cap for exact integer boundaries: factorials fit up to 20!
  std::uint64_t fact = 1;
  for (int m = 2; m <= m_max; ++m) {
    const double dm = static_cast<double>(m);
    sigma.add((1.0 - 1.0 / dm) * std::log(dm));
    LogBlock b;
    b.log_end = std::lgamma(dm + 1.0);
    b.log_value = std::log(std::log(dm)) - b.log_end;
    b.sigma_end = sigma.value();
    if (fact != 0 && fact <= (1ull << 62) / static_cast<std::uint64_t>(m)) {
      fact *= static_cast<std::uint64_t>(m);
      b.end_int = fact;
    } else {
      fact = 0;
      b.end_int = 0;
    }
    rep.blocks.push_back(b);
  }
  return CharacteristicSequence("varilly", std::move(rep),
                                TailDescriptor::unknown());
}

double varilly_sigma_at_factorial(int m) {
  if (m < 1) throw ConfigError("varilly_sigma_at_factorial: m must be >= 1");
  KahanSum sigma;
  sigma.add(1.0);
  for (int j = 2; j <= m; ++j) {
    const double dj = static_cast<double>(j);
    sigma.add((1.0 - 1.0 / dj) * std::log(dj));
  }
  return sigma.value();
}

double varilly_gamma_at_factorial(int m) {
  if (m < 2) throw ConfigError("varilly_gamma_at_factorial: m must be >= 2");
  return varilly_sigma_at_factorial(m) / std::lgamma(static_cast<double>(m) + 1.0);
}

double varilly_weighted_mu_at_factorial(int m) {
  if (m < 2) throw ConfigError("varilly_weighted_mu_at_factorial: m must be >= 2");
  const double dm = static_cast<double>(m);
  const double log_mu = std::log(std::log(dm)) - std::lgamma(dm + 1.0);
  return std::exp(std::lgamma(dm + 1.0) + log_mu);
}

CharacteristicSequence synthetic_model(SyntheticKind kind, SyntheticParams p) {
  switch (kind) {
    case SyntheticKind::harmonic:
      return CharacteristicSequence::closed_form(
          "harmonic", [](std::uint64_t k) { return 1.0 / static_cast<double>(k); },
          TailDescriptor::asymptotic_const_eps(1.0, 0.0, 1));
    case SyntheticKind::scaled_harmonic: {
      if (!(p.L > 0.0)) throw ConfigError("synthetic_model: L must be > 0");
      const double L = p.L;
      return CharacteristicSequence::closed_form(
          "harmonic*" + std::to_string(L),
          [L](std::uint64_t k) { return L / static_cast<double>(k); },
          TailDescriptor::asymptotic_const_eps(L, 0.0, 1));
    }
    case SyntheticKind::geometric: {
      if (!(p.ratio > 0.0 && p.ratio < 1.0))
        throw ConfigError("synthetic_model: ratio must be in (0,1)");
      const double r = p.ratio;
      return CharacteristicSequence::closed_form(
          "geometric", [r](std::uint64_t k) { return std::pow(r, static_cast<double>(k)); },
          TailDescriptor::geometric_tail(1.0, r, /*exact=*/true));
    }
    case SyntheticKind::perturbed: {
      if (!(p.L > 0.0)) throw ConfigError("synthetic_model: L must be > 0");
      if (!(p.delta >= 0.0 && p.delta <= 0.45))
        throw ConfigError("synthetic_model: delta must be in [0, 0.45]");
      const double L = p.L, d = p.delta;
      auto rule = [L, d](std::uint64_t k) {
        if (k == 1) return L;
        const double n = static_cast<double>(k);
        const double ln = std::log(n);
        return L / n * (1.0 + d * std::sin(ln) / ln);
      };
      auto eps = [L, d](double n) { return L * d / std::log(std::max(n, 2.0)); };
      return CharacteristicSequence::closed_form(
          "perturbed", rule, TailDescriptor::asymptotic(L, eps, 2));
    }
    case SyntheticKind::oscillating: {
      // target 2/n on [4^j, 2*4^j), 1/(2n) on [2*4^j, 4^{j+1}); the upward
      // jumps are clamped to the previous value, which turns the whole 2/n
      // block into the constant 1/(2(4^j-1))
      PiecewiseRep rep;
      Segment first;
      first.begin = 1;
      first.end = 2;
      first.constant = true;
      first.value = 2.0;
      rep.segments.push_back(first);
      auto half_rule = [](std::uint64_t k) { return 0.5 / static_cast<double>(k); };
      std::uint64_t base = 1;
      for (int j = 0; j < 20; ++j) {
        Segment decay;
        decay.begin = 2 * base;
        decay.end = 4 * base;
        decay.constant = false;
        decay.rule = half_rule;
        rep.segments.push_back(decay);
        base *= 4;
        Segment clamped;
        clamped.begin = base;
        clamped.end = 2 * base;
        clamped.constant = true;
        clamped.value = 0.5 / static_cast<double>(base - 1);
        rep.segments.push_back(clamped);
      }
      Segment tail_seg;
      tail_seg.begin = 2 * base;
      tail_seg.end = 0;
      tail_seg.constant = false;
      tail_seg.rule = half_rule;
      rep.segments.push_back(tail_seg);
      return CharacteristicSequence("oscillating", std::move(rep),
                                    TailDescriptor::inverse(2.0, 1));
    }
    case SyntheticKind::zero:
      return CharacteristicSequence::zero();
  }
  throw ConfigError("synthetic_model: unknown kind");
}

void write_spectrum_csv(std::ostream& os, const SpectralModel& model) {
  os << "lambda,multiplicity\n";
  for (const Shell& s : model.shells)
    os << s.lambda << ',' << s.mult << '\n';
}

}  // namespace tracelab
