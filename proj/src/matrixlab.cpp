#include "tracelab/matrixlab.hpp"

namespace tracelab {

namespace {

struct TrialOutcome {
  double violation = 0.0;  // already relative to the trial's scale
};

int draw_dim(SplitMix64& rng, const CampaignConfig& cfg) {
  const int span = cfg.dim_max - cfg.dim_min + 1;
  return cfg.dim_min + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span));
}

double rel(double violation, double scale) {
  return violation / std::max(1.0, scale);
}

template <typename Scalar>
TrialOutcome trial_homogeneity(SplitMix64& rng, const CampaignConfig& cfg) {
  const int d = draw_dim(rng, cfg);
  const auto A = gaussian_matrix<Scalar>(rng, d, d);
  Scalar lambda;
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
    lambda = Scalar(rng.next_complex_gaussian());
  else
    lambda = Scalar(rng.next_gaussian());
  const auto sa = singular_values<Scalar>(A).values;
  const auto sl = singular_values<Scalar>(DenseMatrix<Scalar>(lambda * A)).values;
  const double mag = std::abs(lambda);
  double worst = 0.0, ca = 0.0, cl = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    ca += sa[k];
    cl += sl[k];
    worst = std::max(worst, std::abs(cl - mag * ca));
  }
  return {rel(worst, mag * (sa.empty() ? 0.0 : sa[0]))};
}

template <typename Scalar>
TrialOutcome trial_subadditivity(SplitMix64& rng, const CampaignConfig& cfg) {
  const int d = draw_dim(rng, cfg);
  const auto A = gaussian_matrix<Scalar>(rng, d, d);
  const auto B = gaussian_matrix<Scalar>(rng, d, d);
  const auto rep = ky_fan_report<Scalar>(A, B, /*both_psd=*/false);
  const double scale = operator_norm<Scalar>(A) + operator_norm<Scalar>(B);
  return {rel(rep.max_violation_subadd, scale)};
}

template <typename Scalar>
TrialOutcome trial_doubling(SplitMix64& rng, const CampaignConfig& cfg) {
  const int d = draw_dim(rng, cfg);
  const auto A = random_psd<Scalar>(rng, d);
  const auto B = random_psd<Scalar>(rng, d);
  const auto rep = ky_fan_report<Scalar>(A, B, /*both_psd=*/true);
  const double scale = operator_norm<Scalar>(A) + operator_norm<Scalar>(B);
  return {rel(std::max(rep.max_violation_subadd, *rep.max_violation_doubling), scale)};
}

template <typename Scalar>
TrialOutcome trial_ideal_bound(SplitMix64& rng, const CampaignConfig& cfg) {
  const int m = draw_dim(rng, cfg);
  const int p = draw_dim(rng, cfg);
  const int q = draw_dim(rng, cfg);
  const int r = draw_dim(rng, cfg);
  const auto a = gaussian_matrix<Scalar>(rng, m, p);
  const auto y = gaussian_matrix<Scalar>(rng, p, q);
  const auto b = gaussian_matrix<Scalar>(rng, q, r);
  const double v = ideal_bound_check<Scalar>(a, y, b);
  const double scale =
      operator_norm<Scalar>(a) * operator_norm<Scalar>(b) * operator_norm<Scalar>(y);
  return {rel(v, scale)};
}

template <typename Scalar>
TrialOutcome trial_invariance(SplitMix64& rng, const CampaignConfig& cfg) {
  const int rows = draw_dim(rng, cfg);
  const int cols = draw_dim(rng, cfg);
  const auto A = gaussian_matrix<Scalar>(rng, rows, cols);
  const double n = operator_norm<Scalar>(A);
  return {rel(invariance_check<Scalar>(A), n * n)};
}

template <typename Scalar>
TrialOutcome trial_eckart_young(SplitMix64& rng, const CampaignConfig& cfg) {
  const int rows = draw_dim(rng, cfg);
  const int cols = draw_dim(rng, cfg);
  const auto A = gaussian_matrix<Scalar>(rng, rows, cols);
  const double scale = operator_norm<Scalar>(A);
  double worst = 0.0;
  const std::uint64_t cap = static_cast<std::uint64_t>(std::min(rows, cols));
  for (std::uint64_t r = 0; r < cap; ++r) {
    const auto rep = eckart_young_check<Scalar>(A, r);
    worst = std::max(worst, std::abs(rep.distance - rep.expected));
  }
  return {rel(worst, scale)};
}

template <typename Scalar>
TrialOutcome trial_top_k(SplitMix64& rng, const CampaignConfig& cfg,
                         std::uint64_t tseed) {
  const int d = draw_dim(rng, cfg);
  const auto A = random_psd<Scalar>(rng, d);
  const std::uint64_t k = 1 + rng.next_u64() % static_cast<std::uint64_t>(d);
  const auto rep = top_k_trace_check<Scalar>(A, k, tseed);
  const double scale = operator_norm<Scalar>(A);
  // frames must stay below sigma_k and the eigenprojection must attain it
  const double v = std::max(rep.max_violation, std::abs(rep.attained - rep.sigma_k));
  return {rel(v, scale * static_cast<double>(k))};
}

template <typename Scalar>
TrialOutcome trial_diag_trace(SplitMix64& rng, const CampaignConfig& cfg,
                              std::uint64_t tseed) {
  const int d = draw_dim(rng, cfg);
  const auto A = random_psd<Scalar>(rng, d);
  const double v = diagonal_trace_check<Scalar>(A, tseed);
  double trace = 0.0;
  for (int i = 0; i < d; ++i) trace += Eigen::numext::real(Scalar(A(i, i)));
  return {rel(v, trace)};
}

TrialOutcome run_trial(int family, std::uint64_t tseed, std::uint64_t trial,
                       const CampaignConfig& cfg) {
  SplitMix64 rng(tseed);
  const bool complex_case = (trial % 2) == 1;
  switch (family) {
    case 0:
      return complex_case ? trial_homogeneity<std::complex<double>>(rng, cfg)
                          : trial_homogeneity<double>(rng, cfg);
    case 1:
      return complex_case ? trial_subadditivity<std::complex<double>>(rng, cfg)
                          : trial_subadditivity<double>(rng, cfg);
    case 2:
      return complex_case ? trial_doubling<std::complex<double>>(rng, cfg)
                          : trial_doubling<double>(rng, cfg);
    case 3:
      return complex_case ? trial_ideal_bound<std::complex<double>>(rng, cfg)
                          : trial_ideal_bound<double>(rng, cfg);
    case 4:
      return complex_case ? trial_invariance<std::complex<double>>(rng, cfg)
                          : trial_invariance<double>(rng, cfg);
    case 5:
      return complex_case ? trial_eckart_young<std::complex<double>>(rng, cfg)
                          : trial_eckart_young<double>(rng, cfg);
    case 6:
      return complex_case ? trial_top_k<std::complex<double>>(rng, cfg, tseed)
                          : trial_top_k<double>(rng, cfg, tseed);
    case 7:
      return complex_case ? trial_diag_trace<std::complex<double>>(rng, cfg, tseed)
                          : trial_diag_trace<double>(rng, cfg, tseed);
  }
  throw ConfigError("run_trial: unknown family");
}

}  // namespace

std::vector<CampaignResult> run_matrix_campaigns(const CampaignConfig& config) {
  if (config.dim_min < 1 || config.dim_max < config.dim_min)
    throw ConfigError("matrix campaigns: bad dimension range");
  static const char* names[] = {
      "homogeneity",       "ky_fan_subadditivity", "ky_fan_doubling_psd",
      "ideal_bound",       "gram_invariance",      "eckart_young",
      "top_k_trace_psd",   "diagonal_trace_psd",
  };

  std::vector<CampaignResult> out;
  for (int family = 0; family < 8; ++family) {
    struct Best {
      double violation = -1.0;
      std::uint64_t seed = 0;
    };
    auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
      Best best;
      for (std::uint64_t trial = lo; trial < hi; ++trial) {
        const std::uint64_t tseed =
            SplitMix64(config.seed ^ (0xFA51ull << 32) ^ static_cast<std::uint64_t>(family),
                       trial)
                .next_u64();
        const TrialOutcome o = run_trial(family, tseed, trial, config);
        if (o.violation > best.violation) best = Best{o.violation, tseed};
      }
      return best;
    };
    const Best best = chunked_reduce<Best>(
        config.trials, 16, Best{},
        chunk,
        [](Best a, Best b) { return a.violation >= b.violation ? a : b; },
        config.threads);

    CampaignResult r;
    r.family = names[family];
    r.trials = config.trials;
    r.max_violation = std::max(best.violation, 0.0);
    r.worst_seed = best.seed;
    out.push_back(r);
  }
  return out;
}

}  // namespace tracelab
