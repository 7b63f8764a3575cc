#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "tracelab/matrixlab.hpp"

using namespace tracelab;
using Cplx = std::complex<double>;

TEST_CASE("singular values: identity and diagonal") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  const auto si = singular_values<double>(I);
  for (const double v : si.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = -4.0;
  const auto sd = singular_values<double>(D);
  CHECK(sd.values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(sd.values[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("singular values: 2x2 characteristic-polynomial oracle") {
  // eigenvalues of A^H A from trace and determinant, independently of the
  // Jacobi path
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    SplitMix64 rng(0xABCD, trial);
    const auto A = gaussian_matrix<Cplx>(rng, 2, 2);
    const Eigen::Matrix2cd G = A.adjoint() * A;
    const double tr = G.trace().real();
    const double det = (G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lo = std::sqrt(std::max(0.0, (tr - disc) / 2.0));
    const double hi = std::sqrt((tr + disc) / 2.0);
    const auto sv = singular_values<Cplx>(A);
    CHECK(sv.values[0] == doctest::Approx(hi).epsilon(1e-10));
    CHECK(sv.values[1] == doctest::Approx(lo).epsilon(1e-10));
  }
}

TEST_CASE("singular values: unitary invariance") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    SplitMix64 rng(0x1234, trial);
    const auto A = gaussian_matrix<Cplx>(rng, 6, 6);
    const auto U = random_unitary<Cplx>(rng, 6);
    const auto V = random_unitary<Cplx>(rng, 6);
    const auto s0 = singular_values<Cplx>(A).values;
    const auto s1 = singular_values<Cplx>(DenseMatrix<Cplx>(U * A * V)).values;
    const double norm = s0[0];
    for (std::size_t k = 0; k < s0.size(); ++k)
      CHECK(std::abs(s0[k] - s1[k]) <= 1e-10 * std::max(1.0, norm));
  }
}

TEST_CASE("ky fan: worked example and zero case") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = 3.0;
  A(1, 1) = 1.0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(2, 2) * 2.0;
  const auto rep = ky_fan_report<double>(A, B, /*both_psd=*/true);
  CHECK(rep.max_violation_subadd <= 1e-14);
  REQUIRE(rep.max_violation_doubling.has_value());
  CHECK(*rep.max_violation_doubling <= 1e-14);

  const auto zrep = ky_fan_report<double>(A, Eigen::MatrixXd::Zero(2, 2), false);
  CHECK(zrep.max_violation_subadd <= 1e-14);

  CHECK_THROWS_AS(ky_fan_report<double>(A, Eigen::MatrixXd::Zero(3, 3), false),
                  ConfigError);
}

TEST_CASE("gram invariance: hand cases") {
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(2, 2);
  N(0, 1) = 1.0;  // nilpotent: sigma(N^T N) = sigma(N N^T) = {1, 0}
  CHECK(invariance_check<double>(N) <= 1e-14);

  SplitMix64 rng(99);
  auto H = random_psd<Cplx>(rng, 4);  // Hermitian: A^H A = A A^H
  CHECK(invariance_check<Cplx>(DenseMatrix<Cplx>(H)) <= 1e-10);
}

TEST_CASE("ideal bound: identity and homogeneity cases") {
  SplitMix64 rng(5);
  const auto y = gaussian_matrix<double>(rng, 4, 4);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  CHECK(ideal_bound_check<double>(I, y, I) <= 1e-12);
  CHECK(ideal_bound_check<double>(Eigen::MatrixXd(2.0 * I), y, I) <= 1e-12);
}

TEST_CASE("eckart-young: truncation oracle") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
  D(0, 0) = 3.0;
  D(1, 1) = 2.0;
  D(2, 2) = 1.0;
  const auto r1 = eckart_young_check<double>(D, 1);
  CHECK(r1.distance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r1.expected == doctest::Approx(2.0).epsilon(1e-12));

  const auto r0 = eckart_young_check<double>(D, 0);
  CHECK(r0.distance == doctest::Approx(3.0).epsilon(1e-12));  // = ||A||

  SplitMix64 rng(11);
  Eigen::MatrixXd u = gaussian_matrix<double>(rng, 4, 1);
  Eigen::MatrixXd v = gaussian_matrix<double>(rng, 4, 1);
  Eigen::MatrixXd rank1 = u * v.transpose();
  const auto rr = eckart_young_check<double>(rank1, 1);
  CHECK(rr.distance <= 1e-10 * operator_norm<double>(rank1));

  CHECK_THROWS_AS(eckart_young_check<double>(D, 3), ConfigError);
}

TEST_CASE("top-k trace: diagonal example and frame bound") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A(0, 0) = 5.0;
  A(1, 1) = 3.0;
  A(2, 2) = 1.0;
  const auto rep = top_k_trace_check<double>(A, 2, /*frame_seed=*/42);
  CHECK(rep.sigma_k == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(rep.attained == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rep.max_violation <= 1e-12);

  // k = dim: full trace, any unitary frame attains it
  const auto full = top_k_trace_check<double>(A, 3, 43);
  CHECK(full.sigma_k == doctest::Approx(9.0).epsilon(1e-13));
  CHECK(full.best_random_frame == doctest::Approx(9.0).epsilon(1e-12));

  // 500 random frames on a random PSD stay below sigma_k
  SplitMix64 rng(2024);
  const auto P = random_psd<Cplx>(rng, 6);
  const auto big = top_k_trace_check<Cplx>(P, 3, 77, 500);
  CHECK(big.max_violation <= 1e-10 * operator_norm<Cplx>(P));
}

TEST_CASE("diagonal trace: basis independence") {
  Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  CHECK(diagonal_trace_check<double>(I4, 7) <= 1e-12);

  SplitMix64 rng(31);
  const auto A = random_psd<double>(rng, 5);
  const double tr = A.trace();
  CHECK(diagonal_trace_check<double>(A, 123) <= 1e-10 * tr);
}

TEST_CASE("campaigns: quick run stays below tolerance") {
  CampaignConfig cfg;
  cfg.trials = 60;
  cfg.dim_min = 2;
  cfg.dim_max = 9;
  cfg.threads = 2;
  const auto results = run_matrix_campaigns(cfg);
  CHECK(results.size() == 8);
  for (const auto& r : results) {
    INFO(r.family);
    CHECK(r.trials == 60);
    CHECK(r.max_violation <= 1e-9);
  }
  // determinism: same seed, same outcome
  const auto again = run_matrix_campaigns(cfg);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].max_violation == again[i].max_violation);
    CHECK(results[i].worst_seed == again[i].worst_seed);
  }
}

TEST_CASE("jacobi accuracy at dimension 64 against an independent reference") {
  SplitMix64 rng(0xACC);
  const auto A = gaussian_matrix<double>(rng, 64, 64);
  const auto mine = singular_values<double>(A);
  Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
  for (int k = 0; k < 64; ++k) {
    CHECK(std::abs(mine.values[static_cast<std::size_t>(k)] - ref.singularValues()[k]) <=
          1e-12 * ref.singularValues()[0]);
  }
}

TEST_CASE("jacobi handles zero and rank-deficient input") {
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(4, 4);
  const auto sz = singular_values<double>(Z);
  for (const double v : sz.values) CHECK(v == 0.0);

  SplitMix64 rng(8);
  Eigen::MatrixXd tall = gaussian_matrix<double>(rng, 6, 2);
  Eigen::MatrixXd low = tall * tall.transpose();  // rank 2, 6x6
  const auto sl = singular_values<double>(low);
  CHECK(sl.values.size() == 6);
  CHECK(sl.values[2] <= 1e-10 * sl.values[0]);
}
