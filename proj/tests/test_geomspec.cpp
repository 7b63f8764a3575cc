#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tracelab/dixmier.hpp"
#include "tracelab/geomspec.hpp"
#include "tracelab/wodzicki.hpp"

using namespace tracelab;

TEST_CASE("torus multiplicities by exhaustive enumeration, n=2") {
  const auto counts = sum_of_squares_counts(2, 25);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 4);
  CHECK(counts[2] == 4);
  CHECK(counts[3] == 0);
  CHECK(counts[4] == 4);
  CHECK(counts[5] == 8);
  CHECK(counts[25] == 12);  // (0,5),(3,4),(4,3),(5,0) with signs
}

TEST_CASE("lattice counts") {
  CHECK(lattice_count(1, 3.0).count == 7);
  CHECK(lattice_count(2, 2.0).count == 13);
  const auto big = lattice_count(2, 1000.0);
  CHECK(std::abs(big.volume_ratio - 1.0) < 5e-3);  // vs pi R^2
}

TEST_CASE("torus n=1 sequence values") {
  auto seq = torus_model(1, 100).to_sequence();
  CHECK(mu(seq, 1) == doctest::Approx(1.0));
  CHECK(mu(seq, 2) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(mu(seq, 3) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(mu(seq, 4) == doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-15));
  CHECK(mu(seq, 5) == doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-15));
}

TEST_CASE("shell-sum conservation and N'_R") {
  for (const int n : {1, 2, 3}) {
    const double R = n == 3 ? 20.0 : 50.0;
    const auto model = torus_model(n, R);
    CHECK(model.total_multiplicity() == lattice_count(n, R).count);
    // N'_R counts 1 + |k|^2 <= R^2
    CHECK(model.count_within(R * R - 1.0) ==
          lattice_count(n, std::sqrt(R * R - 1.0)).count);
  }
}

TEST_CASE("four-square counts match the classical divisor values") {
  // r_4(lambda) = 8 * sum of divisors not divisible by 4
  const auto counts = sum_of_squares_counts(4, 12);
  const std::vector<std::uint32_t> expect{1,  8,  24, 32, 24, 48, 96,
                                          64, 24, 104, 144, 96, 96};
  for (std::size_t lam = 0; lam < expect.size(); ++lam)
    CHECK(counts[lam] == expect[lam]);
}

TEST_CASE("torus symmetry: multiplicities even for lambda > 0") {
  const auto counts = sum_of_squares_counts(3, 500);
  for (std::size_t lam = 1; lam < counts.size(); ++lam)
    CHECK(counts[lam] % 2 == 0);
  const auto c1 = sum_of_squares_counts(1, 100);
  for (std::size_t lam = 1; lam < c1.size(); ++lam)
    CHECK((c1[lam] == 0 || c1[lam] == 2));
}

TEST_CASE("idcrit admissibility: ratio bounded over the enumerated range") {
  for (const int n : {2, 3}) {
    const auto model = torus_model(n, n == 3 ? 40.0 : 300.0);
    const auto seq = model.to_sequence();
    const auto* runs = std::get_if<RunsRep>(&seq.rep());
    REQUIRE(runs != nullptr);
    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < runs->runs.size(); ++i) {
      if (runs->cum[i] < 64) continue;  // head shells are finite-rank noise
      sup = std::max(sup, static_cast<double>(runs->runs[i + 1].count) /
                              static_cast<double>(runs->cum[i]));
    }
    CHECK(sup <= 1.0);
  }
}

TEST_CASE("determinism: regenerating a model yields an identical stream") {
  const auto a = torus_model(2, 200);
  const auto b = torus_model(2, 200);
  REQUIRE(a.shells.size() == b.shells.size());
  for (std::size_t i = 0; i < a.shells.size(); ++i) {
    CHECK(a.shells[i].lambda == b.shells[i].lambda);
    CHECK(a.shells[i].mult == b.shells[i].mult);
  }
}

TEST_CASE("sphere multiplicities") {
  const auto s2 = sphere_model(2, 5);
  CHECK(s2.shells[0].mult == 1);
  CHECK(s2.shells[1].mult == 3);
  CHECK(s2.shells[2].mult == 5);
  CHECK(s2.shells[1].lambda == 2);  // l(l+1) at l=1

  const auto s1 = sphere_model(1, 4);
  CHECK(s1.shells[0].mult == 1);
  CHECK(s1.shells[1].mult == 2);
  CHECK(s1.shells[2].mult == 2);

  const auto s3 = sphere_model(3, 4);
  CHECK(s3.shells[2].mult == 9);  // (l+1)^2 at l=2
}

TEST_CASE("sphere streams against the volume-corrected trace value") {
  // vol(S^n) Omega_n / (n (2pi)^n): equals the torus value only when the
  // volumes agree (n = 1)
  auto s1 = sphere_model(1, 4000).to_sequence();
  const auto v1 = slope_estimator(s1, *s1.length(), 0.125);
  CHECK(v1.value == doctest::Approx(2.0).epsilon(1e-2));

  auto s2 = sphere_model(2, 2000).to_sequence();
  const auto v2 = slope_estimator(s2, *s2.length(), 0.125);
  CHECK(v2.value == doctest::Approx(1.0).epsilon(1e-2));

  auto s3 = sphere_model(3, 300).to_sequence();
  const auto v3 = slope_estimator(s3, *s3.length(), 0.125);
  CHECK(v3.value == doctest::Approx(1.0 / 3.0).epsilon(2e-2));
}

TEST_CASE("varilly closed forms") {
  CHECK(varilly_sigma_at_factorial(2) ==
        doctest::Approx(1.0 + std::log(2.0) / 2.0).epsilon(1e-15));
  // sigma_{m!} <= 1 + log m! for m up to 170 via log-gamma
  for (int m = 2; m <= 170; ++m) {
    CHECK(varilly_sigma_at_factorial(m) <=
          1.0 + std::lgamma(m + 1.0) + 1e-12);
  }
  // block-end gammas drift toward 1 from above
  CHECK(varilly_gamma_at_factorial(170) ==
        doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("varilly representation matches the closed forms where integral") {
  auto v = varilly_model();
  PrefixSumTable t(v);
  for (const int m : {2, 3, 4, 5, 10, 15}) {
    const std::uint64_t fact = [m] {
      std::uint64_t f = 1;
      for (int j = 2; j <= m; ++j) f *= static_cast<std::uint64_t>(j);
      return f;
    }();
    CHECK(t.sigma(fact) ==
          doctest::Approx(varilly_sigma_at_factorial(m)).epsilon(1e-13));
  }
}

TEST_CASE("synthetic params are validated") {
  SyntheticParams p;
  p.ratio = 1.5;
  CHECK_THROWS_AS(synthetic_model(SyntheticKind::geometric, p), ConfigError);
  p = {};
  p.delta = 0.9;
  CHECK_THROWS_AS(synthetic_model(SyntheticKind::perturbed, p), ConfigError);
  p = {};
  p.L = -1.0;
  CHECK_THROWS_AS(synthetic_model(SyntheticKind::scaled_harmonic, p), ConfigError);
}

TEST_CASE("synthetic kinds carry the right descriptors") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  CHECK(h.tail().kind == TailKind::inverse_asymptotic);
  CHECK(h.tail().L == 1.0);

  SyntheticParams p;
  p.L = 3.0;
  auto s = synthetic_model(SyntheticKind::scaled_harmonic, p);
  CHECK(s.tail().L == 3.0);
  CHECK(mu(s, 7) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));

  auto g = synthetic_model(SyntheticKind::geometric);
  CHECK(g.tail().kind == TailKind::geometric);
  CHECK(g.tail().exact);

  auto o = synthetic_model(SyntheticKind::oscillating);
  CHECK(o.tail().kind == TailKind::inverse_bound);
  // clamped: the 2/n target block is constant at the previous value
  CHECK(mu(o, 4) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(mu(o, 7) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(mu(o, 8) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("spectrum csv emitter") {
  std::ostringstream os;
  write_spectrum_csv(os, torus_model(2, 3));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "lambda,multiplicity");
  std::getline(is, line);
  CHECK(line == "0,1");
  std::getline(is, line);
  CHECK(line == "1,4");
}

TEST_CASE("memory budget guard") {
  CHECK_THROWS_AS(torus_model(2, 1e6, /*memory_budget_bytes=*/1 << 20), ConfigError);
}
