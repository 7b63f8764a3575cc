#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tracelab/dixmier.hpp"
#include "tracelab/geomspec.hpp"
#include "tracelab/zetalab.hpp"

using namespace tracelab;

TEST_CASE("zeta: geometric closed form") {
  auto g = synthetic_model(SyntheticKind::geometric);  // mu_n = 2^-n
  const auto z = zeta(g, 2.0, 64);
  // sum 4^-n = 1/3, exact tail
  CHECK(z.value_low() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(z.value_high() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(z.halfwidth() <= 1e-12);
}

TEST_CASE("zeta: finitely supported is a finite power sum") {
  auto f = CharacteristicSequence::from_values("f", {2.0, 1.0, 0.5});
  const auto z = zeta(f, 3.0, 2);  // cut below the support: still summed fully
  CHECK(z.tail_low == 0.0);
  CHECK(z.tail_high == 0.0);
  CHECK(z.partial_sum == doctest::Approx(8.0 + 1.0 + 0.125).epsilon(1e-14));
}

TEST_CASE("zeta: harmonic brackets the Basel value") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto z = zeta(h, 2.0, 1000000);
  const double basel = 1.6449340668482264;
  CHECK(z.value_low() <= basel + 1e-12);
  CHECK(z.value_high() >= basel - 1e-12);
  CHECK(z.value_mid() == doctest::Approx(basel).epsilon(1e-6));
}

TEST_CASE("zeta: contract violations") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  CHECK_THROWS_AS(zeta(h, 1.0, 100), std::invalid_argument);
  auto fog = CharacteristicSequence::closed_form(
      "fog", [](std::uint64_t k) { return 1.0 / std::sqrt(static_cast<double>(k)); },
      TailDescriptor::unknown());
  CHECK_THROWS_AS(zeta(fog, 2.0, 100), NumericError);
}

TEST_CASE("zeta: sequences with mu_1 > 1 are normalized with the homogeneity factor") {
  SyntheticParams p;
  p.L = 3.0;
  auto h3 = synthetic_model(SyntheticKind::scaled_harmonic, p);
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto z3 = zeta(h3, 2.0, 1 << 16);
  const auto z1 = zeta(h, 2.0, 1 << 16);
  CHECK(z3.value_mid() == doctest::Approx(9.0 * z1.value_mid()).epsilon(1e-12));
}

TEST_CASE("zeta: bracket midpoint decreasing in s") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  double prev = std::numeric_limits<double>::infinity();
  for (const double s : {1.25, 1.5, 2.0, 3.0, 4.0}) {
    const double v = zeta(h, s, 1 << 16).value_mid();
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("zeta: enclosures at different cuts overlap") {
  // every bracket contains the true value, so any two must intersect
  auto t1 = torus_model(1, 2000).to_sequence();
  auto h = synthetic_model(SyntheticKind::harmonic);
  for (const auto& seq : {t1, h}) {
    for (const double s : {1.25, 1.5, 2.0}) {
      const auto narrow = zeta(seq, s, 1ull << 20);
      const auto wide = zeta(seq, s, 1ull << 10);
      CHECK(wide.value_low() <= narrow.value_high() + 1e-12);
      CHECK(narrow.value_low() <= wide.value_high() + 1e-12);
      CHECK(wide.halfwidth() >= narrow.halfwidth() - 1e-12);
    }
  }
}

TEST_CASE("residue at one: refuses when the tail bracket dominates") {
  // epsilon close to L leaves the tail enclosure too wide to certify
  auto fuzzy = CharacteristicSequence::closed_form(
      "fuzzy", [](std::uint64_t k) { return 1.0 / static_cast<double>(k); },
      TailDescriptor::asymptotic_const_eps(1.0, 0.9, 1));
  ResidueConfig rc;
  rc.N_cut = 1 << 10;
  CHECK_THROWS_AS(residue_at_one(fuzzy, rc), NumericError);
}

TEST_CASE("residue at one: harmonic, geometric, torus") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto rh = residue_at_one(h, {});
  CHECK(rh.value == doctest::Approx(1.0).epsilon(1e-3));

  auto g = synthetic_model(SyntheticKind::geometric);
  const auto rg = residue_at_one(g, {});
  CHECK(std::abs(rg.value) <= 1e-9);

  auto t2 = torus_model(2, 600).to_sequence();
  const auto rt = residue_at_one(t2, {});
  CHECK(rt.value == doctest::Approx(3.14159265358979).epsilon(2e-2));
}

TEST_CASE("counting: direct cases") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  CHECK(counting(h, 2.5) == 2);
  CHECK(counting(h, 0.9) == 0);  // t < 1/mu_1
  CHECK(counting(h, 0.0) == 0);
  CHECK(counting(h, 1000.5) == 1000);

  auto f = CharacteristicSequence::from_values("f", {2.0, 1.0, 0.5});
  CHECK(counting(f, 1e9) == 3);

  // varilly blocks: alpha jumps from (m-1)! to m! at t = m!/log m
  auto v = varilly_model();
  for (const int m : {3, 5, 8, 12}) {
    const double t = std::exp(std::lgamma(m + 1.0)) / std::log(static_cast<double>(m));
    const double fact_m = std::exp(std::lgamma(m + 1.0));
    const double fact_prev = std::exp(std::lgamma(static_cast<double>(m)));
    CHECK(static_cast<double>(counting(v, t * (1 + 1e-9))) ==
          doctest::Approx(fact_m).epsilon(1e-12));
    CHECK(static_cast<double>(counting(v, t * (1 - 1e-9))) ==
          doctest::Approx(fact_prev).epsilon(1e-12));
  }
}

TEST_CASE("layer cake: sigma recomputed through alpha on explicit data") {
  std::vector<double> vals{5.0, 3.0, 3.0, 2.5, 1.0, 1.0, 1.0, 0.25};
  auto seq = CharacteristicSequence::from_values("lc", vals);
  PrefixSumTable table(seq);
  for (const std::uint64_t N : {3ull, 5ull, 8ull}) {
    // integral of min(alpha(1/u), N) du over u via the distinct levels
    std::vector<double> levels = vals;
    std::sort(levels.begin(), levels.end(), std::greater<double>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    levels.push_back(0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const double alpha = static_cast<double>(counting(seq, 1.0 / levels[i]));
      acc += std::min(alpha, static_cast<double>(N)) * (levels[i] - levels[i + 1]);
    }
    CHECK(acc == doctest::Approx(table.sigma(N)).epsilon(1e-9));
  }
}

TEST_CASE("weyl slope: counting ratios") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto wh = weyl_slope(h, geometric_t_schedule(64, 1e6));
  CHECK(wh.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(wh.diverged);

  auto t2 = torus_model(2, 1200).to_sequence();
  const auto wt = weyl_slope(t2, geometric_t_schedule(64, 1e6));
  CHECK(wt.value == doctest::Approx(3.14159265).epsilon(2e-2));
  CHECK_FALSE(wt.diverged);

  const auto wv = weyl_slope(varilly_model(), geometric_t_schedule(64, 1e15));
  CHECK(wv.diverged);
}

TEST_CASE("consistency triangle on measurable models") {
  for (auto seq : {synthetic_model(SyntheticKind::harmonic),
                   torus_model(2, 500).to_sequence()}) {
    const auto slope = slope_estimator(
        seq, seq.length() ? *seq.length() : (1ull << 20), 0.125);
    const auto residue = residue_at_one(seq, {});
    const auto bracket = measurability_bracket(seq, IndexSchedule::dyadic(18), 5e-3);
    const double tol =
        slope.error_estimate + residue.error_estimate + 5e-3 * std::max(1.0, slope.value);
    CHECK(std::abs(slope.value - residue.value) <= tol);
    REQUIRE(bracket.measurable == Measurable::yes);
    CHECK(std::abs(*bracket.value - residue.value) <=
          tol + 0.5 * (bracket.limsup_estimate - bracket.liminf_estimate));
  }
}

TEST_CASE("residue csv emitter shape") {
  std::ostringstream os;
  ResidueConfig rc;
  rc.levels = 5;
  write_residue_csv(os, synthetic_model(SyntheticKind::harmonic), rc);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "s,partial_sum,tail_low,tail_high,residue_mid");
  int rows = 0;
  for (std::string line; std::getline(is, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);  // j = 2..5
}
