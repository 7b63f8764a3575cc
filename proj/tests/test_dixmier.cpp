#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tracelab/dixmier.hpp"
#include "tracelab/geomspec.hpp"

using namespace tracelab;

namespace {

BoundedSequence ramp() {
  return BoundedSequence{[](std::uint64_t j) { return static_cast<double>(j); }, 1e18};
}

}  // namespace

TEST_CASE("scaling map: s(x)_j = x_{2j}") {
  const auto s = scaling_map(ramp());
  CHECK(s.at(1) == 2.0);
  CHECK(s.at(3) == 6.0);

  const BoundedSequence c{[](std::uint64_t) { return 4.5; }, 4.5};
  const auto sc = scaling_map(c);
  for (std::uint64_t j : {1ull, 17ull, 500ull}) CHECK(sc.at(j) == 4.5);

  // atom e_k with k odd dies under scaling
  const BoundedSequence e5{[](std::uint64_t j) { return j == 5 ? 1.0 : 0.0; }, 1.0};
  const auto se5 = scaling_map(e5);
  for (std::uint64_t j = 1; j <= 64; ++j) CHECK(se5.at(j) == 0.0);
}

TEST_CASE("doubling map and left-inverse identity") {
  const BoundedSequence abc{[](std::uint64_t j) { return static_cast<double>(j * j); },
                            1e18};
  const auto d = doubling_map(abc);
  // (a,b,c,...) -> (a,a,b,b,...) under the integer-part rule
  CHECK(d.at(1) == 1.0);
  CHECK(d.at(2) == 1.0);
  CHECK(d.at(3) == 4.0);
  CHECK(d.at(4) == 4.0);
  CHECK(d.at(5) == 9.0);

  const auto sd = scaling_map(doubling_map(abc));
  for (std::uint64_t j = 1; j <= 1000; ++j) CHECK(sd.at(j) == abc.at(j));

  const BoundedSequence c{[](std::uint64_t) { return -2.5; }, 2.5};
  CHECK(doubling_map(c).at(9) == -2.5);
}

TEST_CASE("m map: log2/log(n+1) damping") {
  const BoundedSequence one{[](std::uint64_t) { return 1.0; }, 1.0};
  const auto m = m_map(one);
  CHECK(m.at(1) == doctest::Approx(1.0).epsilon(1e-15));  // log2/log2
  CHECK(m.at(3) == doctest::Approx(std::log(2.0) / std::log(4.0)).epsilon(1e-15));
  CHECK(m.at((1ull << 40)) < 3e-2);  // null sequence

  const BoundedSequence z{[](std::uint64_t) { return 0.0; }, 0.0};
  CHECK(m_map(z).at(12) == 0.0);
}

TEST_CASE("additivity chain: harmonic pairs") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  IndexSchedule sched = IndexSchedule::dyadic(20);

  const auto hh = additivity_chain_check(h, h, sched);
  CHECK(hh.max_violation() <= 1e-12);

  const auto hz = additivity_chain_check(h, CharacteristicSequence::zero(), sched);
  CHECK(hz.max_violation() <= 1e-12);

  const auto hv = additivity_chain_check(h, varilly_model(), sched);
  CHECK(hv.max_violation() <= 1e-12);
}

TEST_CASE("additivity chain: merge of two harmonics duplicates terms") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  auto z = merge_sequences(h, h, 10);
  const std::vector<double> expect{1.0, 1.0, 0.5, 0.5, 1.0 / 3, 1.0 / 3,
                                   0.25, 0.25, 0.2, 0.2};
  for (std::size_t k = 0; k < expect.size(); ++k)
    CHECK(mu(z, k + 1) == doctest::Approx(expect[k]).epsilon(1e-15));
}

TEST_CASE("additivity chain rejects non-members") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  auto slow = CharacteristicSequence::closed_form(
      "slowlog",
      [](std::uint64_t k) { return 1.0 / std::log(static_cast<double>(k) + 1.0); },
      TailDescriptor::unknown().with_lower_power(1.0, 0.5, 2));
  CHECK_THROWS_AS(additivity_chain_check(h, slow, IndexSchedule::dyadic(10)),
                  ConfigError);
}

TEST_CASE("measurability: harmonic collapses to 1") {
  const auto b = measurability_bracket(synthetic_model(SyntheticKind::harmonic),
                                       IndexSchedule::dyadic(20), 5e-3);
  REQUIRE(b.measurable == Measurable::yes);
  CHECK(*b.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(b.liminf_estimate <= *b.value);
  CHECK(b.limsup_estimate >= *b.value);
}

TEST_CASE("measurability: finite rank collapses to 0") {
  auto finite = CharacteristicSequence::from_values("f", {5.0, 1.0, 0.25});
  const auto b = measurability_bracket(finite, IndexSchedule::dyadic(20), 5e-3);
  REQUIRE(b.measurable == Measurable::yes);
  CHECK(*b.value == 0.0);
  CHECK(b.liminf_estimate <= 0.0);
}

TEST_CASE("measurability: oscillating blocks stay inconclusive") {
  const auto b = measurability_bracket(synthetic_model(SyntheticKind::oscillating),
                                       IndexSchedule::dyadic(20), 5e-3);
  CHECK(b.measurable == Measurable::inconclusive);
  CHECK(b.limsup_estimate - b.liminf_estimate > 0.1);
  // frozen oracle run: local slopes alternate near 1/2 and ~0.72
  CHECK(b.liminf_estimate == doctest::Approx(0.49991).epsilon(1e-3));
  CHECK(b.limsup_estimate == doctest::Approx(0.85707).epsilon(1e-3));
}

TEST_CASE("measurability: bracket soundness on the schedule tail") {
  for (const auto& seq :
       {synthetic_model(SyntheticKind::harmonic),
        synthetic_model(SyntheticKind::oscillating),
        synthetic_model(SyntheticKind::perturbed, {2.0, 0.2, 0.5})}) {
    IndexSchedule sched = IndexSchedule::dyadic(18);
    const auto b = measurability_bracket(seq, sched, 5e-3);
    PrefixSumTable t(seq);
    const auto& idx = sched.indices;
    for (std::size_t i = idx.size() / 2; i < idx.size(); ++i) {
      const double g = t.gamma(idx[i]);
      CHECK(g >= b.liminf_estimate - 1e-9);
      CHECK(g <= b.limsup_estimate + 1e-9);
    }
  }
}

TEST_CASE("measurability: torus multiplicity blocks, idcrit factors -> 1") {
  auto model = torus_model(2, 400);
  const auto b =
      measurability_bracket(model.to_sequence(), IndexSchedule::dyadic(17), 5e-3);
  CHECK(b.idcrit_ratio_sup <= 1.0);              // observed bound for n >= 2
  CHECK(b.correction_factor_max <= 1.05);        // sane everywhere on the tail
  CHECK(b.correction_factor_last - 1.0 <= 1e-3);  // c_k -> 1 along the stream
  REQUIRE(b.measurable == Measurable::yes);
  CHECK(*b.value == doctest::Approx(3.14159265).epsilon(2e-2));
}

TEST_CASE("slope estimator: harmonic, geometric, torus") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto sh = slope_estimator(h, 1ull << 20, 0.125);
  CHECK(sh.value == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(sh.error_estimate < 1e-2);

  auto g = synthetic_model(SyntheticKind::geometric);
  const auto sg = slope_estimator(g, 1ull << 20, 0.125);
  CHECK(std::abs(sg.value) <= 1e-6);

  auto t1 = torus_model(1, 1e5).to_sequence();
  const auto st = slope_estimator(t1, *t1.length(), 0.125);
  CHECK(st.value == doctest::Approx(2.0).epsilon(1e-2));

  CHECK_THROWS_AS(slope_estimator(h, 32, 0.125), std::invalid_argument);
}

TEST_CASE("dixmier value: consistency and homogeneity") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  const auto base = dixmier_value(h);
  CHECK(base.consistent);
  CHECK(base.value() == doctest::Approx(1.0).epsilon(1e-2));

  for (const double lam : {0.5, 2.0, 10.0}) {
    const auto scaled = dixmier_value(scale_sequence(h, lam));
    CHECK(scaled.consistent);
    CHECK(std::abs(scaled.value() - lam * base.value()) <=
          scaled.combined_error + lam * base.combined_error);
  }
}

TEST_CASE("dixmier value: additivity on measurable merges") {
  auto h = synthetic_model(SyntheticKind::harmonic);
  SyntheticParams p;
  p.L = 3.0;
  auto h3 = synthetic_model(SyntheticKind::scaled_harmonic, p);
  const auto vx = dixmier_value(h);
  const auto vy = dixmier_value(h3);
  const auto vz = dixmier_value(merge_sequences(h, h3, 1ull << 21));
  CHECK(std::abs(vz.value() - (vx.value() + vy.value())) <=
        vz.combined_error + vx.combined_error + vy.combined_error);
  CHECK(vz.bracket.measurable == Measurable::yes);
  CHECK(*vz.bracket.value == doctest::Approx(4.0).epsilon(2e-2));
}

TEST_CASE("dixmier value: finite rank vanishes") {
  auto f = CharacteristicSequence::from_values("f", {9.0, 4.0, 1.0, 0.01});
  const auto v = dixmier_value(f);
  CHECK(v.bracket.measurable == Measurable::yes);
  CHECK(*v.bracket.value == 0.0);
  CHECK(std::abs(v.slope.value) <= 1e-6);
  CHECK(v.consistent);
}
