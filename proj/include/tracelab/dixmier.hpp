#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "tracelab/estimates.hpp"
#include "tracelab/sequence.hpp"

namespace tracelab {

// Element of the bounded-sequence algebra, 1-based.
struct BoundedSequence {
  std::function<double(std::uint64_t)> rule;
  double bound = 0.0;  // declared sup-norm witness

  double at(std::uint64_t j) const { return rule(j); }
};

// s(x)_j = x_{2j}
BoundedSequence scaling_map(const BoundedSequence& beta);
// d(x)_j = x_{[(1+j)/2]}; scaling is left-inverse to doubling
BoundedSequence doubling_map(const BoundedSequence& beta);
// m(x)_n = (log 2 / log(n+1)) * x_n
BoundedSequence m_map(const BoundedSequence& beta);

// Componentwise verification of the additivity-proof inequality chain on the
// sorted merge z of two ideal members:
//   gamma_k(x) + gamma_k(y) <= sigma_{2k}(z) / log k
// plus the shift-defect bounds on z itself.
struct ChainReport {
  double max_violation_chain = 0.0;
  double max_violation_shift_upper = 0.0;
  double max_violation_shift_lower = 0.0;
  double max_violation() const {
    return std::max({max_violation_chain, max_violation_shift_upper,
                     max_violation_shift_lower});
  }
};

ChainReport additivity_chain_check(const CharacteristicSequence& x,
                                   const CharacteristicSequence& y,
                                   const IndexSchedule& schedule);

struct BracketConfig {
  double cauchy_tol = 5e-3;
  bool use_multiplicity_blocks = true;  // snap schedule to run boundaries
};

// Evaluates gamma along the schedule (snapped to cumulative-multiplicity
// indices when the representation exposes blocks), extrapolates the
// O(1/log N) transient away via local log-slopes, and certifies "measurable"
// only when the slopes settle and an analytic ~L/n class confirms.
LimitBracket measurability_bracket(const CharacteristicSequence& seq,
                                   const IndexSchedule& schedule,
                                   double cauchy_tol);
LimitBracket measurability_bracket(const CharacteristicSequence& seq,
                                   const IndexSchedule& schedule,
                                   const BracketConfig& config);

// Least-squares slope of sigma_N against log N over [ratio*N_max, N_max].
ResidueEstimate slope_estimator(const CharacteristicSequence& seq,
                                std::uint64_t N_max, double window_ratio);

struct DixmierConfig {
  int schedule_exponent = 20;  // dyadic schedule to 2^H
  double cauchy_tol = 5e-3;
  double window_ratio = 0.125;
  std::uint64_t N_max = 0;  // 0: use 2^H
};

struct DixmierValue {
  LimitBracket bracket;
  ResidueEstimate slope;
  bool consistent = false;
  double combined_error = 0.0;
  // best single number: bracket value when measurable, slope otherwise
  double value() const {
    return bracket.value ? *bracket.value : slope.value;
  }
};

DixmierValue dixmier_value(const CharacteristicSequence& seq,
                           const DixmierConfig& config = {});

}  // namespace tracelab
