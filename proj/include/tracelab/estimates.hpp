#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tracelab {

enum class Measurable { yes, no, inconclusive };

const char* measurable_name(Measurable m);

// Numerical enclosure of lim gamma_n.  The state functional is never
// constructed; any admissible choice evaluates gamma inside
// [liminf_estimate, limsup_estimate], and "measurable" means the enclosure
// collapsed within tolerance.
struct LimitBracket {
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
  Measurable measurable = Measurable::inconclusive;
  std::optional<double> value;  // present iff measurable == yes
  std::uint64_t schedule_max = 0;
  // Cauchy diagnostics
  double slope_oscillation = 0.0;   // spread of local log-slopes on the tail
  double gamma_oscillation = 0.0;   // spread of raw gamma on the tail
  double idcrit_ratio_sup = 0.0;  // sup m_{k+1} / sum_{j<=k} m_j past the head
  double correction_factor_max = 1.0;   // max block correction factor used
  double correction_factor_last = 1.0;  // factor at the largest node (-> 1)
};

enum class EstimateMethod { slope_fit, zeta_extrapolation, weyl_ratio };

const char* method_name(EstimateMethod m);

struct EstimateRow {
  double parameter = 0.0;     // log N, s - 1, or t
  double raw = 0.0;           // raw value at the parameter
  double extrapolated = 0.0;  // accelerated value, when the method has one
};

struct ResidueEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  EstimateMethod method = EstimateMethod::slope_fit;
  std::vector<EstimateRow> table;
  bool diverged = false;  // weyl_ratio: ratio drifts away from every bracket
};

}  // namespace tracelab
