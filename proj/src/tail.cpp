#include "tracelab/tail.hpp"

#include <cmath>

namespace tracelab {

std::optional<double> TailDescriptor::inverse_envelope() const {
  switch (kind) {
    case TailKind::inverse_bound:
      return C;
    case TailKind::inverse_asymptotic:
      return L + eps_at(static_cast<double>(from));
    case TailKind::geometric: {
      // max over k of k * coeff * ratio^k, attained near k = -1/log(ratio)
      if (ratio <= 0.0 || ratio >= 1.0) return std::nullopt;
      const double kstar = -1.0 / std::log(ratio);
      return coeff * std::max(ratio, kstar * std::exp(-1.0));
    }
    default:
      return std::nullopt;
  }
}

const char* TailDescriptor::kind_name() const {
  switch (kind) {
    case TailKind::finite: return "finite";
    case TailKind::geometric: return "geometric";
    case TailKind::inverse_bound: return "O(1/n)";
    case TailKind::inverse_asymptotic: return "~L/n";
    case TailKind::vanishing: return "vanishing";
  }
  return "?";
}

}  // namespace tracelab
