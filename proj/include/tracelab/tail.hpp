#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace tracelab {

// Decay certificate for the part of a sequence beyond what is materialized.
// Everything downstream (L^{1,inf} membership, zeta tail brackets) keys off
// this closed enumeration; a sequence without a usable certificate is
// refused rather than guessed at.
enum class TailKind {
  finite,              // mu_k = 0 for k > last
  geometric,           // mu_k <= coeff * ratio^k for k >= from
  inverse_bound,       // mu_k <= C / k          for k >= from
  inverse_asymptotic,  // |k*mu_k - L| <= eps(k)  for k >= from
  vanishing,           // mu_k -> 0 promised, no usable rate
};

struct TailDescriptor {
  TailKind kind = TailKind::vanishing;
  std::uint64_t from = 1;

  std::uint64_t last = 0;  // finite
  double coeff = 0.0;      // geometric
  double ratio = 0.0;      // geometric
  bool exact = false;      // geometric: mu_k == coeff*ratio^k, not just <=
  double C = 0.0;          // inverse_bound
  double L = 0.0;          // inverse_asymptotic
  std::function<double(double)> eps;  // inverse_asymptotic, argument = index

  // Optional divergence certificate mu_k >= lower_c * k^{-lower_p} with
  // lower_p < 1 (forces sigma_n ~ n^{1-p}, hence gamma_n -> inf).
  std::optional<double> lower_c;
  double lower_p = 0.0;
  std::uint64_t lower_from = 1;

  static TailDescriptor finite_tail(std::uint64_t last_index) {
    TailDescriptor t;
    t.kind = TailKind::finite;
    t.last = last_index;
    return t;
  }
  static TailDescriptor geometric_tail(double coeff, double ratio, bool exact,
                                       std::uint64_t from = 1) {
    TailDescriptor t;
    t.kind = TailKind::geometric;
    t.coeff = coeff;
    t.ratio = ratio;
    t.exact = exact;
    t.from = from;
    return t;
  }
  static TailDescriptor inverse(double C, std::uint64_t from = 1) {
    TailDescriptor t;
    t.kind = TailKind::inverse_bound;
    t.C = C;
    t.from = from;
    return t;
  }
  static TailDescriptor asymptotic(double L,
                                   std::function<double(double)> eps,
                                   std::uint64_t from = 1) {
    TailDescriptor t;
    t.kind = TailKind::inverse_asymptotic;
    t.L = L;
    t.eps = std::move(eps);
    t.from = from;
    return t;
  }
  static TailDescriptor asymptotic_const_eps(double L, double eps_value,
                                             std::uint64_t from = 1) {
    return asymptotic(
        L, [eps_value](double) { return eps_value; }, from);
  }
  static TailDescriptor unknown() { return TailDescriptor{}; }

  TailDescriptor& with_lower_power(double c, double p, std::uint64_t from_k) {
    lower_c = c;
    lower_p = p;
    lower_from = from_k;
    return *this;
  }

  double eps_at(double k) const { return eps ? eps(k) : 0.0; }

  // mu_k <= C/k for some C certified by the descriptor?  Returns the C.
  std::optional<double> inverse_envelope() const;

  // sigma_n <= C0 + C1*log n (n >= from) derivable from the descriptor alone?
  bool summable() const {
    return kind == TailKind::finite || kind == TailKind::geometric;
  }

  const char* kind_name() const;
};

}  // namespace tracelab
