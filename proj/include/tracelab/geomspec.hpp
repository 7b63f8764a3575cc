#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tracelab/sequence.hpp"

namespace tracelab {

// One spectral shell: eigenvalue lambda of the Laplacian with its exact
// multiplicity.  The associated operator is (1+Delta)^{-n/2}, so the flat
// sequence value on the shell is (1+lambda)^{-n/2}.
struct Shell {
  std::uint64_t lambda = 0;
  std::uint64_t mult = 0;
};

struct SpectralModel {
  std::string name;
  int dim = 0;
  std::vector<Shell> shells;  // strictly increasing lambda
  double expected_weyl = 0.0;  // analytic lim n*mu_n for the stream

  double mu_of_lambda(std::uint64_t lambda) const;
  std::uint64_t total_multiplicity() const;
  // number of states with eigenvalue <= lambda_max; N'_R = count_within(R^2 - 1)
  std::uint64_t count_within(double lambda_max) const;

  // Flattened characteristic sequence (runs) with a ~L/n descriptor whose
  // epsilon is measured on the enumerated tail.
  CharacteristicSequence to_sequence() const;
};

// #{k in Z^n : sum k_i^2 = lambda} for lambda = 0..lambda_max, by recursive
// enumeration over octants; the table doubles as the multiplicity oracle.
std::vector<std::uint32_t> sum_of_squares_counts(int n, std::uint64_t lambda_max,
                                                 std::uint64_t memory_budget_bytes =
                                                     (1ull << 31));

SpectralModel torus_model(int n, double R_max,
                          std::uint64_t memory_budget_bytes = (1ull << 31));
SpectralModel sphere_model(int n, int L_max);

struct LatticeCount {
  std::uint64_t count = 0;
  double volume_ratio = 0.0;  // N_R / (Omega_n R^n / n)
};
LatticeCount lattice_count(int n, double R);

// Factorial-block counterexample: mu_1 = 1 and mu_k = log(m)/m! on
// (m-1)! < k <= m!.  Boundaries live in log-index coordinates with exact
// integer mirrors while they fit.
CharacteristicSequence varilly_model(int m_max = 170);
double varilly_sigma_at_factorial(int m);
double varilly_gamma_at_factorial(int m);
double varilly_weighted_mu_at_factorial(int m);  // m! * mu_{m!} (= log m)

enum class SyntheticKind {
  harmonic,         // mu_n = 1/n
  scaled_harmonic,  // mu_n = L/n
  geometric,        // mu_n = ratio^n
  perturbed,        // mu_n = L/n * (1 + delta*sin(log n)/log n), n >= 2
  oscillating,      // alternating 2/n and 1/(2n) blocks, clamped monotone
  zero,
};

struct SyntheticParams {
  double L = 1.0;
  double delta = 0.0;
  double ratio = 0.5;
};

CharacteristicSequence synthetic_model(SyntheticKind kind,
                                       SyntheticParams params = {});

// CSV rows: lambda, multiplicity
void write_spectrum_csv(std::ostream& os, const SpectralModel& model);

}  // namespace tracelab
