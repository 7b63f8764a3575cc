#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tracelab/dixmier.hpp"
#include "tracelab/geomspec.hpp"
#include "tracelab/zetalab.hpp"

namespace tracelab {

// Noncommutative-geometry constants.
double omega(int n);            // 2 pi^{n/2} / Gamma(n/2), area of S^{n-1}
double c_constant(int n);       // 2^{n-[n/2]-1} pi^{n/2} n Gamma(n/2)
double lambda_constant(int n);  // 2^{[n/2]+1-n} pi^{-n/2} / (n Gamma(n/2))
double g0_constant(int n);      // (2 pi)^{-n}

// Order -n principal symbol over the flat torus, evaluated at base points
// x in [0,2pi)^n and unit covectors xi in S^{n-1}.
struct PrincipalSymbol {
  int dim = 0;
  int fiber = 1;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd& x, const Eigen::VectorXd& xi)>
      eval;
  // grid-sampled symbols address quadrature nodes directly
  std::function<Eigen::MatrixXcd(std::uint64_t x_index, std::uint64_t xi_index)>
      eval_indexed;
};

struct FourierTerm {
  std::vector<int> k;
  std::complex<double> coeff;
};
using FourierSeries = std::vector<FourierTerm>;

double eval_fourier(const FourierSeries& f, const Eigen::VectorXd& x);

// sigma(x, xi) = ||xi||^{-n}, scalar (identically 1 on the cosphere)
PrincipalSymbol norm_power_symbol(int n);
// sigma(x, xi) = f(x) ||xi||^{-n} 1_{d}
PrincipalSymbol f_times_norm_power(int n, FourierSeries f, int fiber_dim = 1);
PrincipalSymbol scale_symbol(const PrincipalSymbol& s, double factor);

// Cosphere rule: n=1 the two-point set, n=2 equispaced circle rule,
// n=3 Gauss-Legendre in the polar cosine times equispaced azimuth.
// Torus rule: G-point trapezoid per axis (spectral for periodic smooth x).
struct QuadratureGrid {
  int dim = 0;
  int torus_points = 1;  // G per axis
  std::vector<Eigen::VectorXd> sphere_nodes;
  std::vector<double> sphere_weights;

  static QuadratureGrid make(int n, int G, int sphere_order = 32);
  double sphere_weight_sum() const;
  std::uint64_t torus_node_count() const;
  Eigen::VectorXd torus_node(std::uint64_t flat_index) const;
  double torus_weight() const;  // (2pi/G)^n
};

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights);

// (1/(n (2pi)^n)) * integral over S*T^n of tr sigma.
double res_w(const PrincipalSymbol& symbol, const QuadratureGrid& grid,
             int threads = 1);

struct ConnesConfig {
  DixmierConfig dixmier;
  ResidueConfig residue;
  int grid_G = 8;
  int sphere_order = 32;
  int threads = 1;
};

struct ConnesReport {
  double dixmier = 0.0;
  double residue_zeta = 0.0;
  double wodzicki = 0.0;
  double max_pairwise_gap = 0.0;  // relative to the largest magnitude
  DixmierValue dixmier_detail;
  ResidueEstimate zeta_detail;
};

ConnesReport connes_check(const CharacteristicSequence& seq,
                          const PrincipalSymbol& symbol,
                          const ConnesConfig& config = {});
ConnesReport connes_check(const SpectralModel& model, const PrincipalSymbol& symbol,
                          const ConnesConfig& config = {});

struct DiintReport {
  double wodzicki_side = 0.0;
  double integral_side = 0.0;
};

// Res_W(f ||xi||^{-n} 1_{2^{[n/2]}}) against (1/c(n)) * integral of f.
DiintReport diint_check(const FourierSeries& f, int n, const QuadratureGrid& grid);

// CSV of (x-index, xi-index, entries re/im ...) -> sampled symbol on the grid.
PrincipalSymbol symbol_from_csv(const std::string& path, int n, int fiber_dim,
                                const QuadratureGrid& grid);

}  // namespace tracelab
