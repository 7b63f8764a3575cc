#include "tracelab/wodzicki.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tracelab/parallel.hpp"

namespace tracelab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double omega(int n) {
  if (n < 1) throw ConfigError("omega: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double c_constant(int n) {
  if (n < 1) throw ConfigError("c_constant: n must be >= 1");
  return std::pow(2.0, n - n / 2 - 1) * std::pow(kPi, 0.5 * n) * n *
         std::tgamma(0.5 * n);
}

double lambda_constant(int n) {
  if (n < 1) throw ConfigError("lambda_constant: n must be >= 1");
  return std::pow(2.0, n / 2 + 1 - n) * std::pow(kPi, -0.5 * n) /
         (n * std::tgamma(0.5 * n));
}

double g0_constant(int n) {
  if (n < 1) throw ConfigError("g0_constant: n must be >= 1");
  return std::pow(2.0 * kPi, -static_cast<double>(n));
}

double eval_fourier(const FourierSeries& f, const Eigen::VectorXd& x) {
  std::complex<double> acc = 0.0;
  for (const FourierTerm& t : f) {
    if (static_cast<int>(t.k.size()) != x.size())
      throw ConfigError("fourier series: wavevector dimension mismatch");
    double phase = 0.0;
    for (int i = 0; i < x.size(); ++i) phase += t.k[static_cast<std::size_t>(i)] * x[i];
    acc += t.coeff * std::exp(std::complex<double>(0.0, phase));
  }
  return acc.real();
}

PrincipalSymbol norm_power_symbol(int n) {
  PrincipalSymbol s;
  s.dim = n;
  s.fiber = 1;
  s.eval = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Eigen::MatrixXcd::Identity(1, 1);
  };
  return s;
}

PrincipalSymbol f_times_norm_power(int n, FourierSeries f, int fiber_dim) {
  if (fiber_dim < 1) throw ConfigError("f_times_norm_power: fiber_dim must be >= 1");
  PrincipalSymbol s;
  s.dim = n;
  s.fiber = fiber_dim;
  s.eval = [f = std::move(f), fiber_dim](const Eigen::VectorXd& x,
                                         const Eigen::VectorXd&) {
    return (eval_fourier(f, x) * Eigen::MatrixXcd::Identity(fiber_dim, fiber_dim))
        .eval();
  };
  return s;
}

PrincipalSymbol scale_symbol(const PrincipalSymbol& s, double factor) {
  PrincipalSymbol out = s;
  if (s.eval) {
    auto inner = s.eval;
    out.eval = [inner, factor](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
      return (factor * inner(x, xi)).eval();
    };
  }
  if (s.eval_indexed) {
    auto inner = s.eval_indexed;
    out.eval_indexed = [inner, factor](std::uint64_t ix, std::uint64_t ixi) {
      return (factor * inner(ix, ixi)).eval();
    };
  }
  return out;
}

// ---------------------------------------------------------------------------
// quadrature
// ---------------------------------------------------------------------------

void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (order < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  nodes.resize(static_cast<std::size_t>(order));
  weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    // Chebyshev initial guess, Newton on P_order
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

QuadratureGrid QuadratureGrid::make(int n, int G, int sphere_order) {
  if (n < 1 || n > 3) throw ConfigError("quadrature grid: n must be 1..3");
  if (G < 1) throw ConfigError("quadrature grid: G must be >= 1");
  if (sphere_order < 2) throw ConfigError("quadrature grid: sphere order must be >= 2");

  QuadratureGrid grid;
  grid.dim = n;
  grid.torus_points = G;
  switch (n) {
    case 1: {
      Eigen::VectorXd plus(1), minus(1);
      plus << 1.0;
      minus << -1.0;
      grid.sphere_nodes = {plus, minus};
      grid.sphere_weights = {1.0, 1.0};
      break;
    }
    case 2: {
      const int K = sphere_order;
      for (int j = 0; j < K; ++j) {
        const double th = 2.0 * kPi * j / K;
        Eigen::VectorXd xi(2);
        xi << std::cos(th), std::sin(th);
        grid.sphere_nodes.push_back(xi);
        grid.sphere_weights.push_back(2.0 * kPi / K);
      }
      break;
    }
    case 3: {
      std::vector<double> u, w;
      gauss_legendre(sphere_order, u, w);
      const int K = sphere_order;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double su = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
        for (int j = 0; j < K; ++j) {
          const double ph = 2.0 * kPi * j / K;
          Eigen::VectorXd xi(3);
          xi << su * std::cos(ph), su * std::sin(ph), u[i];
          grid.sphere_nodes.push_back(xi);
          grid.sphere_weights.push_back(w[i] * 2.0 * kPi / K);
        }
      }
      break;
    }
  }
  return grid;
}

double QuadratureGrid::sphere_weight_sum() const {
  KahanSum acc;
  for (const double w : sphere_weights) acc.add(w);
  return acc.value();
}

std::uint64_t QuadratureGrid::torus_node_count() const {
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::uint64_t>(torus_points);
  return total;
}

Eigen::VectorXd QuadratureGrid::torus_node(std::uint64_t flat_index) const {
  Eigen::VectorXd x(dim);
  std::uint64_t rest = flat_index;
  for (int i = 0; i < dim; ++i) {
    const std::uint64_t j = rest % static_cast<std::uint64_t>(torus_points);
    rest /= static_cast<std::uint64_t>(torus_points);
    x[i] = 2.0 * kPi * static_cast<double>(j) / torus_points;
  }
  return x;
}

double QuadratureGrid::torus_weight() const {
  return std::pow(2.0 * kPi / torus_points, dim);
}

double res_w(const PrincipalSymbol& symbol, const QuadratureGrid& grid, int threads) {
  if (symbol.dim != grid.dim) throw ConfigError("res_w: symbol/grid dimension mismatch");
  const std::uint64_t nx = grid.torus_node_count();
  const double wx = grid.torus_weight();

  auto chunk_sum = [&](std::uint64_t lo, std::uint64_t hi) {
    KahanSum acc;
    for (std::uint64_t ix = lo; ix < hi; ++ix) {
      const Eigen::VectorXd x = grid.torus_node(ix);
      for (std::size_t is = 0; is < grid.sphere_nodes.size(); ++is) {
        const Eigen::MatrixXcd m =
            symbol.eval_indexed
                ? symbol.eval_indexed(ix, static_cast<std::uint64_t>(is))
                : symbol.eval(x, grid.sphere_nodes[is]);
        if (m.rows() != symbol.fiber || m.cols() != symbol.fiber)
          throw ConfigError("res_w: symbol returned a matrix of wrong fiber size");
        acc.add(wx * grid.sphere_weights[is] * m.trace().real());
      }
    }
    return acc.value();
  };

  const double total = chunked_reduce<double>(
      nx, 16, 0.0, chunk_sum,
      [](double a, double b) {
        KahanSum acc;
        acc.add(a);
        acc.add(b);
        return acc.value();
      },
      threads);
  return total / (grid.dim * std::pow(2.0 * kPi, grid.dim));
}

ConnesReport connes_check(const SpectralModel& model, const PrincipalSymbol& symbol,
                          const ConnesConfig& config) {
  if (model.dim != symbol.dim)
    throw ConfigError("connes_check: model/symbol dimension mismatch");
  return connes_check(model.to_sequence(), symbol, config);
}

ConnesReport connes_check(const CharacteristicSequence& seq,
                          const PrincipalSymbol& symbol, const ConnesConfig& config) {
  ConnesReport rep;
  rep.dixmier_detail = dixmier_value(seq, config.dixmier);
  rep.dixmier = rep.dixmier_detail.value();
  rep.zeta_detail = residue_at_one(seq, config.residue);
  rep.residue_zeta = rep.zeta_detail.value;
  const QuadratureGrid grid =
      QuadratureGrid::make(symbol.dim, config.grid_G, config.sphere_order);
  rep.wodzicki = res_w(symbol, grid, config.threads);

  const double scale = std::max(
      {std::abs(rep.dixmier), std::abs(rep.residue_zeta), std::abs(rep.wodzicki)});
  const double gap =
      std::max({std::abs(rep.dixmier - rep.residue_zeta),
                std::abs(rep.dixmier - rep.wodzicki),
                std::abs(rep.residue_zeta - rep.wodzicki)});
  rep.max_pairwise_gap = scale > 0.0 ? gap / scale : gap;
  return rep;
}

DiintReport diint_check(const FourierSeries& f, int n, const QuadratureGrid& grid) {
  if (grid.dim != n) throw ConfigError("diint_check: grid dimension mismatch");
  const int fiber = 1 << (n / 2);
  DiintReport rep;
  rep.wodzicki_side = res_w(f_times_norm_power(n, f, fiber), grid);

  KahanSum acc;
  const std::uint64_t nx = grid.torus_node_count();
  for (std::uint64_t ix = 0; ix < nx; ++ix)
    acc.add(eval_fourier(f, grid.torus_node(ix)));
  rep.integral_side = acc.value() * grid.torus_weight() / c_constant(n);
  return rep;
}

PrincipalSymbol symbol_from_csv(const std::string& path, int n, int fiber_dim,
                                const QuadratureGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("symbol_from_csv: cannot open " + path);
  const std::uint64_t nx = grid.torus_node_count();
  const std::uint64_t ns = grid.sphere_nodes.size();
  const std::size_t d = static_cast<std::size_t>(fiber_dim);

  auto table = std::make_shared<std::vector<Eigen::MatrixXcd>>(
      static_cast<std::size_t>(nx * ns), Eigen::MatrixXcd::Zero(fiber_dim, fiber_dim));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 2 + 2 * d * d)
      throw ConfigError("symbol_from_csv: row must hold x-index, xi-index and " +
                        std::to_string(2 * d * d) + " re/im entries");
    const std::uint64_t ix = static_cast<std::uint64_t>(row[0]);
    const std::uint64_t is = static_cast<std::uint64_t>(row[1]);
    if (ix >= nx || is >= ns) throw ConfigError("symbol_from_csv: node index out of range");
    Eigen::MatrixXcd m(fiber_dim, fiber_dim);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const std::size_t base = 2 + 2 * (r * d + c);
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            std::complex<double>(row[base], row[base + 1]);
      }
    (*table)[static_cast<std::size_t>(ix * ns + is)] = std::move(m);
  }

  PrincipalSymbol s;
  s.dim = n;
  s.fiber = fiber_dim;
  s.eval_indexed = [table, ns](std::uint64_t ix, std::uint64_t is) {
    return (*table)[static_cast<std::size_t>(ix * ns + is)];
  };
  return s;
}

}  // namespace tracelab
