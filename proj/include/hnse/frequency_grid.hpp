#pragma once

// Discretization of the frequency set N^d x N^d x R*: a symmetric list of
// nonzero lambda nodes with positive quadrature weights approximating
// integration against |lambda|^d d(lambda), plus the per-coordinate Hermite
// cutoff M for the (n, m) multi-indices.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "hnse/core.hpp"

namespace hnse {

enum class GridMode : std::uint8_t { geometric = 0, uniform_periodic = 1 };

class FrequencyGrid {
public:
  int d = 1;
  int M = 0;
  GridMode mode = GridMode::geometric;
  double s_period = 0.0;  // uniform_periodic only
  int n_s = 0;            // uniform_periodic only: number of s samples
  std::vector<double> lambda_nodes;    // nonzero, negation-symmetric, sorted
  std::vector<double> lambda_weights;  // positive, negation-symmetric

  int q_dimension() const { return 2 * d + 2; }
  int n_lambda() const { return static_cast<int>(lambda_nodes.size()); }

  ModeIndexer modes() const { return ModeIndexer{d, M}; }
  int mode_count() const { return modes().count(); }              // per index family
  int coeff_count() const { return mode_count() * mode_count() * n_lambda(); }

  double lambda_min_abs() const {
    double v = std::abs(lambda_nodes.front());
    for (double x : lambda_nodes) v = std::min(v, std::abs(x));
    return v;
  }
  double lambda_max_abs() const {
    double v = 0.0;
    for (double x : lambda_nodes) v = std::max(v, std::abs(x));
    return v;
  }

  // Sub-Laplacian eigenvalue 4|lambda|(2|idx| + d); idx is |m| for the
  // left-invariant operator, |n| for the right-invariant one.
  double eigenvalue(double lambda, int abs_idx) const {
    return 4.0 * std::abs(lambda) * (2.0 * abs_idx + d);
  }

  bool same_as(const FrequencyGrid& o) const {
    return d == o.d && M == o.M && mode == o.mode && n_s == o.n_s &&
           s_period == o.s_period && lambda_nodes == o.lambda_nodes;
  }
};

using GridPtr = std::shared_ptr<const FrequencyGrid>;

// Positive nodes lambda0 * r^j, j = 0..count-1, mirrored to negative lambda;
// weights from the midpoint rule on the log-lambda axis times |lambda|^d.
inline GridPtr make_geometric_grid(int d, int M, double lambda0, double ratio,
                                   int count) {
  require(d >= 1, "make_grid: d must be >= 1");
  require(M >= 0, "make_grid: M must be >= 0");
  require(lambda0 > 0.0, "make_grid: lambda0 must be > 0");
  require(ratio > 1.0, "make_grid: ratio must be > 1");
  require(count >= 1, "make_grid: count must be >= 1");

  auto g = std::make_shared<FrequencyGrid>();
  g->d = d;
  g->M = M;
  g->mode = GridMode::geometric;
  const double logr = std::log(ratio);
  std::vector<double> pos(count);
  for (int j = 0; j < count; ++j) pos[j] = lambda0 * std::pow(ratio, j);
  for (int j = count - 1; j >= 0; --j) g->lambda_nodes.push_back(-pos[j]);
  for (int j = 0; j < count; ++j) g->lambda_nodes.push_back(pos[j]);
  for (double x : g->lambda_nodes)
    g->lambda_weights.push_back(std::pow(std::abs(x), d) * std::abs(x) * logr);
  return g;
}

// DFT frequencies of an n_s-point periodic s grid: lambda_k = 2*pi*k/s_period
// for k != 0, |k| <= n_s/2. Weights (2*pi/s_period) * |lambda|^d.
inline GridPtr make_uniform_grid(int d, int M, double s_period, int n_s) {
  require(d >= 1, "make_grid: d must be >= 1");
  require(M >= 0, "make_grid: M must be >= 0");
  require(s_period > 0.0, "make_grid: s_period must be > 0");
  require(n_s >= 4 && n_s % 2 == 0, "make_grid: n_s must be even and >= 4");

  auto g = std::make_shared<FrequencyGrid>();
  g->d = d;
  g->M = M;
  g->mode = GridMode::uniform_periodic;
  g->s_period = s_period;
  g->n_s = n_s;
  const double dl = 2.0 * pi / s_period;
  for (int k = -n_s / 2; k <= n_s / 2; ++k) {
    if (k == 0) continue;
    g->lambda_nodes.push_back(dl * k);
  }
  for (double x : g->lambda_nodes)
    g->lambda_weights.push_back(dl * std::pow(std::abs(x), d));
  return g;
}

// Index of a node value, or -1 when absent (exact comparison against the
// stored node list up to a tight relative tolerance).
inline int lambda_index_of(const FrequencyGrid& g, double lambda) {
  for (int i = 0; i < g.n_lambda(); ++i) {
    double ref = g.lambda_nodes[i];
    if (std::abs(ref - lambda) <= 1e-12 * std::max(1.0, std::abs(ref)))
      return i;
  }
  return -1;
}

// Plancherel constant pi^{d+1} / 2^{d-1}: frequency pairing = constant times
// the physical L^2 pairing.
inline double plancherel_constant(int d) {
  return std::pow(pi, d + 1) / std::pow(2.0, d - 1);
}

}  // namespace hnse
