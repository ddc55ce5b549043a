#pragma once

// Rescaled Hermite functions h_{n,lambda} = |lambda|^{d/4} h_n(|lambda|^{1/2} x),
// Gauss-Hermite quadrature, and the matrix-coefficient kernel
//   W(n,m,lambda,Y) = int e^{-2i lambda <eta, x-y>} h_{m,lambda}(x-2y) h_{n,lambda}(x) dx.
//
// Normalization: h_0(x) = pi^{-1/4} e^{-x^2/2} per 1-D factor, so that every
// h_n has unit L^2 norm (the Plancherel identity requires this).

#include <cmath>
#include <complex>
#include <vector>

#include "hnse/core.hpp"

namespace hnse {

// --- 1-D evaluation ---------------------------------------------------------

// Fill vals[0..nmax] with h_0(x)..h_nmax(x) via the stable three-term
// recurrence h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
inline void hermite_values(double x, int nmax, double* vals) {
  const double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  vals[0] = h0;
  if (nmax == 0) return;
  vals[1] = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < nmax; ++k)
    vals[k + 1] = std::sqrt(2.0 / (k + 1)) * x * vals[k] -
                  std::sqrt(static_cast<double>(k) / (k + 1)) * vals[k - 1];
}

// Same recurrence for the polynomial part (h_n with the Gaussian removed),
// valid at complex arguments.
template <typename Scalar>
inline void hermite_poly_values(Scalar z, int nmax, Scalar* vals) {
  vals[0] = Scalar(std::pow(pi, -0.25));
  if (nmax == 0) return;
  vals[1] = std::sqrt(2.0) * z * vals[0];
  for (int k = 1; k < nmax; ++k)
    vals[k + 1] = std::sqrt(2.0 / (k + 1)) * z * vals[k] -
                  std::sqrt(static_cast<double>(k) / (k + 1)) * vals[k - 1];
}

inline double hermite_value(double x, int n) {
  std::vector<double> v(n + 1);
  hermite_values(x, n, v.data());
  return v[n];
}

// d h_{m}/dx = (1/2)(sqrt(2m) h_{m-1} - sqrt(2m+2) h_{m+1})
inline double hermite_derivative(double x, int m) {
  std::vector<double> v(m + 2);
  hermite_values(x, m + 1, v.data());
  const double lo = m > 0 ? std::sqrt(2.0 * m) * v[m - 1] : 0.0;
  return 0.5 * (lo - std::sqrt(2.0 * m + 2.0) * v[m + 1]);
}

// --- Gauss-Hermite rule -----------------------------------------------------
//
// Nodes are the eigenvalues of the Jacobi matrix (off-diagonal sqrt(k/2));
// modified weights w_i = 1/(K * psi_{K-1}(x_i)^2) absorb e^{x^2}, so
//   int f(x) dx ~= sum_i w_i f(x_i)
// is exact for f = p(x) e^{-x^2} with deg p <= 2K-1.

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
// shift; diag/off are destroyed). Standard algorithm, eigenvalues only.
inline void tridiag_eigenvalues(std::vector<double>& diag,
                                std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  off.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= 1e-300 + 1e-16 * dd) break;
      }
      if (m != l) {
        require(++iter <= 60, "tridiag_eigenvalues: no convergence");
        double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = std::hypot(g, 1.0);
        g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * off[i];
          double b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            underflow = (i >= l);
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(diag.begin(), diag.end());
}

}  // namespace detail

inline QuadratureRule gauss_hermite(int count) {
  require(count >= 1, "gauss_hermite: count must be >= 1");
  std::vector<double> diag(count, 0.0), off(count - 1);
  for (int k = 1; k < count; ++k) off[k - 1] = std::sqrt(0.5 * k);
  detail::tridiag_eigenvalues(diag, off);

  QuadratureRule rule;
  rule.nodes = diag;
  rule.weights.resize(count);
  std::vector<double> vals(count + 1);
  for (int i = 0; i < count; ++i) {
    // one Newton polish on psi_count, then the weight formula
    for (int it = 0; it < 2; ++it) {
      hermite_values(rule.nodes[i], count, vals.data());
      double dpsi = std::sqrt(2.0 * count) * vals[count - 1] -
                    rule.nodes[i] * vals[count];
      if (dpsi != 0.0) rule.nodes[i] -= vals[count] / dpsi;
    }
    hermite_values(rule.nodes[i], count - 1 > 0 ? count - 1 : 1, vals.data());
    const double psi = vals[count - 1];
    rule.weights[i] = 1.0 / (count * psi * psi);
  }
  return rule;
}

// Rule for integrands of the form p(x) e^{-scale*x^2}: substitute x -> x/sqrt(scale).
inline QuadratureRule gauss_hermite_scaled(int count, double scale) {
  require(scale > 0.0, "gauss_hermite_scaled: scale must be > 0");
  QuadratureRule rule = gauss_hermite(count);
  const double s = std::sqrt(scale);
  for (auto& x : rule.nodes) x /= s;
  for (auto& w : rule.weights) w /= s;
  return rule;
}

// --- per-lambda table -------------------------------------------------------

struct QuadratureSpec {
  int count = 0;  // 1-D node count; 0 picks M + 3 (orthonormality-exact)
};

// 1-D node/weight/value table for h_{n,lambda}, n <= M+2, shared per dimension.
class HermiteTable {
public:
  int d = 1;
  int M = 0;
  double lambda = 1.0;
  std::vector<double> x_nodes;    // 1-D nodes
  std::vector<double> x_weights;  // 1-D weights (Lebesgue measure)
  // values[k][q] = h_{k,lambda-1D}(x_q), k <= M+2
  std::vector<std::vector<double>> values;

  double value(int k, int q) const { return values[k][q]; }

  // h_{n,lambda}(x) for a 1-D factor at an arbitrary point
  double eval_1d(int k, double x) const {
    const double sl = std::sqrt(std::abs(lambda));
    std::vector<double> v(k + 1);
    hermite_values(sl * x, k, v.data());
    return std::sqrt(sl) * v[k];
  }
};

inline HermiteTable build_table(int d, double lambda, int M,
                                QuadratureSpec quad = {}) {
  require(lambda != 0.0, "build_table: lambda must be nonzero");
  require(M >= 0, "build_table: M must be >= 0");
  const int kmax = M + 2;
  int count = quad.count > 0 ? quad.count : M + 3;

  HermiteTable t;
  t.d = d;
  t.M = M;
  t.lambda = lambda;
  const double al = std::abs(lambda);
  QuadratureRule rule = gauss_hermite_scaled(count, al);
  t.x_nodes = rule.nodes;
  t.x_weights = rule.weights;

  const double sl = std::sqrt(al);
  t.values.assign(kmax + 1, std::vector<double>(count));
  std::vector<double> v(kmax + 1);
  for (int q = 0; q < count; ++q) {
    hermite_values(sl * t.x_nodes[q], kmax, v.data());
    for (int k = 0; k <= kmax; ++k) t.values[k][q] = std::sqrt(sl) * v[k];
  }

  // discrete orthonormality contract
  double worst = 0.0;
  for (int a = 0; a <= kmax; ++a)
    for (int b = a; b <= kmax; ++b) {
      double s = 0.0;
      for (int q = 0; q < count; ++q)
        s += t.x_weights[q] * t.values[a][q] * t.values[b][q];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  if (worst >= 1e-8)
    throw accuracy_error("build_table: quadrature too coarse, orthonormality residual " +
                         std::to_string(worst));
  return t;
}

// --- W kernel ----------------------------------------------------------------

// Direct quadrature on the table's nodes. Y = (y_1..y_d, eta_1..eta_d).
// The integrand factors over dimensions; per factor the shifted function
// h_{m}(x - 2 y_j) must stay inside the node window.
inline cplx w_kernel(const HermiteTable& t, const int* n, const int* m,
                     const double* Y) {
  const int d = t.d;
  const double lam = t.lambda;
  const int count = static_cast<int>(t.x_nodes.size());
  const double window = t.x_nodes.back();
  const double spread = std::sqrt((2.0 * t.M + 3.0) / std::abs(lam));

  cplx out(1, 0);
  std::vector<double> hm(count);
  for (int j = 0; j < d; ++j) {
    const double y = Y[j];
    const double eta = Y[j + d];
    require(n[j] <= t.M && m[j] <= t.M, "w_kernel: index above cutoff");
    if (std::abs(2.0 * y) + spread > window + 1e-12)
      throw accuracy_error("w_kernel: integrand support escapes the quadrature window");
    for (int q = 0; q < count; ++q)
      hm[q] = t.eval_1d(m[j], t.x_nodes[q] - 2.0 * y);
    cplx acc(0, 0);
    for (int q = 0; q < count; ++q) {
      const double phase = -2.0 * lam * eta * (t.x_nodes[q] - y);
      acc += t.x_weights[q] * cplx(std::cos(phase), std::sin(phase)) * hm[q] *
             t.value(n[j], q);
    }
    out *= acc;
  }
  return out;
}

inline cplx w_kernel(const HermiteTable& t, int n, int m, double y, double eta) {
  require(t.d == 1, "w_kernel scalar overload is 1-D");
  double Y[2] = {y, eta};
  return w_kernel(t, &n, &m, Y);
}

// Exact evaluation of the same kernel through the Gaussian-extracted form:
// with yt = sqrt|lambda| y, et = sqrt|lambda| eta, the 1-D factor is
//   e^{-yt^2-et^2} * sum_q v_q Hp_m(t_q - yt - i et) Hp_n(t_q + yt - i et),
// where Hp_k is the polynomial part of h_k and (t_q, v_q) is the weight-e^{-t^2}
// rule. The integrand is then a polynomial, so count = M+2 nodes make the sum
// exact; used by the transform kernels where W is needed at every grid point.
class WEvaluator {
public:
  WEvaluator(int d, int M) : d_(d), M_(M), rule_(gauss_hermite(M + 2)) {}

  int d() const { return d_; }
  int M() const { return M_; }

  // 1-D factor at scaled coordinates (yt, et), lambda > 0 assumed;
  // out[(n, m)] row-major (M+1)^2 block.
  void factor_block(double yt, double et, cplx* out) const {
    const int K = rule_.size();
    const int P = M_ + 1;
    const double gauss = std::exp(-yt * yt - et * et);
    if (gauss == 0.0) {
      for (int i = 0; i < P * P; ++i) out[i] = cplx(0, 0);
      return;
    }
    // polynomial values at t_q -+ yt - i et
    std::vector<cplx> a(static_cast<std::size_t>(K) * P);  // arg t - yt - i et
    std::vector<cplx> b(static_cast<std::size_t>(K) * P);  // arg t + yt - i et
    std::vector<cplx> tmp(P);
    for (int q = 0; q < K; ++q) {
      hermite_poly_values(cplx(rule_.nodes[q] - yt, -et), M_, tmp.data());
      for (int k = 0; k < P; ++k) a[static_cast<std::size_t>(q) * P + k] = tmp[k];
      hermite_poly_values(cplx(rule_.nodes[q] + yt, -et), M_, tmp.data());
      for (int k = 0; k < P; ++k) b[static_cast<std::size_t>(q) * P + k] = tmp[k];
    }
    for (int n = 0; n < P; ++n)
      for (int m = 0; m < P; ++m) {
        cplx acc(0, 0);
        for (int q = 0; q < K; ++q)
          acc += rule_.weights[q] * std::exp(-rule_.nodes[q] * rule_.nodes[q]) *
                 a[static_cast<std::size_t>(q) * P + m] *
                 b[static_cast<std::size_t>(q) * P + n];
        out[n * P + m] = gauss * acc;
      }
  }

  // Full W(n,m,lambda,Y) for multi-indices; conjugated for lambda < 0.
  cplx value(const int* n, const int* m, double lambda, const double* Y) const {
    const double sl = std::sqrt(std::abs(lambda));
    const int P = M_ + 1;
    std::vector<cplx> block(static_cast<std::size_t>(P) * P);
    cplx out(1, 0);
    for (int j = 0; j < d_; ++j) {
      factor_block(sl * Y[j], sl * Y[j + d_], block.data());
      out *= block[n[j] * P + m[j]];
    }
    return lambda < 0 ? std::conj(out) : out;
  }

private:
  int d_;
  int M_;
  QuadratureRule rule_;  // weight e^{-t^2}; weights exclude the Gaussian
};

}  // namespace hnse
