#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hnse/hermite.hpp"

using namespace hnse;

TEST_CASE("gauss-hermite rule integrates polynomials against the weight") {
  for (int count : {1, 2, 5, 12, 40}) {
    QuadratureRule r = gauss_hermite(count);
    // moments of e^{-x^2}: sqrt(pi), 0, sqrt(pi)/2, 0, 3 sqrt(pi)/4
    const double m[5] = {std::sqrt(pi), 0.0, std::sqrt(pi) / 2, 0.0,
                         0.75 * std::sqrt(pi)};
    for (int pw = 0; pw <= std::min(4, 2 * count - 1); ++pw) {
      double acc = 0.0;
      for (int i = 0; i < count; ++i)
        acc += r.weights[i] * std::pow(r.nodes[i], pw) *
               std::exp(-r.nodes[i] * r.nodes[i]);
      CHECK(std::abs(acc - m[pw]) < 1e-13 * std::max(1.0, m[pw]));
    }
  }
}

TEST_CASE("normalization of the ground state") {
  // ||h_0||_{L^2} = 1 under its own quadrature
  HermiteTable t = build_table(1, 1.0, 0, {8});
  double s = 0.0;
  for (std::size_t q = 0; q < t.x_nodes.size(); ++q)
    s += t.x_weights[q] * t.value(0, q) * t.value(0, q);
  CHECK(std::abs(s - 1.0) < 1e-10);
}

TEST_CASE("scaling relation in lambda") {
  // h_{0,4}(x) = sqrt(2) h_{0,1}(2x)
  HermiteTable t4 = build_table(1, 4.0, 0, {8});
  HermiteTable t1 = build_table(1, 1.0, 0, {8});
  double worst = 0.0;
  for (double x : {-1.2, -0.3, 0.0, 0.7, 1.5})
    worst = std::max(worst, std::abs(t4.eval_1d(0, x) -
                                     std::sqrt(2.0) * t1.eval_1d(0, 2.0 * x)));
  CHECK(worst < 1e-10);
}

TEST_CASE("derivative identity") {
  // d h_{m,la}/dx = (sqrt|la|/2)(sqrt(2m) h_{m-1,la} - sqrt(2m+2) h_{m+1,la}),
  // checked against central finite differences
  const double lam = 2.0;
  const double sl = std::sqrt(lam);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int m : {0, 1, 3, 6}) {
    for (double x : {-1.0, -0.2, 0.4, 1.3}) {
      std::vector<double> hi(m + 2), lo(m + 2), mid(m + 2);
      hermite_values(sl * (x + eps), m + 1, hi.data());
      hermite_values(sl * (x - eps), m + 1, lo.data());
      hermite_values(sl * x, m + 1, mid.data());
      const double fd = std::sqrt(sl) * (hi[m] - lo[m]) / (2 * eps);
      const double lower = m > 0 ? std::sqrt(2.0 * m) * mid[m - 1] : 0.0;
      const double formula =
          std::sqrt(sl) * (sl / 2.0) * (lower - std::sqrt(2.0 * m + 2.0) * mid[m + 1]);
      worst = std::max(worst, std::abs(fd - formula));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("position recurrence") {
  // x h_{m,la} = (1/(2 sqrt|la|))(sqrt(2m) h_{m-1,la} + sqrt(2m+2) h_{m+1,la})
  const double lam = 0.5;
  HermiteTable t = build_table(1, lam, 6, {12});
  double worst = 0.0;
  for (int m = 0; m <= 6; ++m)
    for (std::size_t q = 0; q < t.x_nodes.size(); ++q) {
      const double x = t.x_nodes[q];
      const double lhs = x * t.value(m, q);
      const double lower = m > 0 ? std::sqrt(2.0 * m) * t.value(m - 1, q) : 0.0;
      const double rhs = (lower + std::sqrt(2.0 * m + 2.0) * t.value(m + 1, q)) /
                         (2.0 * std::sqrt(lam));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("table orthonormality across lambda") {
  for (double lam : {-3.0, 0.25, 1.0, 8.0}) {
    HermiteTable t = build_table(1, lam, 5, {12});
    double worst = 0.0;
    const int kmax = t.M + 2;
    for (int a = 0; a <= kmax; ++a)
      for (int b = 0; b <= kmax; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < t.x_nodes.size(); ++q)
          s += t.x_weights[q] * t.value(a, q) * t.value(b, q);
        worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("table rejects a too-coarse quadrature") {
  CHECK_THROWS_AS(build_table(1, 1.0, 8, {4}), accuracy_error);
  CHECK_THROWS_AS(build_table(1, 0.0, 4), error);
}

TEST_CASE("w kernel at the origin is the identity matrix") {
  HermiteTable t = build_table(1, 1.5, 4, {24});
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      const cplx v = w_kernel(t, n, m, 0.0, 0.0);
      CHECK(std::abs(v - (n == m ? cplx(1, 0) : cplx(0, 0))) < 1e-12);
    }
}

TEST_CASE("w kernel conjugation symmetry in lambda") {
  HermiteTable tp = build_table(1, 2.0, 3, {48});
  HermiteTable tm = build_table(1, -2.0, 3, {48});
  double worst = 0.0;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m)
      for (double y : {-0.4, 0.3})
        for (double eta : {-0.5, 0.2}) {
          const cplx a = w_kernel(tm, n, m, y, eta);
          const cplx b = std::conj(w_kernel(tp, n, m, y, eta));
          worst = std::max(worst, std::abs(a - b));
        }
  CHECK(worst < 1e-10);
}

TEST_CASE("w kernel ground state bound") {
  // |W(0,0,1,Y)| = e^{-|Y|^2} <= 1 with equality only at Y = 0
  HermiteTable t = build_table(1, 1.0, 0, {48});
  CHECK(std::abs(w_kernel(t, 0, 0, 0.0, 0.0) - cplx(1, 0)) < 1e-12);
  for (double y : {-1.0, -0.2, 0.5})
    for (double eta : {-0.7, 0.6}) {
      const double v = std::abs(w_kernel(t, 0, 0, y, eta));
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v < 1.0 - 1e-6);
      CHECK(std::abs(v - std::exp(-(y * y + eta * eta))) < 1e-10);
    }
}

TEST_CASE("w kernel window escape error") {
  HermiteTable t = build_table(1, 1.0, 2, {8});
  CHECK_THROWS_AS(w_kernel(t, 0, 0, 25.0, 0.0), accuracy_error);
}

TEST_CASE("w matrix is a compression of a unitary") {
  // operator norm of (W(n,m,la,Y))_{n,m <= M} stays <= 1 + 1e-6
  const int M = 5;
  WEvaluator we(1, M);
  const int P = M + 1;
  std::vector<cplx> block(P * P);
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double lam = rng.uniform(0.3, 4.0);
    const double sl = std::sqrt(lam);
    we.factor_block(sl * rng.uniform(-1.0, 1.0), sl * rng.uniform(-1.0, 1.0),
                    block.data());
    // power iteration on W* W
    std::vector<cplx> v(P), w(P), z(P);
    for (auto& c : v) c = rng.normal_cplx();
    double lam_max = 0.0;
    for (int it = 0; it < 60; ++it) {
      for (int n = 0; n < P; ++n) {
        w[n] = cplx(0, 0);
        for (int m = 0; m < P; ++m) w[n] += block[n * P + m] * v[m];
      }
      for (int m = 0; m < P; ++m) {
        z[m] = cplx(0, 0);
        for (int n = 0; n < P; ++n) z[m] += std::conj(block[n * P + m]) * w[n];
      }
      double nz = 0.0;
      for (const auto& c : z) nz += std::norm(c);
      nz = std::sqrt(nz);
      lam_max = nz;
      for (int m = 0; m < P; ++m) v[m] = z[m] / nz;
    }
    CHECK(std::sqrt(lam_max) <= 1.0 + 1e-6);
  }
}

TEST_CASE("exact evaluator agrees with the table quadrature") {
  // the two independent W paths must produce the same values
  const int M = 4;
  HermiteTable t = build_table(1, 3.0, M, {64});
  WEvaluator we(1, M);
  double worst = 0.0;
  for (int n = 0; n <= M; ++n)
    for (int m = 0; m <= M; ++m)
      for (double y : {-0.5, 0.2})
        for (double eta : {-0.3, 0.6}) {
          double Y[2] = {y, eta};
          int ni = n, mi = m;
          const cplx a = w_kernel(t, n, m, y, eta);
          const cplx b = we.value(&ni, &mi, 3.0, Y);
          worst = std::max(worst, std::abs(a - b));
        }
  CHECK(worst < 1e-10);
}
