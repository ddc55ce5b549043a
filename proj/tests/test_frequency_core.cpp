#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hnse/fields_random.hpp"
#include "hnse/operators.hpp"
#include "hnse/spectral_field.hpp"

using namespace hnse;

TEST_CASE("geometric grid construction") {
  auto g = make_geometric_grid(1, 4, 0.25, 2.0, 4);
  REQUIRE(g->n_lambda() == 8);
  const std::vector<double> expect = {-2, -1, -0.5, -0.25, 0.25, 0.5, 1, 2};
  for (int i = 0; i < 8; ++i) CHECK(g->lambda_nodes[i] == doctest::Approx(expect[i]));
  // midpoint rule on the log axis times |lambda|^d
  for (int i = 0; i < 8; ++i) {
    const double al = std::abs(g->lambda_nodes[i]);
    CHECK(g->lambda_weights[i] == doctest::Approx(al * al * std::log(2.0)));
    CHECK(g->lambda_weights[i] > 0.0);
  }
  CHECK(g->q_dimension() == 4);
}

TEST_CASE("minimal geometric grid") {
  auto g = make_geometric_grid(1, 0, 1.0, 2.0, 1);
  REQUIRE(g->n_lambda() == 2);
  CHECK(g->lambda_nodes[0] == doctest::Approx(-1.0));
  CHECK(g->lambda_nodes[1] == doctest::Approx(1.0));
}

TEST_CASE("uniform periodic grid construction") {
  auto g = make_uniform_grid(1, 2, 2.0 * pi, 8);
  REQUIRE(g->n_lambda() == 8);
  const std::vector<double> expect = {-4, -3, -2, -1, 1, 2, 3, 4};
  for (int i = 0; i < 8; ++i) CHECK(g->lambda_nodes[i] == doctest::Approx(expect[i]));
  const int idx = lambda_index_of(*g, 2.0);
  REQUIRE(idx >= 0);
  CHECK(g->lambda_weights[idx] == doctest::Approx(2.0));  // (2pi/P)|la|^d = 1 * 2
}

TEST_CASE("grid constructor rejections") {
  CHECK_THROWS_AS(make_geometric_grid(1, 4, -0.5, 2.0, 4), error);
  CHECK_THROWS_AS(make_geometric_grid(1, 4, 0.5, 1.0, 4), error);
  CHECK_THROWS_AS(make_geometric_grid(1, -1, 0.5, 2.0, 4), error);
  CHECK_THROWS_AS(make_uniform_grid(1, 4, 2.0 * pi, 7), error);
  CHECK_THROWS_AS(make_uniform_grid(1, 4, -1.0, 8), error);
}

TEST_CASE("node symmetry and homogeneous dimension") {
  for (int d : {1, 2, 3}) {
    auto g = make_geometric_grid(d, 2, 0.5, 3.0, 3);
    CHECK(g->q_dimension() == 2 * d + 2);
    const int nl = g->n_lambda();
    for (int i = 0; i < nl; ++i) {
      CHECK(g->lambda_nodes[i] == doctest::Approx(-g->lambda_nodes[nl - 1 - i]));
      CHECK(g->lambda_weights[i] == doctest::Approx(g->lambda_weights[nl - 1 - i]));
      CHECK(g->lambda_nodes[i] != 0.0);
    }
  }
}

TEST_CASE("inner product basics") {
  auto g = make_uniform_grid(1, 2, 2.0 * pi, 8);
  SpectralField f(g);
  const int k = lambda_index_of(*g, 2.0);
  f.at(0, 0, k) = cplx(1, 0);
  CHECK(inner_product(f, f).real() == doctest::Approx(2.0));  // single term, w = 2

  SpectralField z(g);
  CHECK(inner_product(z, z) == cplx(0, 0));
  CHECK(inner_product(z, f) == cplx(0, 0));

  // Hermitian, positive-definite
  Rng rng(5);
  SpectralField a = random_interior_field(g, rng);
  SpectralField b = random_interior_field(g, rng);
  CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-12);
  CHECK(inner_product(a, a).real() > 0.0);
  CHECK(std::abs(inner_product(a, a).imag()) < 1e-14 * inner_product(a, a).real());
}

TEST_CASE("inner product rejects mismatched grids") {
  auto g1 = make_uniform_grid(1, 2, 2.0 * pi, 8);
  auto g2 = make_uniform_grid(1, 3, 2.0 * pi, 8);
  CHECK_THROWS_AS(inner_product(SpectralField(g1), SpectralField(g2)), error);
}

TEST_CASE("sobolev norms on single modes") {
  auto g = make_geometric_grid(1, 4, 0.5, 2.0, 3);  // nodes +-{0.5,1,2}
  const double logr = std::log(2.0);

  SpectralField f(g);
  int k1 = lambda_index_of(*g, 1.0);
  f.at(0, 0, k1) = cplx(1, 0);
  const double w1 = 1.0 * logr;  // |1|^2 log r
  CHECK(sobolev_norm_sq(f, NormKind::left_hom, 1.0) == doctest::Approx(4.0 * w1));
  CHECK(sobolev_norm_sq(f, NormKind::left_hom, 0.0) == doctest::Approx(w1));
  CHECK(sobolev_norm_sq(f, NormKind::right_hom, 0.0) == doctest::Approx(w1));
  CHECK(sobolev_norm_sq(f, NormKind::left_inhom, 1.0) == doctest::Approx(5.0 * w1));

  // eigenvalue 4 * 0.5 * (2*3 + 1) = 14 at (n,m,lambda) = (0,3,0.5)
  SpectralField h(g);
  int k05 = lambda_index_of(*g, 0.5);
  h.at(0, 3, k05) = cplx(1, 0);
  const double w05 = 0.25 * logr;
  CHECK(sobolev_norm_sq(h, NormKind::left_hom, 1.0) == doctest::Approx(14.0 * w05));
  CHECK(sobolev_norm_sq(h, NormKind::right_hom, 1.0) == doctest::Approx(2.0 * w05));
  CHECK(sobolev_norm_sq(h, NormKind::mixed, 1.0, 1.0) ==
        doctest::Approx(15.0 * 2.0 * w05));
}

TEST_CASE("sobolev norm monotone in the exponent above symbol one") {
  auto g = make_geometric_grid(1, 3, 0.5, 2.0, 3);  // min eigenvalue 4*0.5*1 = 2
  Rng rng(7);
  SpectralField f = random_interior_field(g, rng);
  double prev = sobolev_norm_sq(f, NormKind::left_hom, 0.0);
  for (double l : {0.5, 1.0, 1.5, 2.0}) {
    const double cur = sobolev_norm_sq(f, NormKind::left_hom, l);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("negative exponents are allowed") {
  auto g = make_geometric_grid(1, 2, 0.5, 2.0, 3);
  Rng rng(8);
  SpectralField f = random_interior_field(g, rng);
  const double v = sobolev_norm_sq(f, NormKind::left_hom, -1.0);
  CHECK(v > 0.0);
  CHECK(std::isfinite(v));
}

TEST_CASE("dilate identity and inverse") {
  auto g = make_geometric_grid(1, 3, 0.25, 2.0, 6);
  Rng rng(9);
  SpectralField f = random_interior_field(g, rng, {1, 2, 0.0, false});
  CHECK(norm_sq(dilate(f, 0) - f) == 0.0);
  CHECK(std::sqrt(norm_sq(dilate(dilate(f, 2), -2) - f)) < 1e-14 * std::sqrt(norm_sq(f)));
}

TEST_CASE("dilate norm scaling") {
  auto g = make_geometric_grid(1, 4, 0.25, 2.0, 8);
  const int Q = g->q_dimension();
  Rng rng(10);
  SpectralField f = random_interior_field(g, rng, {1, 3, 0.0, false});
  for (int p : {-3, -1, 1, 2, 3}) {
    const double mu = std::pow(2.0, 0.5 * p);
    SpectralField df = dilate(f, p);
    for (double l : {0.0, 1.0, 2.0}) {
      const double lhs = sobolev_norm_sq(df, NormKind::left_hom, l);
      const double rhs = std::pow(mu, 2 * l - Q) * sobolev_norm_sq(f, NormKind::left_hom, l);
      CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
    }
  }
}

TEST_CASE("dilate single mode bookkeeping") {
  // mass at lambda = 1 moved to the node at lambda * r^p with scale mu^{-Q}
  auto g = make_geometric_grid(1, 2, 0.25, 2.0, 6);
  SpectralField f(g);
  const int k1 = lambda_index_of(*g, 1.0);
  f.at(1, 1, k1) = cplx(3, -1);
  const int p = 2;
  const double mu = std::pow(2.0, 0.5 * p);  // mu^2 = r^p = 4
  SpectralField df = dilate(f, p);
  // output node at lambda such that lambda / mu^2 = 1, i.e. lambda = 4
  const int k4 = lambda_index_of(*g, 4.0);
  REQUIRE(k4 >= 0);
  CHECK(std::abs(df.at(1, 1, k4) - std::pow(mu, -4.0) * cplx(3, -1)) < 1e-15);
  CHECK(std::abs(df.at(1, 1, k1)) == 0.0);
}

TEST_CASE("dilate rejects out-of-band shifts") {
  auto g = make_geometric_grid(1, 2, 0.25, 2.0, 4);
  SpectralField f(g);
  f.at(0, 0, lambda_index_of(*g, 2.0)) = cplx(1, 0);  // outermost ring
  CHECK_THROWS_AS(dilate(f, 1), error);
  CHECK_THROWS_AS(dilate(f, -4), error);
  auto gu = make_uniform_grid(1, 2, 2.0 * pi, 8);
  CHECK_THROWS_AS(dilate(SpectralField(gu), 1), error);
}

TEST_CASE("interior band detection") {
  auto g = make_uniform_grid(1, 4, 2.0 * pi, 8);
  SpectralField f(g);
  f.at(2, 2, 4) = cplx(1, 0);
  CHECK(f.interior(2));
  f.at(4, 0, 4) = cplx(1, 0);
  CHECK(!f.interior(2));
  CHECK(f.interior(0));
}

TEST_CASE("horizontal field shares one grid") {
  auto g = make_uniform_grid(2, 2, 2.0 * pi, 8);
  HorizontalField u(g);
  CHECK(u.n_components() == 4);
  auto g2 = make_uniform_grid(2, 3, 2.0 * pi, 8);
  std::vector<SpectralField> mixed = {SpectralField(g), SpectralField(g),
                                      SpectralField(g), SpectralField(g2)};
  CHECK_THROWS_AS(HorizontalField(std::move(mixed)), error);
}
