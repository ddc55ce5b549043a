#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hnse/fields_random.hpp"
#include "hnse/operators.hpp"

using namespace hnse;

namespace {

GridPtr uniform_grid() { return make_uniform_grid(1, 8, 2.0 * pi, 16); }

double rel_diff(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(norm_sq(a - b)) /
         std::max(1e-300, std::sqrt(std::max(norm_sq(a), norm_sq(b))));
}

}  // namespace

TEST_CASE("diagonal symbols on single modes") {
  auto g = uniform_grid();
  const int k1 = lambda_index_of(*g, 1.0);
  const int k2 = lambda_index_of(*g, 2.0);

  SpectralField f(g);
  f.at(0, 0, k1) = cplx(1, 0);
  SpectralField lap = apply_symbol(f, {SymbolKind::left_sublap_pow, 1.0, 0, 0});
  CHECK(std::abs(lap.at(0, 0, k1) - cplx(4, 0)) < 1e-14);  // 4|la|(2|m|+d) = 4

  SpectralField h(g);
  h.at(0, 0, k2) = cplx(1, 0);
  SpectralField e = exp_abs_ds(h, 0.25);
  CHECK(std::abs(e.at(0, 0, k2) - cplx(std::exp(0.5), 0)) < 1e-14);

  // |Ds|^0 is the identity
  Rng rng(3);
  SpectralField r = random_interior_field(g, rng);
  CHECK(norm_sq(apply_symbol(r, {SymbolKind::abs_ds_pow, 0.0, 0, 0}) - r) == 0.0);

  SpectralField ds_f = d_s(h);
  CHECK(std::abs(ds_f.at(0, 0, k2) - cplx(0, 2)) < 1e-14);
}

TEST_CASE("exp overflow guard") {
  auto g = uniform_grid();  // max |lambda| = 8
  SpectralField f(g);
  CHECK_THROWS_AS(exp_abs_ds(f, 100.0), error);
  CHECK_NOTHROW(exp_abs_ds(f, 80.0));
}

TEST_CASE("band indicator") {
  auto g = uniform_grid();
  SpectralField f(g);
  const int k1 = lambda_index_of(*g, 1.0);
  f.at(0, 0, k1) = cplx(1, 0);  // eigenvalue 4
  f.at(0, 2, k1) = cplx(1, 0);  // eigenvalue 20
  SpectralField b = apply_symbol(f, {SymbolKind::band_indicator, 0, 2.0, 10.0});
  CHECK(b.at(0, 0, k1) == cplx(1, 0));
  CHECK(b.at(0, 2, k1) == cplx(0, 0));
}

TEST_CASE("right raising ladder on a single mode") {
  // unit mass at (n,m,la) = (2,0,1):
  // output sqrt(2|la|)[sqrt(n+1) F(n+1) - sqrt(n) F(n-1)] reads the source,
  // landing at n = 1 with +2 and n = 3 with -sqrt(6)
  auto g = uniform_grid();
  const int k1 = lambda_index_of(*g, 1.0);
  SpectralField f(g);
  f.at(2, 0, k1) = cplx(1, 0);
  SpectralField r = apply_ladder(f, {Ladder::right_x, 1});
  CHECK(std::abs(r.at(1, 0, k1) - cplx(2, 0)) < 1e-14);
  CHECK(std::abs(r.at(3, 0, k1) - cplx(-std::sqrt(6.0), 0)) < 1e-14);
  double off = 0.0;
  for (int n = 0; n <= 8; ++n)
    for (int m = 0; m <= 8; ++m)
      for (int k = 0; k < g->n_lambda(); ++k) {
        if (m == 0 && k == k1 && (n == 1 || n == 3)) continue;
        off += std::abs(r.at(n, m, k));
      }
  CHECK(off == 0.0);
}

TEST_CASE("ladders annihilate the zero field") {
  auto g = uniform_grid();
  SpectralField z(g);
  for (auto which : {Ladder::left_x, Ladder::left_xi, Ladder::right_x, Ladder::right_xi})
    CHECK(norm_sq(apply_ladder(z, {which, 1})) == 0.0);
  CHECK_THROWS_AS(apply_ladder(z, {Ladder::left_x, 2}), error);  // j > d
}

TEST_CASE("commutator identities on random interior fields") {
  auto g = uniform_grid();
  Rng rng(17);
  const LinearOp X1 = ladder_op({Ladder::left_x, 1});
  const LinearOp Xi1 = ladder_op({Ladder::left_xi, 1});
  const LinearOp Xr1 = ladder_op({Ladder::right_x, 1});
  const LinearOp Xir1 = ladder_op({Ladder::right_xi, 1});
  for (int t = 0; t < 25; ++t) {
    SpectralField f = random_interior_field(g, rng, {2, 0, 0.0, false});
    const double scale = 4.0 * std::sqrt(norm_sq(d_s(f)));
    CHECK(std::sqrt(norm_sq(commutator(f, X1, Xi1) + 4.0 * d_s(f))) < 1e-12 * scale);
    const double fs = std::sqrt(sobolev_norm_sq(f, NormKind::left_hom, 1.0));
    CHECK(std::sqrt(norm_sq(commutator(f, X1, Xr1))) < 1e-12 * fs);
    CHECK(std::sqrt(norm_sq(commutator(f, X1, Xir1))) < 1e-12 * fs);
    CHECK(std::sqrt(norm_sq(commutator(f, Xi1, Xr1))) < 1e-12 * fs);
    CHECK(norm_sq(commutator(f, X1, X1)) == 0.0);
  }
}

TEST_CASE("commutators in two dimensions") {
  auto g = make_uniform_grid(2, 3, 2.0 * pi, 8);
  Rng rng(19);
  const LinearOp X1 = ladder_op({Ladder::left_x, 1});
  const LinearOp X2 = ladder_op({Ladder::left_x, 2});
  const LinearOp Xi2 = ladder_op({Ladder::left_xi, 2});
  for (int t = 0; t < 5; ++t) {
    SpectralField f = random_interior_field(g, rng, {1, 0, 0.0, false});
    const double fs = std::sqrt(sobolev_norm_sq(f, NormKind::left_hom, 1.0));
    CHECK(std::sqrt(norm_sq(commutator(f, X1, X2))) < 1e-12 * fs);
    CHECK(std::sqrt(norm_sq(commutator(f, X1, Xi2))) < 1e-12 * fs);
    const double scale = 4.0 * std::sqrt(norm_sq(d_s(f))) + 1e-300;
    CHECK(std::sqrt(norm_sq(commutator(f, X2, Xi2) + 4.0 * d_s(f))) < 1e-12 * scale);
  }
}

TEST_CASE("divergence of gradient is the sub-Laplacian") {
  auto g = uniform_grid();
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    SpectralField f = random_interior_field(g, rng, {2, 0, 0.0, false});
    SpectralField a = -1.0 * divergence_h(gradient_h(f));
    SpectralField b = apply_symbol(f, {SymbolKind::left_sublap_pow, 1.0, 0, 0});
    CHECK(rel_diff(a, b) < 1e-12);
  }
  // eigen-action on a single mode: div(grad) = -4 at (0,0,1)
  SpectralField f(g);
  const int k1 = lambda_index_of(*g, 1.0);
  f.at(0, 0, k1) = cplx(1, 0);
  SpectralField dg = divergence_h(gradient_h(f));
  CHECK(std::abs(dg.at(0, 0, k1) - cplx(-4, 0)) < 1e-14);
  CHECK(norm_sq(gradient_h(SpectralField(g))) == 0.0);
}

TEST_CASE("symbol powers invert exactly on the grid") {
  auto g = uniform_grid();
  Rng rng(29);
  SpectralField f = random_interior_field(g, rng);
  for (double l : {0.5, 1.0, 2.0}) {
    SpectralField a = apply_symbol(apply_symbol(f, {SymbolKind::left_sublap_pow, l, 0, 0}),
                                   {SymbolKind::left_sublap_pow, -l, 0, 0});
    CHECK(rel_diff(a, f) < 1e-13);
  }
}

TEST_CASE("spectral gap inequality") {
  auto g = uniform_grid();
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    SpectralField f = random_interior_field(g, rng);
    for (double l : {0.5, 1.0, 2.0}) {
      const double lhs =
          norm_sq(apply_symbol(f, {SymbolKind::abs_ds_pow, l, 0, 0}));
      const double bl = sobolev_norm_sq(f, NormKind::left_hom, 2 * l) / std::pow(4.0, 2 * l);
      const double br = sobolev_norm_sq(f, NormKind::right_hom, 2 * l) / std::pow(4.0, 2 * l);
      CHECK(lhs <= bl * (1 + 1e-12));
      CHECK(lhs <= br * (1 + 1e-12));
    }
  }
  // equality when all mass is at m = 0
  SpectralField f(g);
  f.at(4, 0, lambda_index_of(*g, 3.0)) = cplx(1, 1);
  const double lhs = norm_sq(apply_symbol(f, {SymbolKind::abs_ds_pow, 1.0, 0, 0}));
  const double bl = sobolev_norm_sq(f, NormKind::left_hom, 2.0) / 16.0;
  CHECK(std::abs(lhs - bl) < 1e-10 * bl);
}

TEST_CASE("ladder homogeneity under dilation") {
  auto g = make_geometric_grid(1, 6, 0.25, 2.0, 6);
  Rng rng(37);
  SpectralField f = random_interior_field(g, rng, {2, 2, 0.0, false});
  for (int p : {-1, 1, 2}) {
    const double mu = std::pow(2.0, 0.5 * p);
    for (auto which : {Ladder::left_x, Ladder::left_xi, Ladder::right_x}) {
      SpectralField a = apply_ladder(dilate(f, p), {which, 1});
      SpectralField b = mu * dilate(apply_ladder(f, {which, 1}), p);
      CHECK(rel_diff(a, b) < 1e-12);
    }
    SpectralField da = d_s(dilate(f, p));
    SpectralField db = (mu * mu) * dilate(d_s(f), p);
    CHECK(rel_diff(da, db) < 1e-12);
  }
}

TEST_CASE("ladders are skew-adjoint on interior bands") {
  auto g = uniform_grid();
  Rng rng(41);
  for (auto which : {Ladder::left_x, Ladder::left_xi, Ladder::right_x, Ladder::right_xi}) {
    SpectralField f = random_interior_field(g, rng, {2, 0, 0.0, false});
    SpectralField h = random_interior_field(g, rng, {2, 0, 0.0, false});
    const cplx a = inner_product(apply_ladder(f, {which, 1}), h);
    const cplx b = inner_product(f, apply_ladder(h, {which, 1}));
    const double scale = std::sqrt(sobolev_norm_sq(f, NormKind::left_hom, 1.0) *
                                   norm_sq(h));
    CHECK(std::abs(a + b) < 1e-12 * scale);
  }
}
