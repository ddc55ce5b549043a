#pragma once

// Named runtime verification suites over the operator identities the library
// is built around. Each check records a scalar metric and the bound it must
// satisfy; the CLI `verify` subcommand and the acceptance runner both consume
// these.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hnse/diagnostics.hpp"
#include "hnse/dynamics.hpp"
#include "hnse/fields_random.hpp"

namespace hnse {

struct Check {
  std::string name;
  double value = 0.0;      // measured metric
  double bound = 0.0;      // threshold
  bool greater_is_pass = false;  // witness-style checks require value > bound
  bool pass = false;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;
  bool pass = true;

  void add(const std::string& n, double value, double bound,
           bool greater_is_pass = false) {
    Check c{n, value, bound, greater_is_pass, false};
    c.pass = greater_is_pass ? value > bound : value <= bound;
    pass = pass && c.pass;
    checks.push_back(c);
  }
};

namespace verify_detail {

inline double rel(double err, double scale) {
  return err / std::max(scale, 1e-300);
}

inline double field_rel_diff(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(norm_sq(a - b)) /
         std::max(1e-300, std::sqrt(std::max(norm_sq(a), norm_sq(b))));
}

inline double hfield_rel_diff(const HorizontalField& a, const HorizontalField& b) {
  return std::sqrt(norm_sq(a - b)) /
         std::max(1e-300, std::sqrt(std::max(norm_sq(a), norm_sq(b))));
}

inline GridPtr default_uniform() { return make_uniform_grid(1, 8, 2.0 * pi, 16); }
inline GridPtr default_geometric() {
  return make_geometric_grid(1, 8, 0.25, 2.0, 6);
}

}  // namespace verify_detail

// --- commutator identities -----------------------------------------------------

inline Suite suite_commutators(int n_fields = 100, std::uint64_t seed = 11) {
  using namespace verify_detail;
  Suite s{"commutators"};
  GridPtr g = default_uniform();
  Rng rng(seed);

  const LinearOp X1 = ladder_op({Ladder::left_x, 1});
  const LinearOp Xi1 = ladder_op({Ladder::left_xi, 1});
  const LinearOp Xr1 = ladder_op({Ladder::right_x, 1});
  const LinearOp Xir1 = ladder_op({Ladder::right_xi, 1});

  double worst_s = 0, worst_lr = 0, worst_lr2 = 0, worst_self = 0;
  for (int t = 0; t < n_fields; ++t) {
    SpectralField f = random_interior_field(g, rng, {2, 0, 0.0, false});
    const double scale = std::sqrt(norm_sq(d_s(f))) * 4.0;
    worst_s = std::max(worst_s,
                       rel(std::sqrt(norm_sq(commutator(f, X1, Xi1) + 4.0 * d_s(f))), scale));
    const double fs = std::sqrt(sobolev_norm_sq(f, NormKind::left_hom, 1.0));
    worst_lr = std::max(worst_lr, rel(std::sqrt(norm_sq(commutator(f, X1, Xr1))), fs));
    worst_lr2 = std::max(worst_lr2, rel(std::sqrt(norm_sq(commutator(f, X1, Xir1))), fs));
    worst_self = std::max(worst_self, std::sqrt(norm_sq(commutator(f, X1, X1))));
  }
  s.add("[X1,Xi1] = -4 d/ds", worst_s, 1e-10);
  s.add("[X1, right X1] = 0", worst_lr, 1e-10);
  s.add("[X1, right Xi1] = 0", worst_lr2, 1e-10);
  s.add("[X1,X1] = 0 exactly", worst_self, 0.0);
  return s;
}

// --- full algebra suite ----------------------------------------------------------

inline Suite suite_algebra(int n_fields = 100, std::uint64_t seed = 12) {
  using namespace verify_detail;
  Suite s{"algebra"};
  GridPtr g = default_uniform();
  Rng rng(seed);

  Suite comm = suite_commutators(n_fields, seed);
  for (const auto& c : comm.checks) {
    s.checks.push_back(c);
    s.pass = s.pass && c.pass;
  }

  double worst_lap = 0, worst_proj2 = 0, worst_divp = 0, worst_pgrad = 0;
  double worst_pright = 0, worst_pexp = 0, worst_contr = 0, worst_idem = 0,
         worst_jj = 0;
  const int k_band = 4;  // partial band, used for the contraction checks

  for (int t = 0; t < n_fields; ++t) {
    SpectralField f = random_interior_field(g, rng, {3, 0, 0.0, false});
    // div o grad vs the diagonal symbol
    SpectralField lap1 = -1.0 * divergence_h(gradient_h(f));
    SpectralField lap2 = apply_symbol(f, {SymbolKind::left_sublap_pow, 1.0, 0, 0});
    worst_lap = std::max(worst_lap, field_rel_diff(lap1, lap2));

    HorizontalField u = random_interior_horizontal(g, rng, {3, 0, 0.0, false});
    HorizontalField pu = leray(u);
    worst_proj2 = std::max(worst_proj2, hfield_rel_diff(leray(pu), pu));
    worst_divp = std::max(
        worst_divp, rel(std::sqrt(norm_sq(divergence_h(pu))),
                        std::sqrt(sobolev_norm_sq(u, NormKind::left_hom, 1.0))));
    HorizontalField gr = gradient_h(f);
    worst_pgrad = std::max(worst_pgrad,
                           rel(std::sqrt(norm_sq(leray(gr))), std::sqrt(norm_sq(gr))));

    // P commutes with right-invariant ladders and with e^{zeta |Ds|}
    HorizontalField a1 = apply_ladder(leray(u), {Ladder::right_x, 1});
    HorizontalField a2 = leray(apply_ladder(u, {Ladder::right_x, 1}));
    worst_pright = std::max(worst_pright, hfield_rel_diff(a1, a2));
    HorizontalField b1 = apply_symbol_each(leray(u), {SymbolKind::exp_abs_ds, 0.3, 0, 0});
    HorizontalField b2 = leray(apply_symbol_each(u, {SymbolKind::exp_abs_ds, 0.3, 0, 0}));
    worst_pexp = std::max(worst_pexp, hfield_rel_diff(b1, b2));

    // Friedrichs multiplier: contraction, idempotence, J_k Jr_k = J_k
    for (double l : {0.0, 1.0, 2.0}) {
      SpectralField jf = friedrichs(f, k_band, FriedrichsKind::bi);
      const double nj = sobolev_norm_sq(jf, NormKind::left_hom, l);
      const double nf = sobolev_norm_sq(f, NormKind::left_hom, l);
      if (nj > nf) worst_contr = std::max(worst_contr, (nj - nf) / nf);
    }
    SpectralField j1 = friedrichs(f, k_band, FriedrichsKind::bi);
    worst_idem = std::max(worst_idem,
                          std::sqrt(norm_sq(friedrichs(j1, k_band, FriedrichsKind::bi) - j1)));
    SpectralField jr = friedrichs(f, k_band, FriedrichsKind::right);
    worst_jj = std::max(
        worst_jj, std::sqrt(norm_sq(friedrichs(jr, k_band, FriedrichsKind::bi) - j1)));
  }
  s.add("Lap = div o grad", worst_lap, 1e-10);
  s.add("P o P = P", worst_proj2, 1e-10);
  s.add("div o P = 0", worst_divp, 1e-10);
  s.add("P o grad = 0", worst_pgrad, 1e-10);
  s.add("[P, right X1] = 0", worst_pright, 1e-10);
  s.add("[P, e^{zeta|Ds|}] = 0", worst_pexp, 1e-10);
  s.add("J_k norm contraction", worst_contr, 1e-12);
  s.add("J_k idempotent (exact)", worst_idem, 0.0);
  s.add("J_k o Jr_k = J_k (exact)", worst_jj, 0.0);

  // certified nonzero commutator of P with the bi-stratified multiplier:
  // mass at m = 0 inside the band spreads under P to m outside it
  {
    HorizontalField w(g);
    const int half = g->n_lambda() / 2;
    w[0].at(0, 0, half) = cplx(1, 0);
    const int kw = 2;  // band [2^-3, 4]: eigenvalue 4 in, 20 out
    HorizontalField c1 = leray(friedrichs(w, kw, FriedrichsKind::bi));
    HorizontalField c2 = friedrichs(leray(w), kw, FriedrichsKind::bi);
    const double witness =
        std::sqrt(norm_sq(c1 - c2)) / std::sqrt(norm_sq(w));
    s.add("[P, J_k] != 0 witness", witness, 1e-6, /*greater_is_pass=*/true);
  }
  return s;
}

// --- key identity ---------------------------------------------------------------

inline Suite suite_key_identity(int n_fields = 50, std::uint64_t seed = 13) {
  using namespace verify_detail;
  Suite s{"key_identity"};
  GridPtr g = default_uniform();
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < n_fields; ++t) {
    HorizontalField v = leray(random_interior_horizontal(g, rng, {3, 0, 0.0, false}));
    HorizontalField neg_lap =
        apply_symbol_each(v, {SymbolKind::left_sublap_pow, 1.0, 0, 0});
    HorizontalField lhs = neg_lap - leray(neg_lap);
    HorizontalField rhs = pi_h(apply_symbol_each(v, {SymbolKind::ds, 0, 0, 0}));
    worst = std::max(worst, rel(std::sqrt(norm_sq(lhs - rhs)),
                                std::sqrt(std::max(norm_sq(lhs), norm_sq(rhs)))));
  }
  s.add("(Id-P)(-Lap) v = Pi d/ds v (div-free v)", worst, 1e-8);
  return s;
}

// --- spectral gap ---------------------------------------------------------------

inline Suite suite_spectral_gap(int n_fields = 50, std::uint64_t seed = 14) {
  using namespace verify_detail;
  Suite s{"spectral_gap"};
  GridPtr g = default_uniform();
  Rng rng(seed);
  const int d = g->d;

  double worst_left = 0, worst_right = 0;
  for (int t = 0; t < n_fields; ++t) {
    SpectralField f = random_interior_field(g, rng, {1, 0, 0.0, false});
    for (double l : {0.5, 1.0, 2.0}) {
      const double lhs = sobolev_norm_sq(apply_symbol(f, {SymbolKind::abs_ds_pow, l, 0, 0}),
                                         NormKind::left_hom, 0.0);
      const double right_bound =
          sobolev_norm_sq(f, NormKind::left_hom, 2.0 * l) / std::pow(4.0 * d, 2.0 * l);
      if (lhs > right_bound)
        worst_left = std::max(worst_left, (lhs - right_bound) / right_bound);
      const double rb2 =
          sobolev_norm_sq(f, NormKind::right_hom, 2.0 * l) / std::pow(4.0 * d, 2.0 * l);
      if (lhs > rb2) worst_right = std::max(worst_right, (lhs - rb2) / rb2);
    }
  }
  s.add("||Ds|^l f| <= (4d)^-l |f|_{left,2l}", worst_left, 1e-12);
  s.add("||Ds|^l f| <= (4d)^-l |f|_{right,2l}", worst_right, 1e-12);

  // equality when all mass sits at m = 0 (resp. n = 0)
  SpectralField f0(g);
  const int half = g->n_lambda() / 2;
  f0.at(3, 0, half) = cplx(1, 0);
  f0.at(5, 0, half + 2) = cplx(0, 2);
  const double lhs = sobolev_norm_sq(apply_symbol(f0, {SymbolKind::abs_ds_pow, 0.5, 0, 0}),
                                     NormKind::left_hom, 0.0);
  const double rhs = sobolev_norm_sq(f0, NormKind::left_hom, 1.0) / (4.0 * d);
  s.add("equality at m = 0", std::abs(lhs - rhs) / rhs, 1e-10);

  SpectralField f1(g);
  f1.at(0, 2, half) = cplx(1, 1);
  const double lhs1 = sobolev_norm_sq(apply_symbol(f1, {SymbolKind::abs_ds_pow, 0.5, 0, 0}),
                                      NormKind::right_hom, 0.0);
  const double rhs1 = sobolev_norm_sq(f1, NormKind::right_hom, 1.0) / (4.0 * d);
  s.add("equality at n = 0", std::abs(lhs1 - rhs1) / rhs1, 1e-10);
  return s;
}

// --- scaling (geometric grids) ---------------------------------------------------

inline Suite suite_scaling(int n_fields = 50, std::uint64_t seed = 15) {
  using namespace verify_detail;
  Suite s{"scaling"};
  GridPtr g = default_geometric();
  Rng rng(seed);
  const double r = 2.0;
  const int Q = g->q_dimension();

  double worst_norm = 0, worst_ladder = 0, worst_ds = 0, worst_inv = 0;
  for (int t = 0; t < n_fields; ++t) {
    SpectralField f = random_interior_field(g, rng, {2, 2, 0.0, false});
    for (int p : {-2, 1, 2}) {
      const double mu = std::pow(r, 0.5 * p);
      SpectralField df = dilate(f, p);
      for (double l : {0.0, 1.0, 2.0}) {
        const double lhs = sobolev_norm_sq(df, NormKind::left_hom, l);
        const double rhs = std::pow(mu, 2.0 * l - Q) * sobolev_norm_sq(f, NormKind::left_hom, l);
        worst_norm = std::max(worst_norm, std::abs(lhs - rhs) / rhs);
      }
      // ladder homogeneity: ladder(dilate) = mu * dilate(ladder),
      // d/ds(dilate) = mu^2 * dilate(d/ds)
      SpectralField l1 = apply_ladder(df, {Ladder::left_x, 1});
      SpectralField l2 = mu * dilate(apply_ladder(f, {Ladder::left_x, 1}), p);
      worst_ladder = std::max(worst_ladder, field_rel_diff(l1, l2));
      SpectralField d1 = d_s(df);
      SpectralField d2 = (mu * mu) * dilate(d_s(f), p);
      worst_ds = std::max(worst_ds, field_rel_diff(d1, d2));
      worst_inv = std::max(worst_inv, field_rel_diff(dilate(df, -p), f));
    }
  }
  s.add("dilation norm scaling mu^{2l-Q}", worst_norm, 1e-10);
  s.add("ladder homogeneity", worst_ladder, 1e-12);
  s.add("d/ds homogeneity", worst_ds, 1e-12);
  s.add("dilate(p) o dilate(-p) = id", worst_inv, 1e-14);
  return s;
}

// --- transform suite --------------------------------------------------------------

inline Suite suite_transform(std::uint64_t seed = 16) {
  using namespace verify_detail;
  Suite s{"transform"};
  GridPtr g = make_uniform_grid(1, 6, 2.0 * pi, 16);
  PlanPtr plan = make_plan(g, make_physical_grid(*g, 48));
  Rng rng(seed);
  const auto& pg = plan->pgrid();

  // Plancherel on Gaussian-type pairs: the W functions at matched scale are
  // Gaussians in Y, so e^{i k s - a|Y - c|^2} profiles are near band-limited.
  double worst_pl = 0.0;
  for (int t = 0; t < 10; ++t) {
    PhysicalField f(plan->pgrid_ptr()), h(plan->pgrid_ptr());
    struct Blob { int k; double a, cy, ce; cplx amp; };
    std::vector<Blob> bf, bh;
    for (int b = 0; b < 3; ++b) {
      const int k = 1 + static_cast<int>(rng.uniform() * 3);
      bf.push_back({k, static_cast<double>(k) * rng.uniform(0.9, 1.1),
                    rng.uniform(-0.3, 0.3) / std::sqrt(k),
                    rng.uniform(-0.3, 0.3) / std::sqrt(k), rng.normal_cplx()});
      const int k2 = 1 + static_cast<int>(rng.uniform() * 3);
      bh.push_back({k2, static_cast<double>(k2) * rng.uniform(0.9, 1.1),
                    rng.uniform(-0.3, 0.3) / std::sqrt(k2),
                    rng.uniform(-0.3, 0.3) / std::sqrt(k2), rng.normal_cplx()});
    }
    auto fill = [&](PhysicalField& out, const std::vector<Blob>& blobs) {
      for (int iy = 0; iy < pg.y_count(); ++iy) {
        double Y[2];
        pg.y_point(iy, Y);
        for (int is = 0; is < pg.n_s; ++is) {
          const double sv = pg.s_node(is);
          cplx val(0, 0);
          for (const auto& b : blobs) {
            const double dy = Y[0] - b.cy, de = Y[1] - b.ce;
            val += b.amp * std::exp(-b.a * (dy * dy + de * de)) *
                   cplx(std::cos(b.k * sv), std::sin(b.k * sv));
          }
          out.at(iy, is) = val;
        }
      }
    };
    fill(f, bf);
    fill(h, bh);
    const cplx num = inner_product(plan->forward(f), plan->forward(h));
    const cplx den = inner_product_phys(f, h);
    worst_pl = std::max(worst_pl,
                        std::abs(num - plancherel_constant(1) * den) /
                            std::abs(plancherel_constant(1) * den));
  }
  s.add("Plancherel constant pi^2 (d=1)", worst_pl, 1e-6);

  // round trip on random interior fields (Nyquist ring left empty)
  double worst_rt = 0.0;
  for (int t = 0; t < 5; ++t) {
    SpectralField F = random_interior_field(g, rng, {2, 1, 0.3, false});
    SpectralField back = plan->forward(plan->inverse(F));
    worst_rt = std::max(worst_rt, field_rel_diff(back, F));
  }
  s.add("inverse then forward round trip", worst_rt, 1e-7);

  // spectral e^{zeta|lambda|} equals the s-side Fourier multiplier
  double worst_vm = 0.0;
  for (double zeta : {0.0, 0.1}) {
    SpectralField F = random_interior_field(g, rng, {2, 1, 0.3, false});
    PhysicalField a = plan->inverse(exp_abs_ds(F, zeta));
    PhysicalField b = plan->inverse(F);
    // multiply the s-spectrum of b by e^{zeta |lambda_k|}
    const int ns = pg.n_s;
    for (int iy = 0; iy < pg.y_count(); ++iy) {
      std::vector<cplx> bins(ns, cplx(0, 0));
      for (int k = 0; k < ns; ++k)
        for (int j = 0; j < ns; ++j)
          bins[k] += b.at(iy, j) *
                     cplx(std::cos(2 * pi * k * j / ns), -std::sin(2 * pi * k * j / ns));
      for (int k = 0; k < ns; ++k) {
        const int ki = k <= ns / 2 ? k : k - ns;
        bins[k] *= std::exp(zeta * std::abs(2.0 * pi * ki / pg.s_period));
      }
      for (int j = 0; j < ns; ++j) {
        cplx acc(0, 0);
        for (int k = 0; k < ns; ++k)
          acc += bins[k] *
                 cplx(std::cos(2 * pi * k * j / ns), std::sin(2 * pi * k * j / ns));
        b.at(iy, j) = acc / static_cast<double>(ns);
      }
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
      diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
      scale = std::max(scale, std::abs(a.data()[i]));
    }
    worst_vm = std::max(worst_vm, diff / std::max(scale, 1e-300));
  }
  s.add("vertical multiplier, spectral vs s-side", worst_vm, 1e-7);
  return s;
}

// --- heat suite --------------------------------------------------------------------

inline Suite suite_heat(std::uint64_t seed = 17) {
  using namespace verify_detail;
  Suite s{"heat"};
  GridPtr g = default_uniform();
  Rng rng(seed);

  HorizontalField u0 = random_interior_horizontal(g, rng, {1, 0, 0.3, true});

  // exact semigroup law
  HorizontalField a = step_heat(step_heat(u0, 0.07), 0.13);
  HorizontalField b = step_heat(u0, 0.2);
  s.add("semigroup law", hfield_rel_diff(a, b), 1e-13);

  // per-mode monotonicity of the sigma-weighted decay factor
  double worst_factor = 0.0;
  const auto mi = g->modes();
  for (double sigma : {1.0, 2.0, 3.5}) {
    for (int m = 0; m < g->mode_count(); ++m)
      for (int k = 0; k < g->n_lambda(); ++k) {
        const double al = std::abs(g->lambda_nodes[k]);
        const double factor =
            std::exp((sigma * al - g->eigenvalue(al, mi.abs_sum(m))) * 0.05);
        worst_factor = std::max(worst_factor, factor - 1.0);
      }
  }
  s.add("weighted per-mode decay <= 1 (sigma < 4d)", worst_factor, 0.0);

  // energy balance with the dissipation integral evaluated in closed form
  const double T = 0.5;
  HorizontalField uT = step_heat(u0, T);
  double diss = 0.0;
  const auto mi2 = g->modes();
  for (int c = 0; c < u0.n_components(); ++c)
    for (int n = 0; n < g->mode_count(); ++n)
      for (int m = 0; m < g->mode_count(); ++m) {
        const int am = mi2.abs_sum(m);
        for (int k = 0; k < g->n_lambda(); ++k) {
          const cplx v = u0[c].at(n, m, k);
          if (v == cplx(0, 0)) continue;
          const double eig = g->eigenvalue(g->lambda_nodes[k], am);
          diss += std::norm(v) * g->lambda_weights[k] * 0.5 *
                  (1.0 - std::exp(-2.0 * eig * T));
        }
      }
  const double balance =
      std::abs(norm_sq(uT) + 2.0 * diss - norm_sq(u0)) / norm_sq(u0);
  s.add("energy balance |u(T)|^2 + 2 int |grad u|^2 = |u0|^2", balance, 1e-10);
  return s;
}

// --- bilinear weight uniformity -----------------------------------------------------

inline Suite suite_mzeta(std::uint64_t seed = 18) {
  using namespace verify_detail;
  Suite s{"mzeta"};
  GridPtr g = make_uniform_grid(1, 4, 2.0 * pi, 8);
  PlanPtr plan = make_plan(g, make_physical_grid(*g, 32));
  Rng rng(seed);

  SpectralField A = random_interior_field(g, rng, {1, 1, 0.5, true});
  SpectralField B = random_interior_field(g, rng, {1, 1, 0.5, true});
  const double la = lp_norm_phys(plan->inverse(A), 4.0);
  const double lb = lp_norm_phys(plan->inverse(B), 4.0);

  double lo = 1e300, hi = 0.0;
  for (double zeta : {0.0, 1.0, 2.0, 5.0, 10.0}) {
    SpectralField mz = m_zeta(*plan, A, B, zeta);
    const double ratio = std::sqrt(norm_sq_phys(plan->inverse(mz))) / (la * lb);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  s.add("L2/L4 ratio spread across zeta in {0,1,2,5,10}", hi / lo, 2.0);
  return s;
}

// --- registry ------------------------------------------------------------------------

inline std::vector<std::string> suite_names() {
  return {"commutators", "algebra",  "key_identity", "spectral_gap",
          "scaling",     "transform", "heat",        "mzeta"};
}

inline Suite run_suite(const std::string& name) {
  if (name == "commutators") return suite_commutators();
  if (name == "algebra") return suite_algebra();
  if (name == "key_identity") return suite_key_identity();
  if (name == "spectral_gap") return suite_spectral_gap();
  if (name == "scaling") return suite_scaling();
  if (name == "transform") return suite_transform();
  if (name == "heat") return suite_heat();
  if (name == "mzeta") return suite_mzeta();
  throw error("verify: unknown suite " + name);
}

}  // namespace hnse
