#pragma once

// The horizontal Leray projector P = Id + grad o (-Lap)^{-1} o div, the
// order-zero operator Pi = 4 (Id - P) o S built on the symplectic block
// matrix S = [[0, 2I],[-2I, 0]], pressure recovery, and the Friedrichs
// band multipliers J_k (bi-stratified) and the right-only variant.

#include <cmath>
#include <vector>

#include "hnse/operators.hpp"

namespace hnse {

// S u: (S u)_j = 2 u_{j+d}, (S u)_{j+d} = -2 u_j. S^T = -S, S^2 = -4 Id.
inline HorizontalField s_matrix_apply(const HorizontalField& u) {
  const int d = u.grid().d;
  std::vector<SpectralField> comps(2 * d, SpectralField(u.grid_ptr()));
  for (int j = 0; j < d; ++j) {
    comps[j] = 2.0 * u[j + d];
    comps[j + d] = -2.0 * u[j];
  }
  return HorizontalField(std::move(comps));
}

inline SpectralField inverse_neg_sublaplacian(const SpectralField& f) {
  return apply_symbol(f, {SymbolKind::left_sublap_pow, -1.0, 0, 0});
}

// The truncated composition div o grad stays diagonal: the off-diagonal
// ladder terms cancel identically, while the diagonal picks up modified
// values on the outermost ring,
//   e(m, la) = 4|la| sum_j [ m_j + (m_j + 1) 1{m_j < M} ],
// which equals 4|la|(2|m|+d) away from the cutoff. Inverting this diagonal
// (rather than the continuum symbol) makes the projector annihilate the
// discrete divergence exactly on the whole truncated space.
inline SpectralField solve_grad_div(const SpectralField& q) {
  const auto& g = q.grid();
  require(g.M >= 1, "leray: cutoff M >= 1 required");
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();

  std::vector<double> ladder_sum(nm, 0.0);
  std::vector<int> idx(g.d);
  for (int m = 0; m < nm; ++m) {
    mi.decode(m, idx.data());
    double s = 0.0;
    for (int j = 0; j < g.d; ++j)
      s += idx[j] + (idx[j] < g.M ? idx[j] + 1.0 : 0.0);
    ladder_sum[m] = s;
  }

  SpectralField out(q.grid_ptr());
  for (int n = 0; n < nm; ++n)
    for (int m = 0; m < nm; ++m)
      for (int k = 0; k < nl; ++k)
        out.at(n, m, k) =
            q.at(n, m, k) /
            (4.0 * std::abs(g.lambda_nodes[k]) * ladder_sum[m]);
  return out;
}

inline HorizontalField leray(const HorizontalField& u) {
  return u + gradient_h(solve_grad_div(divergence_h(u)));
}

// Order-zero twist: with the ladder conventions used here the identity
// (Id - P)(-Lap) v = Pi d/ds v for divergence-free v requires the transposed
// block matrix, Pi = 4 (Id - P) o S^T = -4 (Id - P) o S.
inline HorizontalField pi_h(const HorizontalField& u) {
  HorizontalField su = s_matrix_apply(u);
  return 4.0 * (leray(su) - su);
}

// Monte-Carlo proxy for the L^2 operator norm of pi_h on a grid; logged as a
// diagnostic and used by the CFL guard.
inline double pi_h_norm_proxy(const GridPtr& grid, int samples = 20,
                              std::uint64_t seed = 12345) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    HorizontalField u(grid);
    for (int j = 0; j < u.n_components(); ++j)
      for (auto& c : u[j].data()) c = rng.normal_cplx();
    const double nu = norm_sq(u);
    if (nu == 0.0) continue;
    worst = std::max(worst, std::sqrt(norm_sq(pi_h(u)) / nu));
  }
  return worst;
}

// componentwise diagonal symbol on a horizontal field
inline HorizontalField apply_symbol_each(const HorizontalField& u,
                                         const SymbolSpec& s) {
  std::vector<SpectralField> comps;
  comps.reserve(u.n_components());
  for (int j = 0; j < u.n_components(); ++j)
    comps.push_back(apply_symbol(u[j], s));
  return HorizontalField(std::move(comps));
}

// p = (-Lap)^{-1} div(-Lap u) + (-Lap)^{-1} div(nonlinear), with the same
// grad-div diagonal as the projector so that -grad p = (Id - P)(-Lap u + nl)
// holds exactly. The divergence-free precondition on u is checked against its
// gradient scale.
inline SpectralField recover_pressure(const HorizontalField& u,
                                      const HorizontalField& nonlinear) {
  const double div_sq = norm_sq(divergence_h(u));
  const double grad_scale = sobolev_norm_sq(u, NormKind::left_hom, 1.0);
  require(div_sq <= 1e-16 * std::max(1.0, grad_scale),
          "recover_pressure: input field is not divergence-free");
  SpectralField lin = solve_grad_div(divergence_h(
      apply_symbol_each(u, {SymbolKind::left_sublap_pow, 1.0, 0, 0})));
  SpectralField nl = solve_grad_div(divergence_h(nonlinear));
  return lin + nl;
}

// --- Friedrichs multipliers ---------------------------------------------------

enum class FriedrichsKind { bi, right };

// bi: keep modes with 2^{-(k+1)} <= 4|la|(2|m|+d) <= 2^k and the same with |n|;
// right: the |n| indicator only. Idempotent; bi composed with right equals bi.
inline SpectralField friedrichs(const SpectralField& f, int k, FriedrichsKind kind) {
  require(k >= 0, "friedrichs: k must be >= 0");
  const auto& g = f.grid();
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  const double lo = std::pow(2.0, -(k + 1));
  const double hi = std::pow(2.0, k);

  std::vector<int> abs_sum(nm);
  for (int i = 0; i < nm; ++i) abs_sum[i] = mi.abs_sum(i);

  SpectralField out(f.grid_ptr());
  for (int n = 0; n < nm; ++n)
    for (int m = 0; m < nm; ++m)
      for (int kk = 0; kk < nl; ++kk) {
        const double lam = g.lambda_nodes[kk];
        const double en = g.eigenvalue(lam, abs_sum[n]);
        bool keep = (lo <= en && en <= hi);
        if (keep && kind == FriedrichsKind::bi) {
          const double em = g.eigenvalue(lam, abs_sum[m]);
          keep = (lo <= em && em <= hi);
        }
        if (keep) out.at(n, m, kk) = f.at(n, m, kk);
      }
  return out;
}

inline HorizontalField friedrichs(const HorizontalField& u, int k,
                                  FriedrichsKind kind) {
  std::vector<SpectralField> comps;
  comps.reserve(u.n_components());
  for (int j = 0; j < u.n_components(); ++j)
    comps.push_back(friedrichs(u[j], k, kind));
  return HorizontalField(std::move(comps));
}

// true when the band [2^{-(k+1)}, 2^k] contains every eigenvalue on the grid
inline bool friedrichs_covers_grid(const FrequencyGrid& g, int k) {
  const double emin = g.eigenvalue(g.lambda_min_abs(), 0);
  const double emax = g.eigenvalue(g.lambda_max_abs(), g.d * g.M);
  return std::pow(2.0, -(k + 1)) <= emin && emax <= std::pow(2.0, k);
}

}  // namespace hnse
