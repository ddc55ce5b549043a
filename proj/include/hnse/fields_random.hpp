#pragma once

// Random interior band-limited fields and the deterministic initial-data
// presets. All dynamic initial data is real (Hermitian in lambda),
// divergence-free and normalized in the physical right-invariant norm.

#include <cmath>

#include "hnse/projection.hpp"

namespace hnse {

// F(n,m,-la) := conj(F(n,m,la)): makes the synthesized field real-valued.
inline void hermitize(SpectralField& f) {
  const int nl = f.grid().n_lambda();
  const int rows = f.size() / nl;
  for (int r = 0; r < rows; ++r) {
    cplx* row = f.data().data() + static_cast<std::size_t>(r) * nl;
    for (int k = 0; k < nl / 2; ++k) {
      const int km = nl - 1 - k;
      const cplx avg = 0.5 * (row[km] + std::conj(row[k]));
      row[km] = avg;
      row[k] = std::conj(avg);
    }
  }
}

struct InteriorSpec {
  int nm_margin = 2;      // components of n and m stay <= M - nm_margin
  int lambda_margin = 0;  // innermost/outermost node pairs left empty
  double decay = 0.0;     // optional smooth envelope e^{-decay(|n|+|m|+|la|/la_min)}
  bool hermitian = false;
};

inline SpectralField random_interior_field(GridPtr grid, Rng& rng,
                                           const InteriorSpec& spec = {}) {
  SpectralField f(grid);
  const auto& g = *grid;
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  const int half = nl / 2;
  const double lmin = g.lambda_min_abs();

  for (int n = 0; n < nm; ++n) {
    if (SpectralField::max_component(mi, n) > g.M - spec.nm_margin) continue;
    for (int m = 0; m < nm; ++m) {
      if (SpectralField::max_component(mi, m) > g.M - spec.nm_margin) continue;
      for (int k = 0; k < nl; ++k) {
        const int ring = k < half ? half - 1 - k : k - half;  // 0 = innermost
        if (ring < spec.lambda_margin || ring >= half - spec.lambda_margin)
          continue;
        double env = 1.0;
        if (spec.decay > 0.0)
          env = std::exp(-spec.decay * (mi.abs_sum(n) + mi.abs_sum(m) +
                                        std::abs(g.lambda_nodes[k]) / lmin));
        f.at(n, m, k) = env * rng.normal_cplx();
      }
    }
  }
  if (spec.hermitian) hermitize(f);
  return f;
}

inline HorizontalField random_interior_horizontal(GridPtr grid, Rng& rng,
                                                  const InteriorSpec& spec = {}) {
  std::vector<SpectralField> comps;
  for (int j = 0; j < 2 * grid->d; ++j)
    comps.push_back(random_interior_field(grid, rng, spec));
  return HorizontalField(std::move(comps));
}

// unit mass at a single (n, m, lambda-index) of one component
inline HorizontalField single_mode_horizontal(GridPtr grid, int comp, int n_lin,
                                              int m_lin, int k, cplx value = {1, 0}) {
  HorizontalField u(grid);
  u[comp].at(n_lin, m_lin, k) = value;
  return u;
}

// --- initial-data presets ----------------------------------------------------

inline double physical_htilde_d_sq(const HorizontalField& u) {
  return sobolev_norm_sq(u, NormKind::right_hom, u.grid().d) /
         plancherel_constant(u.grid().d);
}

// P applied to a random interior band-limited field, right-band-projected and
// normalized so the physical right-invariant critical norm equals `amplitude`.
inline HorizontalField preset_leray_random(GridPtr grid, int k, double amplitude,
                                           std::uint64_t seed, int kmax_band) {
  Rng rng(seed);
  InteriorSpec spec;
  // the projector reclaims one ring, so the raw draw keeps two spare rings:
  // states then stay strictly inside the cutoff and ladder values are exact
  spec.nm_margin = std::min(grid->M, std::max(3, grid->M / 3 + 1));
  spec.decay = 0.5;
  spec.hermitian = true;
  HorizontalField u = random_interior_horizontal(grid, rng, spec);
  if (grid->mode == GridMode::uniform_periodic && kmax_band > 0) {
    const double dl = 2.0 * pi / grid->s_period;
    for (int c = 0; c < u.n_components(); ++c) {
      auto& data = u[c].data();
      const int nl = grid->n_lambda();
      const int rows = static_cast<int>(data.size()) / nl;
      for (int kk = 0; kk < nl; ++kk) {
        const int ki = static_cast<int>(std::lround(grid->lambda_nodes[kk] / dl));
        if (std::abs(ki) <= kmax_band) continue;
        for (int r = 0; r < rows; ++r)
          data[static_cast<std::size_t>(r) * nl + kk] = cplx(0, 0);
      }
    }
  }
  u = leray(friedrichs(u, k, FriedrichsKind::right));
  const double ns = physical_htilde_d_sq(u);
  require(ns > 0.0, "preset_leray_random: degenerate draw");
  return (amplitude / std::sqrt(ns)) * u;
}

// a few explicit low modes, then the same projections and normalization
inline HorizontalField preset_gauss_mode(GridPtr grid, int k, double amplitude) {
  HorizontalField u(grid);
  const auto& g = *grid;
  const auto mi = g.modes();
  const int half = g.n_lambda() / 2;
  std::vector<int> zeros(g.d, 0), e1(g.d, 0);
  e1[0] = 1;
  const int i0 = mi.encode(zeros.data());
  const int i1 = mi.encode(e1.data());

  u[0].at(i0, i0, half) = cplx(1.0, 0.5);        // innermost positive lambda
  u[0].at(i0, i1, half + 1) = cplx(0.3, 0.0);
  u[u.n_components() / 2].at(i1, i0, half) = cplx(0.7, -0.2);
  for (int c = 0; c < u.n_components(); ++c) hermitize(u[c]);

  u = leray(friedrichs(u, k, FriedrichsKind::right));
  const double ns = physical_htilde_d_sq(u);
  require(ns > 0.0, "preset_gauss_mode: degenerate preset");
  return (amplitude / std::sqrt(ns)) * u;
}

}  // namespace hnse
