#pragma once

// Linear operators in frequency space: diagonal functional calculus of the
// two sub-Laplacians, d/ds and |D_s|, plus the ladder realizations of the
// left- and right-invariant horizontal vector fields. Ladder reads outside
// the [0, M] cutoff return zero, so every exactness claim is scoped to
// interior band-limited fields.

#include <cmath>
#include <functional>
#include <vector>

#include "hnse/spectral_field.hpp"

namespace hnse {

// --- diagonal symbols -------------------------------------------------------

enum class SymbolKind {
  left_sublap_pow,   // (4|lambda|(2|m|+d))^l
  right_sublap_pow,  // (4|lambda|(2|n|+d))^l
  left_inhom_pow,    // (1 + 4|lambda|(2|m|+d))^l
  right_inhom_pow,   // (1 + 4|lambda|(2|n|+d))^l
  ds,                // i*lambda
  abs_ds_pow,        // |lambda|^l
  exp_abs_ds,        // e^{zeta*|lambda|}, zeta in the l slot
  band_indicator,    // 1{a <= 4|lambda|(2|m|+d) <= b}
};

struct SymbolSpec {
  SymbolKind kind = SymbolKind::abs_ds_pow;
  double l = 0.0;  // exponent, or zeta for exp_abs_ds
  double band_lo = 0.0;
  double band_hi = 0.0;
};

inline SpectralField apply_symbol(const SpectralField& f, const SymbolSpec& s) {
  const auto& g = f.grid();
  if (s.kind == SymbolKind::exp_abs_ds)
    require(std::abs(s.l) * g.lambda_max_abs() <= 700.0,
            "apply_symbol: exp_abs_ds overflow guard");

  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  std::vector<int> abs_sum(nm);
  for (int i = 0; i < nm; ++i) abs_sum[i] = mi.abs_sum(i);

  SpectralField out(f.grid_ptr());
  for (int n = 0; n < nm; ++n)
    for (int m = 0; m < nm; ++m)
      for (int k = 0; k < nl; ++k) {
        const double lam = g.lambda_nodes[k];
        cplx factor;
        switch (s.kind) {
          case SymbolKind::left_sublap_pow:
            factor = std::pow(g.eigenvalue(lam, abs_sum[m]), s.l);
            break;
          case SymbolKind::right_sublap_pow:
            factor = std::pow(g.eigenvalue(lam, abs_sum[n]), s.l);
            break;
          case SymbolKind::left_inhom_pow:
            factor = std::pow(1.0 + g.eigenvalue(lam, abs_sum[m]), s.l);
            break;
          case SymbolKind::right_inhom_pow:
            factor = std::pow(1.0 + g.eigenvalue(lam, abs_sum[n]), s.l);
            break;
          case SymbolKind::ds:
            factor = cplx(0.0, lam);
            break;
          case SymbolKind::abs_ds_pow:
            factor = std::pow(std::abs(lam), s.l);
            break;
          case SymbolKind::exp_abs_ds:
            factor = std::exp(s.l * std::abs(lam));
            break;
          case SymbolKind::band_indicator: {
            const double e = g.eigenvalue(lam, abs_sum[m]);
            factor = (s.band_lo <= e && e <= s.band_hi) ? 1.0 : 0.0;
            break;
          }
        }
        out.at(n, m, k) = factor * f.at(n, m, k);
      }
  return out;
}

inline SpectralField d_s(const SpectralField& f) {
  return apply_symbol(f, {SymbolKind::ds, 0.0, 0, 0});
}

inline SpectralField exp_abs_ds(const SpectralField& f, double zeta) {
  return apply_symbol(f, {SymbolKind::exp_abs_ds, zeta, 0, 0});
}

// --- ladder operators -------------------------------------------------------

// Components 1..d are the X directions, d+1..2d the Xi directions;
// left_* are left-invariant, right_* right-invariant.
enum class Ladder { left_x, left_xi, right_x, right_xi };

struct LadderSpec {
  Ladder which = Ladder::left_x;
  int j = 1;  // 1-based direction index in [1, d]
};

// Frequency action of the horizontal vector fields:
//   F(X_j f)(n,m)  = -sqrt(2|la|) [ sqrt(m_j+1) F(n,m+e_j) - sqrt(m_j) F(n,m-e_j) ]
//   F(Xi_j f)(n,m) = +i sqrt(2) la/sqrt|la| [ sqrt(m_j+1) F(n,m+e_j) + sqrt(m_j) F(n,m-e_j) ]
//   F(Xr_j f)(n,m) = +sqrt(2|la|) [ sqrt(n_j+1) F(n+e_j,m) - sqrt(n_j) F(n-e_j,m) ]
//   F(Xir_j f)(n,m)= +i sqrt(2) la/sqrt|la| [ sqrt(n_j+1) F(n+e_j,m) + sqrt(n_j) F(n-e_j,m) ]
// Out-of-band reads are zero.
inline SpectralField apply_ladder(const SpectralField& f, const LadderSpec& L) {
  const auto& g = f.grid();
  require(L.j >= 1 && L.j <= g.d, "apply_ladder: direction out of range");
  const auto mi = g.modes();
  const int nm = mi.count();
  const int nl = g.n_lambda();
  const int stride = mi.stride(L.j - 1);
  const bool on_n = (L.which == Ladder::right_x || L.which == Ladder::right_xi);
  const bool is_x = (L.which == Ladder::left_x || L.which == Ladder::right_x);

  SpectralField out(f.grid_ptr());
  std::vector<int> comp(nm);
  for (int i = 0; i < nm; ++i) comp[i] = mi.component(i, L.j - 1);

  for (int n = 0; n < nm; ++n) {
    for (int m = 0; m < nm; ++m) {
      const int c = on_n ? comp[n] : comp[m];
      const bool can_up = c < g.M;
      for (int k = 0; k < nl; ++k) {
        const double lam = g.lambda_nodes[k];
        cplx up(0, 0), down(0, 0);
        if (on_n) {
          if (can_up) up = f.at(n + stride, m, k);
          if (c > 0) down = f.at(n - stride, m, k);
        } else {
          if (can_up) up = f.at(n, m + stride, k);
          if (c > 0) down = f.at(n, m - stride, k);
        }
        const double su = std::sqrt(static_cast<double>(c + 1));
        const double sd = std::sqrt(static_cast<double>(c));
        cplx val;
        if (is_x) {
          const double pref = std::sqrt(2.0 * std::abs(lam));
          val = pref * (su * up - sd * down);
          if (!on_n) val = -val;  // left X carries the minus sign
        } else {
          const cplx pref(0.0, std::sqrt(2.0) * lam / std::sqrt(std::abs(lam)));
          val = pref * (su * up + sd * down);
        }
        out.at(n, m, k) = val;
      }
    }
  }
  return out;
}

// --- gradient / divergence ---------------------------------------------------

inline HorizontalField gradient_h(const SpectralField& f) {
  const int d = f.grid().d;
  std::vector<SpectralField> comps;
  comps.reserve(2 * d);
  for (int j = 1; j <= d; ++j)
    comps.push_back(apply_ladder(f, {Ladder::left_x, j}));
  for (int j = 1; j <= d; ++j)
    comps.push_back(apply_ladder(f, {Ladder::left_xi, j}));
  return HorizontalField(std::move(comps));
}

inline SpectralField divergence_h(const HorizontalField& u) {
  const int d = u.grid().d;
  SpectralField acc = apply_ladder(u[0], {Ladder::left_x, 1});
  for (int j = 2; j <= d; ++j)
    acc = acc + apply_ladder(u[j - 1], {Ladder::left_x, j});
  for (int j = 1; j <= d; ++j)
    acc = acc + apply_ladder(u[d + j - 1], {Ladder::left_xi, j});
  return acc;
}

// componentwise ladder on a horizontal field
inline HorizontalField apply_ladder(const HorizontalField& u, const LadderSpec& L) {
  std::vector<SpectralField> comps;
  comps.reserve(u.n_components());
  for (int j = 0; j < u.n_components(); ++j)
    comps.push_back(apply_ladder(u[j], L));
  return HorizontalField(std::move(comps));
}

// --- commutators --------------------------------------------------------------

using LinearOp = std::function<SpectralField(const SpectralField&)>;

inline SpectralField commutator(const SpectralField& f, const LinearOp& A,
                                const LinearOp& B) {
  return A(B(f)) - B(A(f));
}

inline LinearOp ladder_op(LadderSpec L) {
  return [L](const SpectralField& f) { return apply_ladder(f, L); };
}

inline LinearOp symbol_op(SymbolSpec s) {
  return [s](const SpectralField& f) { return apply_symbol(f, s); };
}

}  // namespace hnse
