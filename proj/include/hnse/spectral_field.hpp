#pragma once

// Coefficient tensors F(n, m, lambda) on a FrequencyGrid, the weighted
// frequency-space inner product, Sobolev-type norms and the exact dilation
// action on geometric grids.

#include <cmath>
#include <complex>
#include <vector>

#include "hnse/frequency_grid.hpp"

namespace hnse {

class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(GridPtr grid)
      : grid_(std::move(grid)), coeffs_(grid_->coeff_count(), cplx(0, 0)) {}

  const FrequencyGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  // storage order: (n-major, m, lambda)
  int index(int n_lin, int m_lin, int k) const {
    const int nm = grid_->mode_count();
    return (n_lin * nm + m_lin) * grid_->n_lambda() + k;
  }
  cplx& at(int n_lin, int m_lin, int k) { return coeffs_[index(n_lin, m_lin, k)]; }
  const cplx& at(int n_lin, int m_lin, int k) const {
    return coeffs_[index(n_lin, m_lin, k)];
  }

  std::vector<cplx>& data() { return coeffs_; }
  const std::vector<cplx>& data() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  bool finite() const {
    for (const auto& c : coeffs_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }

  double max_abs() const {
    double v = 0.0;
    for (const auto& c : coeffs_) v = std::max(v, std::abs(c));
    return v;
  }

  // Band-limited interior test: all coefficients vanish whenever any
  // component of n or m exceeds M - margin.
  bool interior(int margin) const {
    const auto mi = grid_->modes();
    const int nm = mi.count();
    const int nl = grid_->n_lambda();
    for (int n = 0; n < nm; ++n)
      for (int m = 0; m < nm; ++m) {
        if (max_component(mi, n) <= grid_->M - margin &&
            max_component(mi, m) <= grid_->M - margin)
          continue;
        for (int k = 0; k < nl; ++k)
          if (at(n, m, k) != cplx(0, 0)) return false;
      }
    return true;
  }

  static int max_component(const ModeIndexer& mi, int lin) {
    int v = 0;
    for (int j = 0; j < mi.d; ++j) v = std::max(v, mi.component(lin, j));
    return v;
  }

private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

inline void check_same_grid(const SpectralField& a, const SpectralField& b) {
  require(a.grid().same_as(b.grid()), "fields live on different grids");
}

// --- linear arithmetic --------------------------------------------------

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a, b);
  SpectralField r = a;
  for (int i = 0; i < r.size(); ++i) r.data()[i] += b.data()[i];
  return r;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a, b);
  SpectralField r = a;
  for (int i = 0; i < r.size(); ++i) r.data()[i] -= b.data()[i];
  return r;
}

inline SpectralField operator*(cplx s, const SpectralField& a) {
  SpectralField r = a;
  for (auto& c : r.data()) c *= s;
  return r;
}

inline SpectralField operator*(double s, const SpectralField& a) {
  return cplx(s, 0) * a;
}

// Weighted frequency pairing sum_{n,m,k} f * conj(g) * w_k. Dividing by
// plancherel_constant(d) gives the physical L^2 pairing.
inline cplx inner_product(const SpectralField& f, const SpectralField& g) {
  check_same_grid(f, g);
  const int nm = f.grid().mode_count();
  const int nl = f.grid().n_lambda();
  const auto& w = f.grid().lambda_weights;
  cplx acc(0, 0);
  for (int nmi = 0; nmi < nm * nm; ++nmi) {
    const cplx* fa = f.data().data() + static_cast<std::size_t>(nmi) * nl;
    const cplx* ga = g.data().data() + static_cast<std::size_t>(nmi) * nl;
    for (int k = 0; k < nl; ++k) acc += fa[k] * std::conj(ga[k]) * w[k];
  }
  return acc;
}

inline double norm_sq(const SpectralField& f) {
  return inner_product(f, f).real();
}

// --- Sobolev norms --------------------------------------------------------

enum class NormKind { left_hom, right_hom, left_inhom, right_inhom, mixed };

// Raw weighted sum; multiply by 2^{d-1}/pi^{d+1} for the physical value.
// mixed uses sigma = (1 + 4|lambda|(2|m|+d))^l * (4|lambda|(2|n|+d))^{l2}.
inline double sobolev_norm_sq(const SpectralField& f, NormKind kind, double l,
                              double l2 = 0.0) {
  const auto& g = f.grid();
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();

  std::vector<int> abs_sum(nm);
  for (int i = 0; i < nm; ++i) abs_sum[i] = mi.abs_sum(i);

  double acc = 0.0;
  for (int n = 0; n < nm; ++n) {
    for (int m = 0; m < nm; ++m) {
      for (int k = 0; k < nl; ++k) {
        const cplx c = f.at(n, m, k);
        if (c == cplx(0, 0)) continue;
        const double lam = g.lambda_nodes[k];
        const double em = g.eigenvalue(lam, abs_sum[m]);
        const double en = g.eigenvalue(lam, abs_sum[n]);
        double sigma;
        switch (kind) {
          case NormKind::left_hom:    sigma = std::pow(em, l); break;
          case NormKind::right_hom:   sigma = std::pow(en, l); break;
          case NormKind::left_inhom:  sigma = std::pow(1.0 + em, l); break;
          case NormKind::right_inhom: sigma = std::pow(1.0 + en, l); break;
          case NormKind::mixed:
            sigma = std::pow(1.0 + em, l) * std::pow(en, l2);
            break;
          default: sigma = 1.0;
        }
        acc += std::norm(c) * sigma * g.lambda_weights[k];
      }
    }
  }
  return acc;
}

// --- dilation (geometric grids) -------------------------------------------
//
// Frequency action of f -> f o delta_mu with mu = r^{p/2}: the coefficient at
// lambda reads the input at lambda/mu^2 (an index shift by p on the geometric
// ladder) scaled by mu^{-Q}.
inline SpectralField dilate(const SpectralField& f, int p) {
  const auto& g = f.grid();
  require(g.mode == GridMode::geometric, "dilate: geometric grid required");
  if (p == 0) return f;

  const int count = g.n_lambda() / 2;  // nodes per sign
  const int nl = g.n_lambda();
  const int nm = g.mode_count();
  const double r = std::abs(g.lambda_nodes[count + 1] / g.lambda_nodes[count]);
  const double mu = std::pow(r, 0.5 * p);
  const double scale = std::pow(mu, -g.q_dimension());

  // node k belongs to geometric index j: negatives are stored reversed
  auto geo_index = [&](int k) { return k < count ? count - 1 - k : k - count; };
  auto node_at = [&](bool neg, int j) { return neg ? count - 1 - j : count + j; };

  SpectralField out(f.grid_ptr());
  for (int nmi = 0; nmi < nm * nm; ++nmi) {
    const cplx* src = f.data().data() + static_cast<std::size_t>(nmi) * nl;
    cplx* dst = out.data().data() + static_cast<std::size_t>(nmi) * nl;
    for (int k = 0; k < nl; ++k) {
      if (src[k] == cplx(0, 0)) continue;
      const int j = geo_index(k) + p;  // output geometric index
      if (j < 0 || j >= count)
        throw error("dilate: shift leaves the covered band with nonzero mass");
      dst[node_at(k < count, j)] = scale * src[k];
    }
  }
  return out;
}

// --- horizontal vector fields ----------------------------------------------

class HorizontalField {
public:
  HorizontalField() = default;
  explicit HorizontalField(GridPtr grid) {
    comps_.assign(2 * grid->d, SpectralField(grid));
  }
  explicit HorizontalField(std::vector<SpectralField> comps)
      : comps_(std::move(comps)) {
    require(!comps_.empty() &&
                static_cast<int>(comps_.size()) == 2 * comps_[0].grid().d,
            "horizontal field needs 2d components");
    for (const auto& c : comps_) check_same_grid(c, comps_[0]);
  }

  int n_components() const { return static_cast<int>(comps_.size()); }
  SpectralField& operator[](int j) { return comps_[j]; }
  const SpectralField& operator[](int j) const { return comps_[j]; }
  const FrequencyGrid& grid() const { return comps_[0].grid(); }
  const GridPtr& grid_ptr() const { return comps_[0].grid_ptr(); }

private:
  std::vector<SpectralField> comps_;
};

inline HorizontalField operator+(const HorizontalField& a, const HorizontalField& b) {
  std::vector<SpectralField> c;
  for (int j = 0; j < a.n_components(); ++j) c.push_back(a[j] + b[j]);
  return HorizontalField(std::move(c));
}

inline HorizontalField operator-(const HorizontalField& a, const HorizontalField& b) {
  std::vector<SpectralField> c;
  for (int j = 0; j < a.n_components(); ++j) c.push_back(a[j] - b[j]);
  return HorizontalField(std::move(c));
}

inline HorizontalField operator*(double s, const HorizontalField& a) {
  std::vector<SpectralField> c;
  for (int j = 0; j < a.n_components(); ++j) c.push_back(s * a[j]);
  return HorizontalField(std::move(c));
}

inline cplx inner_product(const HorizontalField& a, const HorizontalField& b) {
  cplx acc(0, 0);
  for (int j = 0; j < a.n_components(); ++j) acc += inner_product(a[j], b[j]);
  return acc;
}

inline double norm_sq(const HorizontalField& a) {
  return inner_product(a, a).real();
}

inline double sobolev_norm_sq(const HorizontalField& a, NormKind kind, double l,
                              double l2 = 0.0) {
  double acc = 0.0;
  for (int j = 0; j < a.n_components(); ++j)
    acc += sobolev_norm_sq(a[j], kind, l, l2);
  return acc;
}

}  // namespace hnse
