#pragma once

// Forward and inverse transforms between physical samples f(Y, s) and
// coefficient tensors F(n, m, lambda) on a paired uniform-periodic grid.
//
//   forward:  F(n,m,la) = sum_Y wY W(n,m,la,Y) * [(P/Ns) sum_j e^{-i s_j la} f(Y,s_j)]
//   inverse:  f(Y,s)    = (2^{d-1}/pi^{d+1}) sum_k w_k e^{i s la_k}
//                          sum_{n,m} conj(W(n,m,la_k,Y)) F(n,m,la_k)
//
// Writing the inversion kernel as conj(W) (instead of the equivalent
// W(m,n,la,-Y)) makes forward exactly plancherel_constant(d) times the
// adjoint of inverse under the discrete pairings, independent of quadrature
// error; the nonlinear energy cancellations in the dynamics rely on this.
//
// The Y quadrature is a tensor Gauss-Hermite rule at a reference scale chosen
// from the grid's lambda range; the per-lambda W matrices are dense and
// precomputed once (the dominant kernel, applied as a matrix product).

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "hnse/hermite.hpp"
#include "hnse/spectral_field.hpp"

namespace hnse {

// --- physical grid -----------------------------------------------------------

class PhysicalGrid {
public:
  int d = 1;
  int ny = 0;                      // 1-D node count per Y dimension
  std::vector<double> y_nodes_1d;  // shared by all 2d dimensions
  std::vector<double> y_weights_1d;
  int n_s = 0;
  double s_period = 0.0;

  int y_count() const {
    int c = 1;
    for (int j = 0; j < 2 * d; ++j) c *= ny;
    return c;
  }
  int sample_count() const { return y_count() * n_s; }
  double s_node(int j) const { return s_period * j / n_s; }

  void y_point(int iy, double* out) const {  // decode linear Y index
    for (int j = 2 * d - 1; j >= 0; --j) {
      out[j] = y_nodes_1d[iy % ny];
      iy /= ny;
    }
  }
  double y_weight(int iy) const {
    double w = 1.0;
    for (int j = 0; j < 2 * d; ++j) {
      w *= y_weights_1d[iy % ny];
      iy /= ny;
    }
    return w;
  }

  bool paired_with(const FrequencyGrid& g) const {
    return g.mode == GridMode::uniform_periodic && g.d == d && g.n_s == n_s &&
           g.s_period == s_period;
  }
};

using PhysicalGridPtr = std::shared_ptr<const PhysicalGrid>;

// y_scale = 0 picks 2*sqrt(lambda_min*lambda_max), balancing the quadrature
// across the Gaussian widths e^{-A|Y|^2} met on the grid.
inline PhysicalGridPtr make_physical_grid(const FrequencyGrid& fgrid, int ny,
                                          double y_scale = 0.0) {
  require(fgrid.mode == GridMode::uniform_periodic,
          "make_physical_grid: uniform_periodic frequency grid required");
  require(ny >= fgrid.M + 2, "make_physical_grid: ny too small for cutoff");
  auto p = std::make_shared<PhysicalGrid>();
  p->d = fgrid.d;
  p->ny = ny;
  p->n_s = fgrid.n_s;
  p->s_period = fgrid.s_period;
  const double a0 = y_scale > 0.0
                        ? y_scale
                        : 2.0 * std::sqrt(fgrid.lambda_min_abs() * fgrid.lambda_max_abs());
  QuadratureRule rule = gauss_hermite_scaled(ny, a0);
  p->y_nodes_1d = rule.nodes;
  p->y_weights_1d = rule.weights;
  return p;
}

class PhysicalField {
public:
  PhysicalField() = default;
  explicit PhysicalField(PhysicalGridPtr grid)
      : grid_(std::move(grid)), samples_(grid_->sample_count(), cplx(0, 0)) {}

  const PhysicalGrid& grid() const { return *grid_; }
  const PhysicalGridPtr& grid_ptr() const { return grid_; }

  cplx& at(int iy, int is) { return samples_[static_cast<std::size_t>(iy) * grid_->n_s + is]; }
  const cplx& at(int iy, int is) const {
    return samples_[static_cast<std::size_t>(iy) * grid_->n_s + is];
  }
  std::vector<cplx>& data() { return samples_; }
  const std::vector<cplx>& data() const { return samples_; }

private:
  PhysicalGridPtr grid_;
  std::vector<cplx> samples_;
};

inline cplx inner_product_phys(const PhysicalField& f, const PhysicalField& g) {
  const auto& pg = f.grid();
  const int ny = pg.y_count();
  const int ns = pg.n_s;
  const double ds = pg.s_period / ns;
  cplx acc(0, 0);
  for (int iy = 0; iy < ny; ++iy) {
    const double wy = pg.y_weight(iy);
    cplx s(0, 0);
    for (int is = 0; is < ns; ++is) s += f.at(iy, is) * std::conj(g.at(iy, is));
    acc += wy * ds * s;
  }
  return acc;
}

inline double norm_sq_phys(const PhysicalField& f) {
  return inner_product_phys(f, f).real();
}

inline double lp_norm_phys(const PhysicalField& f, double p) {
  const auto& pg = f.grid();
  const int ny = pg.y_count();
  const int ns = pg.n_s;
  const double ds = pg.s_period / ns;
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    const double wy = pg.y_weight(iy);
    double s = 0.0;
    for (int is = 0; is < ns; ++is) s += std::pow(std::abs(f.at(iy, is)), p);
    acc += wy * ds * s;
  }
  return std::pow(acc, 1.0 / p);
}

// --- transform plan ------------------------------------------------------------

class TransformPlan {
public:
  TransformPlan(GridPtr fgrid, PhysicalGridPtr pgrid)
      : fg_(std::move(fgrid)),
        pg_(std::move(pgrid)),
        weval_(fg_->d, fg_->M) {
    require(pg_->paired_with(*fg_), "transform: grids are not paired");
    build_w_matrices();
  }

  const FrequencyGrid& fgrid() const { return *fg_; }
  const GridPtr& fgrid_ptr() const { return fg_; }
  const PhysicalGrid& pgrid() const { return *pg_; }
  const PhysicalGridPtr& pgrid_ptr() const { return pg_; }

  // integer s-frequency of lambda node k (lambda_k = 2 pi k_int / P)
  int k_int(int k) const {
    const int half = fg_->n_s / 2;
    return k < half ? k - half : k - half + 1;
  }

  // Forward transform. kmax_active >= 0 limits the computed |k_int| band
  // (remaining coefficients are zero); drop_dc quietly projects out the
  // s-mean instead of rejecting it (products need this).
  SpectralField forward(const PhysicalField& f, int kmax_active = -1,
                        bool drop_dc = false) const {
    require(f.grid().paired_with(*fg_), "forward: unpaired grids");
    const int ny = pg_->y_count();
    const int ns = pg_->n_s;
    const int nl = fg_->n_lambda();
    const int nm2 = fg_->mode_count() * fg_->mode_count();
    const double ds_w = pg_->s_period / ns;

    if (!drop_dc) check_zero_mean(f);

    SpectralField out(fg_);
    std::vector<int> active;
    for (int k = 0; k < nl; ++k)
      if (kmax_active < 0 || std::abs(k_int(k)) <= kmax_active) active.push_back(k);

    parallel_for(static_cast<int>(active.size()), [&](int a) {
      const int k = active[a];
      const int ki = k_int(k);
      // s-DFT bin, weighted by the Y quadrature. The +Nyquist and -Nyquist
      // phases coincide on the sample grid, so both nodes read the same bin;
      // exactness statements assume fields with no Nyquist mass (the dealias
      // band in the dynamics never reaches it).
      std::vector<double> fre(ny), fim(ny);
      std::vector<double> cs(ns), sn(ns);
      for (int j = 0; j < ns; ++j) {
        const double ph = -2.0 * pi * ki * j / ns;
        cs[j] = std::cos(ph);
        sn[j] = std::sin(ph);
      }
      for (int iy = 0; iy < ny; ++iy) {
        const cplx* row = f.data().data() + static_cast<std::size_t>(iy) * ns;
        double re = 0.0, im = 0.0;
        for (int j = 0; j < ns; ++j) {
          re += row[j].real() * cs[j] - row[j].imag() * sn[j];
          im += row[j].real() * sn[j] + row[j].imag() * cs[j];
        }
        const double wy = pg_->y_weight(iy) * ds_w;
        fre[iy] = wy * re;
        fim[iy] = wy * im;
      }
      // W matrix product
      const int pp = pos_index(k);
      const double sgn = fg_->lambda_nodes[k] > 0 ? 1.0 : -1.0;  // conj for la<0
      const double* wre = wre_[pp].data();
      const double* wim = wim_[pp].data();
      for (int r = 0; r < nm2; ++r) {
        const double* ar = wre + static_cast<std::size_t>(r) * ny;
        const double* ai = wim + static_cast<std::size_t>(r) * ny;
        double re = 0.0, im = 0.0;
        for (int iy = 0; iy < ny; ++iy) {
          const double br = ar[iy];
          const double bi = sgn * ai[iy];
          re += br * fre[iy] - bi * fim[iy];
          im += br * fim[iy] + bi * fre[iy];
        }
        out.data()[static_cast<std::size_t>(r) * nl + k] = cplx(re, im);
      }
    });
    return out;
  }

  PhysicalField inverse(const SpectralField& F) const {
    require(F.grid().same_as(*fg_), "inverse: unpaired grids");
    const int ny = pg_->y_count();
    const int ns = pg_->n_s;
    const int nl = fg_->n_lambda();
    const int nm2 = fg_->mode_count() * fg_->mode_count();
    const double cst = 1.0 / plancherel_constant(fg_->d);

    // skip lambda blocks with no mass
    std::vector<int> active;
    for (int k = 0; k < nl; ++k) {
      for (int r = 0; r < nm2; ++r)
        if (F.data()[static_cast<std::size_t>(r) * nl + k] != cplx(0, 0)) {
          active.push_back(k);
          break;
        }
    }

    const int na = static_cast<int>(active.size());
    std::vector<std::vector<double>> gre(na), gim(na);
    parallel_for(na, [&](int a) {
      const int k = active[a];
      const int pp = pos_index(k);
      const double sgn = fg_->lambda_nodes[k] > 0 ? 1.0 : -1.0;
      const double scale = cst * fg_->lambda_weights[k];
      gre[a].assign(ny, 0.0);
      gim[a].assign(ny, 0.0);
      double* outr = gre[a].data();
      double* outi = gim[a].data();
      const double* wre = wre_[pp].data();
      const double* wim = wim_[pp].data();
      for (int r = 0; r < nm2; ++r) {
        const cplx c = scale * F.data()[static_cast<std::size_t>(r) * nl + k];
        if (c == cplx(0, 0)) continue;
        const double* ar = wre + static_cast<std::size_t>(r) * ny;
        const double* ai = wim + static_cast<std::size_t>(r) * ny;
        const double cr = c.real(), ci = c.imag();
        for (int iy = 0; iy < ny; ++iy) {
          // conj(W) * c ; W itself is conjugated when lambda < 0
          const double br = ar[iy];
          const double bi = -sgn * ai[iy];
          outr[iy] += br * cr - bi * ci;
          outi[iy] += br * ci + bi * cr;
        }
      }
    });

    // phase tables e^{i s_j la} per active node, shared across all Y points
    std::vector<std::vector<double>> pc(na), ps(na);
    for (int a = 0; a < na; ++a) {
      pc[a].resize(ns);
      ps[a].resize(ns);
      const int ki = k_int(active[a]);
      for (int j = 0; j < ns; ++j) {
        const double ph = 2.0 * pi * ki * j / ns;
        pc[a][j] = std::cos(ph);
        ps[a][j] = std::sin(ph);
      }
    }
    PhysicalField f(pg_);
    parallel_for(ny, [&](int iy) {
      cplx* row = f.data().data() + static_cast<std::size_t>(iy) * ns;
      for (int a = 0; a < na; ++a) {
        const double gr = gre[a][iy];
        const double gi = gim[a][iy];
        const double* c = pc[a].data();
        const double* s = ps[a].data();
        for (int j = 0; j < ns; ++j)
          row[j] += cplx(gr * c[j] - gi * s[j], gr * s[j] + gi * c[j]);
      }
    });
    return f;
  }

  // Pointwise synthesis at an arbitrary (Y, s); oracle-grade, not fast.
  cplx eval_at(const SpectralField& F, const double* Y, double s) const {
    require(F.grid().same_as(*fg_), "eval_at: unpaired grids");
    const int nl = fg_->n_lambda();
    const int nm = fg_->mode_count();
    const auto mi = fg_->modes();
    const double cst = 1.0 / plancherel_constant(fg_->d);
    std::vector<int> nbuf(fg_->d), mbuf(fg_->d);
    cplx acc(0, 0);
    for (int k = 0; k < nl; ++k) {
      const double lam = fg_->lambda_nodes[k];
      cplx slice(0, 0);
      bool any = false;
      for (int n = 0; n < nm; ++n)
        for (int m = 0; m < nm; ++m) {
          const cplx c = F.at(n, m, k);
          if (c == cplx(0, 0)) continue;
          any = true;
          mi.decode(n, nbuf.data());
          mi.decode(m, mbuf.data());
          slice += std::conj(weval_.value(nbuf.data(), mbuf.data(), lam, Y)) * c;
        }
      if (!any) continue;
      acc += cst * fg_->lambda_weights[k] *
             cplx(std::cos(s * lam), std::sin(s * lam)) * slice;
    }
    return acc;
  }

  const WEvaluator& w_evaluator() const { return weval_; }

private:
  int pos_index(int k) const {
    const int half = fg_->n_lambda() / 2;
    return k >= half ? k - half : half - 1 - k;
  }

  void check_zero_mean(const PhysicalField& f) const {
    const int ny = pg_->y_count();
    const int ns = pg_->n_s;
    double dc = 0.0, tot = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
      const double wy = pg_->y_weight(iy);
      cplx mean(0, 0);
      double e = 0.0;
      for (int is = 0; is < ns; ++is) {
        mean += f.at(iy, is);
        e += std::norm(f.at(iy, is));
      }
      mean /= static_cast<double>(ns);
      dc += wy * std::norm(mean);
      tot += wy * e / ns;
    }
    require(dc <= 1e-24 * tot || tot == 0.0,
            "forward: input has nonzero s-mean (no lambda = 0 node)");
  }

  void build_w_matrices() {
    const int half = fg_->n_lambda() / 2;
    const int ny = pg_->y_count();
    const int nm = fg_->mode_count();
    const int nm2 = nm * nm;
    const int P = fg_->M + 1;
    const int d = fg_->d;
    const auto mi = fg_->modes();

    wre_.assign(half, {});
    wim_.assign(half, {});
    // mode decompositions, hoisted out of the per-Y loop
    std::vector<std::vector<int>> dec(nm, std::vector<int>(d));
    for (int i = 0; i < nm; ++i) mi.decode(i, dec[i].data());

    parallel_for(half, [&](int pp) {
      const double lam = fg_->lambda_nodes[half + pp];  // positive nodes
      const double sl = std::sqrt(lam);
      auto& re = wre_[pp];
      auto& im = wim_[pp];
      re.assign(static_cast<std::size_t>(nm2) * ny, 0.0);
      im.assign(static_cast<std::size_t>(nm2) * ny, 0.0);
      std::vector<double> Y(2 * d);
      std::vector<cplx> block(static_cast<std::size_t>(d) * P * P);
      for (int iy = 0; iy < ny; ++iy) {
        pg_->y_point(iy, Y.data());
        for (int j = 0; j < d; ++j)
          weval_.factor_block(sl * Y[j], sl * Y[j + d],
                              block.data() + static_cast<std::size_t>(j) * P * P);
        for (int n = 0; n < nm; ++n)
          for (int m = 0; m < nm; ++m) {
            cplx w(1, 0);
            for (int j = 0; j < d; ++j)
              w *= block[static_cast<std::size_t>(j) * P * P + dec[n][j] * P +
                         dec[m][j]];
            const std::size_t idx = static_cast<std::size_t>(n * nm + m) * ny + iy;
            re[idx] = w.real();
            im[idx] = w.imag();
          }
      }
    });
  }

  GridPtr fg_;
  PhysicalGridPtr pg_;
  WEvaluator weval_;
  std::vector<std::vector<double>> wre_, wim_;  // per positive lambda node
};

using PlanPtr = std::shared_ptr<const TransformPlan>;

inline PlanPtr make_plan(GridPtr fgrid, PhysicalGridPtr pgrid) {
  return std::make_shared<TransformPlan>(std::move(fgrid), std::move(pgrid));
}

// horizontal-field helpers
inline std::vector<PhysicalField> inverse_each(const TransformPlan& plan,
                                               const HorizontalField& u) {
  std::vector<PhysicalField> out;
  out.reserve(u.n_components());
  for (int j = 0; j < u.n_components(); ++j) out.push_back(plan.inverse(u[j]));
  return out;
}

}  // namespace hnse
