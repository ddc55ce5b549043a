#pragma once

// Experiment orchestration: the vertical analyticity-radius estimator,
// per-step diagnostics records, and the named runners (heat, stokes, nsh,
// twin-run stability, ramped-weight experiment).

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hnse/dynamics.hpp"
#include "hnse/fields_random.hpp"
#include "hnse/io.hpp"

namespace hnse {

// --- analyticity-radius estimator ---------------------------------------------
//
// S(|la|) = right-weighted squared mass per |lambda| ring; the estimator fits
// log S ~ c - 2 R |la| over rings above a relative floor and returns max(R, 0).
// A finite-band surrogate: it measures the exponential decay rate of the
// weighted spectrum, not a true supremum.

struct RadiusBins {
  std::vector<double> abs_lambda;
  std::vector<double> mass;
};

inline RadiusBins radius_bins(const HorizontalField& u) {
  const auto& g = u.grid();
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  std::map<long long, double> acc;  // key: rounded |lambda| scale
  std::map<long long, double> rep;
  const double lmin = g.lambda_min_abs();
  for (int c = 0; c < u.n_components(); ++c)
    for (int n = 0; n < nm; ++n) {
      const int an = mi.abs_sum(n);
      for (int m = 0; m < nm; ++m)
        for (int k = 0; k < nl; ++k) {
          const cplx v = u[c].at(n, m, k);
          if (v == cplx(0, 0)) continue;
          const double al = std::abs(g.lambda_nodes[k]);
          const long long key = std::llround(al / lmin * 1048576.0);
          acc[key] += std::norm(v) * std::pow(g.eigenvalue(al, an), g.d) *
                      g.lambda_weights[k];
          rep[key] = al;
        }
    }
  RadiusBins bins;
  for (const auto& [key, mass] : acc) {
    bins.abs_lambda.push_back(rep[key]);
    bins.mass.push_back(mass);
  }
  return bins;
}

inline double analyticity_radius(const HorizontalField& u) {
  RadiusBins bins = radius_bins(u);
  double peak = 0.0;
  for (double s : bins.mass) peak = std::max(peak, s);
  require(peak > 0.0, "analyticity_radius: field is zero");

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < bins.mass.size(); ++i) {
    if (bins.mass[i] <= 1e-24 * peak) continue;
    xs.push_back(bins.abs_lambda[i]);
    ys.push_back(std::log(bins.mass[i]));
  }
  if (xs.size() < 3)
    throw error("analyticity_radius: fewer than 3 usable lambda bins");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::max(0.0, -0.5 * slope);
}

// weighted norms ||e^{sigma t |Ds|} u||^2 in the right- or left-invariant
// scale of order d (physical normalization)
inline double weighted_norm_sq(const HorizontalField& u, double zeta,
                               NormKind kind) {
  const auto& g = u.grid();
  require(2.0 * zeta * g.lambda_max_abs() <= 700.0,
          "weighted_norm_sq: exponential weight overflow");
  const auto mi = g.modes();
  const int nm = g.mode_count();
  const int nl = g.n_lambda();
  double acc = 0.0;
  for (int c = 0; c < u.n_components(); ++c)
    for (int n = 0; n < nm; ++n) {
      const int an = mi.abs_sum(n);
      for (int m = 0; m < nm; ++m) {
        const int am = mi.abs_sum(m);
        for (int k = 0; k < nl; ++k) {
          const cplx v = u[c].at(n, m, k);
          if (v == cplx(0, 0)) continue;
          const double al = std::abs(g.lambda_nodes[k]);
          const int idx = kind == NormKind::right_hom ? an : am;
          acc += std::norm(v) * std::exp(2.0 * zeta * al) *
                 std::pow(g.eigenvalue(al, idx), g.d) * g.lambda_weights[k];
        }
      }
    }
  return acc / plancherel_constant(g.d);
}

// --- configuration ---------------------------------------------------------------

enum class Problem { verify, heat, stokes, nsh, nsh_twin, dothd_ramp };

struct SimulationConfig {
  Problem problem = Problem::nsh;

  // [grid]
  int d = 1;
  int M = 8;
  GridMode mode = GridMode::uniform_periodic;
  double lambda0 = 0.25, ratio = 2.0;
  int count = 8;             // geometric: positive nodes
  double s_period = 2.0 * pi;
  int n_s = 32;
  int friedrichs_k = 11;
  int ny = 64;
  double y_scale = 0.0;

  // [stepper]
  double dt = 5e-4;
  double t_final = 1.0;
  Scheme scheme = Scheme::etd_rk2;
  bool dealias = true;
  double cfl_guard = 0.5;

  // weights
  std::vector<double> sigma_list = {2.0};
  double delta_a = 0.1, delta_rate = 2.0;  // delta(t) = a + rate * t

  // [init]
  std::string preset = "leray_random";
  double amplitude = 0.05;
  std::uint64_t seed = 1;

  // [output]
  std::string csv_name = "series.csv";
  std::string summary_name = "summary.json";
  std::string state_name = "final.hnse";
  std::string twin_csv_name = "twin_divergence.csv";

  void validate() const {
    require(t_final > 0.0, "config: T must be > 0");
    require(amplitude > 0.0, "config: amplitude must be > 0");
    for (double s : sigma_list)
      require(s > 0.0 && s < 4.0 * d, "config: sigma must lie in (0, 4d)");
    require(delta_rate < 4.0 * d, "config: delta ramp rate must be < 4d");
  }

  GridPtr make_grid() const {
    if (mode == GridMode::geometric)
      return make_geometric_grid(d, M, lambda0, ratio, count);
    return make_uniform_grid(d, M, s_period, n_s);
  }
};

struct TimeRecord {
  double t = 0.0;
  double l2_sq = 0.0;
  double grad_l2_sq = 0.0;
  double htilde_d_sq = 0.0;
  std::vector<double> analytic;  // one per sigma
  double radius = 0.0;
  double diss_residual = 0.0;
  double drift = 0.0;
  double extra = 0.0;  // ramp column when present
};

struct TimeSeries {
  std::vector<double> sigma_list;
  bool has_extra = false;
  std::string extra_name;
  std::vector<TimeRecord> records;

  std::vector<std::string> header() const {
    std::vector<std::string> h = {"t", "l2_sq", "grad_l2_sq", "htilde_d_sq"};
    for (double s : sigma_list) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "analytic_sigma_%.1f", s);
      h.push_back(buf);
    }
    h.push_back("radius");
    h.push_back("diss_residual");
    h.push_back("drift");
    if (has_extra) h.push_back(extra_name);
    return h;
  }

  std::vector<double> row(const TimeRecord& r) const {
    std::vector<double> v = {r.t, r.l2_sq, r.grad_l2_sq, r.htilde_d_sq};
    v.insert(v.end(), r.analytic.begin(), r.analytic.end());
    v.push_back(r.radius);
    v.push_back(r.diss_residual);
    v.push_back(r.drift);
    if (has_extra) v.push_back(r.extra);
    return v;
  }
};

// --- runners -------------------------------------------------------------------

struct RunResult {
  TimeSeries series;
  nlohmann::json summary;
  HorizontalField final_state;
};

namespace detail {

inline double physical(double raw, int d) { return raw / plancherel_constant(d); }

inline TimeRecord make_record(const SimulationConfig& cfg,
                              const HorizontalField& u, double t,
                              double diss_residual, double drift) {
  const int d = u.grid().d;
  TimeRecord r;
  r.t = t;
  r.l2_sq = physical(norm_sq(u), d);
  r.grad_l2_sq = physical(sobolev_norm_sq(u, NormKind::left_hom, 1.0), d);
  r.htilde_d_sq = physical(sobolev_norm_sq(u, NormKind::right_hom, d), d);
  for (double s : cfg.sigma_list)
    r.analytic.push_back(weighted_norm_sq(u, s * t, NormKind::right_hom));
  try {
    r.radius = analyticity_radius(u);
  } catch (const error&) {
    r.radius = 0.0;
  }
  r.diss_residual = diss_residual;
  r.drift = drift;
  return r;
}

inline HorizontalField initial_data(const SimulationConfig& cfg, GridPtr grid,
                                    std::uint64_t seed_shift = 0) {
  const int kmax = cfg.dealias && cfg.mode == GridMode::uniform_periodic
                       ? dealias_kmax(*grid)
                       : -1;
  if (cfg.preset == "gauss_mode")
    return preset_gauss_mode(grid, cfg.friedrichs_k, cfg.amplitude);
  require(cfg.preset == "leray_random", "config: unknown preset " + cfg.preset);
  return preset_leray_random(grid, cfg.friedrichs_k, cfg.amplitude,
                             cfg.seed + seed_shift, kmax);
}

}  // namespace detail

inline RunResult run_heat(const SimulationConfig& cfg) {
  GridPtr grid = cfg.make_grid();
  HorizontalField u = detail::initial_data(cfg, grid);
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  const double e0 = norm_sq(u);

  TimeSeries ts;
  ts.sigma_list = cfg.sigma_list;
  ts.records.push_back(detail::make_record(cfg, u, 0.0, 0.0, 0.0));
  for (int n = 1; n <= steps; ++n) {
    const double e_prev = norm_sq(u);
    const double diss = step_dissipation_exact(u, cfg.dt);
    u = step_heat(u, cfg.dt);
    const double res = std::abs(norm_sq(u) - e_prev + 2.0 * diss) / e0;
    ts.records.push_back(detail::make_record(cfg, u, n * cfg.dt, res, 0.0));
  }

  RunResult out{std::move(ts), {}, std::move(u)};
  out.summary["problem"] = "heat";
  out.summary["steps"] = steps;
  return out;
}

inline RunResult run_stokes(const SimulationConfig& cfg) {
  GridPtr grid = cfg.make_grid();
  HorizontalField u = detail::initial_data(cfg, grid);
  StepperConfig sc{cfg.dt, Scheme::etd_rk2, cfg.friedrichs_k, cfg.dealias,
                   cfg.cfl_guard, pi_h_norm_proxy(grid)};
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  const double e0 = norm_sq(u);

  TimeSeries ts;
  ts.sigma_list = cfg.sigma_list;
  ts.records.push_back(detail::make_record(cfg, u, 0.0, 0.0, 0.0));
  double diss_acc = 0.0;
  for (int n = 1; n <= steps; ++n) {
    const double e_prev = norm_sq(u);
    StepResult st = step_stokes(u, nullptr, sc);
    u = std::move(st.u);
    const double res =
        std::abs(norm_sq(u) - e_prev + 2.0 * st.dissipation + st.removed) / e0;
    diss_acc += st.dissipation;
    ts.records.push_back(detail::make_record(cfg, u, n * cfg.dt, res, st.constraint_drift));
  }

  RunResult out{std::move(ts), {}, std::move(u)};
  out.summary["problem"] = "stokes";
  out.summary["energy_drift"] =
      std::abs(norm_sq(out.final_state) + 2.0 * diss_acc - e0) / e0;
  out.summary["pi_proxy"] = sc.pi_proxy;
  return out;
}

inline RunResult run_nsh(const SimulationConfig& cfg, bool ramp_column = false) {
  GridPtr grid = cfg.make_grid();
  require(grid->mode == GridMode::uniform_periodic,
          "nsh: uniform_periodic grid required");
  PlanPtr plan = make_plan(grid, make_physical_grid(*grid, cfg.ny, cfg.y_scale));
  HorizontalField u = detail::initial_data(cfg, grid);
  StepperConfig sc{cfg.dt, Scheme::etd_rk2, cfg.friedrichs_k, cfg.dealias,
                   cfg.cfl_guard, pi_h_norm_proxy(grid)};
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  const double e0 = norm_sq(u);

  auto ramp_weight = [&](const HorizontalField& v, double t) {
    return weighted_norm_sq(v, cfg.delta_a + cfg.delta_rate * t, NormKind::left_hom);
  };

  TimeSeries ts;
  ts.sigma_list = cfg.sigma_list;
  ts.has_extra = ramp_column;
  ts.extra_name = "ramp_dothd_sq";
  TimeRecord rec0 = detail::make_record(cfg, u, 0.0, 0.0, 0.0);
  if (ramp_column) rec0.extra = ramp_weight(u, 0.0);
  ts.records.push_back(rec0);

  double max_orth = 0.0;
  std::vector<double> orth_samples;
  for (int n = 1; n <= steps; ++n) {
    if ((n - 1) % 10 == 0) {
      HorizontalField conv = convect(*plan, u, cfg.friedrichs_k, cfg.dealias);
      const double denom =
          std::sqrt(norm_sq(conv) * norm_sq(u)) + 1e-300;
      const double orth = std::abs(inner_product(conv, u)) / denom;
      orth_samples.push_back(orth);
      max_orth = std::max(max_orth, orth);
    }
    const double e_prev = norm_sq(u);
    StepResult st = step_nsh(*plan, u, sc);
    u = std::move(st.u);
    const double res = std::abs(norm_sq(u) - e_prev + 2.0 * st.dissipation -
                                st.work + st.removed) /
                       e0;
    TimeRecord rec = detail::make_record(cfg, u, n * cfg.dt, res, st.constraint_drift);
    if (ramp_column) rec.extra = ramp_weight(u, n * cfg.dt);
    ts.records.push_back(rec);
  }

  RunResult out{std::move(ts), {}, std::move(u)};
  out.summary["problem"] = ramp_column ? "dothd_ramp" : "nsh";
  out.summary["pi_proxy"] = sc.pi_proxy;
  out.summary["max_orthogonality_residual"] = max_orth;
  out.summary["orthogonality_samples"] = orth_samples;
  out.summary["radius_surrogates"] = {
      {"weighted_norm", "analytic_sigma columns stay bounded by their t=0 value"},
      {"slope_fit", "radius column fits the spectral decay over bins above 1e-24 of peak"}};
  return out;
}

struct GronwallFit {
  double c_hat = 0.0;
  double r_squared = 0.0;
  double endpoint_ratio = 0.0;  // D(T) / (D(0) e^{c_hat G(T)})
};

inline RunResult run_nsh_twin(const SimulationConfig& cfg) {
  GridPtr grid = cfg.make_grid();
  PlanPtr plan = make_plan(grid, make_physical_grid(*grid, cfg.ny, cfg.y_scale));
  HorizontalField u = detail::initial_data(cfg, grid);

  // twin: one interior mode pair scaled by 1 + 1e-3, hermitian-symmetrically
  HorizontalField v = u;
  {
    Rng rng(cfg.seed + 7777);
    const int nl = grid->n_lambda();
    auto& f = v[0];
    std::vector<int> candidates;
    for (int i = 0; i < f.size(); ++i)
      if (std::abs(f.data()[i]) > 1e-12) candidates.push_back(i);
    require(!candidates.empty(), "twin: empty initial data");
    const int pick = candidates[static_cast<int>(rng.uniform() * candidates.size())];
    const int row = pick / nl;
    const int k = pick % nl;
    const int km = nl - 1 - k;
    f.data()[static_cast<std::size_t>(row) * nl + k] *= 1.001;
    f.data()[static_cast<std::size_t>(row) * nl + km] *= 1.001;
    v = leray(v);  // the perturbed field re-enters the divergence-free set
  }

  StepperConfig sc{cfg.dt, Scheme::etd_rk2, cfg.friedrichs_k, cfg.dealias,
                   cfg.cfl_guard, pi_h_norm_proxy(grid)};
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  const int d = cfg.d;

  // a short burn-in turns both fields into genuine trajectories before the
  // comparison starts; the stability bound applies from any initial time, and
  // this discards the projection transient of the artificial perturbation
  const int burn_in = 10;
  for (int b = 0; b < burn_in; ++b) {
    u = step_nsh(*plan, u, sc).u;
    v = step_nsh(*plan, v, sc).u;
  }

  auto htd = [&](const HorizontalField& w) {
    return detail::physical(sobolev_norm_sq(w, NormKind::right_hom, d), d);
  };
  auto grad_htd = [&](const HorizontalField& w) {
    double acc = 0.0;
    for (int i = 0; i < w.n_components(); ++i)
      acc += sobolev_norm_sq(gradient_h(w[i]), NormKind::right_hom, d);
    return detail::physical(acc, d);
  };

  std::vector<double> t_axis = {0.0};
  std::vector<double> div_curve = {htd(u - v)};
  std::vector<double> g_curve = {0.0};
  double g_acc = 0.0;
  double gu_prev = grad_htd(u), gv_prev = grad_htd(v);

  TimeSeries ts;
  ts.sigma_list = cfg.sigma_list;
  ts.records.push_back(detail::make_record(cfg, u, 0.0, 0.0, 0.0));
  for (int n = 1; n <= steps; ++n) {
    u = step_nsh(*plan, u, sc).u;
    v = step_nsh(*plan, v, sc).u;
    const double gu = grad_htd(u);
    const double gv = grad_htd(v);
    g_acc += cfg.dt * 0.5 * (gu_prev + gu + gv_prev + gv);
    gu_prev = gu;
    gv_prev = gv;
    t_axis.push_back(n * cfg.dt);
    div_curve.push_back(htd(u - v));
    g_curve.push_back(g_acc);
    ts.records.push_back(detail::make_record(cfg, u, n * cfg.dt, 0.0, 0.0));
  }

  // fit ln D(t) - ln D(0) = c_hat * G(t) through the origin
  GronwallFit fit;
  {
    double sgy = 0.0, sgg = 0.0;
    std::vector<double> ys;
    for (std::size_t i = 1; i < div_curve.size(); ++i) {
      const double y = std::log(div_curve[i] / div_curve[0]);
      ys.push_back(y);
      sgy += g_curve[i] * y;
      sgg += g_curve[i] * g_curve[i];
    }
    fit.c_hat = sgg > 0 ? sgy / sgg : 0.0;
    double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
    for (double y : ys) mean += y;
    mean /= ys.empty() ? 1.0 : static_cast<double>(ys.size());
    for (std::size_t i = 1; i < div_curve.size(); ++i) {
      const double y = std::log(div_curve[i] / div_curve[0]);
      ss_res += (y - fit.c_hat * g_curve[i]) * (y - fit.c_hat * g_curve[i]);
      ss_tot += (y - mean) * (y - mean);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.endpoint_ratio =
        div_curve.back() / (div_curve[0] * std::exp(fit.c_hat * g_curve.back()));
  }

  RunResult out{std::move(ts), {}, std::move(u)};
  out.summary["problem"] = "nsh_twin";
  out.summary["burn_in_steps"] = burn_in;
  out.summary["gronwall_c_hat"] = fit.c_hat;
  out.summary["gronwall_r_squared"] = fit.r_squared;
  out.summary["gronwall_endpoint_ratio"] = fit.endpoint_ratio;
  out.summary["twin_t"] = t_axis;
  out.summary["twin_divergence"] = div_curve;
  out.summary["twin_dissipation_integral"] = g_curve;
  return out;
}

inline RunResult run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  switch (cfg.problem) {
    case Problem::heat: return run_heat(cfg);
    case Problem::stokes: return run_stokes(cfg);
    case Problem::nsh: return run_nsh(cfg);
    case Problem::dothd_ramp: return run_nsh(cfg, /*ramp_column=*/true);
    case Problem::nsh_twin: return run_nsh_twin(cfg);
    default: throw error("run: problem not runnable here");
  }
}

}  // namespace hnse
