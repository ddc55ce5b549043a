#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hnse/diagnostics.hpp"
#include "hnse/fields_random.hpp"

using namespace hnse;

namespace {

// field whose right-weighted mass per |lambda| ring is exactly e^{-2R|la|}
HorizontalField synthetic_decay(GridPtr g, double R) {
  HorizontalField u(g);
  const int nl = g->n_lambda();
  for (int k = nl / 2; k < nl; ++k) {
    const double la = g->lambda_nodes[k];
    const double sigma = std::pow(g->eigenvalue(la, 0), g->d);
    const double c = std::exp(-R * la) / std::sqrt(2.0 * g->lambda_weights[k] * sigma);
    u[0].at(0, 0, k) = cplx(c, 0);
    u[0].at(0, 0, nl - 1 - k) = cplx(c, 0);
  }
  return u;
}

}  // namespace

TEST_CASE("radius estimator recovers a synthetic decay rate") {
  auto g = make_uniform_grid(1, 4, 2.0 * pi, 32);  // |lambda| = 1..16
  const double R = 0.7;
  HorizontalField u = synthetic_decay(g, R);
  const double rhat = analyticity_radius(u);
  CHECK(rhat > 0.63);
  CHECK(rhat < 0.77);
}

TEST_CASE("radius estimator on a flat spectrum is zero") {
  auto g = make_uniform_grid(1, 4, 2.0 * pi, 16);
  HorizontalField u = synthetic_decay(g, 0.0);
  CHECK(analyticity_radius(u) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("radius estimator error cases") {
  auto g = make_uniform_grid(1, 2, 2.0 * pi, 16);
  CHECK_THROWS_AS(analyticity_radius(HorizontalField(g)), error);
  HorizontalField two_bins(g);
  two_bins[0].at(0, 0, 8) = cplx(1, 0);
  two_bins[0].at(0, 0, 9) = cplx(1, 0);
  CHECK_THROWS_AS(analyticity_radius(two_bins), error);
}

TEST_CASE("heat flow grows the estimated radius linearly") {
  auto g = make_uniform_grid(1, 4, 2.0 * pi, 16);
  HorizontalField u = synthetic_decay(g, 0.1);
  const double r0 = analyticity_radius(u);
  double prev = r0;
  for (double t : {0.05, 0.1, 0.2}) {
    const double rt = analyticity_radius(step_heat(u, t));
    // all mass at m = 0: decay e^{-4 la t} per ring, so R grows by >= 0.9 * 4d * t
    CHECK(rt >= r0 + 0.9 * 4.0 * t);
    CHECK(rt >= prev);
    prev = rt;
  }
}

TEST_CASE("weighted norm against a hand-built sum") {
  auto g = make_uniform_grid(1, 2, 2.0 * pi, 8);
  HorizontalField u(g);
  const int k2 = lambda_index_of(*g, 2.0);
  u[0].at(1, 0, k2) = cplx(2, 0);  // |n| = 1
  const double zeta = 0.3;
  const double expect = 4.0 * std::exp(2.0 * zeta * 2.0) *
                        std::pow(4.0 * 2.0 * 3.0, 1.0) * g->lambda_weights[k2] /
                        plancherel_constant(1);
  CHECK(weighted_norm_sq(u, zeta, NormKind::right_hom) == doctest::Approx(expect));
  CHECK_THROWS_AS(weighted_norm_sq(u, 500.0, NormKind::right_hom), error);
}

TEST_CASE("heat run diagnostics") {
  SimulationConfig cfg;
  cfg.problem = Problem::heat;
  cfg.mode = GridMode::uniform_periodic;
  cfg.M = 4;
  cfg.n_s = 8;
  cfg.friedrichs_k = 9;
  cfg.dt = 0.01;
  cfg.t_final = 0.5;
  cfg.sigma_list = {1.0, 2.0, 3.5};
  cfg.preset = "gauss_mode";
  cfg.amplitude = 1.0;
  RunResult rr = run_simulation(cfg);
  REQUIRE(rr.series.records.size() == 51);

  // weighted columns are monotone for every sigma < 4d and the energy ledger
  // closes at the diagonal-exact level; the radius estimate never decreases
  for (std::size_t i = 1; i < rr.series.records.size(); ++i) {
    const auto& prev = rr.series.records[i - 1];
    const auto& cur = rr.series.records[i];
    for (std::size_t s = 0; s < cfg.sigma_list.size(); ++s)
      CHECK(cur.analytic[s] <= prev.analytic[s] * (1 + 1e-12));
    CHECK(cur.diss_residual < 1e-12);
    CHECK(cur.radius >= prev.radius - 1e-12);
    CHECK(cur.l2_sq <= prev.l2_sq);
  }
  const auto h = rr.series.header();
  REQUIRE(h.size() == 10);
  CHECK(h[4] == "analytic_sigma_1.0");
  CHECK(h[6] == "analytic_sigma_3.5");
}

TEST_CASE("nsh run is deterministic and monotone") {
  SimulationConfig cfg;
  cfg.problem = Problem::nsh;
  cfg.M = 4;
  cfg.n_s = 8;
  cfg.ny = 40;
  cfg.friedrichs_k = 9;
  cfg.dt = 1e-3;
  cfg.t_final = 0.02;
  cfg.sigma_list = {2.0};
  cfg.preset = "leray_random";
  cfg.amplitude = 0.05;
  cfg.seed = 11;

  RunResult a = run_simulation(cfg);
  RunResult b = run_simulation(cfg);
  REQUIRE(a.series.records.size() == b.series.records.size());
  for (std::size_t i = 0; i < a.series.records.size(); ++i) {
    const auto ra = a.series.row(a.series.records[i]);
    const auto rb = b.series.row(b.series.records[i]);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t j = 0; j < ra.size(); ++j)
      CHECK(format_double(ra[j]) == format_double(rb[j]));
  }
  for (std::size_t i = 1; i < a.series.records.size(); ++i) {
    CHECK(a.series.records[i].l2_sq <=
          a.series.records[i - 1].l2_sq * (1 + 1e-6));
    CHECK(std::isfinite(a.series.records[i].radius));
  }
  CHECK(a.summary["max_orthogonality_residual"].get<double>() < 1e-7);
}

TEST_CASE("twin run produces a usable stability fit") {
  SimulationConfig cfg;
  cfg.problem = Problem::nsh_twin;
  cfg.M = 4;
  cfg.n_s = 8;
  cfg.ny = 40;
  cfg.friedrichs_k = 9;
  cfg.dt = 1e-3;
  cfg.t_final = 0.05;
  cfg.preset = "leray_random";
  cfg.amplitude = 0.05;
  cfg.seed = 3;
  RunResult rr = run_simulation(cfg);
  CHECK(rr.summary.contains("gronwall_c_hat"));
  const double r2 = rr.summary["gronwall_r_squared"].get<double>();
  const double ratio = rr.summary["gronwall_endpoint_ratio"].get<double>();
  CHECK(r2 > 0.9);
  CHECK(ratio < 1.05);
  CHECK(rr.summary["twin_divergence"].size() == 51);
}

TEST_CASE("ramped weight stays bounded for small data") {
  SimulationConfig cfg;
  cfg.problem = Problem::dothd_ramp;
  cfg.M = 4;
  cfg.n_s = 8;
  cfg.ny = 40;
  cfg.friedrichs_k = 9;
  cfg.dt = 1e-3;
  cfg.t_final = 0.05;
  cfg.preset = "leray_random";
  cfg.amplitude = 0.05;
  cfg.seed = 5;
  cfg.delta_a = 0.1;
  cfg.delta_rate = 2.0;
  RunResult rr = run_simulation(cfg);
  CHECK(rr.series.has_extra);
  const double init = rr.series.records.front().extra;
  for (const auto& rec : rr.series.records)
    CHECK(rec.extra <= init * (1 + 1e-4));
  const auto h = rr.series.header();
  CHECK(h.back() == "ramp_dothd_sq");
}
