// Command-line front end.
//
//   hnse verify [--suite NAME] [--json FILE]
//   hnse run --config FILE [--out DIR]
//   hnse radius --input STATE
//   hnse dump-hermite [--lambda L] [--max-index M] [--count N] [--output FILE]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical abort.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hnse/config.hpp"
#include "hnse/diagnostics.hpp"
#include "hnse/verify.hpp"

namespace {

int run_verify(const std::string& suite_name, const std::string& json_path) {
  std::vector<hnse::Suite> suites;
  if (suite_name.empty() || suite_name == "all") {
    for (const auto& n : hnse::suite_names()) suites.push_back(hnse::run_suite(n));
  } else {
    suites.push_back(hnse::run_suite(suite_name));
  }

  bool all_pass = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& s : suites) {
    nlohmann::json js;
    js["suite"] = s.name;
    js["pass"] = s.pass;
    auto checks = nlohmann::json::array();
    for (const auto& c : s.checks) {
      std::printf("[%s] %s :: %s (value=%.3e, bound=%s%.3e)\n",
                  c.pass ? "PASS" : "FAIL", s.name.c_str(), c.name.c_str(),
                  c.value, c.greater_is_pass ? ">" : "<=", c.bound);
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"bound", c.bound},
                        {"greater_is_pass", c.greater_is_pass},
                        {"pass", c.pass}});
    }
    js["checks"] = std::move(checks);
    report.push_back(std::move(js));
    all_pass = all_pass && s.pass;
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << report.dump(2) << "\n";
  }
  std::printf("%s\n", all_pass ? "verify: all suites passed" : "verify: FAILURES");
  return all_pass ? 0 : 1;
}

int run_problem(const std::string& config_path, const std::string& out_dir) {
  hnse::SimulationConfig cfg = hnse::parse_config_file(config_path);
  std::filesystem::create_directories(out_dir);
  if (cfg.problem == hnse::Problem::verify)
    return run_verify("all", (std::filesystem::path(out_dir) / "verify.json").string());
  hnse::RunResult result = hnse::run_simulation(cfg);

  const auto csv_path = std::filesystem::path(out_dir) / cfg.csv_name;
  hnse::CsvWriter csv(csv_path.string(), result.series.header());
  for (const auto& r : result.series.records) csv.row(result.series.row(r));

  if (cfg.problem == hnse::Problem::nsh_twin) {
    const auto twin_path = std::filesystem::path(out_dir) / cfg.twin_csv_name;
    hnse::CsvWriter twin(twin_path.string(), {"t", "div_htilde_sq", "gronwall_integral"});
    const auto& t = result.summary["twin_t"];
    const auto& dv = result.summary["twin_divergence"];
    const auto& gi = result.summary["twin_dissipation_integral"];
    for (std::size_t i = 0; i < t.size(); ++i)
      twin.row({t[i].get<double>(), dv[i].get<double>(), gi[i].get<double>()});
  }

  hnse::save_state((std::filesystem::path(out_dir) / cfg.state_name).string(),
                   result.final_state);

  result.summary["csv"] = cfg.csv_name;
  result.summary["state"] = cfg.state_name;
  result.summary["final_radius"] = result.series.records.back().radius;
  std::ofstream summary(std::filesystem::path(out_dir) / cfg.summary_name);
  summary << result.summary.dump(2) << "\n";

  std::printf("run: wrote %s (%zu records)\n", csv_path.string().c_str(),
              result.series.records.size());
  return 0;
}

int run_radius(const std::string& input) {
  hnse::LoadedState st = hnse::load_state(input);
  hnse::HorizontalField u =
      st.is_horizontal() ? st.horizontal()
                         : hnse::HorizontalField(std::vector<hnse::SpectralField>(
                               2 * st.grid->d, st.blocks[0]));
  std::printf("%.17g\n", hnse::analyticity_radius(u));
  return 0;
}

int run_dump_hermite(double lambda, int max_index, int count,
                     const std::string& output) {
  std::ofstream out(output);
  if (!out.good()) {
    std::fprintf(stderr, "dump-hermite: cannot open %s\n", output.c_str());
    return 2;
  }
  out << "x";
  for (int k = 0; k <= max_index; ++k) out << ",h_" << k;
  out << "\n";
  const double sl = std::sqrt(std::abs(lambda));
  const double window = std::sqrt(2.0 * max_index + 3.0) / sl * 1.5;
  std::vector<double> vals(max_index + 1);
  for (int i = 0; i < count; ++i) {
    const double x = -window + 2.0 * window * i / (count - 1);
    hnse::hermite_values(sl * x, max_index, vals.data());
    out << hnse::format_double(x);
    for (int k = 0; k <= max_index; ++k)
      out << "," << hnse::format_double(std::sqrt(sl) * vals[k]);
    out << "\n";
  }
  std::printf("dump-hermite: wrote %s\n", output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for a sub-Riemannian fluid model"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run named invariant suites");
  std::string suite_name, json_path;
  verify->add_option("--suite", suite_name, "suite name (default: all)");
  verify->add_option("--json", json_path, "write per-check residuals to FILE");

  auto* run = app.add_subcommand("run", "run a configured experiment");
  std::string config_path, out_dir = ".";
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory");

  auto* radius = app.add_subcommand("radius", "estimate the vertical analyticity radius");
  std::string input;
  radius->add_option("--input", input, "HNSE state file")->required();

  auto* dump = app.add_subcommand("dump-hermite", "CSV samples of the basis functions");
  double lambda = 1.0;
  int max_index = 8, count = 201;
  std::string output = "hermite.csv";
  dump->add_option("--lambda", lambda, "frequency parameter (nonzero)");
  dump->add_option("--max-index", max_index, "highest index to dump");
  dump->add_option("--count", count, "sample count");
  dump->add_option("--output", output, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return run_verify(suite_name, json_path);
    if (*run) return run_problem(config_path, out_dir);
    if (*radius) return run_radius(input);
    if (*dump) return run_dump_hermite(lambda, max_index, count, output);
  } catch (const hnse::numerical_abort& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const hnse::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
