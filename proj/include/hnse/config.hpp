#pragma once

// Flat `key = value` run configuration with [grid] [stepper] [init] [output]
// sections; `problem` and the weight lists live outside any section.
// Unknown keys are rejected so typos do not silently fall back to defaults.

#include <fstream>
#include <sstream>
#include <string>

#include "hnse/diagnostics.hpp"

namespace hnse {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw error("config: bad boolean for " + key + ": " + v);
}

inline std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(std::stod(piece));
  }
  return out;
}

}  // namespace detail

inline Problem parse_problem(const std::string& v) {
  if (v == "verify") return Problem::verify;
  if (v == "heat") return Problem::heat;
  if (v == "stokes") return Problem::stokes;
  if (v == "nsh") return Problem::nsh;
  if (v == "nsh_twin") return Problem::nsh_twin;
  if (v == "dothd_ramp") return Problem::dothd_ramp;
  throw error("config: unknown problem " + v);
}

inline SimulationConfig parse_config_text(std::istream& in) {
  SimulationConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = detail::trim(line.substr(1, line.size() - 2));
      require(section == "grid" || section == "stepper" || section == "init" ||
                  section == "output",
              "config: unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    require(eq != std::string::npos,
            "config: expected key = value at line " + std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));

    auto unknown = [&]() -> error {
      return error("config: unknown key '" + key + "' in section [" + section + "]");
    };

    if (section.empty()) {
      if (key == "problem") cfg.problem = parse_problem(val);
      else if (key == "sigmas" || key == "sigma_list") cfg.sigma_list = detail::parse_list(val);
      else if (key == "delta_a") cfg.delta_a = std::stod(val);
      else if (key == "delta_rate") cfg.delta_rate = std::stod(val);
      else throw unknown();
    } else if (section == "grid") {
      if (key == "d") cfg.d = std::stoi(val);
      else if (key == "hermite_cutoff" || key == "M") cfg.M = std::stoi(val);
      else if (key == "mode")
        cfg.mode = val == "geometric" ? GridMode::geometric
                 : val == "uniform_periodic"
                     ? GridMode::uniform_periodic
                     : throw error("config: unknown grid mode " + val);
      else if (key == "lambda0") cfg.lambda0 = std::stod(val);
      else if (key == "ratio") cfg.ratio = std::stod(val);
      else if (key == "count") cfg.count = std::stoi(val);
      else if (key == "s_period") cfg.s_period = std::stod(val);
      else if (key == "ns" || key == "n_s") cfg.n_s = std::stoi(val);
      else if (key == "friedrichs_k" || key == "k") cfg.friedrichs_k = std::stoi(val);
      else if (key == "ny") cfg.ny = std::stoi(val);
      else if (key == "y_scale") cfg.y_scale = std::stod(val);
      else throw unknown();
    } else if (section == "stepper") {
      if (key == "dt") cfg.dt = std::stod(val);
      else if (key == "T" || key == "t_final") cfg.t_final = std::stod(val);
      else if (key == "scheme")
        cfg.scheme = val == "exact_diagonal" ? Scheme::exact_diagonal
                   : val == "etd_rk2"
                       ? Scheme::etd_rk2
                       : throw error("config: unknown scheme " + val);
      else if (key == "dealias") cfg.dealias = detail::parse_bool(val, key);
      else if (key == "cfl_guard") cfg.cfl_guard = std::stod(val);
      else throw unknown();
    } else if (section == "init") {
      if (key == "preset") cfg.preset = val;
      else if (key == "amplitude") cfg.amplitude = std::stod(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else throw unknown();
    } else {  // output
      if (key == "csv") cfg.csv_name = val;
      else if (key == "summary") cfg.summary_name = val;
      else if (key == "state") cfg.state_name = val;
      else if (key == "twin_csv") cfg.twin_csv_name = val;
      else throw unknown();
    }
  }
  return cfg;
}

inline SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open " + path);
  return parse_config_text(in);
}

}  // namespace hnse
