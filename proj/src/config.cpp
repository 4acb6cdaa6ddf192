#include "slelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "slelab/report.hpp"

namespace slelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, sep)) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : split(text, ',')) out.push_back(parse_double(key, cell));
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids = {"jacobi",   "gradient", "appendix",       "cutoff",
                                               "doubling", "measures", "minimal-surface"};
  return ids;
}

ConstraintSpec RunConfig::constraint_spec() const {
  if (constraint == "cone") return ConstraintSpec::gamma_cone(n);
  return ConstraintSpec::sigma2_lower(eps);
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["run.output"] = output;
  kv["problem.n"] = std::to_string(n);
  kv["problem.constraint"] = constraint;
  kv["problem.eps"] = fmt(eps);
  kv["problem.theta"] = theta ? fmt(*theta) : "";
  kv["problem.spectrum"] = fmt(spectrum);
  kv["problem.amplitude"] = fmt(amplitude);
  kv["grid.half_width"] = fmt(half_width);
  kv["grid.points"] = std::to_string(points);
  kv["family.seed"] = std::to_string(seed);
  kv["family.count"] = std::to_string(count);
  kv["family.amplitudes"] = fmt(amplitudes);
  kv["family.scales"] = fmt(scales);
  kv["solver.tol"] = fmt(newton_tol);
  kv["solver.max_iter"] = std::to_string(max_iter);
  kv["fuzz.samples"] = std::to_string(samples);
  kv["fuzz.scales"] = fmt(fuzz_scales);
  std::string list;
  for (std::size_t i = 0; i < checks.size(); ++i) list += (i ? "," : "") + checks[i];
  kv["checks.list"] = list;
  kv["checks.doubling_r"] = fmt(doubling_r);
  std::string ys;
  for (std::size_t i = 0; i < cutoff_y.size(); ++i) ys += (i ? ";" : "") + fmt(cutoff_y[i]);
  kv["checks.cutoff_y"] = ys;
  kv["checks.jacobi_k"] = fmt(jacobi_k);
  kv["checks.quadrature_tol"] = fmt(quadrature_tol);
  kv["checks.admissible_fraction"] = fmt(admissible_fraction);
  // run.jobs is excluded: outputs do not depend on it.
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

void RunConfig::validate() const {
  if (n < 2 || n > kMaxFuzzDim) throw ConfigError("problem.n: must lie in [2, " + std::to_string(kMaxFuzzDim) + "]");
  if (constraint != "cone" && constraint != "sigma2") {
    throw ConfigError("problem.constraint: expected 'cone' or 'sigma2'");
  }
  if (constraint == "cone" && n < 3) throw ConfigError("problem.constraint: cone needs n >= 3");
  if (constraint == "sigma2" && n != 3) throw ConfigError("problem.constraint: sigma2 needs n = 3");
  if (!(eps > 0.0)) throw ConfigError("problem.eps: must be positive");
  if (theta && std::abs(*theta) >= n * std::numbers::pi / 2.0) {
    throw ConfigError("problem.theta: |theta| must be < n pi / 2 (unreachable phase)");
  }
  if (!spectrum.empty() && static_cast<int>(spectrum.size()) != n) {
    throw ConfigError("problem.spectrum: needs exactly n values");
  }
  if (!(half_width > 0.0)) throw ConfigError("grid.half_width: must be positive");
  if (points < 9 || points % 2 == 0) throw ConfigError("grid.points: must be odd and >= 9");
  if (count < 1) throw ConfigError("family.count: must be >= 1");
  if (amplitudes.empty()) throw ConfigError("family.amplitudes: must not be empty");
  if (scales.empty()) throw ConfigError("family.scales: must not be empty");
  if (fuzz_scales.empty()) throw ConfigError("fuzz.scales: must not be empty");
  for (double s : scales) {
    if (!(s > 0.0)) throw ConfigError("family.scales: must be positive");
  }
  for (double s : fuzz_scales) {
    if (!(s > 0.0)) throw ConfigError("fuzz.scales: must be positive");
  }
  if (!(newton_tol > 0.0)) throw ConfigError("solver.tol: must be positive");
  if (max_iter < 1) throw ConfigError("solver.max_iter: must be >= 1");
  if (samples < 1) throw ConfigError("fuzz.samples: must be >= 1");
  for (const auto& c : checks) {
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) {
      throw ConfigError("checks.list: unknown check '" + c + "'");
    }
  }
  if (!(doubling_r > 0.0 && doubling_r < 0.25)) throw ConfigError("checks.doubling_r: must lie in (0, 1/4)");
  for (const auto& y : cutoff_y) {
    if (static_cast<int>(y.size()) != n) throw ConfigError("checks.cutoff_y: each point needs n coordinates");
  }
  if (!(jacobi_k >= 0.0)) throw ConfigError("checks.jacobi_k: must be >= 0");
  if (!(quadrature_tol >= 0.0)) throw ConfigError("checks.quadrature_tol: must be >= 0");
  if (!(admissible_fraction >= 0.0 && admissible_fraction <= 1.0)) {
    throw ConfigError("checks.admissible_fraction: must lie in [0, 1]");
  }
  if (jobs < 1) throw ConfigError("run.jobs: must be >= 1");
}

void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value) {
  const std::string id = section + "." + key;
  const std::string v = trim(value);
  if (id == "run.output") {
    if (v.empty()) throw ConfigError(id + ": must not be empty");
    cfg.output = v;
  } else if (id == "run.jobs") {
    cfg.jobs = static_cast<unsigned>(parse_unsigned(id, v));
  } else if (id == "problem.n") {
    cfg.n = static_cast<int>(parse_unsigned(id, v));
  } else if (id == "problem.constraint") {
    cfg.constraint = v;
  } else if (id == "problem.eps") {
    cfg.eps = parse_double(id, v);
  } else if (id == "problem.theta") {
    cfg.theta = parse_double(id, v);
  } else if (id == "problem.spectrum") {
    cfg.spectrum = parse_list(id, v);
  } else if (id == "problem.amplitude") {
    cfg.amplitude = parse_double(id, v);
  } else if (id == "grid.half_width") {
    cfg.half_width = parse_double(id, v);
  } else if (id == "grid.points") {
    cfg.points = static_cast<int>(parse_unsigned(id, v));
  } else if (id == "family.seed") {
    cfg.seed = parse_unsigned(id, v);
  } else if (id == "family.count") {
    cfg.count = parse_unsigned(id, v);
  } else if (id == "family.amplitudes") {
    cfg.amplitudes = parse_list(id, v);
  } else if (id == "family.scales") {
    cfg.scales = parse_list(id, v);
  } else if (id == "solver.tol") {
    cfg.newton_tol = parse_double(id, v);
  } else if (id == "solver.max_iter") {
    cfg.max_iter = static_cast<int>(parse_unsigned(id, v));
  } else if (id == "fuzz.samples") {
    cfg.samples = parse_unsigned(id, v);
  } else if (id == "fuzz.scales") {
    cfg.fuzz_scales = parse_list(id, v);
  } else if (id == "checks.list") {
    cfg.checks = split(v, ',');
  } else if (id == "checks.doubling_r") {
    cfg.doubling_r = parse_double(id, v);
  } else if (id == "checks.cutoff_y") {
    cfg.cutoff_y.clear();
    for (const auto& point : split(v, ';')) cfg.cutoff_y.push_back(parse_list(id, point));
  } else if (id == "checks.jacobi_k") {
    cfg.jacobi_k = parse_double(id, v);
  } else if (id == "checks.quadrature_tol") {
    cfg.quadrature_tol = parse_double(id, v);
  } else if (id == "checks.admissible_fraction") {
    cfg.admissible_fraction = parse_double(id, v);
  } else {
    throw ConfigError("unknown key '" + id + "'");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  static const std::vector<std::string> sections = {"run", "problem", "grid", "family",
                                                    "solver", "fuzz", "checks"};
  RunConfig cfg;
  std::string section = "run";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      set_config_value(cfg, section, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

}  // namespace slelab
