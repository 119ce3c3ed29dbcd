#include "rrex/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rrex::cli {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + msg, line);
}

double to_double(const std::string& path, int line, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    fail(path, line, "expected a number, got '" + v + "'");
  }
  return x;
}

long to_long(const std::string& path, int line, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    fail(path, line, "expected an integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& path, int line, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(path, line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  for (char c : v) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> to_doubles(const std::string& path, int line,
                               const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split_list(v)) {
    out.push_back(to_double(path, line, item));
  }
  return out;
}

std::vector<int> to_ints(const std::string& path, int line,
                         const std::string& v) {
  std::vector<int> out;
  for (const std::string& item : split_list(v)) {
    out.push_back(static_cast<int>(to_long(path, line, item)));
  }
  return out;
}

}  // namespace

modes::Mode parse_mode(const std::string& word) {
  if (word == "n") return modes::Mode::N;
  if (word == "c") return modes::Mode::C;
  if (word == "mc") return modes::Mode::MC;
  throw ConfigError("mode must be one of n, c, mc (got '" + word + "')");
}

const char* mode_name(modes::Mode m) {
  switch (m) {
    case modes::Mode::N: return "n";
    case modes::Mode::C: return "c";
    case modes::Mode::MC: return "mc";
  }
  return "?";
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  RunConfig cfg;
  std::string section;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(path, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "mode" && section != "start" &&
          section != "diagnostics" && section != "output") {
        fail(path, lineno, "unknown section [" + section + "]");
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(path, lineno, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(path, lineno, "empty key");
    if (section.empty()) {
      fail(path, lineno, "key '" + key + "' outside any section");
    }

    if (section == "problem") {
      if (key == "name") cfg.problem_name = value;
      else if (key == "spectrum") cfg.spectrum = to_doubles(path, lineno, value);
      else if (key == "offset") cfg.offset = to_doubles(path, lineno, value);
      else if (key == "q") cfg.q_strength = to_double(path, lineno, value);
      else if (key == "seed") cfg.problem_seed = static_cast<unsigned>(to_long(path, lineno, value));
      else if (key == "similarity") cfg.similarity = to_bool(path, lineno, value);
      else if (key == "blind") cfg.blind = to_bool(path, lineno, value);
      else fail(path, lineno, "unknown key '" + key + "' in [problem]");
    } else if (section == "mode") {
      if (key == "mode") {
        try {
          cfg.mode.mode = parse_mode(value);
        } catch (const ConfigError& e) {
          fail(path, lineno, e.what());
        }
      } else if (key == "n") cfg.mode.n = to_long(path, lineno, value);
      else if (key == "k") cfg.mode.k = static_cast<int>(to_long(path, lineno, value));
      else if (key == "max_cycles") cfg.mode.max_cycles = static_cast<int>(to_long(path, lineno, value));
      else if (key == "tol") cfg.mode.tol = to_double(path, lineno, value);
      else if (key == "rank_tol") cfg.mode.rank_tol = to_double(path, lineno, value);
      else if (key == "degree_tol") cfg.mode.degree_tol = to_double(path, lineno, value);
      else if (key == "escape_factor") cfg.mode.escape_factor = to_double(path, lineno, value);
      else fail(path, lineno, "unknown key '" + key + "' in [mode]");
    } else if (section == "start") {
      if (key == "seed") cfg.start_seed = static_cast<unsigned>(to_long(path, lineno, value));
      else if (key == "radius") cfg.start_radius = to_double(path, lineno, value);
      else if (key == "x0") cfg.x0 = to_doubles(path, lineno, value);
      else fail(path, lineno, "unknown key '" + key + "' in [start]");
    } else if (section == "diagnostics") {
      if (key == "enabled") cfg.diagnostics = to_bool(path, lineno, value);
      else if (key == "theta_k") cfg.theta_ks = to_ints(path, lineno, value);
      else if (key == "perturbation") cfg.perturbation = to_bool(path, lineno, value);
      else fail(path, lineno, "unknown key '" + key + "' in [diagnostics]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else if (key == "legs") cfg.legs = split_list(value);
      else fail(path, lineno, "unknown key '" + key + "' in [output]");
    }
  }
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.mode) cfg.mode.mode = parse_mode(*ov.mode);
  if (ov.n) cfg.mode.n = *ov.n;
  if (ov.k) cfg.mode.k = *ov.k;
  if (ov.tol) cfg.mode.tol = *ov.tol;
  if (ov.max_cycles) cfg.mode.max_cycles = *ov.max_cycles;
  if (ov.seed) cfg.start_seed = *ov.seed;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
}

void RunConfig::validate() const {
  const bool classic = problem_name == "cos" || problem_name == "coupled2d" ||
                       problem_name == "bvp1d" || problem_name == "bvp1d-linear" ||
                       problem_name == "identity";
  const bool parametric = problem_name == "linear" || problem_name == "quadratic";
  if (!classic && !parametric) {
    throw ConfigError("unknown problem '" + problem_name + "'");
  }
  if (parametric && spectrum.empty()) {
    throw ConfigError("problem '" + problem_name + "' needs a spectrum");
  }
  if (!offset.empty() && offset.size() != spectrum.size()) {
    throw ConfigError("offset length must match spectrum length");
  }
  if (!(start_radius > 0.0)) throw ConfigError("start radius must be > 0");
  try {
    mode.validate();
  } catch (const InvalidParameterError& e) {
    throw ConfigError(std::string("mode config: ") + e.what());
  }
  for (int k : theta_ks) {
    if (k < 1) throw ConfigError("theta_k entries must be >= 1");
  }
}

}  // namespace rrex::cli
