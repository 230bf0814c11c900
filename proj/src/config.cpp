#include "cutplug/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cutplug {

std::vector<double> FrequencyGrid::frequencies_hz() const {
  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    f.push_back(f_min_hz);
    return f;
  }
  const double r = ratio();
  for (int i = 0; i < count; ++i)
    f.push_back(f_min_hz * std::pow(r, static_cast<double>(i)));
  return f;
}

double FrequencyGrid::ratio() const {
  if (count <= 1) return 1.0;
  return std::pow(f_max_hz / f_min_hz, 1.0 / static_cast<double>(count - 1));
}

namespace {

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << name << ":" << line << ": " << msg;
  throw std::runtime_error(os.str());
}

struct Parser {
  const std::string& name;
  std::set<std::string> seen;  // "block.key" duplicates are rejected

  double to_number(const std::string& v, int line) const {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
      fail(name, line, "expected a number, got '" + v + "'");
    if (!std::isfinite(x)) fail(name, line, "non-finite value '" + v + "'");
    return x;
  }

  double positive(const std::string& key, const std::string& v,
                  int line) const {
    const double x = to_number(v, line);
    if (!(x > 0.0)) fail(name, line, "key '" + key + "' must be positive");
    return x;
  }

  double non_negative(const std::string& key, const std::string& v,
                      int line) const {
    const double x = to_number(v, line);
    if (!(x >= 0.0)) fail(name, line, "key '" + key + "' must be >= 0");
    return x;
  }

  int positive_int(const std::string& key, const std::string& v,
                   int line) const {
    const double x = positive(key, v, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
      fail(name, line, "key '" + key + "' must be an integer");
    return i;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(std::istream& in, const std::string& name) {
  Config cfg;
  Parser p{name, {}};
  std::string block;
  std::string raw;
  int line = 0;
  const double mm = 1e-3;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(name, line, "unterminated block header");
      block = trim(s.substr(1, s.size() - 2));
      if (block != "geometry" && block != "mesh" && block != "physics" &&
          block != "frequencies" && block != "optimization" &&
          block != "stabilization")
        fail(name, line, "unknown block '" + block + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(name, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(name, line, "expected 'key = value'");
    if (block.empty()) fail(name, line, "key outside of any [block]");
    if (!p.seen.insert(block + "." + key).second)
      fail(name, line, "duplicate key '" + key + "' in [" + block + "]");

    if (block == "geometry") {
      if (key == "l_c_mm")
        cfg.geometry.l_c = mm * p.positive(key, val, line);
      else if (key == "d_mm")
        cfg.geometry.d = mm * p.positive(key, val, line);
      else if (key == "r_wg_mm")
        cfg.geometry.r_wg = mm * p.positive(key, val, line);
      else if (key == "l_wg_mm")
        cfg.geometry.l_wg = mm * p.positive(key, val, line);
      else if (key == "l_p_mm")
        cfg.geometry.l_p = mm * p.positive(key, val, line);
      else if (key == "kappa")
        cfg.geometry.kappa = p.positive(key, val, line);
      else
        fail(name, line, "unknown key '" + key + "' in [geometry]");
    } else if (block == "mesh") {
      if (key == "h_mm")
        cfg.h = mm * p.positive(key, val, line);
      else
        fail(name, line, "unknown key '" + key + "' in [mesh]");
    } else if (block == "physics") {
      if (key == "c0")
        cfg.physics.c0 = p.positive(key, val, line);
      else if (key == "rho0")
        cfg.physics.rho0 = p.positive(key, val, line);
      else if (key == "nu")
        cfg.physics.nu = p.positive(key, val, line);
      else if (key == "prandtl")
        cfg.physics.prandtl = p.positive(key, val, line);
      else if (key == "cp")
        cfg.physics.cp = p.positive(key, val, line);
      else if (key == "gamma")
        cfg.physics.gamma = p.positive(key, val, line);
      else if (key == "a_d")
        cfg.physics.a_d = p.positive(key, val, line);
      else if (key == "losses") {
        if (val == "on")
          cfg.physics.losses = true;
        else if (val == "off")
          cfg.physics.losses = false;
        else
          fail(name, line, "key 'losses' must be 'on' or 'off'");
      } else
        fail(name, line, "unknown key '" + key + "' in [physics]");
    } else if (block == "frequencies") {
      if (key == "f_min_hz")
        cfg.frequencies.f_min_hz = p.positive(key, val, line);
      else if (key == "f_max_hz")
        cfg.frequencies.f_max_hz = p.positive(key, val, line);
      else if (key == "count")
        cfg.frequencies.count = p.positive_int(key, val, line);
      else
        fail(name, line, "unknown key '" + key + "' in [frequencies]");
    } else if (block == "optimization") {
      if (key == "objective") {
        if (val == "track")
          cfg.optimization.objective = ObjectiveKind::Track;
        else if (val == "power")
          cfg.optimization.objective = ObjectiveKind::Power;
        else
          fail(name, line, "key 'objective' must be 'track' or 'power'");
      } else if (key == "tikhonov_eps")
        cfg.optimization.tikhonov_eps = p.non_negative(key, val, line);
      else if (key == "max_iters")
        cfg.optimization.max_iters = p.positive_int(key, val, line);
      else if (key == "grad_tol")
        cfg.optimization.grad_tol = p.positive(key, val, line);
      else
        fail(name, line, "unknown key '" + key + "' in [optimization]");
    } else {  // stabilization
      if (key == "eps_s")
        cfg.eps_s = p.non_negative(key, val, line);
      else
        fail(name, line, "unknown key '" + key + "' in [stabilization]");
    }
  }
  if (!(cfg.frequencies.f_max_hz >= cfg.frequencies.f_min_hz))
    throw std::runtime_error(name + ": f_max_hz must be >= f_min_hz");
  if (cfg.frequencies.count > 1 &&
      cfg.frequencies.f_max_hz == cfg.frequencies.f_min_hz)
    throw std::runtime_error(name +
                             ": count > 1 requires f_max_hz > f_min_hz");
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, path);
}

}  // namespace cutplug
