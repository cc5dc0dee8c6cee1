// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fiocalc/error.hpp"

namespace fiocalc::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& where) {
  const std::string v = trim(s);
  if (v.empty()) throw ConfigError(where + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end != v.c_str() + v.size() || !std::isfinite(d)) {
    throw ConfigError(where + ": not a finite number: '" + v + "'");
  }
  return d;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"phase",
       {"expr", "n", "N", "base", "freq", "x_lo", "x_hi", "direction", "angle", "r_lo", "r_hi",
        "theta_seed", "x_seed", "samples"}},
      {"amplitude", {"expr", "degree", "fiber_lo", "fiber_hi"}},
      {"psi", {"lambda"}},
      {"stationary", {"F", "u", "n", "k", "box_lo", "box_hi", "w", "t_grid", "noise_floor"}},
      {"compose",
       {"phase1", "amplitude1", "degree1", "phase2", "amplitude2", "degree2", "nx", "ny", "nz",
        "n_theta", "n_sigma", "seed", "samples", "spread", "fiber_lo", "fiber_hi", "lambda"}},
      {"oracle",
       {"F", "u", "n", "box_lo", "box_hi", "t_grid", "rtol", "atol", "c", "max_points", "window",
        "x_lo", "x_hi", "eta_lo", "eta_hi", "radius", "window_width", "lambda", "y_lo", "y_hi"}},
  };
  return s;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.text_ = text;
  c.source_ = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string where = source + ":" + std::to_string(line);
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!schema().count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      if (c.sections_.count(section)) throw ConfigError(where + ": duplicate section [" + section + "]");
      c.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    const auto& allowed = schema().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    }
    auto& sec = c.sections_[section];
    if (sec.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    sec[key] = Entry{trim(s.substr(eq + 1)), line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

void Config::require(const std::string& section) const {
  if (!has(section)) throw ConfigError(source_ + ": missing section [" + section + "]");
}

const Entry& Config::entry(const std::string& section, const std::string& key) const {
  require(section);
  const auto& sec = sections_.at(section);
  const auto it = sec.find(key);
  if (it == sec.end()) throw ConfigError(source_ + ": missing key '" + key + "' in [" + section + "]");
  return it->second;
}

std::string Config::str(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string Config::str(const std::string& section, const std::string& key, const std::string& def) const {
  return has(section, key) ? str(section, key) : def;
}

double Config::num(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  return to_double(e.value, source_ + ":" + std::to_string(e.line) + " " + key);
}

double Config::num(const std::string& section, const std::string& key, double def) const {
  return has(section, key) ? num(section, key) : def;
}

int Config::integer(const std::string& section, const std::string& key) const {
  const double d = num(section, key);
  if (d != std::floor(d) || std::abs(d) > 1e6) {
    throw ConfigError(source_ + ": '" + key + "' in [" + section + "] must be an integer");
  }
  return static_cast<int>(d);
}

int Config::integer(const std::string& section, const std::string& key, int def) const {
  return has(section, key) ? integer(section, key) : def;
}

std::vector<double> Config::list(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  const std::string where = source_ + ":" + std::to_string(e.line) + " " + key;
  std::vector<double> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) out.push_back(to_double(item, where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

std::vector<double> Config::list(const std::string& section, const std::string& key,
                                 const std::vector<double>& def) const {
  return has(section, key) ? list(section, key) : def;
}

}  // namespace fiocalc::config
