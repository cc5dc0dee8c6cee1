// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/report.hpp"

#include <cmath>
#include <cstdio>

namespace fiocalc::report {

namespace {

void render_to(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        render_to(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        render_to(v, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.16e", d == 0.0 ? 0.0 : d);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

const char* toolkit_version() { return "0.1.0"; }

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::string_view data) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

Json to_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const std::vector<cplx>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double d : v) a.push_back(d);
  return a;
}

std::string render(const Json& j) {
  std::string out;
  render_to(j, 0, out);
  out += "\n";
  return out;
}

Json envelope(const std::string& command, std::string_view config_text, std::uint64_t seed) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "fiocalc";
  j["version"] = toolkit_version();
  j["command"] = command;
  j["config_hash"] = "fnv1a64:" + hash_hex(config_text);
  j["seed"] = seed;
  return j;
}

Json error_json(const Error& e) {
  Json j{{"code", static_cast<int>(e.code())}, {"name", error_code_name(e.code())}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["line"] = p->line();
    j["column"] = p->column();
  }
  return j;
}

}  // namespace fiocalc::report
