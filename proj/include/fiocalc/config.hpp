// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Problem configs: INI-style key/value text with a fixed set of sections and
// keys. Unknown sections and keys are rejected.

#ifndef FIOCALC_CONFIG_HPP
#define FIOCALC_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fiocalc::config {

struct Entry {
  std::string value;
  int line = 0;
};

class Config {
 public:
  // Parses and checks every section and key against the schema.
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  const std::string& text() const { return text_; }
  bool has(const std::string& section) const { return sections_.count(section) != 0; }
  bool has(const std::string& section, const std::string& key) const;

  std::string str(const std::string& section, const std::string& key) const;
  std::string str(const std::string& section, const std::string& key, const std::string& def) const;
  double num(const std::string& section, const std::string& key) const;
  double num(const std::string& section, const std::string& key, double def) const;
  int integer(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key, int def) const;
  std::vector<double> list(const std::string& section, const std::string& key) const;
  std::vector<double> list(const std::string& section, const std::string& key,
                           const std::vector<double>& def) const;

  // Throws ConfigError naming the section when it is absent.
  void require(const std::string& section) const;

 private:
  const Entry& entry(const std::string& section, const std::string& key) const;

  std::string text_;
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Allowed keys per section.
const std::map<std::string, std::vector<std::string>>& schema();

}  // namespace fiocalc::config

#endif  // FIOCALC_CONFIG_HPP
