// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON reports. Floats are written as %.16e so identical runs give
// byte-identical output.

#ifndef FIOCALC_REPORT_HPP
#define FIOCALC_REPORT_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fiocalc/error.hpp"
#include "json.hpp"

namespace fiocalc::report {

using Json = nlohmann::ordered_json;
using cplx = std::complex<double>;

inline constexpr int kSchemaVersion = 1;
const char* toolkit_version();

std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::string_view data);

Json to_json(cplx z);
Json to_json(const std::vector<cplx>& v);
Json to_json(const std::vector<double>& v);

std::string render(const Json& j);

// {schema_version, tool, version, command, config_hash, seed}
Json envelope(const std::string& command, std::string_view config_text, std::uint64_t seed);
Json error_json(const Error& e);

}  // namespace fiocalc::report

#endif  // FIOCALC_REPORT_HPP
