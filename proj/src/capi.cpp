// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/fiocalc.h"

#include <cstdlib>
#include <string>

#include "fiocalc/branch.hpp"
#include "fiocalc/commands.hpp"
#include "fiocalc/compose.hpp"
#include "fiocalc/expr.hpp"
#include "fiocalc/parallel.hpp"
#include "fiocalc/report.hpp"

struct fiocalc_session {
  std::uint64_t seed = 1;
  std::string error;
  std::string out;
};

namespace {

using fiocalc::Error;
using fiocalc::ErrorCode;

// "x:2,theta:1*" -> groups x (2) and theta (1, frequency).
fiocalc::expr::VarLayout parse_layout(const std::string& text) {
  std::vector<fiocalc::expr::VarGroup> groups;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    pos = end + 1;
    fiocalc::expr::VarGroup g;
    if (!item.empty() && item.back() == '*') {
      g.frequency = true;
      item.pop_back();
    }
    const size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw Error(ErrorCode::kUsage, "layout entry must be name:size, got '" + item + "'");
    }
    g.name = item.substr(0, colon);
    char* stop = nullptr;
    const long n = std::strtol(item.c_str() + colon + 1, &stop, 10);
    if (*stop != '\0' || n < 1) throw Error(ErrorCode::kUsage, "bad group size in '" + item + "'");
    g.size = static_cast<int>(n);
    groups.push_back(g);
  }
  return fiocalc::expr::VarLayout(groups);
}

template <typename F>
int guarded(fiocalc_session* s, F&& body) {
  if (s == nullptr) return FIOCALC_E_USAGE;
  s->error.clear();
  try {
    body();
    return FIOCALC_OK;
  } catch (const Error& e) {
    s->error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    s->error = e.what();
    return FIOCALC_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* fiocalc_version(void) { return fiocalc::report::toolkit_version(); }

const char* fiocalc_status_name(int status) {
  if (status == FIOCALC_OK) return "ok";
  if (status < 1 || status > 9) return "unknown";
  return fiocalc::error_code_name(static_cast<ErrorCode>(status));
}

int fiocalc_session_create(fiocalc_session** out) {
  if (out == nullptr) return FIOCALC_E_USAGE;
  *out = new (std::nothrow) fiocalc_session();
  return *out ? FIOCALC_OK : FIOCALC_E_INTERNAL;
}

void fiocalc_session_destroy(fiocalc_session* s) { delete s; }

const char* fiocalc_last_error(const fiocalc_session* s) { return s ? s->error.c_str() : "null session"; }

int fiocalc_set_threads(fiocalc_session* s, int n) {
  return guarded(s, [&] { fiocalc::set_thread_count(n); });
}

int fiocalc_set_seed(fiocalc_session* s, uint64_t seed) {
  return guarded(s, [&] { s->seed = seed; });
}

int fiocalc_run(fiocalc_session* s, const char* command, const char* config_text, const char** report,
                int* exit_code) {
  return guarded(s, [&] {
    if (command == nullptr || config_text == nullptr || report == nullptr || exit_code == nullptr) {
      throw Error(ErrorCode::kUsage, "null argument");
    }
    fiocalc::commands::RunOptions opt;
    opt.seed = s->seed;
    const auto outcome = fiocalc::commands::run_text(command, config_text, opt);
    s->out = fiocalc::report::render(outcome.json);
    *report = s->out.c_str();
    *exit_code = outcome.exit_code;
    if (outcome.json.contains("error")) s->error = outcome.json["error"]["message"].get<std::string>();
  });
}

int fiocalc_expr_eval(fiocalc_session* s, const char* source, const char* layout, const double* re,
                      const double* im, size_t count, double* out_re, double* out_im) {
  return guarded(s, [&] {
    if (source == nullptr || layout == nullptr || out_re == nullptr || out_im == nullptr ||
        (count > 0 && re == nullptr)) {
      throw Error(ErrorCode::kUsage, "null argument");
    }
    const auto lay = parse_layout(layout);
    if (static_cast<int>(count) != lay.dim()) throw Error(ErrorCode::kUsage, "point size does not match layout");
    std::vector<fiocalc::expr::cplx> z(count);
    for (size_t k = 0; k < count; ++k) z[k] = {re[k], im ? im[k] : 0.0};
    const auto v = fiocalc::expr::eval(fiocalc::expr::parse(source, lay), z);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

int fiocalc_expr_print(fiocalc_session* s, const char* source, const char* layout, const char** out) {
  return guarded(s, [&] {
    if (source == nullptr || layout == nullptr || out == nullptr) throw Error(ErrorCode::kUsage, "null argument");
    s->out = fiocalc::expr::print(fiocalc::expr::parse(source, parse_layout(layout)));
    *out = s->out.c_str();
  });
}

int fiocalc_inv_sqrt_det(fiocalc_session* s, const double* h_re, const double* h_im, int n, double* out_re,
                         double* out_im) {
  return guarded(s, [&] {
    if (h_re == nullptr || out_re == nullptr || out_im == nullptr || n < 1) {
      throw Error(ErrorCode::kUsage, "bad argument");
    }
    fiocalc::linalg::CMatrix h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const size_t k = static_cast<size_t>(i * n + j);
        h(i, j) = {h_re[k], h_im ? h_im[k] : 0.0};
      }
    const auto b = fiocalc::branch::branched_inv_sqrt_det(h);
    *out_re = b.value.real();
    *out_im = b.value.imag();
  });
}

double fiocalc_composed_order(double m1, double m2, int excess) {
  return fiocalc::compose::composed_order(m1, m2, excess);
}

}  // extern "C"
