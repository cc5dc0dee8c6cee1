// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/commands.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "fiocalc/compose.hpp"
#include "fiocalc/oracle.hpp"
#include "fiocalc/phase.hpp"
#include "fiocalc/stationary.hpp"
#include "fiocalc/symbol.hpp"

namespace fiocalc::commands {

namespace {

using config::Config;
using report::Json;
using report::to_json;

// Checks collected while a command runs.
class Checks {
 public:
  void add(const std::string& name, bool pass, Json detail = Json::object()) {
    Json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!detail.empty()) c["detail"] = std::move(detail);
    list_.push_back(std::move(c));
    all_ &= pass;
  }
  void merge(const std::string& prefix, const Json& other) {
    for (auto c : other) {
      c["name"] = prefix + "." + c["name"].get<std::string>();
      all_ &= c["pass"].get<bool>();
      list_.push_back(std::move(c));
    }
  }
  bool pass() const { return all_; }
  const Json& list() const { return list_; }

 private:
  Json list_ = Json::array();
  bool all_ = true;
};

Json limit(double value, double bound) { return Json{{"value", value}, {"limit", bound}}; }

std::vector<oracle::Interval> boxes(const std::vector<double>& lo, const std::vector<double>& hi,
                                    const std::string& what) {
  if (lo.size() != hi.size()) throw ConfigError(what + ": lo and hi lists differ in length");
  std::vector<oracle::Interval> out;
  for (size_t k = 0; k < lo.size(); ++k) {
    if (!(hi[k] > lo[k])) throw ConfigError(what + ": empty interval");
    out.push_back({lo[k], hi[k]});
  }
  return out;
}

std::vector<oracle::Interval> optional_box(const Config& cfg, const std::string& sec, const std::string& lo,
                                           const std::string& hi) {
  if (!cfg.has(sec, lo) && !cfg.has(sec, hi)) return {};
  return boxes(cfg.list(sec, lo), cfg.list(sec, hi), "[" + sec + "] " + lo + "/" + hi);
}

oracle::QuadOptions quad_options(const Config& cfg, oracle::QuadOptions q = {}) {
  if (!cfg.has("oracle")) return q;
  q.rtol = cfg.num("oracle", "rtol", q.rtol);
  q.atol = cfg.num("oracle", "atol", q.atol);
  q.c = cfg.num("oracle", "c", q.c);
  q.max_points = cfg.num("oracle", "max_points", q.max_points);
  return q;
}

// ---- phase -----------------------------------------------------------------

struct PhaseSetup {
  phase::PhaseFunction phi;
  phase::CriticalPoint cp;
  phase::Classification cls;
  std::vector<std::vector<phase::cplx>> samples;
};

PhaseSetup phase_setup(const Config& cfg, const RunOptions& opt) {
  cfg.require("phase");
  const int n = cfg.integer("phase", "n", 1);
  const int N = cfg.integer("phase", "N", 1);
  phase::ConicPatch patch;
  patch.x_lo = cfg.list("phase", "x_lo", {});
  patch.x_hi = cfg.list("phase", "x_hi", {});
  patch.direction = cfg.list("phase", "direction", {});
  patch.angle = cfg.num("phase", "angle", patch.angle);
  patch.r_lo = cfg.num("phase", "r_lo", patch.r_lo);
  patch.r_hi = cfg.num("phase", "r_hi", patch.r_hi);
  PhaseSetup s;
  s.phi = phase::make_phase(cfg.str("phase", "expr"), n, N, patch, cfg.str("phase", "base", "x"),
                            cfg.str("phase", "freq", "theta"));
  const auto& pt = s.phi.patch;
  std::vector<double> theta = cfg.list("phase", "theta_seed", pt.direction);
  std::vector<double> x = cfg.list("phase", "x_seed", {});
  if (x.empty()) {
    for (int k = 0; k < n; ++k) x.push_back(0.5 * (pt.x_lo[static_cast<size_t>(k)] + pt.x_hi[static_cast<size_t>(k)]));
  }
  if (static_cast<int>(x.size()) != n) throw ConfigError("[phase] x_seed needs n entries");
  if (static_cast<int>(theta.size()) != N) throw ConfigError("[phase] theta_seed needs N entries");
  s.cp = phase::find_critical(s.phi, theta, x);
  s.samples.push_back(s.cp.point);
  // More stationary points from perturbed seeds, for the rank check.
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 9; ++k) {
    std::vector<double> th = theta;
    std::vector<double> xs = x;
    for (auto& v : th) v *= 1.0 + 0.1 * g(rng);
    for (int j = 0; j < n; ++j) {
      xs[static_cast<size_t>(j)] += 0.05 * (pt.x_hi[static_cast<size_t>(j)] - pt.x_lo[static_cast<size_t>(j)]) * g(rng);
    }
    phase::CriticalOptions co;
    co.unknowns = s.cp.unknowns;
    co.equations = s.cp.equations;
    try {
      const auto c = phase::find_critical(s.phi, th, xs, co);
      if (c.real && c.residual <= 1e-10) s.samples.push_back(c.point);
    } catch (const ConvergenceError&) {
    }
  }
  s.cls = phase::classify(s.phi, s.samples);
  return s;
}

Json critical_json(const phase::CriticalPoint& cp) {
  return Json{{"point", to_json(cp.point)}, {"residual", cp.residual}, {"real", cp.real}, {"iterations", cp.iterations}};
}

Json classification_json(const phase::Classification& c) {
  return Json{{"kind", phase::kind_name(c.kind)}, {"M", c.M}, {"N", c.N}, {"excess", c.excess},
              {"theta_prime", c.theta_prime}, {"theta_excess", c.theta_excess}, {"ranks", c.ranks},
              {"singular_values", to_json(c.singular_values)}};
}

Json cmd_analyze(const Config& cfg, const RunOptions& opt, Checks& checks) {
  const auto s = phase_setup(cfg, opt);
  phase::ValidateOptions vo;
  vo.samples = cfg.integer("phase", "samples", vo.samples);
  vo.seed = opt.seed;
  const auto rep = phase::validate_phase(s.phi, vo);
  Json j;
  j["phase"] = expr::print(s.phi.expr);
  j["n"] = s.phi.n;
  j["N"] = s.phi.N;
  j["kind"] = phase::kind_name(s.cls.kind);
  j["excess"] = s.cls.excess;
  j["validation"] = Json{{"samples", rep.samples},
                         {"max_euler_residual", rep.max_euler_residual},
                         {"min_im_phi", rep.min_im_phi},
                         {"min_dphi", rep.min_dphi},
                         {"homogeneous", rep.homogeneous},
                         {"positive", rep.positive},
                         {"nonvanishing_differential", rep.nonvanishing_differential}};
  j["critical_point"] = critical_json(s.cp);
  j["classification"] = classification_json(s.cls);
  checks.add("homogeneity", rep.homogeneous, limit(rep.max_euler_residual, vo.euler_tol));
  checks.add("im_phi_nonnegative", rep.positive, limit(rep.min_im_phi, -vo.im_tol));
  checks.add("dphi_nonvanishing", rep.nonvanishing_differential);
  checks.add("critical_point", s.cp.real && s.cp.residual <= 1e-10, limit(s.cp.residual, 1e-10));
  checks.add("clean", s.cls.kind != phase::Kind::kDegenerateInvalid,
             Json{{"ranks", s.cls.ranks}, {"samples", static_cast<int>(s.samples.size())}});
  const auto ls = phase::lambda_sample(s.phi, s.cp);
  j["lagrangian"] = Json{{"x", to_json(ls.x)}, {"xi", to_json(ls.xi)}, {"im_phi", ls.im_phi},
                         {"homogeneity_error", ls.homogeneity_error}};
  const auto pos = phase::positivity_check(s.phi, s.cp, 24, opt.seed);
  j["positivity"] = Json{{"graph", pos.graph}, {"min_im_phi", pos.min_im_phi},
                         {"min_im_graph", pos.min_im_graph}, {"samples", pos.samples}, {"message", pos.message}};
  checks.add("positive_lagrangian", pos.pass, limit(pos.min_im_graph, -1e-10));
  return j;
}

// ---- stationary phase ------------------------------------------------------

Json cmd_stationary(const Config& cfg, const RunOptions&, Checks& checks) {
  cfg.require("stationary");
  const int n = cfg.integer("stationary", "n", 1);
  const int k = cfg.integer("stationary", "k", 0);
  const auto p = stationary::make_problem(cfg.str("stationary", "F"), cfg.str("stationary", "u"), n, k,
                                          optional_box(cfg, "stationary", "box_lo", "box_hi"));
  const auto w = cfg.list("stationary", "w", std::vector<double>(static_cast<size_t>(k), 0.0));
  if (static_cast<int>(w.size()) != k) throw ConfigError("[stationary] w needs k entries");
  const auto grid = cfg.list("stationary", "t_grid", stationary::default_t_grid());
  const auto rr = stationary::remainder_order(p, w, grid, quad_options(cfg),
                                              cfg.num("stationary", "noise_floor", 1e-13));
  const auto& e = rr.expansion;
  Json j;
  j["F"] = expr::print(p.F);
  j["u"] = expr::print(p.u);
  j["n"] = n;
  j["w"] = to_json(w);
  j["leading_term"] = Json{{"Z", to_json(e.Z)},
                           {"phase_value", to_json(e.phase_value)},
                           {"C0", to_json(e.C0)},
                           {"u_value", to_json(e.u_value)},
                           {"sqrt_branch", to_json(e.branch.value)},
                           {"det", to_json(e.branch.det_a)},
                           {"branch_subdivisions", e.branch.subdivisions},
                           {"residual", e.residual}};
  Json samples = Json::array();
  for (size_t i = 0; i < rr.t.size(); ++i) {
    samples.push_back(Json{{"t", rr.t[i]}, {"integral", to_json(rr.integral[i])},
                           {"leading", to_json(rr.leading[i])}, {"error", rr.error[i]}});
  }
  j["samples"] = samples;
  j["remainder_fit"] = Json{{"slope", rr.fit.slope}, {"intercept", rr.fit.intercept},
                            {"residual", rr.fit.residual}, {"expected_slope", rr.expected_slope},
                            {"dropped_t", to_json(rr.fit.dropped_t)}, {"at_noise_floor", rr.at_noise_floor}};
  if (rr.at_noise_floor) {
    checks.add("remainder_order", true, Json{{"note", "remainder at the noise floor"}});
  } else {
    const double dev = std::abs(rr.fit.slope - rr.expected_slope);
    checks.add("remainder_order", dev <= 0.15, limit(dev, 0.15));
  }
  return j;
}

// ---- symbol ----------------------------------------------------------------

Json sqrt_json(const symbol::SqrtDPhi& s) {
  return Json{{"vars", s.vars}, {"det", to_json(s.det)}, {"value", to_json(s.value)}, {"grade", s.grade},
              {"branch_subdivisions", s.branch.subdivisions}, {"branch_residual", s.branch.residual}};
}

Json symbol_json(const symbol::SymbolValue& v) {
  Json j{{"x", to_json(v.x)},         {"xi", to_json(v.xi)},       {"value", to_json(v.value)},
         {"order", v.order},          {"grade", v.grade},          {"value_exponent", v.value_exponent},
         {"excess", v.excess},        {"amplitude", to_json(v.amplitude)},
         {"sqrt_dphi", sqrt_json(v.sqrt_dphi)}};
  if (v.excess > 0 || !v.fiber.nodes.empty()) {
    j["fiber"] = Json{{"nodes", v.fiber.nodes}, {"change", v.fiber.change},
                      {"boundary_max", v.fiber.boundary_max}, {"levels", v.fiber.levels}};
  }
  return j;
}

Json cmd_symbol(const Config& cfg, const RunOptions& opt, Checks& checks) {
  cfg.require("amplitude");
  const auto s = phase_setup(cfg, opt);
  const auto amp = symbol::make_amplitude(s.phi, cfg.str("amplitude", "expr"), cfg.num("amplitude", "degree", 0.0));
  symbol::FiberOptions fo;
  fo.box = optional_box(cfg, "amplitude", "fiber_lo", "fiber_hi");
  if (s.cls.excess > 0 && fo.box.empty()) {
    throw ConfigError("[amplitude] fiber_lo/fiber_hi are required when the excess is positive");
  }
  const auto lambdas = cfg.list("psi", "lambda", {1.0});
  Json j;
  j["phase"] = expr::print(s.phi.expr);
  j["amplitude"] = expr::print(amp.a);
  j["degree"] = amp.degree;
  j["order"] = symbol::order_of(s.phi, amp.degree);
  j["classification"] = classification_json(s.cls);
  j["critical_point"] = critical_json(s.cp);
  Json per = Json::array();
  std::vector<symbol::SqrtDPhi> roots;
  const bool pair = cfg.has("oracle") && s.cls.excess == 0;
  for (double lam : lambdas) {
    const auto psi = symbol::make_psi(s.phi, s.cp, lam);
    const auto sv = symbol::principal_symbol(s.phi, amp, s.cls, s.cp, psi, fo);
    roots.push_back(sv.sqrt_dphi);
    Json e{{"lambda", lam}, {"symbol", symbol_json(sv)}};
    if (pair) {
      symbol::PairingInputs in;
      in.u = expr::parse(cfg.str("oracle", "u"), s.phi.layout);
      in.window = expr::parse(cfg.str("oracle", "window", "1"), s.phi.layout);
      in.x_box = boxes(cfg.list("oracle", "x_lo"), cfg.list("oracle", "x_hi"), "[oracle] x box");
      in.eta_box = boxes(cfg.list("oracle", "eta_lo"), cfg.list("oracle", "eta_hi"), "[oracle] eta box");
      in.t_grid = cfg.list("oracle", "t_grid", {1e3});
      in.quad = quad_options(cfg);
      const auto r = symbol::pairing_T(s.phi, amp, psi, s.cp, in);
      Json rows = Json::array();
      for (size_t i = 0; i < r.t.size(); ++i) {
        rows.push_back(Json{{"t", r.t[i]}, {"predicted", to_json(r.predicted[i])},
                            {"oracle", to_json(r.oracle[i])}, {"rel_error", r.rel_error[i]}});
        checks.add("pairing_lambda_" + std::to_string(lam).substr(0, 4) + "_t_" + std::to_string(static_cast<long long>(r.t[i])),
                   r.rel_error[i] <= 10.0 / r.t[i], limit(r.rel_error[i], 10.0 / r.t[i]));
      }
      e["pairing"] = Json{{"predicted_exponent", r.predicted_exponent},
                          {"top_coefficient", to_json(r.top_coefficient)},
                          {"samples", rows}};
    }
    per.push_back(e);
  }
  j["symbols"] = per;
  for (size_t k = 1; k < roots.size(); ++k) {
    const auto ti = symbol::transition_identity(roots[k - 1], roots[k]);
    const double dev = std::abs(ti - 1.0);
    checks.add("transition_identity_" + std::to_string(k), dev <= 1e-10, limit(dev, 1e-10));
  }
  checks.add("clean", s.cls.kind != phase::Kind::kDegenerateInvalid);
  return j;
}

// ---- compose ---------------------------------------------------------------

Json cmd_compose(const Config& cfg, const RunOptions& opt, Checks& checks) {
  cfg.require("compose");
  const std::string sec = "compose";
  const int nx = cfg.integer(sec, "nx", 1);
  const int ny = cfg.integer(sec, "ny", 1);
  const int nz = cfg.integer(sec, "nz", 1);
  const auto k1 = compose::make_kernel(1, cfg.str(sec, "phase1"), cfg.str(sec, "amplitude1"),
                                       cfg.num(sec, "degree1", 0.0), nx, ny, cfg.integer(sec, "n_theta", 1));
  const auto k2 = compose::make_kernel(2, cfg.str(sec, "phase2"), cfg.str(sec, "amplitude2"),
                                       cfg.num(sec, "degree2", 0.0), ny, nz, cfg.integer(sec, "n_sigma", 1));
  const auto seed = cfg.list(sec, "seed");
  const auto plan = compose::build_composed_phase(k1, k2, seed);
  const auto ex = compose::intersection_excess(plan, seed, cfg.integer(sec, "samples", 10), opt.seed,
                                               cfg.num(sec, "spread", 0.2));
  const double lambda = cfg.num(sec, "lambda", 1.0);
  Json j;
  j["Phi"] = expr::print(plan.Phi);
  j["Phi_omega"] = expr::print(plan.Phi_omega.expr);
  j["b"] = expr::print(plan.b.a);
  j["dims"] = Json{{"nx", nx}, {"ny", ny}, {"nz", nz}, {"n_theta", plan.N1}, {"n_sigma", plan.N2}};
  j["euler_residual"] = plan.euler_residual;
  j["min_im_Phi"] = plan.min_im_Phi;
  j["excess"] = ex.excess;
  j["rank"] = ex.rank;
  j["tangent_dim"] = ex.tangent_dim;
  j["ranks"] = ex.cls.ranks;
  j["omega_excess"] = ex.cls.theta_excess;
  j["m1"] = k1.order;
  j["m2"] = k2.order;
  j["composed_order"] = compose::composed_order(k1.order, k2.order, ex.excess);
  j["assumptions"] = Json{{"proper_injective_projection", "assumed"}};
  checks.add("im_Phi_nonnegative", plan.min_im_Phi >= -1e-12, limit(plan.min_im_Phi, -1e-12));
  checks.add("rank_stable", true, Json{{"samples", static_cast<int>(ex.samples.size())}});

  auto composed_json = [](const compose::ComposedSymbol& c) {
    Json s = symbol_json(c.value);
    s["path"] = c.path;
    s["composed_order"] = c.composed_order;
    s["integrand_grade"] = c.grade;
    s["fiber_jacobian"] = c.fiber_jacobian;
    return s;
  };
  if (ex.excess == 0) {
    const auto a = compose::composed_symbol_transverse(plan, ex, lambda);
    const auto b = compose::composed_symbol_clean(plan, ex, {}, lambda);
    const double dev = std::abs(a.value.value - b.value.value) / std::max(std::abs(a.value.value), 1e-300);
    j["symbol"] = composed_json(a);
    j["symbol_fiber_path"] = composed_json(b);
    checks.add("transverse_vs_fiber", dev <= 1e-10 || a.value.value == b.value.value, limit(dev, 1e-10));
  } else {
    const auto box = optional_box(cfg, sec, "fiber_lo", "fiber_hi");
    if (box.empty()) throw ConfigError("[compose] fiber_lo/fiber_hi are required when the excess is positive");
    const auto c = compose::composed_symbol_clean(plan, ex, compose::fiber_box_to_omega(plan, ex, box), lambda);
    j["symbol"] = composed_json(c);
    checks.add("fiber_support", c.value.fiber.boundary_max <= 1e-12, limit(c.value.fiber.boundary_max, 1e-12));
  }

  if (cfg.has("oracle")) {
    auto in = compose::default_oracle_inputs(plan, ex, cfg.num("oracle", "lambda", lambda),
                                             cfg.num("oracle", "radius", 0.5), cfg.num("oracle", "window_width", 0.5));
    const auto ybox = optional_box(cfg, "oracle", "y_lo", "y_hi");
    if (!ybox.empty()) {
      if (static_cast<int>(ybox.size()) != ny) throw ConfigError("[oracle] y box needs ny intervals");
      in.y_box = ybox;
    }
    in.rtol = cfg.num("oracle", "rtol", in.rtol);
    in.atol = cfg.num("oracle", "atol", in.atol);
    in.c = cfg.num("oracle", "c", in.c);
    in.max_points = cfg.num("oracle", "max_points", in.max_points);
    const auto grid = cfg.list("oracle", "t_grid", {8, 16, 32, 64});
    const auto rep = compose::composed_order_fit(plan, ex, in, grid);
    Json rows = Json::array();
    for (const auto& s : rep.samples) {
      rows.push_back(Json{{"t", s.t}, {"value", to_json(s.value)}, {"levels", s.levels},
                          {"change", s.change}, {"points", s.points}});
    }
    j["oracle"] = Json{{"samples", rows}, {"slope", rep.fit.slope}, {"fit_residual", rep.fit.residual},
                       {"fitted_order", rep.fitted_order}, {"predicted_order", rep.predicted_order}};
    const double dev = std::abs(rep.fitted_order - rep.predicted_order);
    checks.add("composed_order_fit", dev <= 0.15, limit(dev, 0.15));
  }
  return j;
}

// ---- oracle ----------------------------------------------------------------

Json cmd_oracle(const Config& cfg, const RunOptions&, Checks& checks) {
  cfg.require("oracle");
  const int n = cfg.integer("oracle", "n", 1);
  const expr::VarLayout layout({{"x", n, false}});
  const auto F = expr::parse(cfg.str("oracle", "F"), layout);
  const auto u = expr::parse(cfg.str("oracle", "u", "1"), layout);
  const auto box = boxes(cfg.list("oracle", "box_lo"), cfg.list("oracle", "box_hi"), "[oracle] box");
  if (static_cast<int>(box.size()) != n) throw ConfigError("[oracle] box needs n intervals");
  const auto grid = cfg.list("oracle", "t_grid", {100.0});
  const auto q = quad_options(cfg);
  std::vector<int> axes(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) axes[static_cast<size_t>(k)] = k;
  Json rows = Json::array();
  std::vector<double> mag;
  for (double t : grid) {
    const auto r = oracle::osc_integral(F, u, axes, box, t, std::vector<oracle::cplx>(static_cast<size_t>(n)), q);
    mag.push_back(std::abs(r.value));
    rows.push_back(Json{{"t", t}, {"value", to_json(r.value)}, {"nodes", r.nodes}, {"change", r.change},
                        {"points", r.points}, {"truncated", r.truncated}});
  }
  Json j;
  j["F"] = expr::print(F);
  j["u"] = expr::print(u);
  j["samples"] = rows;
  if (grid.size() >= 4) {
    const auto fit = oracle::fit_order(grid, mag);
    j["fit"] = Json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual},
                    {"dropped_t", to_json(fit.dropped_t)}};
  }
  checks.add("converged", true, Json{{"rtol", q.rtol}});
  return j;
}

using Handler = std::function<Json(const Config&, const RunOptions&, Checks&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"analyze", cmd_analyze}, {"stationary-phase", cmd_stationary}, {"symbol", cmd_symbol},
      {"compose", cmd_compose}, {"oracle", cmd_oracle}};
  return h;
}

Json cmd_validate(const Config& cfg, const RunOptions& opt, Checks& checks) {
  Json runs;
  auto attempt = [&](const std::string& name, const Handler& h) {
    Checks sub;
    try {
      Json r = h(cfg, opt, sub);
      r["checks"] = sub.list();
      runs[name] = std::move(r);
      checks.merge(name, sub.list());
    } catch (const Error& e) {
      runs[name] = Json{{"error", report::error_json(e)}};
      checks.add(name, false, report::error_json(e));
    }
  };
  if (cfg.has("phase")) attempt("analyze", cmd_analyze);
  if (cfg.has("phase") && cfg.has("amplitude")) attempt("symbol", cmd_symbol);
  if (cfg.has("stationary")) attempt("stationary-phase", cmd_stationary);
  if (cfg.has("compose")) attempt("compose", cmd_compose);
  if (cfg.has("oracle", "F")) attempt("oracle", cmd_oracle);
  if (runs.empty()) throw ConfigError("nothing to validate: the config has no runnable section");
  return Json{{"runs", runs}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze", "stationary-phase", "symbol",
                                                 "compose", "oracle",           "validate"};
  return names;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kParse:
    case ErrorCode::kConfig:
      return 1;
    case ErrorCode::kValidation:
      return 2;
    default:
      return static_cast<int>(code);
  }
}

Outcome run(const std::string& command, const config::Config& cfg, const RunOptions& opt) {
  Outcome out;
  out.json = report::envelope(command, cfg.text(), opt.seed);
  Checks checks;
  try {
    Json body;
    if (command == "validate") {
      body = cmd_validate(cfg, opt, checks);
    } else {
      const auto& hs = handlers();
      auto it = std::find_if(hs.begin(), hs.end(), [&](const auto& p) { return p.first == command; });
      if (it == hs.end()) throw Error(ErrorCode::kUsage, "unknown command: " + command);
      body = it->second(cfg, opt, checks);
    }
    out.json["status"] = checks.pass() ? "pass" : "fail";
    out.json["checks"] = checks.list();
    for (auto it = body.begin(); it != body.end(); ++it) out.json[it.key()] = it.value();
    out.exit_code = checks.pass() ? 0 : 2;
  } catch (const Error& e) {
    out.json["status"] = "error";
    out.json["error"] = report::error_json(e);
    out.exit_code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    const Error wrapped(ErrorCode::kInternal, e.what());
    out.json["status"] = "error";
    out.json["error"] = report::error_json(wrapped);
    out.exit_code = exit_code_for(ErrorCode::kInternal);
  }
  return out;
}

Outcome run_text(const std::string& command, const std::string& text, const RunOptions& opt) {
  try {
    return run(command, config::Config::parse(text), opt);
  } catch (const Error& e) {
    Outcome out;
    out.json = report::envelope(command, text, opt.seed);
    out.json["status"] = "error";
    out.json["error"] = report::error_json(e);
    out.exit_code = exit_code_for(e.code());
    return out;
  }
}

}  // namespace fiocalc::commands
