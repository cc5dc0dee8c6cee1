// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <unordered_map>

namespace fiocalc::expr {

// ---------------------------------------------------------------------------
// VarLayout

VarLayout::VarLayout(std::vector<VarGroup> groups) : groups_(std::move(groups)) {
  std::set<std::string> names;
  for (const auto& g : groups_) {
    if (g.name.empty() || !std::isalpha(static_cast<unsigned char>(g.name[0]))) {
      throw Error(ErrorCode::kValidation, "invalid variable group name '" + g.name + "'");
    }
    for (char c : g.name) {
      if (!std::isalpha(static_cast<unsigned char>(c))) {
        throw Error(ErrorCode::kValidation,
                    "variable group names must be alphabetic: '" + g.name + "'");
      }
    }
    if (g.name == "i" || g.name == "pi" || g.name == "exp" || g.name == "log" ||
        g.name == "sqrt" || g.name == "sin" || g.name == "cos" || g.name == "norm" ||
        g.name == "bump" || g.name == "plateau") {
      throw Error(ErrorCode::kValidation, "reserved name used as variable group: " + g.name);
    }
    if (!names.insert(g.name).second) {
      throw Error(ErrorCode::kValidation, "duplicate variable group '" + g.name + "'");
    }
    if (g.size < 1) {
      throw Error(ErrorCode::kValidation, "variable group '" + g.name + "' must have size >= 1");
    }
    dim_ += g.size;
  }
}

bool VarLayout::has_group(std::string_view name) const {
  for (const auto& g : groups_) {
    if (g.name == name) return true;
  }
  return false;
}

const VarGroup& VarLayout::group(std::string_view name) const {
  for (const auto& g : groups_) {
    if (g.name == name) return g;
  }
  throw Error(ErrorCode::kValidation, "no variable group '" + std::string(name) + "'");
}

int VarLayout::offset(std::string_view name) const {
  int off = 0;
  for (const auto& g : groups_) {
    if (g.name == name) return off;
    off += g.size;
  }
  throw Error(ErrorCode::kValidation, "no variable group '" + std::string(name) + "'");
}

std::vector<int> VarLayout::indices(std::string_view name) const {
  const int off = offset(name);
  std::vector<int> out(static_cast<size_t>(group(name).size));
  for (size_t k = 0; k < out.size(); ++k) out[k] = off + static_cast<int>(k);
  return out;
}

std::optional<int> VarLayout::resolve(std::string_view id) const {
  size_t split = id.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(id[split - 1]))) --split;
  const std::string_view stem = id.substr(0, split);
  if (!has_group(stem)) return std::nullopt;
  const VarGroup& g = group(stem);
  if (split == id.size()) {
    if (g.size == 1) return offset(stem);
    return std::nullopt;
  }
  if (id[split] == '0') return std::nullopt;
  const int k = std::atoi(std::string(id.substr(split)).c_str());
  if (k < 1 || k > g.size) return std::nullopt;
  return offset(stem) + k - 1;
}

std::string VarLayout::var_name(int index) const {
  int off = 0;
  for (const auto& g : groups_) {
    if (index < off + g.size) return g.name + std::to_string(index - off + 1);
    off += g.size;
  }
  throw Error(ErrorCode::kInternal, "variable index out of range");
}

bool VarLayout::is_frequency(int index) const {
  int off = 0;
  for (const auto& g : groups_) {
    if (index < off + g.size) return g.frequency;
    off += g.size;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Builders

const char* func_name(Func f) {
  switch (f) {
    case Func::kExp: return "exp";
    case Func::kLog: return "log";
    case Func::kSqrt: return "sqrt";
    case Func::kSin: return "sin";
    case Func::kCos: return "cos";
    case Func::kNorm: return "norm";
    case Func::kBump: return "bump";
    case Func::kPlateau: return "plateau";
  }
  return "?";
}

namespace {

Expr make_node(Kind k, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

}  // namespace

Expr constant(cplx v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = v;
  return n;
}

Expr variable(const VarLayout& layout, int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->var = index;
  n->name = layout.var_name(index);
  return n;
}

Expr neg(Expr a) { return make_node(Kind::kNeg, {std::move(a)}); }
Expr add(Expr a, Expr b) { return make_node(Kind::kAdd, {std::move(a), std::move(b)}); }
Expr sub(Expr a, Expr b) { return make_node(Kind::kSub, {std::move(a), std::move(b)}); }
Expr mul(Expr a, Expr b) { return make_node(Kind::kMul, {std::move(a), std::move(b)}); }
Expr div(Expr a, Expr b) { return make_node(Kind::kDiv, {std::move(a), std::move(b)}); }
Expr pow(Expr a, Expr b) { return make_node(Kind::kPow, {std::move(a), std::move(b)}); }

Expr call(Func f, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCall;
  n->func = f;
  n->args = std::move(args);
  return n;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok { kNum, kIdent, kOp, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t p = 0;
  while (p < s.size()) {
    const char c = s[p];
    if (c == '\n') {
      ++line;
      col = 1;
      ++p;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++p;
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t q = p;
      while (q < s.size() && (std::isdigit(static_cast<unsigned char>(s[q])) || s[q] == '.')) ++q;
      if (q < s.size() && (s[q] == 'e' || s[q] == 'E')) {
        size_t r = q + 1;
        if (r < s.size() && (s[r] == '+' || s[r] == '-')) ++r;
        if (r < s.size() && std::isdigit(static_cast<unsigned char>(s[r]))) {
          q = r;
          while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
        }
      }
      t.kind = Tok::kNum;
      t.text = std::string(s.substr(p, q - p));
      char* end = nullptr;
      t.number = std::strtod(t.text.c_str(), &end);
      if (end != t.text.c_str() + t.text.size()) {
        throw ParseError("malformed number '" + t.text + "'", line, col);
      }
      col += static_cast<int>(q - p);
      p = q;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t q = p;
      while (q < s.size() && (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_')) ++q;
      t.kind = Tok::kIdent;
      t.text = std::string(s.substr(p, q - p));
      col += static_cast<int>(q - p);
      p = q;
    } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      t.kind = Tok::kOp;
      t.text = std::string(1, c);
      ++col;
      ++p;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const VarLayout& layout)
      : toks_(std::move(toks)), layout_(layout) {}

  Expr parse_all() {
    Expr e = parse_expr();
    if (peek().kind != Tok::kEnd) fail("unexpected token '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* op) const { return peek().kind == Tok::kOp && peek().text == op; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().column);
  }
  void expect(const char* op, const Token& opener) {
    if (!is_op(op)) {
      if (std::string(op) == ")") {
        throw ParseError("unclosed '(' (opened at " + std::to_string(opener.line) + ":" +
                             std::to_string(opener.column) + ")",
                         peek().line, peek().column);
      }
      fail(std::string("expected '") + op + "'");
    }
    ++pos_;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (is_op("+") || is_op("-")) {
      const bool plus = peek().text == "+";
      ++pos_;
      Expr rhs = parse_term();
      lhs = plus ? add(lhs, rhs) : sub(lhs, rhs);
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (is_op("*") || is_op("/")) {
      const bool times = peek().text == "*";
      ++pos_;
      Expr rhs = parse_unary();
      lhs = times ? mul(lhs, rhs) : div(lhs, rhs);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (is_op("-")) {
      ++pos_;
      // A literal directly after the sign folds into a negative constant,
      // unless it is the base of a power.
      if (peek().kind == Tok::kNum && !(toks_[pos_ + 1].kind == Tok::kOp &&
                                        toks_[pos_ + 1].text == "^")) {
        const double v = peek().number;
        ++pos_;
        return constant(-v);
      }
      return neg(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (is_op("^")) {
      ++pos_;
      Expr ex = parse_unary();
      return pow(base, ex);
    }
    return base;
  }

  std::vector<Expr> parse_args(bool expand_groups) {
    std::vector<Expr> args;
    if (is_op(")")) return args;
    for (;;) {
      if (expand_groups && peek().kind == Tok::kIdent && layout_.has_group(peek().text) &&
          toks_[pos_ + 1].kind == Tok::kOp &&
          (toks_[pos_ + 1].text == "," || toks_[pos_ + 1].text == ")")) {
        for (int idx : layout_.indices(peek().text)) args.push_back(variable(layout_, idx));
        ++pos_;
      } else {
        args.push_back(parse_expr());
      }
      if (!is_op(",")) break;
      ++pos_;
    }
    return args;
  }

  Expr parse_primary() {
    const Token t = peek();
    if (t.kind == Tok::kNum) {
      ++pos_;
      return constant(t.number);
    }
    if (t.kind == Tok::kOp && t.text == "(") {
      ++pos_;
      Expr e = parse_expr();
      expect(")", t);
      return e;
    }
    if (t.kind == Tok::kIdent) {
      ++pos_;
      if (is_op("(")) {
        const Token open = peek();
        ++pos_;
        static const std::unordered_map<std::string, Func> kFuncs = {
            {"exp", Func::kExp},   {"log", Func::kLog},   {"sqrt", Func::kSqrt},
            {"sin", Func::kSin},   {"cos", Func::kCos},   {"norm", Func::kNorm},
            {"bump", Func::kBump}, {"plateau", Func::kPlateau}};
        auto it = kFuncs.find(t.text);
        if (it == kFuncs.end()) {
          throw ParseError("unknown function '" + t.text + "'", t.line, t.column);
        }
        const Func f = it->second;
        const bool variadic = f == Func::kNorm || f == Func::kBump || f == Func::kPlateau;
        std::vector<Expr> args = parse_args(variadic);
        expect(")", open);
        const size_t need_min = f == Func::kPlateau ? 2 : 1;
        if ((!variadic && args.size() != 1) || args.size() < need_min) {
          throw ParseError("arity mismatch in call to '" + t.text + "': got " +
                               std::to_string(args.size()) + " argument(s)",
                           t.line, t.column);
        }
        if (f == Func::kPlateau) {
          const Expr& r0 = args[0];
          const bool ok = (r0->kind == Kind::kConst && r0->value.imag() == 0.0 &&
                           r0->value.real() >= 0.0 && r0->value.real() < 1.0);
          if (!ok) {
            throw ParseError("plateau() inner radius must be a literal in [0, 1)", t.line,
                             t.column);
          }
        }
        return call(f, std::move(args));
      }
      if (t.text == "i") return constant(cplx(0.0, 1.0));
      if (t.text == "pi") return constant(std::numbers::pi);
      if (auto idx = layout_.resolve(t.text)) return variable(layout_, *idx);
      throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column);
    }
    if (t.kind == Tok::kEnd) fail("unexpected end of input");
    fail("unexpected token '" + t.text + "'");
  }

  std::vector<Token> toks_;
  const VarLayout& layout_;
  size_t pos_ = 0;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_into(const Node& n, std::string* out) {
  switch (n.kind) {
    case Kind::kConst: {
      const double re = n.value.real();
      const double im = n.value.imag();
      if (im == 0.0) {
        if (std::signbit(re)) {
          *out += "(" + fmt_double(re) + ")";
        } else {
          *out += fmt_double(re);
        }
      } else if (re == 0.0 && im == 1.0) {
        *out += "i";
      } else if (re == 0.0) {
        *out += "(" + fmt_double(im) + "*i)";
      } else {
        *out += "(" + fmt_double(re) + "+" + fmt_double(im) + "*i)";
      }
      return;
    }
    case Kind::kVar:
      *out += n.name;
      return;
    case Kind::kNeg:
      *out += "(-(";
      print_into(*n.args[0], out);
      *out += "))";
      return;
    case Kind::kAdd:
    case Kind::kSub:
    case Kind::kMul:
    case Kind::kDiv:
    case Kind::kPow: {
      static const char kOps[] = {'+', '-', '*', '/', '^'};
      const int k = static_cast<int>(n.kind) - static_cast<int>(Kind::kAdd);
      *out += "(";
      print_into(*n.args[0], out);
      *out += kOps[k];
      print_into(*n.args[1], out);
      *out += ")";
      return;
    }
    case Kind::kCall:
      *out += func_name(n.func);
      *out += "(";
      for (size_t k = 0; k < n.args.size(); ++k) {
        if (k) *out += ", ";
        print_into(*n.args[k], out);
      }
      *out += ")";
      return;
  }
}

}  // namespace

Expr parse(std::string_view source, const VarLayout& layout) {
  Parser p(lex(source), layout);
  return p.parse_all();
}

std::string print(const Expr& e) {
  std::string out;
  print_into(*e, &out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::kConst:
      return a->value == b->value;
    case Kind::kVar:
      return a->var == b->var;
    case Kind::kCall:
      if (a->func != b->func) return false;
      break;
    default:
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t k = 0; k < a->args.size(); ++k) {
    if (!equal(a->args[k], b->args[k])) return false;
  }
  return true;
}

namespace {

Expr rebuild(const Expr& e, const std::vector<Expr>& args) {
  auto n = std::make_shared<Node>(*e);
  n->args = args;
  return n;
}

}  // namespace

Expr remap(const Expr& e, const std::vector<int>& map, const VarLayout& target) {
  if (e->kind == Kind::kVar) return variable(target, map.at(static_cast<size_t>(e->var)));
  if (e->args.empty()) return e;
  std::vector<Expr> args;
  args.reserve(e->args.size());
  for (const auto& a : e->args) args.push_back(remap(a, map, target));
  return rebuild(e, args);
}

Expr substitute(const Expr& e, const std::vector<Expr>& sub) {
  if (e->kind == Kind::kVar) {
    const auto v = static_cast<size_t>(e->var);
    if (v < sub.size() && sub[v]) return sub[v];
    return e;
  }
  if (e->args.empty()) return e;
  std::vector<Expr> args;
  args.reserve(e->args.size());
  for (const auto& a : e->args) args.push_back(substitute(a, sub));
  return rebuild(e, args);
}

std::uint64_t dependencies(const Expr& e) {
  if (e->kind == Kind::kVar) return e->var < 64 ? (std::uint64_t{1} << e->var) : 0;
  std::uint64_t d = 0;
  for (const auto& a : e->args) d |= dependencies(a);
  return d;
}

bool has_imaginary_literal(const Expr& e) {
  if (e->kind == Kind::kConst) return e->value.imag() != 0.0;
  for (const auto& a : e->args) {
    if (has_imaginary_literal(a)) return true;
  }
  return false;
}

int node_count(const Expr& e) {
  int c = 1;
  for (const auto& a : e->args) c += node_count(a);
  return c;
}

// ---------------------------------------------------------------------------
// Scalar helpers

cplx ipow(const cplx& a, int n) {
  cplx result(1.0, 0.0);
  cplx base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

cplx checked_div(const cplx& a, const cplx& b) {
  if (b == cplx(0.0, 0.0)) throw DomainError("division by zero");
  return a / b;
}

cplx checked_log(const cplx& a) {
  if (a == cplx(0.0, 0.0)) throw DomainError("logarithm of zero");
  return std::log(a);
}

cplx cpow(const cplx& a, const cplx& b) {
  if (a == cplx(0.0, 0.0)) {
    if (b.real() > 0.0) return 0.0;
    throw DomainError("non-positive power of zero");
  }
  return std::exp(b * std::log(a));
}

namespace detail {
void throw_bad_node() { throw Error(ErrorCode::kInternal, "malformed expression node"); }
}  // namespace detail

cplx eval(const Expr& e, const std::vector<cplx>& point) {
  if (point.empty()) return evaluate(*e, std::vector<cplx>{cplx{}});
  return evaluate(*e, point);
}

cplx eval_real(const Expr& e, const std::vector<double>& point) {
  std::vector<cplx> z(point.begin(), point.end());
  return eval(e, z);
}

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e, int nvars) {
  (void)nvars;
  std::vector<std::pair<const Node*, int>> seen;
  result_ = emit(e, &seen);
  set_levels({});
}

int Program::emit(const Expr& e, std::vector<std::pair<const Node*, int>>* seen) {
  for (const auto& [p, r] : *seen) {
    if (p == e.get()) return r;
  }
  Instr in;
  in.kind = e->kind;
  in.func = e->func;
  switch (e->kind) {
    case Kind::kConst:
      in.c = e->value;
      break;
    case Kind::kVar:
      in.a = e->var;
      in.deps = e->var < 64 ? (std::uint64_t{1} << e->var) : 0;
      break;
    case Kind::kNeg:
      in.a = emit(e->args[0], seen);
      break;
    case Kind::kPow: {
      in.a = emit(e->args[0], seen);
      int k = 0;
      if (integer_exponent(*e->args[1], &k)) {
        in.use_ipow = true;
        in.ipow = k;
      } else {
        in.b = emit(e->args[1], seen);
      }
      break;
    }
    case Kind::kAdd:
    case Kind::kSub:
    case Kind::kMul:
    case Kind::kDiv:
      in.a = emit(e->args[0], seen);
      in.b = emit(e->args[1], seen);
      break;
    case Kind::kCall: {
      std::vector<int> regs;
      for (const auto& a : e->args) regs.push_back(emit(a, seen));
      in.arg_begin = static_cast<int>(arg_regs_.size());
      arg_regs_.insert(arg_regs_.end(), regs.begin(), regs.end());
      in.arg_end = static_cast<int>(arg_regs_.size());
      if (e->func == Func::kPlateau) in.c = e->args[0]->value;
      break;
    }
  }
  if (in.a >= 0 && in.kind != Kind::kVar) in.deps |= code_[static_cast<size_t>(in.a)].deps;
  if (in.b >= 0) in.deps |= code_[static_cast<size_t>(in.b)].deps;
  for (int k = in.arg_begin; k < in.arg_end; ++k) {
    in.deps |= code_[static_cast<size_t>(arg_regs_[static_cast<size_t>(k)])].deps;
  }
  code_.push_back(in);
  const int r = static_cast<int>(code_.size()) - 1;
  seen->emplace_back(e.get(), r);
  return r;
}

void Program::set_levels(const std::vector<int>& axis_level) {
  max_level_ = -1;
  for (auto& in : code_) {
    int lv = -1;
    for (int v = 0; v < 64; ++v) {
      if (in.deps & (std::uint64_t{1} << v)) {
        const int al = static_cast<size_t>(v) < axis_level.size() ? axis_level[static_cast<size_t>(v)] : 0;
        lv = std::max(lv, al);
      }
    }
    in.level = lv;
    max_level_ = std::max(max_level_, lv);
  }
  // Register indices are positions in code_; keep positions fixed and build
  // an execution order grouped by level instead.
  order_.clear();
  level_begin_.assign(static_cast<size_t>(max_level_ + 3), 0);
  for (int lv = -1; lv <= max_level_; ++lv) {
    level_begin_[static_cast<size_t>(lv + 1)] = static_cast<int>(order_.size());
    for (size_t k = 0; k < code_.size(); ++k) {
      if (code_[k].level == lv) order_.push_back(static_cast<int>(k));
    }
  }
  level_begin_[static_cast<size_t>(max_level_ + 2)] = static_cast<int>(order_.size());
}

void Program::exec(const Instr& in, const cplx* vars, cplx* regs, int self) const {
  cplx& out = regs[self];
  switch (in.kind) {
    case Kind::kConst: out = in.c; return;
    case Kind::kVar: out = vars[in.a]; return;
    case Kind::kNeg: out = -regs[in.a]; return;
    case Kind::kAdd: out = regs[in.a] + regs[in.b]; return;
    case Kind::kSub: out = regs[in.a] - regs[in.b]; return;
    case Kind::kMul: out = regs[in.a] * regs[in.b]; return;
    case Kind::kDiv: out = checked_div(regs[in.a], regs[in.b]); return;
    case Kind::kPow:
      if (in.use_ipow) {
        out = in.ipow >= 0 ? ipow(regs[in.a], in.ipow)
                           : checked_div(1.0, ipow(regs[in.a], -in.ipow));
      } else {
        out = cpow(regs[in.a], regs[in.b]);
      }
      return;
    case Kind::kCall:
      break;
  }
  const int* args = arg_regs_.data();
  switch (in.func) {
    case Func::kExp: out = std::exp(regs[args[in.arg_begin]]); return;
    case Func::kLog: out = checked_log(regs[args[in.arg_begin]]); return;
    case Func::kSqrt: out = std::sqrt(regs[args[in.arg_begin]]); return;
    case Func::kSin: out = std::sin(regs[args[in.arg_begin]]); return;
    case Func::kCos: out = std::cos(regs[args[in.arg_begin]]); return;
    case Func::kNorm:
    case Func::kBump:
    case Func::kPlateau: {
      cplx q = 0.0;
      const int first = in.func == Func::kPlateau ? in.arg_begin + 1 : in.arg_begin;
      for (int k = first; k < in.arg_end; ++k) {
        const cplx v = regs[args[k]];
        q += v * v;
      }
      if (in.func == Func::kNorm) {
        out = std::sqrt(q);
      } else if (in.func == Func::kBump) {
        out = q.real() >= 1.0 ? cplx(0.0) : std::exp(1.0 - 1.0 / (1.0 - q));
      } else {
        const double r0 = in.c.real();
        if (q.real() <= r0 * r0) {
          out = 1.0;
        } else if (q.real() >= 1.0) {
          out = 0.0;
        } else {
          const cplx tau = (1.0 - q) / (1.0 - r0 * r0);
          const cplx f0 = std::exp(-1.0 / tau);
          const cplx f1 = std::exp(-1.0 / (1.0 - tau));
          out = f0 / (f0 + f1);
        }
      }
      return;
    }
  }
}

void Program::run_level(int level, const cplx* vars, cplx* regs) const {
  const int b = level_begin_[static_cast<size_t>(level + 1)];
  const int e = level_begin_[static_cast<size_t>(level + 2)];
  for (int k = b; k < e; ++k) {
    const int idx = order_[static_cast<size_t>(k)];
    exec(code_[static_cast<size_t>(idx)], vars, regs, idx);
  }
}

void Program::run_all(const cplx* vars, cplx* regs) const {
  for (int lv = -1; lv <= max_level_; ++lv) run_level(lv, vars, regs);
}

cplx Program::operator()(const std::vector<cplx>& vars) const {
  std::vector<cplx> regs(code_.size());
  run_all(vars.data(), regs.data());
  return regs[static_cast<size_t>(result_)];
}

}  // namespace fiocalc::expr
