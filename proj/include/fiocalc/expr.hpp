// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Expression language for phases, amplitudes and cutoffs.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := NUMBER | 'i' | 'pi' | VAR | NAME '(' args ')' | '(' expr ')'
//
// Variables are a group name followed by a 1-based index (x1, theta2); a
// group of size one may also be written without the index. Inside norm(),
// bump() and plateau() a bare group name expands to all of its members.

#ifndef FIOCALC_EXPR_HPP
#define FIOCALC_EXPR_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fiocalc/error.hpp"

namespace fiocalc::expr {

using cplx = std::complex<double>;

struct VarGroup {
  std::string name;
  int size = 1;
  bool frequency = false;
};

class VarLayout {
 public:
  VarLayout() = default;
  explicit VarLayout(std::vector<VarGroup> groups);

  int dim() const { return dim_; }
  const std::vector<VarGroup>& groups() const { return groups_; }
  bool has_group(std::string_view name) const;
  const VarGroup& group(std::string_view name) const;
  // Offset of the first variable of a group; throws if absent.
  int offset(std::string_view name) const;
  // Flat indices of all members of a group.
  std::vector<int> indices(std::string_view name) const;
  std::optional<int> resolve(std::string_view identifier) const;
  std::string var_name(int index) const;
  bool is_frequency(int index) const;

 private:
  std::vector<VarGroup> groups_;
  int dim_ = 0;
};

enum class Kind : std::uint8_t { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
enum class Func : std::uint8_t { kExp, kLog, kSqrt, kSin, kCos, kNorm, kBump, kPlateau };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::kConst;
  Func func = Func::kExp;
  cplx value{};
  int var = -1;
  std::string name;  // variable name, kept for printing
  std::vector<Expr> args;
};

const char* func_name(Func f);

Expr parse(std::string_view source, const VarLayout& layout);
std::string print(const Expr& e);
bool equal(const Expr& a, const Expr& b);

// Builders.
Expr constant(cplx v);
Expr variable(const VarLayout& layout, int index);
Expr neg(Expr a);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr call(Func f, std::vector<Expr> args);

// Rewrites variable references. map[i] is the new flat index of old variable
// i; names come from the target layout.
Expr remap(const Expr& e, const std::vector<int>& map, const VarLayout& target);
// Replaces variable i by sub[i] where sub[i] is non-null.
Expr substitute(const Expr& e, const std::vector<Expr>& sub);

// Bitmask of variables referenced (supports up to 64 variables).
std::uint64_t dependencies(const Expr& e);
bool has_imaginary_literal(const Expr& e);
int node_count(const Expr& e);

// Scalar overloads used by the generic evaluator. Jets provide their own set
// in namespace fiocalc::jets, found by argument-dependent lookup.
inline cplx make_const(const cplx&, cplx c) { return c; }
inline cplx value0(const cplx& a) { return a; }
cplx ipow(const cplx& a, int n);
cplx checked_div(const cplx& a, const cplx& b);
cplx checked_log(const cplx& a);
cplx cpow(const cplx& a, const cplx& b);

namespace detail {
[[noreturn]] void throw_bad_node();
}

// Integer exponents up to this magnitude use repeated squaring.
inline constexpr int kMaxIntPow = 64;

inline bool integer_exponent(const Node& n, int* out) {
  if (n.kind != Kind::kConst || n.value.imag() != 0.0) return false;
  const double r = n.value.real();
  if (r != static_cast<double>(static_cast<int>(r)) || r > kMaxIntPow || r < -kMaxIntPow) {
    return false;
  }
  *out = static_cast<int>(r);
  return true;
}

// Generic evaluation over any scalar type T supporting the arithmetic
// operators and the overload set above.
template <class T>
T evaluate(const Node& n, const std::vector<T>& x) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  switch (n.kind) {
    case Kind::kConst:
      return make_const(x.at(0), n.value);
    case Kind::kVar:
      return x.at(static_cast<size_t>(n.var));
    case Kind::kNeg:
      return -evaluate(*n.args[0], x);
    case Kind::kAdd:
      return evaluate(*n.args[0], x) + evaluate(*n.args[1], x);
    case Kind::kSub:
      return evaluate(*n.args[0], x) - evaluate(*n.args[1], x);
    case Kind::kMul:
      return evaluate(*n.args[0], x) * evaluate(*n.args[1], x);
    case Kind::kDiv:
      return checked_div(evaluate(*n.args[0], x), evaluate(*n.args[1], x));
    case Kind::kPow: {
      const T base = evaluate(*n.args[0], x);
      int k = 0;
      if (integer_exponent(*n.args[1], &k)) {
        if (k >= 0) return ipow(base, k);
        return checked_div(make_const(base, 1.0), ipow(base, -k));
      }
      if (n.args[1]->kind == Kind::kConst) return cpow(base, n.args[1]->value);
      const T ex = evaluate(*n.args[1], x);
      return exp(ex * checked_log(base));
    }
    case Kind::kCall:
      break;
  }
  switch (n.func) {
    case Func::kExp:
      return exp(evaluate(*n.args[0], x));
    case Func::kLog:
      return checked_log(evaluate(*n.args[0], x));
    case Func::kSqrt:
      return sqrt(evaluate(*n.args[0], x));
    case Func::kSin:
      return sin(evaluate(*n.args[0], x));
    case Func::kCos:
      return cos(evaluate(*n.args[0], x));
    case Func::kNorm: {
      T q = make_const(x.at(0), 0.0);
      for (const auto& a : n.args) {
        const T v = evaluate(*a, x);
        q = q + v * v;
      }
      return sqrt(q);
    }
    case Func::kBump: {
      T q = make_const(x.at(0), 0.0);
      for (const auto& a : n.args) {
        const T v = evaluate(*a, x);
        q = q + v * v;
      }
      if (value0(q).real() >= 1.0) return make_const(q, 0.0);
      const T one = make_const(q, 1.0);
      return exp(one - checked_div(one, one - q));
    }
    case Func::kPlateau: {
      const double r0 = value0(evaluate(*n.args[0], x)).real();
      T q = make_const(x.at(0), 0.0);
      for (size_t k = 1; k < n.args.size(); ++k) {
        const T v = evaluate(*n.args[k], x);
        q = q + v * v;
      }
      const double q0 = value0(q).real();
      if (q0 <= r0 * r0) return make_const(q, 1.0);
      if (q0 >= 1.0) return make_const(q, 0.0);
      const T one = make_const(q, 1.0);
      const T tau = (one - q) * make_const(q, 1.0 / (1.0 - r0 * r0));
      const T f0 = exp(-checked_div(one, tau));
      const T f1 = exp(-checked_div(one, one - tau));
      return checked_div(f0, f0 + f1);
    }
  }
  detail::throw_bad_node();
}

template <class T>
T evaluate(const Expr& e, const std::vector<T>& x) {
  return evaluate(*e, x);
}

cplx eval(const Expr& e, const std::vector<cplx>& point);
cplx eval_real(const Expr& e, const std::vector<double>& point);

// Flat register program for repeated evaluation at many points. Each
// instruction records the deepest loop level it depends on so that tensor
// loops can recompute only what changed.
class Program {
 public:
  Program() = default;
  Program(const Expr& e, int nvars);

  int size() const { return static_cast<int>(code_.size()); }
  // Assigns every instruction a level: the maximum of axis_level[v] over the
  // variables it depends on (-1 when it depends on none). Reorders the code
  // so that each level is contiguous.
  void set_levels(const std::vector<int>& axis_level);
  int max_level() const { return max_level_; }
  // Evaluates instructions of exactly this level into regs.
  void run_level(int level, const cplx* vars, cplx* regs) const;
  void run_all(const cplx* vars, cplx* regs) const;
  cplx result(const cplx* regs) const { return regs[result_]; }
  int registers() const { return size(); }
  cplx operator()(const std::vector<cplx>& vars) const;

 private:
  struct Instr {
    Kind kind;
    Func func;
    int a = -1;
    int b = -1;
    int arg_begin = 0;
    int arg_end = 0;
    int ipow = 0;
    bool use_ipow = false;
    cplx c{};
    std::uint64_t deps = 0;
    int level = -1;
  };
  int emit(const Expr& e, std::vector<std::pair<const Node*, int>>* seen);
  void exec(const Instr& in, const cplx* vars, cplx* regs, int self) const;

  std::vector<Instr> code_;  // register k holds the value of code_[k]
  std::vector<int> arg_regs_;
  std::vector<int> order_;        // execution order grouped by level
  std::vector<int> level_begin_;  // level_begin_[l+1] indexes order_
  int result_ = 0;
  int max_level_ = -1;
};

}  // namespace fiocalc::expr

#endif  // FIOCALC_EXPR_HPP
