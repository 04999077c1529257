#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qrr/errors.hpp"
#include "qrr/rational.hpp"

namespace qrr::dsl {

using Env = std::map<std::string, long long>;

/// Integer-coefficient linear form over summation variables (Pochhammer
/// lengths, a-exponents, alternating-sign exponents).
struct LinearForm {
  long long constant = 0;
  std::map<std::string, long long> coeffs;

  bool operator==(const LinearForm&) const = default;
  bool is_constant() const { return coeffs.empty(); }

  long long evaluate(const Env& env) const {
    long long v = constant;
    for (const auto& [var, c] : coeffs) {
      auto it = env.find(var);
      if (it == env.end()) throw error(errc::unbound_variable, var);
      v += c * it->second;
    }
    return v;
  }

  void collect_vars(std::set<std::string>& out) const {
    for (const auto& [var, c] : coeffs) out.insert(var);
  }
};

/// Rational-coefficient polynomial of degree <= 2 (q-exponents). Must
/// evaluate to an integer wherever it is used as an exponent.
struct QuadForm {
  Rat constant = Rat(0);
  std::map<std::string, Rat> linear;
  std::map<std::pair<std::string, std::string>, Rat> quadratic;  // keys (v1 <= v2)

  bool operator==(const QuadForm&) const = default;

  bool is_zero() const { return constant == 0 && linear.empty() && quadratic.empty(); }

  Rat evaluate(const Env& env) const {
    auto look = [&](const std::string& var) -> long long {
      auto it = env.find(var);
      if (it == env.end()) throw error(errc::unbound_variable, var);
      return it->second;
    };
    Rat v = constant;
    for (const auto& [var, c] : linear) v += c * look(var);
    for (const auto& [vars, c] : quadratic) v += c * look(vars.first) * look(vars.second);
    return v;
  }

  void collect_vars(std::set<std::string>& out) const {
    for (const auto& [var, c] : linear) out.insert(var);
    for (const auto& [vars, c] : quadratic) {
      out.insert(vars.first);
      out.insert(vars.second);
    }
  }

  // linear forms embed into quadratic ones
  static QuadForm from_linear(const LinearForm& lf) {
    QuadForm qf;
    qf.constant = lf.constant;
    for (const auto& [var, c] : lf.coeffs) qf.linear[var] = Rat(c);
    return qf;
  }

  // narrowing; returns nullopt when a coefficient is fractional or a
  // quadratic term is present
  std::optional<LinearForm> to_linear() const {
    if (!quadratic.empty() || !is_integer(constant)) return std::nullopt;
    LinearForm lf;
    lf.constant = static_cast<long long>(numerator(constant));
    for (const auto& [var, c] : linear) {
      if (!is_integer(c)) return std::nullopt;
      lf.coeffs[var] = static_cast<long long>(numerator(c));
    }
    return lf;
  }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  long long value = 0;
};

/// (-1)^sign_exp * a^a_exp * q^q_exp
struct Monomial {
  LinearForm sign_exp;  // evaluated mod 2
  LinearForm a_exp;
  QuadForm q_exp;
};

/// prod_{j=0..length-1} (1 - base_sign * a^base_a * q^(base_q + j*step));
/// length nullopt means the infinite product.
struct PochFactor {
  int base_sign = +1;
  long long base_a = 0;
  QuadForm base_q;
  long long step = 1;
  std::optional<LinearForm> length;
};

struct TripleProd {
  long long x = 0;
  long long modulus = 0;
};

struct SumExpr {
  std::vector<std::pair<std::string, long long>> bounds;  // var >= lower
  ExprPtr body;
};

struct Negate {
  ExprPtr operand;
};

struct BinaryOp {
  char op = '+';  // + - * /
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<Literal, Monomial, PochFactor, TripleProd, SumExpr, Negate, BinaryOp> node;
};

inline ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool equal(const ExprPtr& a, const ExprPtr& b);

inline bool equal_node(const Literal& x, const Literal& y) { return x.value == y.value; }
inline bool equal_node(const Monomial& x, const Monomial& y) {
  return x.sign_exp == y.sign_exp && x.a_exp == y.a_exp && x.q_exp == y.q_exp;
}
inline bool equal_node(const PochFactor& x, const PochFactor& y) {
  return x.base_sign == y.base_sign && x.base_a == y.base_a && x.base_q == y.base_q &&
         x.step == y.step && x.length == y.length;
}
inline bool equal_node(const TripleProd& x, const TripleProd& y) {
  return x.x == y.x && x.modulus == y.modulus;
}
inline bool equal_node(const SumExpr& x, const SumExpr& y) {
  return x.bounds == y.bounds && equal(x.body, y.body);
}
inline bool equal_node(const Negate& x, const Negate& y) { return equal(x.operand, y.operand); }
inline bool equal_node(const BinaryOp& x, const BinaryOp& y) {
  return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return equal_node(x, std::get<T>(b->node));
      },
      a->node);
}

struct FamilyTag {
  long long d = 0, e = 0, k = 0, i = 0;
  bool operator==(const FamilyTag&) const = default;
};

/// One named identity claim: lhs = rhs as q-series (bivariate when `a`
/// occurs).
struct IdentityDoc {
  std::string name;
  std::optional<long long> modulus;
  std::optional<FamilyTag> family;
  ExprPtr lhs;
  ExprPtr rhs;
  long long default_order = 50;
};

/// Closed-form beta of one Bailey pair; `n` is the free Bailey index.
struct BaileyClosedForm {
  std::string name;
  long long d = 1, e = 1, k = 1;
  ExprPtr beta;
};

struct Corpus {
  std::vector<IdentityDoc> identities;
  std::vector<BaileyClosedForm> bailey_pairs;

  void append(Corpus other) {
    for (auto& d : other.identities) identities.push_back(std::move(d));
    for (auto& b : other.bailey_pairs) bailey_pairs.push_back(std::move(b));
  }
};

inline bool doc_equal(const IdentityDoc& x, const IdentityDoc& y) {
  return x.name == y.name && x.modulus == y.modulus && x.family == y.family &&
         equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
}

/// True when the expression mentions the symbol `a` anywhere.
inline bool uses_a(const ExprPtr& e) {
  if (!e) return false;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return false;
        } else if constexpr (std::is_same_v<T, Monomial>) {
          return x.a_exp.constant != 0 || !x.a_exp.coeffs.empty();
        } else if constexpr (std::is_same_v<T, PochFactor>) {
          return x.base_a != 0;
        } else if constexpr (std::is_same_v<T, TripleProd>) {
          return false;
        } else if constexpr (std::is_same_v<T, SumExpr>) {
          return uses_a(x.body);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return uses_a(x.operand);
        } else {
          return uses_a(x.lhs) || uses_a(x.rhs);
        }
      },
      e->node);
}

}  // namespace qrr::dsl
