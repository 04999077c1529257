#pragma once

#include <sstream>
#include <string>

#include "qrr/ast.hpp"

namespace qrr::dsl {

// Canonical text rendering; parse(print(doc)) reproduces the AST.

inline std::string print_rat(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline std::string print_poly(const QuadForm& qf) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rat& coef, const std::string& vars) {
    Rat c = coef;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    if (vars.empty()) {
      os << print_rat(c);
    } else {
      if (c != 1) os << print_rat(c) << "*";
      os << vars;
    }
    first = false;
  };
  for (const auto& [vars, c] : qf.quadratic) {
    if (vars.first == vars.second)
      emit(c, vars.first + "^2");
    else
      emit(c, vars.first + "*" + vars.second);
  }
  for (const auto& [var, c] : qf.linear) emit(c, var);
  if (qf.constant != 0 || first) emit(qf.constant, "");
  return os.str();
}

inline std::string print_linear(const LinearForm& lf) {
  return print_poly(QuadForm::from_linear(lf));
}

inline bool form_is_zero(const LinearForm& lf) { return lf.constant == 0 && lf.coeffs.empty(); }
inline bool form_is_one(const LinearForm& lf) { return lf.constant == 1 && lf.coeffs.empty(); }

std::string print_expr(const ExprPtr& e, int parent_level);

inline std::string print_monomial(const Monomial& m) {
  std::ostringstream os;
  bool any = false;
  if (!form_is_zero(m.sign_exp)) {
    os << "(-1)^(" << print_linear(m.sign_exp) << ")";
    any = true;
  }
  if (!form_is_zero(m.a_exp)) {
    if (any) os << "*";
    if (form_is_one(m.a_exp))
      os << "a";
    else
      os << "a^(" << print_linear(m.a_exp) << ")";
    any = true;
  }
  if (!m.q_exp.is_zero()) {
    if (any) os << "*";
    if (m.q_exp == QuadForm{Rat(1), {}, {}})
      os << "q";
    else
      os << "q^(" << print_poly(m.q_exp) << ")";
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

inline std::string print_poch(const PochFactor& pf) {
  std::ostringstream os;
  os << "poch(";
  if (pf.base_sign < 0) os << "-";
  bool any = false;
  if (pf.base_a != 0) {
    os << "a";
    if (pf.base_a != 1) os << "^" << pf.base_a;
    any = true;
  }
  if (!pf.base_q.is_zero()) {
    if (any) os << "*";
    if (pf.base_q == QuadForm{Rat(1), {}, {}})
      os << "q";
    else
      os << "q^(" << print_poly(pf.base_q) << ")";
  }
  os << "; q";
  if (pf.step != 1) os << "^" << pf.step;
  os << "; ";
  if (pf.length)
    os << print_linear(*pf.length);
  else
    os << "inf";
  os << ")";
  return os.str();
}

// precedence levels: 1 additive, 2 multiplicative, 3 atomic
inline std::string print_expr(const ExprPtr& e, int parent_level = 0) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return std::to_string(x.value);
        } else if constexpr (std::is_same_v<T, Monomial>) {
          return print_monomial(x);
        } else if constexpr (std::is_same_v<T, PochFactor>) {
          return print_poch(x);
        } else if constexpr (std::is_same_v<T, TripleProd>) {
          return "triple(" + std::to_string(x.x) + ", " + std::to_string(x.modulus) + ")";
        } else if constexpr (std::is_same_v<T, SumExpr>) {
          std::string s = "sum(";
          for (size_t i = 0; i < x.bounds.size(); ++i) {
            if (i) s += ", ";
            s += x.bounds[i].first + " >= " + std::to_string(x.bounds[i].second);
          }
          s += "){ " + print_expr(x.body, 0) + " }";
          return s;
        } else if constexpr (std::is_same_v<T, Negate>) {
          std::string inner = print_expr(x.operand, 3);
          std::string s = "-" + inner;
          return parent_level >= 2 ? "(" + s + ")" : s;
        } else {
          const int level = (x.op == '+' || x.op == '-') ? 1 : 2;
          std::string l = print_expr(x.lhs, level);
          // right operand needs parens at equal level for - and /
          std::string r = print_expr(x.rhs, level + ((x.op == '-' || x.op == '/') ? 1 : 0));
          std::string s = l + " " + x.op + " " + r;
          return parent_level > level ? "(" + s + ")" : s;
        }
      },
      e->node);
}

inline std::string print_doc(const IdentityDoc& doc) {
  std::ostringstream os;
  os << "identity " << doc.name;
  if (doc.modulus) os << " mod " << *doc.modulus;
  if (doc.family)
    os << " family " << doc.family->d << " " << doc.family->e << " " << doc.family->k << " "
       << doc.family->i;
  os << " {\n";
  os << "  lhs = " << print_expr(doc.lhs) << ";\n";
  os << "  rhs = " << print_expr(doc.rhs) << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string print_bailey(const BaileyClosedForm& b) {
  std::ostringstream os;
  os << "bailey " << b.name << " family " << b.d << " " << b.e << " " << b.k << " {\n";
  os << "  beta = " << print_expr(b.beta) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace qrr::dsl
