#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qrr/ast.hpp"

namespace qrr::dsl {

// ---------------------------------------------------------------------------
// lexer

enum class Tok { ident, integer, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  long long value = 0;  // for integer tokens
  int line = 1;
  int col = 1;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      size_t j = i;
      while (j < src.size() && src[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::integer;
      t.text = std::string(src.substr(i, j - i));
      t.value = std::stoll(t.text);
      advance(j - i);
    } else if (c == '>' && i + 1 < src.size() && src[i + 1] == '=') {
      t.kind = Tok::punct;
      t.text = ">=";
      advance(2);
    } else if (std::string_view("^(){};,+-*/=").find(c) != std::string_view::npos) {
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw syntax_error(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

// ---------------------------------------------------------------------------
// recursive-descent parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Corpus parse_corpus() {
    Corpus corpus;
    std::set<std::string> names;
    while (!at_end()) {
      if (accept_ident("identity")) {
        IdentityDoc doc = parse_identity();
        if (!names.insert(doc.name).second)
          throw error(errc::duplicate_name, doc.name);
        corpus.identities.push_back(std::move(doc));
      } else if (accept_ident("bailey")) {
        BaileyClosedForm b = parse_bailey();
        if (!names.insert(b.name).second)
          throw error(errc::duplicate_name, b.name);
        corpus.bailey_pairs.push_back(std::move(b));
      } else {
        fail("'identity' or 'bailey'");
      }
    }
    return corpus;
  }

  /// Parses a bare EXPR (for the expand command); all variables must be
  /// sum-bound.
  ExprPtr parse_bare_expr() {
    ExprPtr e = parse_expr();
    if (!at_end()) fail("end of expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::set<std::string> scope_;       // sum-bound variables
  std::set<std::string> free_vars_;   // extra names allowed free (bailey index)

  static bool reserved(const std::string& s) {
    static const std::set<std::string> kw = {"identity", "bailey", "mod",  "family", "lhs",
                                             "rhs",      "beta",   "poch", "triple", "sum",
                                             "inf",      "a",      "q"};
    return kw.count(s) > 0;
  }

  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == Tok::end; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = cur();
    std::string got = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw syntax_error(t.line, t.col, "expected " + expected + ", got " + got);
  }

  bool accept_punct(const std::string& p) {
    if (cur().kind == Tok::punct && cur().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("'" + p + "'");
  }

  bool accept_ident(const std::string& s) {
    if (cur().kind == Tok::ident && cur().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_ident(const std::string& s) {
    if (!accept_ident(s)) fail("'" + s + "'");
  }

  long long expect_int() {
    if (cur().kind != Tok::integer) fail("an integer");
    return toks_[pos_++].value;
  }

  std::string expect_name() {
    if (cur().kind != Tok::ident) fail("a name");
    return toks_[pos_++].text;
  }

  IdentityDoc parse_identity() {
    IdentityDoc doc;
    doc.name = expect_name();
    if (accept_ident("mod")) doc.modulus = expect_int();
    if (accept_ident("family")) {
      FamilyTag tag;
      tag.d = expect_int();
      tag.e = expect_int();
      tag.k = expect_int();
      tag.i = expect_int();
      doc.family = tag;
    }
    expect_punct("{");
    expect_ident("lhs");
    expect_punct("=");
    doc.lhs = parse_expr();
    expect_punct(";");
    expect_ident("rhs");
    expect_punct("=");
    doc.rhs = parse_expr();
    expect_punct(";");
    expect_punct("}");
    return doc;
  }

  BaileyClosedForm parse_bailey() {
    BaileyClosedForm b;
    b.name = expect_name();
    expect_ident("family");
    b.d = expect_int();
    b.e = expect_int();
    b.k = expect_int();
    expect_punct("{");
    expect_ident("beta");
    expect_punct("=");
    free_vars_.insert("n");
    b.beta = parse_expr();
    free_vars_.erase("n");
    expect_punct(";");
    expect_punct("}");
    return b;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (cur().kind == Tok::punct && (cur().text == "+" || cur().text == "-")) {
      const char op = toks_[pos_++].text[0];
      ExprPtr r = parse_term();
      e = make_expr(Expr{BinaryOp{op, e, r}});
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (cur().kind == Tok::punct && (cur().text == "*" || cur().text == "/")) {
      const Token& opt = toks_[pos_];
      const char op = toks_[pos_++].text[0];
      ExprPtr r = parse_factor();
      if (op == '/') validate_denominator(r, opt);
      e = make_expr(Expr{BinaryOp{op, e, r}});
    }
    return e;
  }

  // Div denominators must be products of Pochhammer factors and integer
  // literals; this keeps every division invertible by construction.
  void validate_denominator(const ExprPtr& e, const Token& at) const {
    const bool ok = std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PochFactor> || std::is_same_v<T, Literal>) {
            return true;
          } else if constexpr (std::is_same_v<T, BinaryOp>) {
            if (x.op != '*') return false;
            validate_denominator(x.lhs, at);
            validate_denominator(x.rhs, at);
            return true;
          } else {
            return false;
          }
        },
        e->node);
    if (!ok)
      throw syntax_error(at.line, at.col,
                         "denominator must be a product of poch(...) factors and integers");
  }

  ExprPtr parse_factor() {
    const Token& t = cur();
    if (t.kind == Tok::integer) {
      ++pos_;
      return make_expr(Expr{Literal{t.value}});
    }
    if (t.kind == Tok::punct && t.text == "-") {
      ++pos_;
      return make_expr(Expr{Negate{parse_factor()}});
    }
    if (t.kind == Tok::punct && t.text == "(") {
      // five-token lookahead for the alternating-sign form (-1)^(...)
      if (pos_ + 4 < toks_.size() && toks_[pos_ + 1].kind == Tok::punct &&
          toks_[pos_ + 1].text == "-" && toks_[pos_ + 2].kind == Tok::integer &&
          toks_[pos_ + 2].value == 1 && toks_[pos_ + 3].text == ")" &&
          toks_[pos_ + 4].text == "^") {
        pos_ += 5;
        expect_punct("(");
        QuadForm p = parse_poly();
        expect_punct(")");
        auto lin = p.to_linear();
        if (!lin) fail("a linear integer exponent for (-1)^(...)");
        Monomial m;
        m.sign_exp = *lin;
        return make_expr(Expr{std::move(m)});
      }
      ++pos_;
      ExprPtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::ident) {
      if (t.text == "a") {
        ++pos_;
        Monomial m;
        m.a_exp = parse_linear_exponent("a");
        return make_expr(Expr{std::move(m)});
      }
      if (t.text == "q") {
        ++pos_;
        Monomial m;
        m.q_exp = parse_quad_exponent();
        return make_expr(Expr{std::move(m)});
      }
      if (t.text == "poch") {
        ++pos_;
        return parse_poch();
      }
      if (t.text == "triple") {
        ++pos_;
        expect_punct("(");
        TripleProd tp;
        tp.x = expect_int();
        expect_punct(",");
        tp.modulus = expect_int();
        expect_punct(")");
        return make_expr(Expr{tp});
      }
      if (t.text == "sum") {
        ++pos_;
        return parse_sum();
      }
      fail("a factor");
    }
    fail("a factor");
  }

  // exponent after 'a^': INT or (POLY), must narrow to a linear integer form
  LinearForm parse_linear_exponent(const char* sym) {
    if (!accept_punct("^")) return LinearForm{1, {}};
    if (cur().kind == Tok::integer) return LinearForm{toks_[pos_++].value, {}};
    expect_punct("(");
    QuadForm p = parse_poly();
    expect_punct(")");
    auto lin = p.to_linear();
    if (!lin) fail(std::string("a linear integer exponent for ") + sym);
    return *lin;
  }

  QuadForm parse_quad_exponent() {
    QuadForm qf;
    if (!accept_punct("^")) {
      qf.constant = 1;
      return qf;
    }
    if (cur().kind == Tok::integer) {
      qf.constant = toks_[pos_++].value;
      return qf;
    }
    expect_punct("(");
    qf = parse_poly();
    expect_punct(")");
    return qf;
  }

  ExprPtr parse_poch() {
    expect_punct("(");
    PochFactor pf;
    // base monomial: [-] [a[^INT]] [*] [q[^exponent]]
    if (accept_punct("-")) pf.base_sign = -1;
    bool has_a = false, has_q = false;
    if (cur().kind == Tok::ident && cur().text == "a") {
      ++pos_;
      has_a = true;
      pf.base_a = 1;
      if (accept_punct("^")) pf.base_a = expect_int();
      accept_punct("*");
    }
    if (cur().kind == Tok::ident && cur().text == "q") {
      ++pos_;
      has_q = true;
      pf.base_q = parse_quad_exponent();
    }
    if (!has_a && !has_q) fail("a Pochhammer base of the form [-][a^j][q^k]");
    expect_punct(";");
    // step: q or q^INT
    expect_ident("q");
    pf.step = 1;
    if (accept_punct("^")) pf.step = expect_int();
    if (pf.step <= 0) fail("a positive Pochhammer step");
    expect_punct(";");
    if (accept_ident("inf")) {
      pf.length = std::nullopt;
    } else {
      QuadForm p = parse_poly();
      auto lin = p.to_linear();
      if (!lin) fail("a linear integer Pochhammer length or 'inf'");
      pf.length = *lin;
    }
    expect_punct(")");
    return make_expr(Expr{std::move(pf)});
  }

  ExprPtr parse_sum() {
    expect_punct("(");
    SumExpr s;
    std::vector<std::string> introduced;
    while (true) {
      std::string var = expect_name();
      if (reserved(var)) fail("a summation variable (got reserved name '" + var + "')");
      if (scope_.count(var) || free_vars_.count(var))
        fail("a fresh summation variable ('" + var + "' is already bound)");
      if (cur().kind != Tok::punct || cur().text != ">=") fail("'>='");
      ++pos_;
      long long lo = expect_int();
      s.bounds.emplace_back(var, lo);
      scope_.insert(var);
      introduced.push_back(var);
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    expect_punct("{");
    s.body = parse_expr();
    expect_punct("}");
    for (const auto& v : introduced) scope_.erase(v);
    return make_expr(Expr{std::move(s)});
  }

  // polynomial of degree <= 2 with rational coefficients over bound variables
  QuadForm parse_poly() {
    QuadForm qf;
    bool first = true;
    while (true) {
      int sign = +1;
      if (accept_punct("-")) {
        sign = -1;
      } else if (accept_punct("+")) {
        sign = +1;
      } else if (!first) {
        break;
      }
      parse_poly_term(qf, sign);
      first = false;
      if (cur().kind == Tok::punct && (cur().text == "+" || cur().text == "-")) continue;
      break;
    }
    return qf;
  }

  void parse_poly_term(QuadForm& qf, int sign) {
    Rat coef = sign;
    bool saw_coef = false;
    if (cur().kind == Tok::integer) {
      long long num = toks_[pos_++].value;
      long long den = 1;
      if (accept_punct("/")) den = expect_int();
      if (den == 0) fail("a nonzero denominator");
      coef *= Rat(num, den);
      saw_coef = true;
      accept_punct("*");
    }
    std::vector<std::string> vars;  // multiset of variables, expanded by power
    while (cur().kind == Tok::ident) {
      std::string var = toks_[pos_].text;
      if (reserved(var)) break;
      if (!scope_.count(var) && !free_vars_.count(var))
        throw error(errc::unbound_variable,
                    var + " (line " + std::to_string(cur().line) + ")");
      ++pos_;
      long long pw = 1;
      if (accept_punct("^")) {
        pw = expect_int();
        if (pw < 1 || pw > 2) fail("a variable power of 1 or 2");
      }
      for (long long j = 0; j < pw; ++j) vars.push_back(var);
      if (vars.size() > 2) fail("a term of degree at most 2");
      if (!accept_punct("*")) {
        // juxtaposition: allow an immediately following variable
        if (cur().kind != Tok::ident || reserved(cur().text)) break;
      }
    }
    if (vars.empty() && !saw_coef) fail("a polynomial term");
    if (vars.empty()) {
      qf.constant += coef;
    } else if (vars.size() == 1) {
      qf.linear[vars[0]] += coef;
      if (qf.linear[vars[0]] == 0) qf.linear.erase(vars[0]);
    } else {
      auto key = std::minmax(vars[0], vars[1]);
      qf.quadratic[{key.first, key.second}] += coef;
      if (qf.quadratic[{key.first, key.second}] == 0) qf.quadratic.erase({key.first, key.second});
    }
  }
};

inline Corpus parse(std::string_view text) { return Parser(text).parse_corpus(); }

inline ExprPtr parse_expression(std::string_view text) { return Parser(text).parse_bare_expr(); }

}  // namespace qrr::dsl
