#include <catch2/catch_amalgamated.hpp>

#include "qrr/parser.hpp"
#include "qrr/printer.hpp"
#include "qrr/verify.hpp"

using namespace qrr;
using namespace qrr::dsl;

namespace {

const char* kRR1 =
    "identity rr1 mod 5 family 1 1 2 2 {\n"
    "  lhs = sum(n >= 0){ q^(n^2) / poch(q; q; n) };\n"
    "  rhs = triple(2, 5) / poch(q; q; inf);\n"
    "}\n";

const char* kARR2 =
    "identity arr2 family 1 1 2 1 {\n"
    "  lhs = sum(n >= 0){ a^(n) * q^(n^2+n) / poch(q; q; n) };\n"
    "  rhs = sum(n >= 0){ (-1)^(n) * a^(2n) * q^(5/2n^2 + 3/2n) * (1 - a*q^(2n+1))"
    " * poch(a*q; q; n) / poch(q; q; n) } / poch(a*q; q; inf);\n"
    "}\n";

}  // namespace

TEST_CASE("parse basics") {
  Corpus c = parse("identity t { lhs = 1; rhs = 1; }");
  REQUIRE(c.identities.size() == 1);
  CHECK(c.identities[0].name == "t");
  CHECK(std::holds_alternative<Literal>(c.identities[0].lhs->node));

  Corpus rr = parse(kRR1);
  REQUIRE(rr.identities.size() == 1);
  const IdentityDoc& doc = rr.identities[0];
  CHECK(doc.modulus == 5);
  REQUIRE(doc.family.has_value());
  CHECK(doc.family->d == 1);
  CHECK(doc.family->i == 2);
  CHECK(std::holds_alternative<SumExpr>(doc.lhs->node));
  CHECK(std::holds_alternative<BinaryOp>(doc.rhs->node));
  CHECK_FALSE(uses_a(doc.lhs));
}

TEST_CASE("parse errors") {
  // unbound variable outside any sum
  CHECK_THROWS_AS(parse("identity t { lhs = q^(n); rhs = 1; }"), error);
  try {
    parse("identity t { lhs = q^(n); rhs = 1; }");
  } catch (const error& e) {
    CHECK(e.code() == errc::unbound_variable);
  }

  // duplicate names in one corpus
  CHECK_THROWS_AS(parse("identity t { lhs = 1; rhs = 1; } identity t { lhs = 1; rhs = 1; }"),
                  error);
  try {
    parse("identity t { lhs = 1; rhs = 1; } identity t { lhs = 1; rhs = 1; }");
  } catch (const error& e) {
    CHECK(e.code() == errc::duplicate_name);
  }

  // malformed input carries line/column
  try {
    parse("identity t {\n lhs = ); rhs = 1; }");
    FAIL("expected syntax error");
  } catch (const syntax_error& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }

  // denominators restricted to poch/literal products
  CHECK_THROWS_AS(parse("identity t { lhs = 1 / (1 - q); rhs = 1; }"), error);

  // non-factor identifier
  CHECK_THROWS_AS(parse("identity t { lhs = sum(n >= 0){ n }; rhs = 1; }"), error);
}

TEST_CASE("print round trip") {
  const char* kitchen =
      "identity kitchen mod 7 family 2 2 3 1 {\n"
      "  lhs = sum(n >= 0, r >= 0){ (-1)^(n+r) * a^(2n+1) * q^(5/2n^2 - 1/2n + 3n*r)"
      " * poch(-a*q^2; q^2; 2n+1) * (1 + q^(n+r+1) - 2*q^2)"
      " / (poch(q; q; n) * poch(a^2*q^2; q^2; inf) * 3) };\n"
      "  rhs = 1 - triple(3, 14) / poch(q^2; q^2; inf);\n"
      "}\n";
  for (const char* src : {kRR1, kARR2, kitchen}) {
    Corpus c1 = parse(src);
    REQUIRE(c1.identities.size() == 1);
    std::string printed = print_doc(c1.identities[0]);
    INFO(printed);
    Corpus c2 = parse(printed);
    REQUIRE(c2.identities.size() == 1);
    CHECK(doc_equal(c1.identities[0], c2.identities[0]));
  }

  // bailey blocks round-trip too
  const char* bp =
      "bailey BP223 family 2 2 3 {\n"
      "  beta = poch(a*q^2; q^2; n) * sum(r >= 0){ a^(r) * q^(2n*r)"
      " / (poch(q^2; q^2; r) * poch(q^2; q^2; n-r)) } / poch(a^2*q^2; q^2; 2n);\n"
      "}\n";
  Corpus b1 = parse(bp);
  REQUIRE(b1.bailey_pairs.size() == 1);
  Corpus b2 = parse(print_bailey(b1.bailey_pairs[0]));
  REQUIRE(b2.bailey_pairs.size() == 1);
  CHECK(b1.bailey_pairs[0].name == b2.bailey_pairs[0].name);
  CHECK(equal(b1.bailey_pairs[0].beta, b2.bailey_pairs[0].beta));
}

TEST_CASE("eval basics") {
  CHECK(eval_expr(parse_expression("1"), 10, 0, false).is_one());

  // partition numbers from the DSL route
  BiSeries pgen = eval_expr(parse_expression("1 / poch(q; q; inf)"), 6, 0, false);
  const long long expect[] = {1, 1, 2, 3, 5, 7, 11};
  for (int j = 0; j <= 6; ++j) CHECK(pgen.coeff(j, 0) == expect[j]);

  // evaluation is a pure function of (doc, N, M)
  BiSeries again = eval_expr(parse_expression("1 / poch(q; q; inf)"), 6, 0, false);
  CHECK(equal_upto(pgen, again));
  CHECK(pgen.terms == again.terms);

  // negative Pochhammer length in a denominator kills the term
  BiSeries s = eval_expr(parse_expression("sum(n >= 0){ q^(n) / poch(q; q; 1-n) }"), 8, 0, false);
  // only n = 0 and n = 1 survive: (q;q)_1 and (q;q)_0
  BiSeries expect2 = add(invert(poch(PochSpec::finite(1, 0, 1, 1, 1), 8, 0), 8, 0),
                         BiSeries::monomial(Rat(1), 0, 1));
  CHECK(equal_upto(s, expect2));

  // fractional exponent is a hard error
  CHECK_THROWS_AS(eval_expr(parse_expression("q^(1/2)"), 10, 0, false), error);
  try {
    eval_expr(parse_expression("q^(1/2)"), 10, 0, false);
  } catch (const error& e) {
    CHECK(e.code() == errc::non_integer_exponent);
  }

  // 'a' is rejected in a q-only evaluation
  CHECK_THROWS_AS(eval_expr(parse_expression("a"), 10, 0, false), error);
}

TEST_CASE("verify equal and mismatch") {
  Corpus rr = parse(kRR1);
  VerdictReport rep = verify(rr.identities[0], 50, 0);
  CHECK(rep.status == VerdictReport::Status::equal);
  CHECK(rep.order_checked == 50);
  CHECK_FALSE(rep.bivariate);

  Corpus arr = parse(kARR2);
  VerdictReport brep = verify(arr.identities[0], 30, 30);
  CHECK(brep.status == VerdictReport::Status::equal);
  CHECK(brep.bivariate);
  CHECK(brep.a_order == 30);

  // perturbed kernel: q^(n^2+1) instead of q^(n^2)
  Corpus bad = parse(
      "identity bad { lhs = sum(n >= 0){ q^(n^2+1) / poch(q; q; n) };"
      " rhs = triple(2, 5) / poch(q; q; inf); }");
  VerdictReport mrep = verify(bad.identities[0], 50, 0);
  REQUIRE(mrep.status == VerdictReport::Status::mismatch);
  REQUIRE(mrep.where.has_value());
  CHECK(mrep.where->q_exp <= 4);

  // perturbed modulus: triple(2,7) against the RR1 sum
  Corpus bad2 = parse(
      "identity bad2 { lhs = sum(n >= 0){ q^(n^2) / poch(q; q; n) };"
      " rhs = triple(2, 7) / poch(q; q; inf); }");
  VerdictReport mrep2 = verify(bad2.identities[0], 50, 0);
  REQUIRE(mrep2.status == VerdictReport::Status::mismatch);
  REQUIRE(mrep2.where.has_value());
  CHECK(mrep2.where->q_exp <= 4);
}

TEST_CASE("verify error wrapping") {
  Corpus c = parse("identity e { lhs = q^(1/2); rhs = 1; }");
  VerdictReport rep = verify(c.identities[0], 10, 0);
  CHECK(rep.status == VerdictReport::Status::failed);
  CHECK(rep.error_kind == "NonIntegerExponent");
}
