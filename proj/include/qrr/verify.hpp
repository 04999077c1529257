#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "qrr/ast.hpp"
#include "qrr/eval.hpp"

namespace qrr::dsl {

struct VerdictReport {
  enum class Status { equal, mismatch, failed };

  std::string name;
  long long order = 0;          // requested q-order
  long long order_checked = 0;  // q-order actually certified (= order unless an
                                // error cut the run short)
  long long a_order = -1;       // a-order for bivariate docs, -1 for q-only
  bool bivariate = false;
  Status status = Status::failed;
  std::optional<Mismatch> where;
  std::string error_kind;
  std::string error_message;
  double wall_ms = 0;
};

inline const char* status_name(VerdictReport::Status s) {
  switch (s) {
    case VerdictReport::Status::equal: return "equal";
    case VerdictReport::Status::mismatch: return "first_mismatch";
    case VerdictReport::Status::failed: return "error";
  }
  return "?";
}

/// Evaluates both sides of a doc and compares term maps exactly. q-only docs
/// compare at a-degree 0; docs mentioning `a` compare bivariate at (N, M).
/// A side whose final value still carries a negative q- or a-exponent is a
/// verdict error, not a crash.
inline VerdictReport verify(const IdentityDoc& doc, long long N, long long M) {
  VerdictReport rep;
  rep.name = doc.name;
  rep.order = N;
  rep.bivariate = uses_a(doc.lhs) || uses_a(doc.rhs);
  rep.a_order = rep.bivariate ? M : -1;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    BiSeries lhs = eval_expr(doc.lhs, N, M, rep.bivariate);
    BiSeries rhs = eval_expr(doc.rhs, N, M, rep.bivariate);
    rep.order_checked = std::min({N, lhs.order_q, rhs.order_q});
    if (lhs.has_negative_exponent() || rhs.has_negative_exponent()) {
      rep.status = VerdictReport::Status::failed;
      rep.error_kind = "NegativeExponentResidue";
      rep.error_message = "verified value retains a negative exponent";
    } else if (auto diff = first_difference(lhs, rhs)) {
      rep.status = VerdictReport::Status::mismatch;
      rep.where = diff;
    } else {
      rep.status = VerdictReport::Status::equal;
    }
  } catch (const error& e) {
    rep.status = VerdictReport::Status::failed;
    rep.error_kind = errc_name(e.code());
    rep.error_message = e.what();
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace qrr::dsl
