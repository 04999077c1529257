#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qrr/errors.hpp"
#include "qrr/rational.hpp"

namespace qrr {

// Exponent pair of one term: a^a_exp * q^q_exp. Ordered q-major so iteration
// walks ascending q, then ascending a within a q-degree.
struct xp {
  int q = 0;
  int a = 0;
  auto operator<=>(const xp&) const = default;
};

// Sentinel order for values known exactly (monomials, finite products that
// never hit a truncation cap).
inline constexpr long long k_exact_order = 1'000'000'000LL;

inline long long ord_plus(long long ord, long long delta) {
  return ord >= k_exact_order ? k_exact_order : ord + delta;
}

/// Truncated bivariate Laurent-in-q formal series in (a, q).
///
/// `terms` holds every nonzero coefficient with q_exp <= order_q and
/// a_exp <= order_a; within that box the value is exact. `order_q`/`order_a`
/// are the guaranteed truncation orders and shrink under Laurent shifts
/// (multiplying by q^-c costs c orders of certainty). `min_q`/`min_a` are
/// conservative lower bounds on the support of the untruncated value.
/// `a_overflow` records that a term with a_exp above `order_a` was discarded
/// at some q_exp <= order_q, which makes a sum over a at fixed q unsound.
struct BiSeries {
  std::map<xp, Rat> terms;
  long long order_q = k_exact_order;
  long long order_a = k_exact_order;
  int min_q = 0;
  int min_a = 0;
  bool a_overflow = false;

  static BiSeries zero() { return BiSeries{}; }

  static BiSeries one() { return monomial(Rat(1), 0, 0); }

  static BiSeries monomial(const Rat& c, int a_exp, int q_exp) {
    BiSeries s;
    if (c != 0) {
      s.terms[{q_exp, a_exp}] = c;
      s.min_q = q_exp;
      s.min_a = a_exp;
    }
    return s;
  }

  bool is_zero() const { return terms.empty(); }

  bool is_one() const {
    return terms.size() == 1 && terms.begin()->first == xp{0, 0} && terms.begin()->second == 1;
  }

  Rat coeff(int q_exp, int a_exp) const {
    auto it = terms.find({q_exp, a_exp});
    return it == terms.end() ? Rat(0) : it->second;
  }

  // Lowest stored q-exponent, or nullopt for the zero series.
  std::optional<int> lowest_q() const {
    if (terms.empty()) return std::nullopt;
    return terms.begin()->first.q;
  }

  int max_stored_a() const {
    int m = 0;
    for (const auto& [k, c] : terms) m = std::max(m, k.a);
    return m;
  }

  bool has_negative_exponent() const {
    for (const auto& [k, c] : terms)
      if (k.q < 0 || k.a < 0) return true;
    return false;
  }

  // True when every stored term satisfies a_exp <= q_exp. Products and
  // inverses preserve this shape, which is what makes eval at a=1 sound at
  // order_a = order_q without overflow.
  bool a_dominated_by_q() const {
    for (const auto& [k, c] : terms)
      if (k.a > k.q) return false;
    return true;
  }

  // Drop terms outside the claims box. Discards above cap_a at a still-claimed
  // q-exponent poison a=1 evaluation and set the overflow flag.
  void normalize(long long cap_q, long long cap_a) {
    bool q_capped = false, a_capped = false;
    std::vector<xp> dropped_a;
    long long nq = std::min(order_q, cap_q);
    long long na = std::min(order_a, cap_a);
    for (auto it = terms.begin(); it != terms.end();) {
      const xp k = it->first;
      if (k.q > order_q || k.a > order_a) {
        it = terms.erase(it);
      } else if (k.q > nq) {
        q_capped = true;
        it = terms.erase(it);
      } else if (k.a > na) {
        a_capped = true;
        dropped_a.push_back(k);
        it = terms.erase(it);
      } else {
        ++it;
      }
    }
    if (q_capped) order_q = nq;
    if (a_capped) {
      order_a = na;
      for (const xp& k : dropped_a)
        if (k.q <= order_q) a_overflow = true;
    }
  }
};

inline BiSeries add(const BiSeries& s, const BiSeries& t) {
  BiSeries r;
  r.terms = s.terms;
  for (const auto& [k, c] : t.terms) {
    Rat& v = r.terms[k];
    v += c;
    if (v == 0) r.terms.erase(k);
  }
  r.order_q = std::min(s.order_q, t.order_q);
  r.order_a = std::min(s.order_a, t.order_a);
  r.min_q = std::min(s.min_q, t.min_q);
  r.min_a = std::min(s.min_a, t.min_a);
  r.a_overflow = s.a_overflow || t.a_overflow;
  r.normalize(r.order_q, r.order_a);
  return r;
}

inline BiSeries negate(const BiSeries& s) {
  BiSeries r = s;
  for (auto& [k, c] : r.terms) c = -c;
  return r;
}

inline BiSeries sub(const BiSeries& s, const BiSeries& t) { return add(s, negate(t)); }

/// Product truncated to the given caps. Claims follow the error analysis:
/// unknown terms of s enter at q > s.order_q shifted by t.min_q and vice
/// versa; exact operands (order k_exact_order) contribute no error.
inline BiSeries mul(const BiSeries& s, const BiSeries& t, long long cap_q, long long cap_a) {
  BiSeries r;
  r.order_q = std::min(ord_plus(s.order_q, t.min_q), ord_plus(t.order_q, s.min_q));
  r.order_a = std::min(ord_plus(s.order_a, t.min_a), ord_plus(t.order_a, s.min_a));
  r.min_q = s.min_q + t.min_q;
  r.min_a = s.min_a + t.min_a;
  r.a_overflow = s.a_overflow || t.a_overflow;
  if (s.is_zero() || t.is_zero()) return r;
  const long long keep_q = std::min(r.order_q, cap_q);
  for (const auto& [k1, c1] : s.terms) {
    for (const auto& [k2, c2] : t.terms) {
      const int q = k1.q + k2.q;
      if (q > keep_q) continue;  // dropped below via normalize bookkeeping
      const xp k{q, k1.a + k2.a};
      Rat& v = r.terms[k];
      v += c1 * c2;
      if (v == 0) r.terms.erase(k);
    }
  }
  // The cap shrinks the claim only if it actually cut something.
  if (r.order_q > cap_q) {
    const int smax = s.terms.rbegin()->first.q;
    const int tmax = t.terms.rbegin()->first.q;
    if (smax + tmax > cap_q) r.order_q = cap_q;
  }
  r.normalize(cap_q, cap_a);
  return r;
}

/// Multiply by c * a^da * q^dq (exact shift; da/dq may be negative).
inline BiSeries mul_monomial(const BiSeries& s, const Rat& c, int da, int dq) {
  BiSeries r;
  if (c == 0) {
    r.order_q = k_exact_order;
    r.order_a = k_exact_order;
    return r;
  }
  r.order_q = ord_plus(s.order_q, dq);
  r.order_a = ord_plus(s.order_a, da);
  r.min_q = s.min_q + dq;
  r.min_a = s.min_a + da;
  r.a_overflow = s.a_overflow;
  for (const auto& [k, v] : s.terms) r.terms[{k.q + dq, k.a + da}] = v * c;
  return r;
}

inline BiSeries truncated(const BiSeries& s, long long cap_q, long long cap_a) {
  BiSeries r = s;
  r.normalize(cap_q, cap_a);
  r.order_q = std::min(r.order_q, cap_q);
  r.order_a = std::min(r.order_a, cap_a);
  return r;
}

/// Multiplicative inverse up to (cap_q, cap_a). Requires the lowest stored
/// q-exponent to carry an a-degree-0 coefficient (the series is then
/// q^v * unit); Laurent valuation v shifts the guaranteed order by 2v.
inline BiSeries invert(const BiSeries& s, long long cap_q, long long cap_a) {
  if (s.is_zero())
    throw error(errc::not_invertible, "zero series");
  if (s.terms.size() == 1) {
    // monomial: exact Laurent inverse
    const auto& [k, c] = *s.terms.begin();
    return BiSeries::monomial(Rat(1) / c, -k.a, -k.q);
  }
  const int v = *s.lowest_q();
  if (v > s.order_q)
    throw error(errc::not_invertible, "no known terms within guaranteed order");
  auto lead = s.terms.find({v, 0});
  if (lead == s.terms.end())
    throw error(errc::not_invertible,
                "lowest q-exponent " + std::to_string(v) + " has no a-degree-0 coefficient");
  for (const auto& [k, c] : s.terms)
    if (k.a < 0) throw error(errc::not_invertible, "negative a-exponent in divisor");

  // u = q^-v * s is a unit power series in q; invert it by convolution in
  // lexicographic (q, a) order, then shift back.
  const Rat u0 = lead->second;
  const long long ord_u = ord_plus(s.order_q, -v);
  const long long wq = std::min(ord_u, ord_plus(cap_q, v));
  const bool a_dep = s.max_stored_a() > 0;
  const long long wa = a_dep ? std::min(s.order_a, cap_a) : 0;
  if (wq >= k_exact_order || wa >= k_exact_order)
    throw error(errc::bad_parameters, "invert needs finite truncation caps");
  std::map<xp, Rat> u;
  for (const auto& [k, c] : s.terms) {
    if (k.q - v > wq || k.a > wa) continue;
    if (k == lead->first) continue;
    u[{k.q - v, k.a}] = c;
  }
  BiSeries w;
  w.terms[{0, 0}] = Rat(1) / u0;
  // w[k] = -(1/u0) * sum_{0 < k' <= k} u[k'] * w[k - k']
  // Computed by increasing key order; u terms all have q >= 0, a >= 0.
  for (long long qe = 0; qe <= wq; ++qe) {
    for (long long ae = 0; ae <= wa; ++ae) {
      if (qe == 0 && ae == 0) continue;
      Rat acc(0);
      for (const auto& [k, c] : u) {
        if (k.q > qe || k.a > ae) continue;
        auto it = w.terms.find({int(qe - k.q), int(ae - k.a)});
        if (it != w.terms.end()) acc += c * it->second;
      }
      if (acc != 0) w.terms[{int(qe), int(ae)}] = -acc / u0;
    }
  }
  BiSeries r = mul_monomial(w, Rat(1), 0, -v);
  r.order_q = std::min(ord_plus(ord_u, -v), cap_q);
  // The inverse of an a-dependent unit has unbounded a-degree. When every
  // term of the divisor satisfies a_exp <= q_exp the inverse keeps that
  // shape, so nothing is lost below order_q as long as order_a >= order_q.
  const bool shape_ok = s.a_dominated_by_q() && wa >= r.order_q;
  r.order_a = a_dep ? wa : k_exact_order;
  r.min_q = -v;
  r.min_a = 0;
  r.a_overflow = s.a_overflow || (a_dep && !shape_ok);
  return r;
}

/// Exact division by (1 - a). The dividend must be exact in a (a polynomial
/// within its claims); remainder is checked per q-exponent.
inline BiSeries divide_by_one_minus_a(const BiSeries& s, long long cap_q, long long cap_a) {
  if (s.order_a < k_exact_order)
    throw error(errc::insufficient_truncation,
                "dividend must be an exact polynomial in a for division by (1-a)");
  // Per fixed q: y_m = x_m - x_{m-1}  =>  x_m = sum_{t<=m} y_t, remainder = y(a=1).
  std::map<int, std::map<int, Rat>> by_q;
  for (const auto& [k, c] : s.terms) by_q[k.q][k.a] = c;
  BiSeries r;
  r.order_q = s.order_q;
  r.order_a = k_exact_order;
  r.min_q = s.min_q;
  r.min_a = std::min(s.min_a, 0);
  r.a_overflow = s.a_overflow;
  for (auto& [qe, col] : by_q) {
    if (!col.empty() && col.begin()->first < 0)
      throw error(errc::exact_division_failed, "Laurent a-exponent in dividend");
    Rat run(0);
    int top = col.empty() ? 0 : col.rbegin()->first;
    for (int m = 0; m <= top; ++m) {
      auto it = col.find(m);
      if (it != col.end()) run += it->second;
      if (m < top && run != 0) r.terms[{qe, m}] = run;
      if (m == top && run != 0)
        throw error(errc::exact_division_failed,
                    "nonzero remainder at q^" + std::to_string(qe));
    }
  }
  r.normalize(cap_q, cap_a);
  return r;
}

/// a -> a*q^d: term (a_exp, q_exp) moves to (a_exp, q_exp + d*a_exp).
/// Terms pushed past the guaranteed q-order are genuinely above truncation.
inline BiSeries subst_a_shift(const BiSeries& s, int d) {
  if (d <= 0) throw error(errc::bad_parameters, "substitution step must be positive");
  BiSeries r;
  r.order_q = s.order_q;
  r.order_a = s.order_a;
  r.min_a = s.min_a;
  r.a_overflow = s.a_overflow;
  int mq = 0;
  for (const auto& [k, c] : s.terms) {
    if (k.a < 0)
      throw error(errc::bad_parameters, "a-substitution on Laurent-in-a series");
    const int q = k.q + d * k.a;
    mq = std::min(mq, q);
    if (q > s.order_q) continue;
    r.terms[{q, k.a}] = c;
  }
  r.min_q = std::min(s.min_q, mq);
  return r;
}

/// Evaluate the a variable: v=0 keeps the a-degree-0 slice, v=1 sums
/// coefficients over a at each fixed q-exponent (requires no overflow).
inline BiSeries eval_a(const BiSeries& s, int v) {
  if (v != 0 && v != 1) throw error(errc::bad_parameters, "eval_a expects v in {0,1}");
  if (v == 1 && s.a_overflow)
    throw error(errc::overflow_unsound, "a-overflow: sum over a-degrees is incomplete");
  BiSeries r;
  r.order_q = s.order_q;
  r.order_a = k_exact_order;
  r.min_q = s.min_q;
  r.min_a = 0;
  for (const auto& [k, c] : s.terms) {
    if (v == 0 && k.a != 0) continue;
    Rat& acc = r.terms[{k.q, 0}];
    acc += c;
    if (acc == 0) r.terms.erase({k.q, 0});
  }
  return r;
}

struct Mismatch {
  int q_exp = 0;
  int a_exp = 0;
  Rat lhs;
  Rat rhs;
};

/// First differing coefficient within the common claims box, (q, a)-lex order.
inline std::optional<Mismatch> first_difference(const BiSeries& s, const BiSeries& t) {
  const long long nq = std::min(s.order_q, t.order_q);
  const long long na = std::min(s.order_a, t.order_a);
  std::map<xp, std::pair<Rat, Rat>> joined;
  for (const auto& [k, c] : s.terms)
    if (k.q <= nq && k.a <= na) joined[k].first = c;
  for (const auto& [k, c] : t.terms)
    if (k.q <= nq && k.a <= na) joined[k].second = c;
  for (const auto& [k, pr] : joined)
    if (pr.first != pr.second) return Mismatch{k.q, k.a, pr.first, pr.second};
  return std::nullopt;
}

inline bool equal_upto(const BiSeries& s, const BiSeries& t) {
  return !first_difference(s, t).has_value();
}

inline bool all_integer_coeffs(const BiSeries& s) {
  for (const auto& [k, c] : s.terms)
    if (!is_integer(c)) return false;
  return true;
}

inline std::string to_string(const BiSeries& s) {
  if (s.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : s.terms) {
    Rat v = c;
    if (!first) {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    }
    first = false;
    const bool unit = (v == 1) && (k.a != 0 || k.q != 0);
    if (!unit) os << v.str();
    if (k.a != 0) os << (unit ? "" : "*") << "a" << (k.a != 1 ? "^" + std::to_string(k.a) : "");
    if (k.q != 0)
      os << ((unit && k.a == 0) ? "" : "*") << "q" << (k.q != 1 ? "^" + std::to_string(k.q) : "");
  }
  return os.str();
}

}  // namespace qrr
