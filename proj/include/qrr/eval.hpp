#pragma once

#include <map>
#include <tuple>

#include "qrr/ast.hpp"
#include "qrr/pochhammer.hpp"
#include "qrr/series.hpp"

namespace qrr::dsl {

namespace detail {
// thrown while evaluating a denominator whose Pochhammer length is negative;
// the enclosing quotient is exactly zero (1/(q;q)_{-m} = 0)
struct infinite_denominator {};
}  // namespace detail

/// One evaluation pass at fixed working truncation (order_q, order_a).
/// Laurent intermediates can lower the guaranteed order of the result; the
/// eval_expr wrapper retries with padding until the requested order is
/// certified.
class Evaluator {
 public:
  Evaluator(long long order_q, long long order_a, bool allow_a)
      : nw_(order_q), mw_(order_a), allow_a_(allow_a) {}

  BiSeries eval(const ExprPtr& e, const Env& env) {
    return std::visit([&](const auto& x) { return eval_node(x, env); }, e->node);
  }

  long long order_q() const { return nw_; }
  long long order_a() const { return mw_; }

 private:
  long long nw_;
  long long mw_;
  bool allow_a_;
  // resolved Pochhammer cache: (sign, a, offset, step, length;  -1 = inf)
  using PochKey = std::tuple<int, long long, long long, long long, long long>;
  std::map<PochKey, BiSeries> poch_cache_;
  std::map<PochKey, BiSeries> poch_inv_cache_;

  BiSeries eval_node(const Literal& x, const Env&) {
    return BiSeries::monomial(Rat(x.value), 0, 0);
  }

  BiSeries eval_node(const Monomial& x, const Env& env) {
    const long long sgn = x.sign_exp.evaluate(env);
    const long long a = x.a_exp.evaluate(env);
    if (a != 0 && !allow_a_)
      throw error(errc::bad_parameters, "'a' appears in a q-only evaluation");
    const long long q = to_integer_exponent(x.q_exp.evaluate(env), "q-exponent");
    const Rat c = (((sgn % 2) + 2) % 2 == 0) ? Rat(1) : Rat(-1);
    return BiSeries::monomial(c, static_cast<int>(a), static_cast<int>(q));
  }

  PochKey resolve_poch(const PochFactor& x, const Env& env) {
    if (x.base_a != 0 && !allow_a_)
      throw error(errc::bad_parameters, "'a' appears in a q-only evaluation");
    const long long off = to_integer_exponent(x.base_q.evaluate(env), "Pochhammer base exponent");
    long long len = -1;
    if (x.length) {
      len = x.length->evaluate(env);
      if (len < 0) throw detail::infinite_denominator{};
    }
    return {x.base_sign, x.base_a, off, x.step, len};
  }

  BiSeries poch_from_key(const PochKey& key) {
    auto it = poch_cache_.find(key);
    if (it != poch_cache_.end()) return it->second;
    auto [sign, a, off, step, len] = key;
    PochSpec spec{sign, static_cast<int>(a), off, step,
                  len < 0 ? std::optional<long long>{} : std::optional<long long>{len}};
    BiSeries s = poch(spec, nw_, mw_);
    poch_cache_.emplace(key, s);
    return s;
  }

  BiSeries eval_node(const PochFactor& x, const Env& env) {
    return poch_from_key(resolve_poch(x, env));
  }

  BiSeries eval_node(const TripleProd& x, const Env&) {
    return triple_product(x.x, x.modulus, nw_);
  }

  BiSeries eval_node(const Negate& x, const Env& env) { return negate(eval(x.operand, env)); }

  BiSeries eval_node(const BinaryOp& x, const Env& env) {
    if (x.op == '/') {
      // denominator first: a negative Pochhammer length there makes the whole
      // quotient exactly zero
      BiSeries den_inv;
      try {
        den_inv = denominator_inverse(x.rhs, env);
      } catch (const detail::infinite_denominator&) {
        return BiSeries::zero();
      }
      return mul(eval(x.lhs, env), den_inv, nw_, mw_);
    }
    BiSeries l = eval(x.lhs, env);
    BiSeries r = eval(x.rhs, env);
    switch (x.op) {
      case '+': return add(l, r);
      case '-': return sub(l, r);
      case '*': return mul(l, r, nw_, mw_);
      default: throw error(errc::bad_parameters, std::string("unknown operator ") + x.op);
    }
  }

  // denominators are products of Pochhammer factors and literals, so the
  // inverse distributes over the factors and each piece is cacheable
  BiSeries denominator_inverse(const ExprPtr& e, const Env& env) {
    return std::visit(
        [&](const auto& x) -> BiSeries {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PochFactor>) {
            const PochKey key = resolve_poch(x, env);
            auto it = poch_inv_cache_.find(key);
            if (it != poch_inv_cache_.end()) return it->second;
            BiSeries inv = invert(poch_from_key(key), nw_, mw_);
            poch_inv_cache_.emplace(key, inv);
            return inv;
          } else if constexpr (std::is_same_v<T, Literal>) {
            if (x.value == 0) throw error(errc::not_invertible, "division by zero literal");
            return BiSeries::monomial(Rat(1) / x.value, 0, 0);
          } else if constexpr (std::is_same_v<T, BinaryOp>) {
            if (x.op == '*')
              return mul(denominator_inverse(x.lhs, env), denominator_inverse(x.rhs, env), nw_,
                         mw_);
            return invert(eval(e, env), nw_, mw_);
          } else {
            return invert(eval(e, env), nw_, mw_);
          }
        },
        e->node);
  }

  // Sound lower bound for the q-support of a term at a fixed assignment; used
  // to prune summation without evaluating the term.
  long long min_q_bound(const ExprPtr& e, const Env& env) {
    return std::visit(
        [&](const auto& x) -> long long {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Literal>) {
            return 0;
          } else if constexpr (std::is_same_v<T, Monomial>) {
            const Rat v = x.q_exp.evaluate(env);
            Int num = numerator(v), den = denominator(v);
            // floor division is a sound lower bound even for fractional values
            Int fl = num / den;
            if (num < 0 && fl * den != num) fl -= 1;
            return static_cast<long long>(fl);
          } else if constexpr (std::is_same_v<T, PochFactor>) {
            if (x.length && x.length->evaluate(env) < 0) return k_exact_order;  // factor is "infinite"
            return 0;
          } else if constexpr (std::is_same_v<T, TripleProd>) {
            return 0;
          } else if constexpr (std::is_same_v<T, SumExpr>) {
            return -k_exact_order;  // unknown; never prune terms holding nested sums
          } else if constexpr (std::is_same_v<T, Negate>) {
            return min_q_bound(x.operand, env);
          } else {
            if (x.op == '*') {
              const long long a = min_q_bound(x.lhs, env);
              const long long b = min_q_bound(x.rhs, env);
              if (a >= k_exact_order || b >= k_exact_order) return k_exact_order;
              return a + b;
            }
            if (x.op == '/') {
              const long long b = min_q_bound(x.rhs, env);
              if (b >= k_exact_order) return k_exact_order;  // vanishing term
              return min_q_bound(x.lhs, env);
            }
            return std::min(min_q_bound(x.lhs, env), min_q_bound(x.rhs, env));
          }
        },
        e->node);
  }

  BiSeries eval_node(const SumExpr& x, const Env& env) {
    BiSeries acc;
    acc.order_q = nw_;
    Env scratch = env;
    sum_level(x, 0, scratch, acc);
    return acc;
  }

  // enumerate one summation variable; stops after the minimal exponent has
  // left the box and stays out, with the hard cap N+2 against runaways
  bool sum_level(const SumExpr& s, size_t level, Env& env, BiSeries& acc) {
    if (level == s.bounds.size()) {
      if (min_q_bound(s.body, env) > nw_) return false;
      acc = add(acc, eval(s.body, env));
      return true;
    }
    const auto& [var, lo] = s.bounds[level];
    bool any_ever = false;
    for (long long v = lo;; ++v) {
      if (v - lo > nw_ + 2)
        throw error(errc::insufficient_truncation,
                    "summation over '" + var + "' exceeded the cap without leaving the box");
      env[var] = v;
      const bool got = sum_level(s, level + 1, env, acc);
      any_ever = any_ever || got;
      if (!got) {
        // nothing here; stop once the next two values are also empty
        bool more = false;
        for (long long probe = 1; probe <= 2 && !more; ++probe) {
          env[var] = v + probe;
          more = probe_subtree(s, level + 1, env);
        }
        if (!more) break;
      }
    }
    env.erase(var);
    return any_ever;
  }

  bool probe_subtree(const SumExpr& s, size_t level, Env& env) {
    if (level == s.bounds.size()) return min_q_bound(s.body, env) <= nw_;
    const auto& [var, lo] = s.bounds[level];
    for (long long v = lo; v - lo <= nw_ + 2; ++v) {
      env[var] = v;
      if (probe_subtree(s, level + 1, env)) {
        env.erase(var);
        return true;
      }
    }
    env.erase(var);
    return false;
  }
};

/// Exact truncated value of an expression: evaluates with enough working
/// padding that the result is certified through (N, M), then truncates.
inline BiSeries eval_expr(const ExprPtr& e, long long N, long long M, bool a_free,
                          const Env& env = {}) {
  const long long m_req = a_free ? M : 0;
  long long pad_q = 0, pad_a = 0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Evaluator ev(N + pad_q, m_req + pad_a, a_free);
    BiSeries v;
    try {
      v = ev.eval(e, env);
    } catch (const detail::infinite_denominator&) {
      throw error(errc::bad_parameters, "negative Pochhammer length outside a denominator");
    }
    if (v.order_q >= N && v.order_a >= m_req) return truncated(v, N, m_req);
    pad_q += std::max(0LL, N - v.order_q) + 2;
    pad_a += std::max(0LL, m_req - v.order_a) + (a_free ? 2 : 0);
  }
  throw error(errc::insufficient_truncation, "requested order not reachable by padding");
}

}  // namespace qrr::dsl
