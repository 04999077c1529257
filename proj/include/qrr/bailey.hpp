#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qrr/family.hpp"
#include "qrr/pochhammer.hpp"
#include "qrr/series.hpp"

namespace qrr {

namespace detail {

// Summation guard: every sum here has a term exponent growing at least
// quadratically, so an index exceeding N+2 without leaving the box means the
// truncation bookkeeping went wrong.
inline void check_sum_cap(long long idx, long long N, const char* what) {
  if (idx > N + 2)
    throw error(errc::insufficient_truncation,
                std::string(what) + ": summation index exceeded cap without exponent growth");
}

}  // namespace detail

/// Alpha sequence of the multiparameter Bailey pair at b = 0, in the
/// (a^e, q^e) specialization; the sequence is supported on indices d*r and
/// this returns the spike at r:
///
///   alpha_{d r} = (-1)^r a^{(k-d)r} q^{d(k-d)r^2 + d r(r-1)/2}
///                 (1 - a q^{2dr}) (a; q^d)_r / ((1-a)(q^d; q^d)_r).
///
/// The division by (1-a) is exact and performed as checked polynomial
/// division. For k < d the a-exponent is negative (Laurent in a).
inline BiSeries smpbp_alpha_b0(const FamilyParams& p, long long r, long long N, long long M) {
  p.validate();
  if (r < 0) throw error(errc::bad_parameters, "alpha index must be nonnegative");
  const long long q_exp = p.d * (p.k - p.d) * r * r + p.d * r * (r - 1) / 2;
  const long long a_exp = (p.k - p.d) * r;
  // (1 - a q^(2dr)) (a; q^d)_r, divided exactly by (1-a); kept exact (it is a
  // small polynomial), so the monomial shift below costs no precision.
  BiSeries num = sub(BiSeries::one(), BiSeries::monomial(Rat(1), 1, static_cast<int>(2 * p.d * r)));
  num = mul(num, poch(PochSpec::finite(+1, 1, 0, p.d, r), k_exact_order, k_exact_order),
            k_exact_order, k_exact_order);
  BiSeries kernel = divide_by_one_minus_a(num, k_exact_order, k_exact_order);
  BiSeries term = mul_monomial(kernel, (r % 2 == 0) ? Rat(1) : Rat(-1),
                               static_cast<int>(a_exp), static_cast<int>(q_exp));
  const long long Nq = N - std::min<long long>(q_exp, 0);
  BiSeries inv_qq = invert(poch(PochSpec::finite(+1, 0, p.d, p.d, r), Nq, 0), Nq, M);
  return truncated(mul(term, inv_qq, N, M), N, M);
}

/// beta_n(a^e, 0, q^e) from the Bailey pair defining relation:
///   beta_n = sum_{r=0..n} alpha_r / ((q^e;q^e)_{n-r} (a^e q^e;q^e)_{n+r})
/// with alpha supported on multiples of d.
inline BiSeries beta_from_alpha(const FamilyParams& p, long long n, long long N, long long M) {
  p.validate();
  if (n < 0) throw error(errc::bad_parameters, "beta index must be nonnegative");
  // Laurent-in-q intermediates appear when k < d; widen the working order so
  // the result is still exact through N.
  long long dip = 0;
  for (long long s = 0; p.d * s <= n; ++s)
    dip = std::min(dip, p.d * (p.k - p.d) * s * s + p.d * s * (s - 1) / 2);
  const long long Nw = N - dip;
  const long long Mw = M + std::max<long long>(0, -(p.k - p.d) * (n / p.d));
  BiSeries acc;
  acc.order_q = Nw;
  acc.order_a = Mw;
  for (long long s = 0; p.d * s <= n; ++s) {
    const long long r = p.d * s;
    BiSeries t = smpbp_alpha_b0(p, s, Nw, Mw);
    t = mul(t, invert(poch(PochSpec::finite(+1, 0, p.e, p.e, n - r), Nw, Mw), Nw, Mw), Nw, Mw);
    t = mul(t, invert(poch(PochSpec::finite(+1, static_cast<int>(p.e), p.e, p.e, n + r), Nw, Mw),
                      Nw, Mw),
            Nw, Mw);
    acc = add(acc, t);
  }
  return truncated(acc, N, M);
}

/// Q_i(a) by its defining sum:
///   1/(a^e q^e;q^e)_inf * sum_n (-1)^n a^{Kn} q^{(K+1/2)d n^2 + (K+1/2-i)d n}
///                         (1 - a^i q^{(2n+1)di}) (a q^d;q^d)_n / (q^d;q^d)_n.
inline BiSeries q_direct(const FamilyParams& p, long long i, long long N, long long M) {
  p.validate();
  const long long K = p.K();
  if (i < 1 || i > K)
    throw error(errc::index_out_of_range,
                "member index " + std::to_string(i) + " outside [1, " + std::to_string(K) + "]");
  BiSeries sum;
  sum.order_q = N;
  sum.order_a = M;
  BiSeries poch_a = BiSeries::one();  // (a q^d; q^d)_n, grown incrementally
  BiSeries poch_q = BiSeries::one();  // (q^d; q^d)_n
  for (long long n = 0;; ++n) {
    // d((2K+1)n^2 + (2K+1-2i)n)/2; the numerator is always even
    const long long num = (2 * K + 1) * n * n + (2 * K + 1 - 2 * i) * n;
    const long long q_exp = p.d * num / 2;
    if (q_exp > N) break;
    detail::check_sum_cap(n, N, "q_direct");
    if (n > 0) {
      poch_a = mul(poch_a,
                   sub(BiSeries::one(), BiSeries::monomial(Rat(1), 1, static_cast<int>(p.d * n))),
                   N, M);
      poch_q = mul(poch_q,
                   sub(BiSeries::one(), BiSeries::monomial(Rat(1), 0, static_cast<int>(p.d * n))),
                   N, M);
    }
    BiSeries kernel = sub(BiSeries::one(),
                          BiSeries::monomial(Rat(1), static_cast<int>(i),
                                             static_cast<int>((2 * n + 1) * p.d * i)));
    BiSeries t = mul_monomial(kernel, (n % 2 == 0) ? Rat(1) : Rat(-1),
                              static_cast<int>(K * n), static_cast<int>(q_exp));
    t = mul(t, poch_a, N, M);
    t = mul(t, invert(poch_q, N, M), N, M);
    sum = add(sum, t);
  }
  BiSeries pref = invert(poch(PochSpec::infinite(+1, static_cast<int>(p.e), p.e, p.e), N, M), N, M);
  return mul(sum, pref, N, M);
}

/// Q_K(a) in its single-sum form with the (1 - a q^{2dn})(a;q^d)_n/(1-a)
/// kernel; must agree with q_direct(p, K) as a series.
inline BiSeries q_lemma_form(const FamilyParams& p, long long N, long long M) {
  p.validate();
  const long long K = p.K();
  BiSeries sum;
  sum.order_q = N;
  sum.order_a = M;
  for (long long n = 0;; ++n) {
    const long long num = (2 * K + 1) * n * n - n;  // always even
    const long long q_exp = p.d * num / 2;
    if (q_exp > N) break;
    detail::check_sum_cap(n, N, "q_lemma_form");
    BiSeries raw = sub(BiSeries::one(),
                       BiSeries::monomial(Rat(1), 1, static_cast<int>(2 * p.d * n)));
    raw = mul(raw, poch(PochSpec::finite(+1, 1, 0, p.d, n), k_exact_order, k_exact_order),
              k_exact_order, k_exact_order);
    BiSeries kernel = divide_by_one_minus_a(raw, N, k_exact_order);
    BiSeries t = mul_monomial(kernel, (n % 2 == 0) ? Rat(1) : Rat(-1),
                              static_cast<int>(K * n), static_cast<int>(q_exp));
    t = mul(t, invert(poch(PochSpec::finite(+1, 0, p.d, p.d, n), N, 0), N, M), N, M);
    sum = add(sum, t);
  }
  BiSeries pref = invert(poch(PochSpec::infinite(+1, static_cast<int>(p.e), p.e, p.e), N, M), N, M);
  return mul(sum, pref, N, M);
}

/// Both sides of the limiting Bailey lemma specialization:
///   left  = sum_n a^{en} q^{en^2} beta_n(a^e, 0, q^e)
///   right = 1/(a^e q^e;q^e)_inf * sum_n a^{en} q^{en^2} alpha_n(a^e, 0, q^e).
/// `beta` may substitute a closed form; defaults to beta_from_alpha.
inline std::pair<BiSeries, BiSeries> wbl_sides(
    const FamilyParams& p, long long N, long long M,
    const std::function<BiSeries(long long)>& beta = {}) {
  p.validate();
  BiSeries left;
  left.order_q = N;
  left.order_a = M;
  for (long long n = 0;; ++n) {
    const long long w = p.e * n * n;
    if (w > N) break;
    detail::check_sum_cap(n, N, "wbl left");
    BiSeries b = beta ? beta(n) : beta_from_alpha(p, n, N, M);
    left = add(left, mul_monomial(b, Rat(1), static_cast<int>(p.e * n), static_cast<int>(w)));
  }
  left = truncated(left, N, M);

  BiSeries rsum;
  rsum.order_q = N;
  rsum.order_a = M;
  for (long long r = 0;; ++r) {
    // weight exponent e d^2 r^2 plus the alpha spike's own exponent
    const long long total = p.d * p.K() * r * r + p.d * r * (r - 1) / 2;
    if (total > N) break;
    detail::check_sum_cap(r, N, "wbl right");
    BiSeries t = smpbp_alpha_b0(p, r, N + std::max<long long>(0, -total) + 1, M + 1);
    t = mul_monomial(t, Rat(1), static_cast<int>(p.e * p.d * r),
                     static_cast<int>(p.e * p.d * p.d * r * r));
    rsum = add(rsum, truncated(t, N, M));
  }
  BiSeries pref = invert(poch(PochSpec::infinite(+1, static_cast<int>(p.e), p.e, p.e), N, M), N, M);
  BiSeries right = mul(rsum, pref, N, M);
  return {left, right};
}

/// Residuals of the q-difference system; all K of them must be zero series.
///   res[1] = Q_1(a) - (1-aq^d)/(a^e q^e;q^e)_d * Q_K(a q^d)
///   res[i] = Q_i(a) - Q_{i-1}(a)
///            - (1-aq^d) a^{i-1} q^{d(i-1)}/(a^e q^e;q^e)_d * Q_{K-i+1}(a q^d)
inline std::vector<BiSeries> qdiff_residuals(const FamilyParams& p, long long N, long long M) {
  p.validate();
  const long long K = p.K();
  std::vector<BiSeries> Q(K + 1);
  for (long long i = 1; i <= K; ++i) Q[i] = q_direct(p, i, N, M);
  BiSeries c1 = mul(sub(BiSeries::one(), BiSeries::monomial(Rat(1), 1, static_cast<int>(p.d))),
                    invert(poch(PochSpec::finite(+1, static_cast<int>(p.e), p.e, p.e, p.d), N, M),
                           N, M),
                    N, M);
  std::vector<BiSeries> res;
  res.reserve(K);
  res.push_back(sub(Q[1], mul(c1, subst_a_shift(Q[K], static_cast<int>(p.d)), N, M)));
  for (long long i = 2; i <= K; ++i) {
    BiSeries ci = mul_monomial(c1, Rat(1), static_cast<int>(i - 1), static_cast<int>(p.d * (i - 1)));
    BiSeries rhs = mul(ci, subst_a_shift(Q[K - i + 1], static_cast<int>(p.d)), N, M);
    res.push_back(sub(sub(Q[i], Q[i - 1]), rhs));
  }
  return res;
}

/// Solves the q-difference system for all K members given the last one,
/// in zig-zag order F_1, F_{K-1}, F_2, F_{K-2}, ... Every intermediate only
/// uses members already known.
inline std::vector<BiSeries> derive_family(const FamilyParams& p, const BiSeries& F_K,
                                           long long N, long long M) {
  p.validate();
  const long long K = p.K();
  const int d = static_cast<int>(p.d);
  BiSeries c1 = mul(sub(BiSeries::one(), BiSeries::monomial(Rat(1), 1, d)),
                    invert(poch(PochSpec::finite(+1, static_cast<int>(p.e), p.e, p.e, p.d), N, M),
                           N, M),
                    N, M);
  auto c = [&](long long i) {
    return mul_monomial(c1, Rat(1), static_cast<int>(i - 1), static_cast<int>(p.d * (i - 1)));
  };
  std::vector<BiSeries> F(K + 1);
  if (K == 1) {
    // degenerate zig-zag: the single relation applied to the seed
    F[1] = mul(c1, subst_a_shift(F_K, d), N, M);
    return {F[1]};
  }
  F[K] = F_K;
  F[1] = mul(c1, subst_a_shift(F[K], d), N, M);
  long long lo = 1, hi = K;
  while (hi - lo > 1) {
    F[hi - 1] = sub(F[hi], mul(c(hi), subst_a_shift(F[K - hi + 1], d), N, M));
    --hi;
    if (hi - lo > 1) {
      F[lo + 1] = add(F[lo], mul(c(lo + 1), subst_a_shift(F[K - lo], d), N, M));
      ++lo;
    }
  }
  std::vector<BiSeries> out;
  out.reserve(K);
  for (long long i = 1; i <= K; ++i) out.push_back(truncated(F[i], N, M));
  return out;
}

/// Product side of member i: triple_product(d i, d(2K+1)) / (q^e;q^e)_inf.
inline BiSeries product_side(const FamilyParams& p, long long i, long long N) {
  p.validate();
  const long long K = p.K();
  if (i < 1 || i > K)
    throw error(errc::index_out_of_range,
                "member index " + std::to_string(i) + " outside [1, " + std::to_string(K) + "]");
  BiSeries tp = triple_product(p.d * i, p.modulus(), N);
  BiSeries inv_e = invert(poch(PochSpec::infinite(+1, 0, p.e, p.e), N, 0), N, 0);
  return mul(tp, inv_e, N, 0);
}

struct CheckResult {
  std::string name;
  bool pass = false;
  long long member = -1;  // failing member index, when applicable
  std::optional<Mismatch> where;
  std::string detail;
};

struct FamilyReport {
  FamilyParams params;
  long long order_q = 0;
  long long order_a = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> product_labels;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::string product_label(const FamilyParams& p, long long i) {
  const long long P = p.modulus();
  return "(q^" + std::to_string(p.d * i) + ", q^" + std::to_string(P - p.d * i) + ", q^" +
         std::to_string(P) + "; q^" + std::to_string(P) + ")_inf / (q^" + std::to_string(p.e) +
         "; q^" + std::to_string(p.e) + ")_inf";
}

namespace detail {

inline void run_check(FamilyReport& rep, const std::string& name,
                      const std::function<CheckResult()>& body) {
  CheckResult r;
  try {
    r = body();
  } catch (const error& e) {
    r.pass = false;
    r.detail = e.what();
  }
  r.name = name;
  rep.checks.push_back(std::move(r));
}

}  // namespace detail

/// Runs every per-family consistency check at (N, M); mathematical mismatches
/// are reported, never thrown.
inline FamilyReport check_family(const FamilyParams& p, long long N, long long M) {
  p.validate();
  const long long K = p.K();
  FamilyReport rep;
  rep.params = p;
  rep.order_q = N;
  rep.order_a = M;
  for (long long i = 1; i <= K; ++i) rep.product_labels.push_back(product_label(p, i));

  std::vector<BiSeries> Q(K + 1);
  for (long long i = 1; i <= K; ++i) Q[i] = q_direct(p, i, N, M);

  detail::run_check(rep, "initial-conditions", [&] {
    CheckResult r;
    r.pass = true;
    for (long long i = 1; i <= K; ++i) {
      if (!eval_a(Q[i], 0).is_one()) {
        r.pass = false;
        r.member = i;
        r.detail = "Q_i(0) != 1";
        break;
      }
    }
    return r;
  });

  BiSeries lemma;
  detail::run_check(rep, "lemma-form", [&] {
    CheckResult r;
    lemma = q_lemma_form(p, N, M);
    auto diff = first_difference(lemma, Q[K]);
    r.pass = !diff.has_value();
    r.where = diff;
    r.member = K;
    return r;
  });

  detail::run_check(rep, "wbl", [&] {
    CheckResult r;
    auto [left, right] = wbl_sides(p, N, M);
    auto d1 = first_difference(left, right);
    auto d2 = first_difference(right, Q[K]);
    r.pass = !d1.has_value() && !d2.has_value();
    r.where = d1 ? d1 : d2;
    r.member = K;
    return r;
  });

  detail::run_check(rep, "qdiff-residuals", [&] {
    CheckResult r;
    r.pass = true;
    auto res = qdiff_residuals(p, N, M);
    for (long long i = 0; i < K; ++i) {
      if (!res[i].is_zero()) {
        r.pass = false;
        r.member = i + 1;
        const auto& k = res[i].terms.begin()->first;
        r.where = Mismatch{k.q, k.a, res[i].terms.begin()->second, Rat(0)};
        break;
      }
    }
    return r;
  });

  detail::run_check(rep, "zigzag-derivation", [&] {
    CheckResult r;
    r.pass = true;
    const BiSeries seed = lemma.is_zero() && K > 0 ? q_lemma_form(p, N, M) : lemma;
    auto F = derive_family(p, seed, N, M);
    for (long long i = 1; i <= K; ++i) {
      auto diff = first_difference(F[i - 1], Q[i]);
      if (diff) {
        r.pass = false;
        r.member = i;
        r.where = diff;
        break;
      }
    }
    return r;
  });

  detail::run_check(rep, "product-sides", [&] {
    CheckResult r;
    r.pass = true;
    for (long long i = 1; i <= K; ++i) {
      auto diff = first_difference(eval_a(Q[i], 1), product_side(p, i, N));
      if (diff) {
        r.pass = false;
        r.member = i;
        r.where = diff;
        break;
      }
    }
    return r;
  });

  detail::run_check(rep, "integrality", [&] {
    CheckResult r;
    r.pass = true;
    for (long long i = 1; i <= K; ++i) {
      if (!all_integer_coeffs(Q[i])) {
        r.pass = false;
        r.member = i;
        r.detail = "non-integer coefficient";
        break;
      }
    }
    return r;
  });

  return rep;
}

}  // namespace qrr
