#pragma once

#include <optional>

#include "qrr/series.hpp"

namespace qrr {

// Product spec: prod_{j=0..length-1} (1 - sign * a^a_exp * q^(q_offset + j*q_step)),
// length nullopt meaning infinite (truncated once factors leave the box).
struct PochSpec {
  int sign = +1;
  int a_exp = 0;
  long long q_offset = 0;
  long long q_step = 1;
  std::optional<long long> length;

  static PochSpec finite(int sign, int a_exp, long long off, long long step, long long len) {
    return PochSpec{sign, a_exp, off, step, len};
  }
  static PochSpec infinite(int sign, int a_exp, long long off, long long step) {
    return PochSpec{sign, a_exp, off, step, std::nullopt};
  }
};

inline BiSeries poch(const PochSpec& spec, long long cap_q, long long cap_a) {
  if (spec.q_step <= 0) throw error(errc::bad_parameters, "Pochhammer step must be positive");
  if (spec.a_exp < 0) throw error(errc::bad_parameters, "Pochhammer a-exponent must be nonnegative");
  if (spec.sign != 1 && spec.sign != -1) throw error(errc::bad_parameters, "Pochhammer sign must be +-1");
  if (spec.length && *spec.length < 0)
    throw error(errc::bad_parameters, "negative Pochhammer length");
  if (!spec.length && spec.q_offset <= 0 && spec.a_exp == 0)
    throw error(errc::non_terminating, "infinite product with q-offset <= 0 and no a part");

  BiSeries r = BiSeries::one();
  long long j = 0;
  while (true) {
    if (spec.length && j >= *spec.length) break;
    const long long q_exp = spec.q_offset + j * spec.q_step;
    if (!spec.length && q_exp > cap_q) break;  // all further factors are 1 within the box
    BiSeries factor = add(BiSeries::one(),
                          BiSeries::monomial(Rat(-spec.sign), spec.a_exp, static_cast<int>(q_exp)));
    r = mul(r, factor, cap_q, cap_a);
    ++j;
  }
  return r;
}

/// (q^x, q^(P-x), q^P; q^P)_inf truncated to order N.
inline BiSeries triple_product(long long x, long long P, long long N) {
  if (x <= 0 || x >= P) throw error(errc::bad_parameters, "triple product needs 0 < x < P");
  BiSeries r = poch(PochSpec::infinite(+1, 0, x, P), N, 0);
  r = mul(r, poch(PochSpec::infinite(+1, 0, P - x, P), N, 0), N, 0);
  r = mul(r, poch(PochSpec::infinite(+1, 0, P, P), N, 0), N, 0);
  return r;
}

/// Bilateral alternating theta sum  sum_{n in Z} (-1)^n q^(A n^2 + B n), truncated to N.
/// A n^2 + B n must be an integer for every integer n, i.e. 2A and A+B integers.
inline BiSeries theta_sum(const Rat& A, const Rat& B, long long N) {
  if (A <= 0) throw error(errc::divergent, "theta sum needs A > 0");
  if (!is_integer(2 * A) || !is_integer(A + B))
    throw error(errc::non_integer_exponent,
                "A n^2 + B n is not integral for all n (need 2A and A+B integers)");
  BiSeries r;
  r.order_q = N;
  r.order_a = k_exact_order;
  int min_seen = 0;
  auto exponent = [&](long long n) { return A * n * n + B * n; };
  auto emit = [&](long long n) -> bool {
    const Rat f = exponent(n);
    // past the vertex the exponent grows; stop once it leaves the box on the
    // growing side
    if (f > N) return false;
    const long long j = to_integer_exponent(f, "theta exponent");
    min_seen = std::min<long long>(min_seen, j);
    const xp key{static_cast<int>(j), 0};
    Rat& c = r.terms[key];
    c += (n % 2 == 0) ? 1 : -1;
    if (c == 0) r.terms.erase(key);
    return true;
  };
  // vertex at n = -B/(2A); scan outward in both directions
  const Rat vertex = -B / (2 * A);
  for (long long n = 0;; ++n) {
    if (!emit(n) && Rat(n) >= vertex) break;
  }
  for (long long n = -1;; --n) {
    if (!emit(n) && Rat(n) <= vertex) break;
  }
  r.min_q = min_seen;
  return r;
}

}  // namespace qrr
