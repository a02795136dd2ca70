#pragma once

// Classical arithmetic side: quadratic characters, divisor sums, class numbers
// of binary quadratic forms, Hurwitz class numbers and the closed form of the
// Brandt matrix trace.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brandt/rational.hpp"

namespace brandt {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::pair<Int, int>> factor(Int n) {
  std::vector<std::pair<Int, int>> out;
  if (n < 0) n = -n;
  for (Int p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Kronecker symbol (a|n), n != 0 handled via the usual extension at -1 and 2.
inline int kronecker(std::int64_t a, std::int64_t n) {
  static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && n % 2 == 0) return 0;
  int k = 1;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v % 2 == 1) k = tab2[floor_mod(a, 8)];
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  // n odd and positive from here on: Jacobi symbol.
  a = floor_mod(a, n);
  while (a != 0) {
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= tab2[n & 7];
    if ((a & n & 2) != 0) k = -k;
    const std::int64_t r = a;
    a = n % r;
    n = r;
  }
  return n == 1 ? k : 0;
}

inline std::int64_t sigma_N(std::int64_t m, std::int64_t N) {
  if (m < 1) throw std::invalid_argument("sigma_N: m must be positive");
  std::int64_t s = 0;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    const std::int64_t e = m / d;
    if (d % N != 0) s += d;
    if (e != d && e % N != 0) s += e;
  }
  return s;
}

// A negative discriminant D = d_K f^2.
class Discriminant {
 public:
  explicit Discriminant(std::int64_t value) : value_(value) {
    if (value >= 0 || (floor_mod(value, 4) != 0 && floor_mod(value, 4) != 1))
      throw std::invalid_argument("not a negative discriminant: " + std::to_string(value));
    // Largest f with value/f^2 still a discriminant.
    conductor_ = 1;
    for (std::int64_t f = isqrt(-value); f > 1; --f) {
      if (value % (f * f)) continue;
      const std::int64_t d = value / (f * f);
      if (floor_mod(d, 4) == 0 || floor_mod(d, 4) == 1) {
        conductor_ = f;
        break;
      }
    }
  }

  std::int64_t value() const { return value_; }
  std::int64_t conductor() const { return conductor_; }
  std::int64_t fundamental() const { return value_ / (conductor_ * conductor_); }

 private:
  std::int64_t value_;
  std::int64_t conductor_ = 1;
};

inline bool is_discriminant(std::int64_t d) {
  return d < 0 && (floor_mod(d, 4) == 0 || floor_mod(d, 4) == 1);
}

// Number of reduced primitive positive definite forms (a, b, c) of discriminant D.
inline std::int64_t class_number(const Discriminant& disc) {
  const std::int64_t D = disc.value();
  std::int64_t h = 0;
  for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      const std::int64_t num = b * b - D;
      if (num % (4 * a)) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      ++h;
    }
  }
  return h;
}

inline std::int64_t class_number(std::int64_t D) { return class_number(Discriminant(D)); }

inline std::int64_t unit_factor(std::int64_t d) {
  if (d == -3) return 3;
  if (d == -4) return 2;
  return 1;
}

// H(D) for D > 0; zero when -D is not a discriminant.
inline Rational hurwitz(std::int64_t D) {
  if (D < 0) throw std::invalid_argument("hurwitz: D must be nonnegative");
  if (D == 0) throw std::invalid_argument("hurwitz: H(0) is level dependent, use hurwitz_N");
  if (!is_discriminant(-D)) return Rational(0);
  Rational total(0);
  for (std::int64_t f = 1; f * f <= D; ++f) {
    if (D % (f * f)) continue;
    const std::int64_t d = -D / (f * f);
    if (!is_discriminant(d)) continue;
    total += make_rational(class_number(d), unit_factor(d));
  }
  return total;
}

// Level-N modification of H(D).
inline Rational hurwitz_N(std::int64_t D, std::int64_t N) {
  if (D < 0) throw std::invalid_argument("hurwitz_N: D must be nonnegative");
  if (D == 0) return make_rational(N - 1, 24);
  if (!is_discriminant(-D)) return Rational(0);
  if (D % (N * N) == 0 && is_discriminant(-D / (N * N))) return hurwitz_N(D / (N * N), N);
  switch (kronecker(-D, N)) {
    case 1:
      return Rational(0);
    case -1:
      return hurwitz(D);
    default:
      return hurwitz(D) / 2;
  }
}

// Number of ideals of norm m in the maximal order of Q(sqrt(-d)), d in {3, 4}.
inline std::int64_t ideal_count(std::int64_t d, std::int64_t m) {
  if (d != 3 && d != 4) throw std::invalid_argument("ideal_count: d must be 3 or 4");
  if (m < 1) throw std::invalid_argument("ideal_count: m must be positive");
  std::int64_t total = 0;
  for (std::int64_t c = 1; c <= m; ++c)
    if (m % c == 0) total += kronecker(-d, c);
  return total;
}

inline void require_level(std::int64_t N) {
  if (N < 5 || !is_prime(N))
    throw std::invalid_argument("level must be a prime >= 5, got " + std::to_string(N));
}

// Number of newforms of weight 2 and prime level N.
inline std::int64_t dim_newforms(std::int64_t N) {
  require_level(N);
  Rational r = make_rational(N - 1, 12);
  switch (N % 12) {
    case 1: r -= 1; break;
    case 5: r -= make_rational(1, 3); break;
    case 7: r -= make_rational(1, 2); break;
    case 11: r += make_rational(1, 6); break;
    default: throw std::logic_error("prime level not coprime to 12");
  }
  if (!is_integer(r)) throw std::logic_error("dimension formula not integral");
  return static_cast<std::int64_t>(boost::multiprecision::numerator(r));
}

// Class number n and weight multiset (descending) for the maximal order of
// the quaternion algebra ramified at {N, oo}, N > 3.
inline std::vector<std::int64_t> expected_weights(std::int64_t N) {
  require_level(N);
  std::vector<std::int64_t> w;
  std::int64_t n = 0;
  switch (N % 12) {
    case 1: n = (N - 1) / 12; break;
    case 5: n = (N + 7) / 12; w.push_back(3); break;
    case 7: n = (N + 5) / 12; w.push_back(2); break;
    case 11: n = (N + 13) / 12; w = {3, 2}; break;
    default: throw std::logic_error("prime level not coprime to 12");
  }
  while (static_cast<std::int64_t>(w.size()) < n) w.push_back(1);
  return w;
}

inline Rational trace_brandt_closed_form(std::int64_t N, std::int64_t m) {
  require_level(N);
  if (m < 1) throw std::invalid_argument("trace_brandt_closed_form: m must be positive");
  Rational total(0);
  for (std::int64_t s = -isqrt(4 * m); s * s <= 4 * m; ++s) total += hurwitz_N(4 * m - s * s, N);
  return total;
}

}  // namespace brandt
