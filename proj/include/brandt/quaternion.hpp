#pragma once

// The definite quaternion algebra ramified at {N, oo}, its elements, and a
// maximal order presented by integer structure constants.

#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "brandt/arith.hpp"
#include "brandt/lattice.hpp"
#include "brandt/rational.hpp"

namespace brandt {

// i^2 = a, j^2 = b, ij = -ji = k.
struct QuaternionAlgebra {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t level = 0;

  friend bool operator==(const QuaternionAlgebra&, const QuaternionAlgebra&) = default;
};

struct QuaternionElement {
  std::array<Rational, 4> coords{};  // on 1, i, j, k

  friend bool operator==(const QuaternionElement&, const QuaternionElement&) = default;

  QuaternionElement conj() const { return {{coords[0], -coords[1], -coords[2], -coords[3]}}; }
  Rational trace() const { return 2 * coords[0]; }

  friend QuaternionElement operator+(const QuaternionElement& x, const QuaternionElement& y) {
    QuaternionElement z;
    for (int t = 0; t < 4; ++t) z.coords[t] = x.coords[t] + y.coords[t];
    return z;
  }

  friend QuaternionElement operator*(const Rational& s, const QuaternionElement& x) {
    QuaternionElement z;
    for (int t = 0; t < 4; ++t) z.coords[t] = s * x.coords[t];
    return z;
  }
};

inline QuaternionElement multiply(const QuaternionAlgebra& A, const QuaternionElement& x, const QuaternionElement& y) {
  const auto& [x0, x1, x2, x3] = x.coords;
  const auto& [y0, y1, y2, y3] = y.coords;
  const Rational a(A.a), b(A.b);
  return {{x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
           x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
           x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
           x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1}};
}

inline Rational reduced_norm(const QuaternionAlgebra& A, const QuaternionElement& x) {
  const auto& [x0, x1, x2, x3] = x.coords;
  return x0 * x0 - A.a * x1 * x1 - A.b * x2 * x2 + A.a * A.b * x3 * x3;
}

namespace detail {

inline int valuation(std::int64_t& x, std::int64_t p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace detail

// Hilbert symbol (a, b)_p for nonzero integers a, b and a prime p.
inline int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t p) {
  const int alpha = detail::valuation(a, p);
  const int beta = detail::valuation(b, p);
  if (p == 2) {
    auto eps = [](std::int64_t u) { return static_cast<int>(floor_mod((u - 1) / 2, 2)); };
    auto omega = [](std::int64_t u) { return static_cast<int>(floor_mod((u * u - 1) / 8, 2)); };
    const int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return e % 2 ? -1 : 1;
  }
  int s = ((alpha * beta) % 2 == 1 && floor_mod(p, 4) == 3) ? -1 : 1;
  if (beta % 2) s *= kronecker(a, p);
  if (alpha % 2) s *= kronecker(b, p);
  return s;
}

// Finite primes where the algebra (a, b) ramifies.
inline std::set<std::int64_t> ramified_primes(std::int64_t a, std::int64_t b) {
  std::set<std::int64_t> candidates{2};
  for (std::int64_t v : {a, b})
    for (const auto& [p, e] : factor(Int(v))) candidates.insert(to_int64(p));
  std::set<std::int64_t> out;
  for (std::int64_t p : candidates)
    if (hilbert_symbol(a, b, p) == -1) out.insert(p);
  return out;
}

inline QuaternionAlgebra build_algebra(std::int64_t N) {
  require_level(N);
  QuaternionAlgebra A{0, -N, N};
  if (N % 4 == 3) {
    A.a = -1;
  } else if (N % 8 == 5) {
    A.a = -2;
  } else {
    for (std::int64_t q = 3;; q += 4)
      if (is_prime(q) && kronecker(N, q) == -1) {
        A.a = -q;
        break;
      }
  }
  if (ramified_primes(A.a, A.b) != std::set<std::int64_t>{N})
    throw std::logic_error("build_algebra: ramification check failed for N = " + std::to_string(N));
  return A;
}

// An order given by a Z-basis e_0..e_3 (rational coordinates on 1, i, j, k).
// Elements of the order are written as integer coordinate vectors on that basis.
class Order {
 public:
  Order() = default;

  Order(QuaternionAlgebra algebra, std::array<QuaternionElement, 4> basis)
      : algebra_(algebra), basis_(std::move(basis)) {
    invert_basis();
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        const auto v = coordinates(multiply(algebra_, basis_[x], basis_[y]));
        if (!v) throw std::invalid_argument("Order: basis is not closed under multiplication");
        mult_[x][y] = *v;
      }
      const auto c = coordinates(basis_[x].conj());
      if (!c) throw std::invalid_argument("Order: basis is not closed under conjugation");
      conj_[x] = *c;
    }
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        const Rational t = multiply(algebra_, basis_[x], basis_[y].conj()).trace();
        if (!is_integer(t)) throw std::invalid_argument("Order: non-integral trace form");
        trace_form_[x][y] = to_int64(boost::multiprecision::numerator(t));
      }
    const auto one = coordinates(QuaternionElement{{Rational(1), Rational(0), Rational(0), Rational(0)}});
    if (!one) throw std::invalid_argument("Order: does not contain 1");
    one_ = *one;
  }

  const QuaternionAlgebra& algebra() const { return algebra_; }
  const std::array<QuaternionElement, 4>& basis() const { return basis_; }
  // trd(e_x conj(e_y)); the reduced norm is half the diagonal value.
  const Bilinear& trace_form() const { return trace_form_; }
  const Vec4& one() const { return one_; }

  Vec4 mul(const Vec4& x, const Vec4& y) const {
    std::array<i128, 4> acc{};
    for (int s = 0; s < 4; ++s) {
      if (x[s] == 0) continue;
      for (int t = 0; t < 4; ++t) {
        if (y[t] == 0) continue;
        const i128 c = static_cast<i128>(x[s]) * y[t];
        for (int u = 0; u < 4; ++u) acc[u] += c * mult_[s][t][u];
      }
    }
    return {narrow(acc[0]), narrow(acc[1]), narrow(acc[2]), narrow(acc[3])};
  }

  Vec4 conj(const Vec4& x) const {
    std::array<i128, 4> acc{};
    for (int s = 0; s < 4; ++s)
      for (int u = 0; u < 4; ++u) acc[u] += static_cast<i128>(x[s]) * conj_[s][u];
    return {narrow(acc[0]), narrow(acc[1]), narrow(acc[2]), narrow(acc[3])};
  }

  i128 norm(const Vec4& x) const { return bilinear(trace_form_, x, x) / 2; }

  QuaternionElement element(const Vec4& x) const {
    QuaternionElement z;
    for (int s = 0; s < 4; ++s) z = z + Rational(x[s]) * basis_[s];
    return z;
  }

  // Integer coordinates of q on the order basis, if q lies in the order.
  std::optional<Vec4> coordinates(const QuaternionElement& q) const {
    Vec4 out{};
    for (int s = 0; s < 4; ++s) {
      Rational c(0);
      for (int t = 0; t < 4; ++t) c += q.coords[t] * inverse_[t][s];
      if (!is_integer(c)) return std::nullopt;
      out[s] = to_int64(boost::multiprecision::numerator(c));
    }
    return out;
  }

  // det of the trace form; equals disc^2 for an order of reduced discriminant disc.
  Int gram_determinant() const {
    std::array<std::array<Rational, 4>, 4> m{};
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) m[x][y] = Rational(trace_form_[x][y]);
    return boost::multiprecision::numerator(determinant(m));
  }

  static Rational determinant(std::array<std::array<Rational, 4>, 4> m) {
    Rational det(1);
    for (int c = 0; c < 4; ++c) {
      int piv = c;
      while (piv < 4 && m[piv][c] == 0) ++piv;
      if (piv == 4) return Rational(0);
      if (piv != c) {
        std::swap(m[piv], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (int r = c + 1; r < 4; ++r) {
        const Rational f = m[r][c] / m[c][c];
        for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
      }
    }
    return det;
  }

 private:
  void invert_basis() {
    std::array<std::array<Rational, 8>, 4> aug{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        aug[r][c] = basis_[r].coords[c];
        aug[r][4 + c] = Rational(r == c ? 1 : 0);
      }
    for (int c = 0; c < 4; ++c) {
      int piv = c;
      while (piv < 4 && aug[piv][c] == 0) ++piv;
      if (piv == 4) throw std::invalid_argument("Order: basis is singular");
      std::swap(aug[piv], aug[c]);
      const Rational inv = 1 / aug[c][c];
      for (auto& v : aug[c]) v *= inv;
      for (int r = 0; r < 4; ++r) {
        if (r == c || aug[r][c] == 0) continue;
        const Rational f = aug[r][c];
        for (int k = 0; k < 8; ++k) aug[r][k] -= f * aug[c][k];
      }
    }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) inverse_[r][c] = aug[r][4 + c];
  }

  QuaternionAlgebra algebra_{};
  std::array<QuaternionElement, 4> basis_{};
  std::array<std::array<Rational, 4>, 4> inverse_{};
  std::array<std::array<Vec4, 4>, 4> mult_{};
  std::array<Vec4, 4> conj_{};
  Bilinear trace_form_{};
  Vec4 one_{};
};

namespace detail {

// Canonical Z-basis (HNF after clearing denominators) of the span of `gens`.
inline std::array<QuaternionElement, 4> rational_hnf(const std::vector<QuaternionElement>& gens) {
  Int den = 1;
  for (const auto& g : gens)
    for (const auto& c : g.coords) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
  std::vector<BigVec4> rows;
  for (const auto& g : gens) {
    BigVec4 r;
    for (int t = 0; t < 4; ++t) r[t] = boost::multiprecision::numerator(Rational(g.coords[t] * den));
    rows.push_back(r);
  }
  const Mat4 h = hnf(std::move(rows));
  std::array<QuaternionElement, 4> out;
  for (int r = 0; r < 4; ++r)
    for (int t = 0; t < 4; ++t) out[r].coords[t] = Rational(Int(h[r][t]), den);
  return out;
}

inline bool is_integral(const QuaternionAlgebra& A, const QuaternionElement& x) {
  return is_integer(x.trace()) && is_integer(reduced_norm(A, x));
}

// The ring generated by `start` and x, if it is an order.
inline std::optional<std::array<QuaternionElement, 4>> ring_closure(const QuaternionAlgebra& A,
                                                                    const std::array<QuaternionElement, 4>& start,
                                                                    const QuaternionElement& x) {
  std::vector<QuaternionElement> gens(start.begin(), start.end());
  gens.push_back(x);
  auto basis = rational_hnf(gens);
  for (int iter = 0; iter < 12; ++iter) {
    for (const auto& e : basis)
      if (!is_integral(A, e)) return std::nullopt;
    std::vector<QuaternionElement> next(basis.begin(), basis.end());
    for (const auto& u : basis)
      for (const auto& v : basis) next.push_back(multiply(A, u, v));
    auto grown = rational_hnf(next);
    if (grown == basis) return basis;
    basis = grown;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::array<QuaternionElement, 4> standard_order_basis(const QuaternionAlgebra& A) {
  auto q = [](std::int64_t n0, std::int64_t n1, std::int64_t n2, std::int64_t n3, std::int64_t d) {
    return QuaternionElement{{make_rational(n0, d), make_rational(n1, d), make_rational(n2, d), make_rational(n3, d)}};
  };
  if (A.a == -1 && A.b == -A.level && A.level % 4 == 3) return {q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(0, 1, 1, 0, 2), q(1, 0, 0, 1, 2)};
  return {q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(0, 0, 1, 0, 1), q(0, 0, 0, 1, 1)};
}

// A maximal order: start from a standard basis and adjoin elements of
// (1/p)O / O until the reduced discriminant equals N.
inline Order maximal_order(const QuaternionAlgebra& A) {
  const Int target = Int(A.level) * A.level;
  const auto start = standard_order_basis(A);
  std::array<QuaternionElement, 4> basis =
      detail::rational_hnf(std::vector<QuaternionElement>(start.begin(), start.end()));
  for (;;) {
    const Order current(A, basis);
    const Int det = current.gram_determinant();
    if (det == target) return Order(A, basis);
    if (det % target != 0) throw std::logic_error("maximal_order: discriminant not divisible by N");
    bool grown = false;
    for (const auto& [p, e] : factor(det / target)) {
      const std::int64_t prime = to_int64(p);
      const Rational inv_p = make_rational(1, prime);
      for (std::int64_t code = 1; code < prime * prime * prime * prime && !grown; ++code) {
        std::int64_t rest = code;
        QuaternionElement x;
        for (int s = 0; s < 4; ++s) {
          x = x + Rational(rest % prime) * basis[s];
          rest /= prime;
        }
        x = inv_p * x;
        if (!detail::is_integral(A, x)) continue;
        if (auto bigger = detail::ring_closure(A, basis, x)) {
          basis = *bigger;
          grown = true;
        }
      }
      if (grown) break;
    }
    if (!grown) throw std::logic_error("maximal_order: saturation failed");
  }
}

inline Int reduced_discriminant_squared(const Order& O) { return O.gram_determinant(); }

}  // namespace brandt
