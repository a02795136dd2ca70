#pragma once

// Left ideal classes of the maximal order, their right orders and unit weights.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "brandt/arith.hpp"
#include "brandt/lattice.hpp"
#include "brandt/quaternion.hpp"

namespace brandt {

// A lattice (rows of `basis` divided by `denominator`) in the coordinates of
// the maximal order's basis. Canonical: HNF rows, no common factor with the
// denominator.
struct Lattice {
  Mat4 basis = identity4();
  std::int64_t denominator = 1;

  friend bool operator==(const Lattice&, const Lattice&) = default;
  friend auto operator<=>(const Lattice&, const Lattice&) = default;
};

inline Lattice make_lattice(const std::vector<Vec4>& gens, std::int64_t denominator = 1) {
  Lattice L{hnf(gens), denominator};
  std::int64_t g = denominator;
  for (const auto& row : L.basis)
    for (auto v : row) g = std::gcd(g, v);
  if (g > 1) {
    for (auto& row : L.basis)
      for (auto& v : row) v /= g;
    L.denominator /= g;
  }
  return L;
}

inline Lattice product(const Order& O, const Lattice& A, const Lattice& B) {
  std::vector<Vec4> gens;
  gens.reserve(16);
  for (const auto& x : A.basis)
    for (const auto& y : B.basis) gens.push_back(O.mul(x, y));
  return make_lattice(gens, narrow(static_cast<i128>(A.denominator) * B.denominator));
}

inline Lattice conjugate(const Order& O, const Lattice& A) {
  std::vector<Vec4> gens;
  for (const auto& x : A.basis) gens.push_back(O.conj(x));
  return make_lattice(gens, A.denominator);
}

// Nr(I) for an integral lattice, from [O : I] = Nr(I)^2.
inline std::int64_t ideal_norm(const Lattice& I) {
  if (I.denominator != 1) throw std::invalid_argument("ideal_norm: lattice is not integral");
  const std::int64_t index = hnf_det(I.basis);
  const std::int64_t r = isqrt(index);
  if (r * r != index) throw std::logic_error("ideal_norm: index is not a square");
  return r;
}

inline bool is_left_ideal(const Order& O, const Lattice& I) {
  if (I.denominator != 1) return false;
  for (const auto& e : identity4())
    for (const auto& x : I.basis)
      if (!contains(I.basis, O.mul(e, x))) return false;
  return true;
}

// Half the number of reduced-norm-1 elements of an order given as a lattice.
inline std::int64_t unit_half_count(const Order& O, const Lattice& order) {
  const i128 target = 2 * static_cast<i128>(order.denominator) * order.denominator;
  std::int64_t count = 0;
  enumerate_short(order.basis, O.trace_form(), narrow(target), [&](const Vec4&, std::int64_t v) {
    if (v == target) ++count;
    return true;
  });
  if (count % 2) throw std::logic_error("unit_half_count: odd unit count");
  return count / 2;
}

// Nonzero elements of L with reduced norm at most `bound`, in 1, i, j, k coordinates.
inline std::vector<QuaternionElement> short_vectors(const Order& O, const Lattice& L, const Rational& bound) {
  std::vector<QuaternionElement> out;
  if (bound <= 0) return out;
  // value = x^T B x = 2 Nr(x) d^2 for x = y / d with y integral.
  const Rational scaled = bound * 2 * L.denominator * L.denominator;
  const Int cap = numerator(scaled) / denominator(scaled);
  enumerate_short(L.basis, O.trace_form(), to_int64(cap), [&](const Vec4& y, std::int64_t) {
    out.push_back(make_rational(1, L.denominator) * O.element(y));
    return true;
  });
  return out;
}

// Right order {x : I x in I} = conj(I) I / Nr(I).
inline Lattice right_order(const Order& O, const Lattice& I) {
  Lattice P = product(O, conjugate(O, I), I);
  return make_lattice(std::vector<Vec4>(P.basis.begin(), P.basis.end()),
                      narrow(static_cast<i128>(P.denominator) * ideal_norm(I)));
}

// J = I b for some b in D^x iff conj(I) J has an element of norm Nr(I) Nr(J).
inline bool is_equivalent(const Order& O, const Lattice& I, const Lattice& J) {
  const Lattice P = product(O, conjugate(O, I), J);
  const i128 target2 = 2 * static_cast<i128>(ideal_norm(I)) * ideal_norm(J);
  bool found = false;
  enumerate_short(P.basis, O.trace_form(), narrow(target2), [&](const Vec4&, std::int64_t v) {
    if (v == target2) found = true;
    return !found;
  });
  return found;
}

// A shortest nonzero element (deterministic among ties).
inline Vec4 shortest_element(const Order& O, const Lattice& L) {
  const Mat4 red = lll_reduce(L.basis, O.trace_form());
  i128 bound = bilinear(O.trace_form(), red[0], red[0]);
  Vec4 best{};
  i128 best_norm = -1;
  enumerate_short(L.basis, O.trace_form(), narrow(bound), [&](const Vec4& x, std::int64_t v) {
    Vec4 y = x;
    const auto first = std::find_if(y.begin(), y.end(), [](std::int64_t c) { return c != 0; });
    if (*first < 0)
      for (auto& c : y) c = -c;
    if (best_norm < 0 || v < best_norm || (v == best_norm && y < best)) {
      best = y;
      best_norm = v;
    }
    return true;
  });
  return best;
}

// An equivalent integral left ideal of small norm: J conj(alpha) / Nr(J) with alpha shortest in J.
inline Lattice reduce_ideal(const Order& O, const Lattice& J) {
  const std::int64_t nJ = ideal_norm(J);
  const Vec4 alpha_bar = O.conj(shortest_element(O, J));
  std::vector<Vec4> gens;
  for (const auto& x : J.basis) {
    Vec4 y = O.mul(x, alpha_bar);
    for (auto& c : y) {
      if (c % nJ) throw std::logic_error("reduce_ideal: J conj(alpha) not divisible by Nr(J)");
      c /= nJ;
    }
    gens.push_back(y);
  }
  return make_lattice(gens);
}

// Left ideals J of I with Nr(J) = p Nr(I), for a prime p not dividing the level.
inline std::vector<Lattice> neighbors(const Order& O, const Lattice& I, std::int64_t p) {
  const std::int64_t want = narrow(static_cast<i128>(hnf_det(I.basis)) * p * p);
  std::vector<Lattice> out;
  for (std::int64_t code = 1; code < p * p * p * p; ++code) {
    Vec4 c{};
    std::int64_t rest = code;
    for (auto& v : c) {
      v = rest % p;
      rest /= p;
    }
    const Vec4 alpha = combine(I.basis, c);
    std::vector<Vec4> gens;
    for (const auto& e : identity4()) gens.push_back(O.mul(e, alpha));
    for (const auto& row : I.basis) {
      Vec4 r = row;
      for (auto& v : r) v *= p;
      gens.push_back(r);
    }
    Lattice J = make_lattice(gens);
    if (J.denominator != 1 || hnf_det(J.basis) != want) continue;
    if (std::find(out.begin(), out.end(), J) == out.end()) out.push_back(J);
  }
  return out;
}

struct IdealClass {
  Lattice ideal;        // integral left ideal of the maximal order
  std::int64_t norm = 1;
  Lattice right_order;  // conj(I) I / Nr(I)
  std::int64_t weight = 1;
};

struct IdealClassData {
  std::int64_t level = 0;
  QuaternionAlgebra algebra;
  Order maximal_order;
  std::vector<IdealClass> classes;

  std::size_t size() const { return classes.size(); }

  std::vector<std::int64_t> weights() const {
    std::vector<std::int64_t> w;
    for (const auto& c : classes) w.push_back(c.weight);
    return w;
  }

  Rational mass() const {
    Rational m(0);
    for (const auto& c : classes) m += make_rational(1, c.weight);
    return m;
  }
};

inline IdealClass make_class(const Order& O, const Lattice& I) {
  IdealClass c;
  c.ideal = I;
  c.norm = ideal_norm(I);
  c.right_order = right_order(O, I);
  c.weight = unit_half_count(O, c.right_order);
  return c;
}

// Descending weight, then norm, then canonical basis.
inline void sort_classes(std::vector<IdealClass>& classes) {
  std::sort(classes.begin(), classes.end(), [](const IdealClass& x, const IdealClass& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.norm != y.norm) return x.norm < y.norm;
    return x.ideal < y.ideal;
  });
}

// Breadth-first p-neighbour expansion from the order itself; terminates once
// the accumulated mass sum 1/w_i reaches (N-1)/12.
inline IdealClassData left_ideal_classes(const Order& O) {
  const std::int64_t N = O.algebra().level;
  require_level(N);
  const Rational target = make_rational(N - 1, 12);
  IdealClassData data;
  data.level = N;
  data.algebra = O.algebra();
  data.maximal_order = O;

  data.classes.push_back(make_class(O, Lattice{}));
  Rational mass = make_rational(1, data.classes.front().weight);
  std::deque<std::size_t> queue{0};
  constexpr std::int64_t p = 2;

  while (mass < target) {
    if (queue.empty()) throw std::logic_error("left_ideal_classes: neighbour graph exhausted before reaching the mass");
    const Lattice I = data.classes[queue.front()].ideal;
    queue.pop_front();
    for (const Lattice& J : neighbors(O, I, p)) {
      IdealClass candidate = make_class(O, reduce_ideal(O, J));
      const bool known = std::any_of(data.classes.begin(), data.classes.end(), [&](const IdealClass& c) {
        return c.weight == candidate.weight && is_equivalent(O, c.ideal, candidate.ideal);
      });
      if (known) continue;
      mass += make_rational(1, candidate.weight);
      data.classes.push_back(std::move(candidate));
      queue.push_back(data.classes.size() - 1);
      if (mass >= target) break;
    }
  }
  if (mass != target) throw std::logic_error("left_ideal_classes: mass overshoot, equivalence test is broken");
  sort_classes(data.classes);
  return data;
}

inline IdealClassData left_ideal_classes(std::int64_t N) { return left_ideal_classes(maximal_order(build_algebra(N))); }

}  // namespace brandt
