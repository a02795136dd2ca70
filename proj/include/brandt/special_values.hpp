#pragma once

// Central values from period sums: the algebraic triple product value
// L^alg(2, f x g x h) = (sum_i w_i^2 lambda_i(f) lambda_i(g) lambda_i(h))^2, and the
// weight-one special values lambda_k(f)^2 at the classes with w_k = 2 or 3.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brandt/eigenforms.hpp"
#include "brandt/ideals.hpp"

namespace brandt {

struct LevelMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoSuchClass : std::domain_error {
  using std::domain_error::domain_error;
};

struct TripleCentralValue {
  std::array<std::string, 3> labels;
  Real period_sum = 0;
  Real lalg = 0;
  std::optional<int> epsilon;  // a_N(f) a_N(g) a_N(h); empty if some a_N did not snap to +-1
};

struct GrossValue {
  std::string label;
  int d = 0;
  std::size_t class_index = 0;
  Real value = 0;
};

namespace detail {

inline void require_same_level(const IdealClassData& data, std::initializer_list<const Eigenform*> forms) {
  for (const Eigenform* f : forms)
    if (f->level != data.level || f->lambda.size() != data.size())
      throw LevelMismatch("eigenform " + f->label + " does not belong to level " + std::to_string(data.level));
}

}  // namespace detail

inline Real period_sum(const Eigenform& f, const Eigenform& g, const Eigenform& h, const IdealClassData& data) {
  detail::require_same_level(data, {&f, &g, &h});
  Real s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Real w(data.classes[i].weight);
    s += w * w * f.lambda[i] * g.lambda[i] * h.lambda[i];
  }
  return s;
}

inline TripleCentralValue lalg_triple(const Eigenform& f, const Eigenform& g, const Eigenform& h,
                                      const IdealClassData& data, double tol = 1e-9) {
  TripleCentralValue t;
  t.labels = {f.label, g.label, h.label};
  t.period_sum = period_sum(f, g, h, data);
  t.lalg = t.period_sum * t.period_sum;
  const auto ef = f.sign_at_level(tol), eg = g.sign_at_level(tol), eh = h.sign_at_level(tol);
  if (ef && eg && eh) t.epsilon = *ef * *eg * *eh;
  return t;
}

// lambda_k(f)^2 at the unique class with w_k = 2 (d = 4) or w_k = 3 (d = 3).
inline GrossValue gross_value(const Eigenform& f, int d, const IdealClassData& data) {
  detail::require_same_level(data, {&f});
  const std::int64_t N = data.level;
  std::int64_t weight = 0;
  if (d == 4) {
    if (N % 4 != 3) throw NoSuchClass("no class with w = 2 at level " + std::to_string(N) + " (needs N = 3 mod 4)");
    weight = 2;
  } else if (d == 3) {
    if (N % 3 != 2) throw NoSuchClass("no class with w = 3 at level " + std::to_string(N) + " (needs N = 2 mod 3)");
    weight = 3;
  } else {
    throw std::invalid_argument("gross_value: d must be 3 or 4");
  }
  std::optional<std::size_t> k;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.classes[i].weight == weight) {
      if (k) throw std::logic_error("gross_value: more than one class with w = " + std::to_string(weight));
      k = i;
    }
  if (!k) throw NoSuchClass("no class with w = " + std::to_string(weight) + " at level " + std::to_string(N));
  return GrossValue{f.label, d, *k, f.lambda[*k] * f.lambda[*k]};
}

// Period sums for every ordered triple, indexed [f][g][h] in label order.
class TripleTable {
 public:
  TripleTable(const std::vector<Eigenform>& forms, const IdealClassData& data) : F_(forms.size()) {
    P_.assign(F_ * F_ * F_, Real(0));
    for (std::size_t a = 0; a < F_; ++a)
      for (std::size_t b = a; b < F_; ++b)
        for (std::size_t c = b; c < F_; ++c) {
          const Real p = period_sum(forms[a], forms[b], forms[c], data);
          for (auto [x, y, z] : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                                 std::array{c, a, b}, std::array{c, b, a}})
            P_[(x * F_ + y) * F_ + z] = p;
        }
  }

  std::size_t size() const { return F_; }
  const Real& period(std::size_t f, std::size_t g, std::size_t h) const { return P_[(f * F_ + g) * F_ + h]; }
  Real lalg(std::size_t f, std::size_t g, std::size_t h) const {
    const Real& p = period(f, g, h);
    return p * p;
  }

 private:
  std::size_t F_;
  std::vector<Real> P_;
};

// One entry per unordered triple f <= g <= h, with the number of ordered triples it stands for.
struct UnorderedTriple {
  TripleCentralValue value;
  int multiplicity = 1;
};

inline std::vector<UnorderedTriple> unordered_triples(const std::vector<Eigenform>& forms, const IdealClassData& data,
                                                      double tol = 1e-9) {
  std::vector<UnorderedTriple> out;
  for (std::size_t a = 0; a < forms.size(); ++a)
    for (std::size_t b = a; b < forms.size(); ++b)
      for (std::size_t c = b; c < forms.size(); ++c) {
        const int distinct = 1 + (a != b) + (b != c);
        const int mult = distinct == 1 ? 1 : distinct == 2 ? 3 : 6;
        out.push_back({lalg_triple(forms[a], forms[b], forms[c], data, tol), mult});
      }
  return out;
}

}  // namespace brandt
