#pragma once

// Brandt matrices B(m) by counting lattice vectors of prescribed norm in the
// products conj(I_j) I_i, and exact checks of the identities they satisfy.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "brandt/arith.hpp"
#include "brandt/ideals.hpp"
#include "brandt/report.hpp"

namespace brandt {

struct BrandtMatrix {
  std::int64_t level = 0;
  std::int64_t index = 0;
  std::size_t n = 0;
  std::vector<std::int64_t> entries;  // row-major

  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }

  std::int64_t trace() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }

  friend bool operator==(const BrandtMatrix&, const BrandtMatrix&) = default;
};

using IntMatrix = std::vector<std::int64_t>;

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b, std::size_t n) {
  IntMatrix c(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t v = a[i * n + k];
      if (v == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += v * b[k * n + j];
    }
  return c;
}

// Number of x in conj(J) I with Nr(x) = m Nr(I) Nr(J), for m = 0..m_max
// (index 0 is always zero: x = 0 is excluded). Equivalently, the number of b in
// J^{-1} I with Nr(b) Nr(J) / Nr(I) = m.
inline std::vector<std::int64_t> theta_counts(const Order& O, const Lattice& I, const Lattice& J, std::int64_t m_max) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m_max) + 1, 0);
  const Lattice P = product(O, conjugate(O, J), I);
  const std::int64_t scale2 = 2 * ideal_norm(I) * ideal_norm(J);
  enumerate_short(P.basis, O.trace_form(), narrow(static_cast<i128>(scale2) * m_max), [&](const Vec4&, std::int64_t v) {
    if (v % scale2 == 0) ++counts[static_cast<std::size_t>(v / scale2)];
    return true;
  });
  return counts;
}

inline std::int64_t theta_count(const Order& O, const Lattice& I, const Lattice& J, std::int64_t m) {
  if (m < 1) return 0;
  return theta_counts(O, I, J, m)[static_cast<std::size_t>(m)];
}

namespace detail {

// Runs body(k) for k in [0, count) on a few threads; results must be written
// to per-k slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < count; k = next++) body(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// B(1..m_max) from a single enumeration per unordered pair of classes.
inline std::map<std::int64_t, BrandtMatrix> brandt_matrices(const IdealClassData& data, std::int64_t m_max) {
  if (m_max < 1) throw std::invalid_argument("brandt_matrices: m_max must be positive");
  const std::size_t n = data.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::vector<std::int64_t>> counts(pairs.size());
  detail::parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    counts[k] = theta_counts(data.maximal_order, data.classes[i].ideal, data.classes[j].ideal, m_max);
  });

  std::map<std::int64_t, BrandtMatrix> out;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    BrandtMatrix B{data.level, m, n, std::vector<std::int64_t>(n * n, 0)};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      const std::int64_t c = counts[k][static_cast<std::size_t>(m)];
      for (const auto& [r, s] : {std::pair{i, j}, std::pair{j, i}}) {
        const std::int64_t denom = 2 * data.classes[s].weight;
        if (c % denom != 0)
          throw std::logic_error("brandt_matrix: theta count " + std::to_string(c) + " not divisible by 2w at m = " +
                                 std::to_string(m));
        B(r, s) = c / denom;
      }
    }
    // Fix orientation so that rows sum to sigma(m)_N.
    const std::int64_t sigma = sigma_N(m, data.level);
    auto row_sums_ok = [&](const BrandtMatrix& M) {
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < n; ++j) s += M(i, j);
        if (s != sigma) return false;
      }
      return true;
    };
    if (!row_sums_ok(B)) {
      BrandtMatrix T = B;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) T(i, j) = B(j, i);
      if (row_sums_ok(T)) B = T;
    }
    out.emplace(m, std::move(B));
  }
  return out;
}

inline BrandtMatrix brandt_matrix(const IdealClassData& data, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("brandt_matrix: m must be positive");
  return brandt_matrices(data, m).at(m);
}

struct BrandtFamily {
  std::shared_ptr<const IdealClassData> classdata;
  std::map<std::int64_t, BrandtMatrix> matrices;

  std::int64_t level() const { return classdata->level; }
  std::size_t size() const { return classdata->size(); }
  std::int64_t max_index() const { return matrices.empty() ? 0 : matrices.rbegin()->first; }

  const BrandtMatrix& at(std::int64_t m) const {
    auto it = matrices.find(m);
    if (it == matrices.end()) throw std::out_of_range("Brandt matrix B(" + std::to_string(m) + ") not computed");
    return it->second;
  }

  // Makes B(1..m_max) available.
  void ensure(std::int64_t m_max) {
    if (max_index() >= m_max) return;
    matrices = brandt_matrices(*classdata, m_max);
  }
};

inline BrandtFamily make_family(std::shared_ptr<const IdealClassData> data, std::int64_t m_max) {
  BrandtFamily f{std::move(data), {}};
  f.ensure(m_max);
  return f;
}

// Exact checks of every structural identity of the Brandt family for m <= m_max.
inline VerificationReport verify_brandt_family(const BrandtFamily& family, std::int64_t m_max) {
  VerificationReport rep;
  const std::int64_t N = family.level();
  rep.level = N;
  const std::size_t n = family.size();
  const auto w = family.classdata->weights();
  auto mstr = [](std::int64_t m) { return "m=" + std::to_string(m); };

  for (std::int64_t m = 1; m <= m_max; ++m) {
    const BrandtMatrix& B = family.at(m);
    const std::int64_t sigma = sigma_N(m, N);
    if (m == 1) {
      bool id = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) id &= B(i, j) == (i == j ? 1 : 0);
      rep.rows.push_back(exact_row("brandt_identity", mstr(m), Rational(id ? 1 : 0), Rational(1)));
    }
    std::int64_t bad_rows = 0, bad_adjoint = 0, bad_columns = 0, negative = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t s = 0;
      Rational col(0);
      for (std::size_t j = 0; j < n; ++j) {
        s += B(i, j);
        negative += B(i, j) < 0;
        bad_adjoint += w[j] * B(i, j) != w[i] * B(j, i);
        col += make_rational(B(j, i), w[j]);
      }
      bad_rows += s != sigma;
      bad_columns += col != make_rational(sigma, w[i]);
    }
    rep.rows.push_back(exact_row("row_sums", mstr(m), Rational(bad_rows + negative), Rational(0)));
    rep.rows.push_back(exact_row("w_adjoint", mstr(m), Rational(bad_adjoint), Rational(0)));
    rep.rows.push_back(exact_row("weighted_columns", mstr(m), Rational(bad_columns), Rational(0)));
    rep.rows.push_back(exact_row("trace_formula", mstr(m), Rational(B.trace()), trace_brandt_closed_form(N, m)));
  }

  for (std::int64_t m = 2; m <= m_max; ++m) {
    std::int64_t bad = 0;
    for (std::int64_t k = 2; k < m; ++k)
      bad += matmul(family.at(m).entries, family.at(k).entries, n) != matmul(family.at(k).entries, family.at(m).entries, n);
    rep.rows.push_back(exact_row("commutativity", mstr(m) + " vs all smaller", Rational(bad), Rational(0)));
  }

  for (std::int64_t a = 2; a <= m_max; ++a)
    for (std::int64_t b = a + 1; a * b <= m_max; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const bool ok = matmul(family.at(a).entries, family.at(b).entries, n) == family.at(a * b).entries;
      rep.rows.push_back(exact_row("multiplicativity", "m=" + std::to_string(a) + "*" + std::to_string(b),
                                   Rational(ok ? 0 : 1), Rational(0)));
    }

  for (std::int64_t p = 2; p * p <= m_max; ++p) {
    if (!is_prime(p) || p == N) continue;
    std::int64_t pk_prev = 1, pk = p;
    for (int k = 1; pk * p <= m_max; ++k) {
      IntMatrix lhs = matmul(family.at(p).entries, family.at(pk).entries, n);
      IntMatrix rhs = family.at(pk * p).entries;
      for (std::size_t t = 0; t < rhs.size(); ++t) rhs[t] += p * family.at(pk_prev).entries[t];
      rep.rows.push_back(exact_row("hecke_recursion", "p=" + std::to_string(p) + ",k=" + std::to_string(k),
                                   Rational(lhs == rhs ? 0 : 1), Rational(0)));
      pk_prev = pk;
      pk *= p;
    }
  }
  return rep;
}

}  // namespace brandt
