#pragma once

// Rank-4 integer lattices: canonical Hermite normal form, LLL reduction on an
// exact Gram matrix, and Fincke-Pohst enumeration of short vectors for a
// positive definite integral quadratic form.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brandt/rational.hpp"

namespace brandt {

using i128 = __int128;
using Vec4 = std::array<std::int64_t, 4>;
using Mat4 = std::array<Vec4, 4>;
using BigVec4 = std::array<Int, 4>;

inline std::int64_t narrow(i128 v) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
    throw std::overflow_error("lattice arithmetic overflowed 64 bits");
  return static_cast<std::int64_t>(v);
}

inline Mat4 identity4() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1;
  return m;
}

// Row-style HNF of the lattice spanned by `gens`: upper triangular, positive
// pivots, entries above each pivot reduced into [0, pivot).
inline Mat4 hnf(std::vector<BigVec4> rows) {
  std::size_t top = 0;
  for (int col = 0; col < 4; ++col) {
    // Euclid on column `col` among rows top..end until one nonzero remains.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r)
        if (rows[r][col] != 0 && (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col]))) best = r;
      if (best == rows.size()) throw std::invalid_argument("hnf: lattice is not of rank 4");
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        const Int q = rows[r][col] / rows[top][col];
        for (int c = col; c < 4; ++c) rows[r][c] -= q * rows[top][c];
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] < 0)
      for (int c = col; c < 4; ++c) rows[top][c] = -rows[top][c];
    for (std::size_t r = 0; r < top; ++r) {
      Int q = rows[r][col] / rows[top][col];
      if (rows[r][col] - q * rows[top][col] < 0) --q;
      if (q != 0)
        for (int c = col; c < 4; ++c) rows[r][c] -= q * rows[top][c];
    }
    ++top;
    std::vector<BigVec4> kept(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(top));
    for (std::size_t r = top; r < rows.size(); ++r)
      if (std::any_of(rows[r].begin(), rows[r].end(), [](const Int& x) { return x != 0; })) kept.push_back(rows[r]);
    rows = std::move(kept);
  }
  Mat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r][c] = to_int64(rows[r][c]);
  return out;
}

inline Mat4 hnf(const std::vector<Vec4>& gens) {
  std::vector<BigVec4> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) rows.push_back({Int(g[0]), Int(g[1]), Int(g[2]), Int(g[3])});
  return hnf(std::move(rows));
}

inline std::int64_t hnf_det(const Mat4& h) {
  i128 d = 1;
  for (int i = 0; i < 4; ++i) d *= h[i][i];
  return narrow(d);
}

// Coordinates of v with respect to an upper triangular basis, if integral.
inline bool solve_upper(const Mat4& h, Vec4 v, Vec4* coords = nullptr) {
  Vec4 c{};
  for (int col = 0; col < 4; ++col) {
    if (v[col] % h[col][col] != 0) return false;
    c[col] = v[col] / h[col][col];
    for (int k = col; k < 4; ++k) v[k] = narrow(static_cast<i128>(v[k]) - static_cast<i128>(c[col]) * h[col][k]);
  }
  if (coords) *coords = c;
  return true;
}

inline bool contains(const Mat4& h, const Vec4& v) { return solve_upper(h, v); }

// Symmetric bilinear form b(x, y) = x^T B y with integer entries.
using Bilinear = Mat4;

inline i128 bilinear(const Bilinear& B, const Vec4& x, const Vec4& y) {
  i128 s = 0;
  for (int i = 0; i < 4; ++i) {
    if (x[i] == 0) continue;
    i128 row = 0;
    for (int j = 0; j < 4; ++j) row += static_cast<i128>(B[i][j]) * y[j];
    s += static_cast<i128>(x[i]) * row;
  }
  return s;
}

inline Vec4 combine(const Mat4& basis, const Vec4& coeff) {
  Vec4 v{};
  for (int c = 0; c < 4; ++c) {
    i128 s = 0;
    for (int r = 0; r < 4; ++r) s += static_cast<i128>(coeff[r]) * basis[r][c];
    v[c] = narrow(s);
  }
  return v;
}

// LLL-reduced basis (delta = 0.99) of the lattice spanned by the rows of
// `basis`, measured by the form B. The result spans the same lattice.
inline Mat4 lll_reduce(Mat4 basis, const Bilinear& B) {
  auto gram = [&](int a, int b) { return static_cast<long double>(bilinear(B, basis[a], basis[b])); };
  std::array<std::array<long double, 4>, 4> mu{};
  std::array<long double, 4> bstar{};
  auto gso = [&] {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        long double s = gram(i, j);
        for (int k = 0; k < j; ++k) s -= mu[i][k] * mu[j][k] * bstar[k];
        mu[i][j] = s / bstar[j];
      }
      long double s = gram(i, i);
      for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
      bstar[i] = s;
    }
  };
  int k = 1;
  int guard = 0;
  gso();
  while (k < 4) {
    if (++guard > 100000) throw std::runtime_error("lll_reduce did not converge");
    for (int j = k - 1; j >= 0; --j) {
      const long double r = std::round(mu[k][j]);
      if (r == 0) continue;
      const auto q = static_cast<std::int64_t>(r);
      for (int c = 0; c < 4; ++c)
        basis[k][c] = narrow(static_cast<i128>(basis[k][c]) - static_cast<i128>(q) * basis[j][c]);
      gso();
    }
    if (bstar[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
      std::swap(basis[k], basis[k - 1]);
      gso();
      k = std::max(k - 1, 1);
    } else {
      ++k;
    }
  }
  return basis;
}

// Visits every nonzero x in the lattice (rows of `basis`, in ambient
// coordinates) with x^T B x <= bound2, passing (x, x^T B x). Both x and -x are
// visited. The visitor returns false to stop early. Floating point is used only
// to prune; every reported value is checked exactly.
template <class Visitor>
void enumerate_short(const Mat4& basis, const Bilinear& B, std::int64_t bound2, Visitor&& visit) {
  if (bound2 <= 0) return;
  const Mat4 red = lll_reduce(basis, B);
  std::array<std::array<i128, 4>, 4> G{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G[i][j] = bilinear(B, red[i], red[j]);

  // Cholesky-type decomposition Q(y) = sum_i q[i][i] (y_i + sum_{j>i} q[i][j] y_j)^2.
  std::array<std::array<long double, 4>, 4> q{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q[i][j] = static_cast<long double>(G[i][j]);
  for (int i = 0; i < 4; ++i) {
    if (q[i][i] <= 0) throw std::domain_error("enumerate_short: form is not positive definite");
    for (int j = i + 1; j < 4; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (int k = i + 1; k < 4; ++k)
      for (int l = k; l < 4; ++l) q[k][l] -= q[k][i] * q[i][l];
  }

  const long double slack = 1e-9L * static_cast<long double>(bound2) + 1e-6L;
  Vec4 y{};
  std::array<long double, 4> remaining{};
  bool stop = false;

  auto leaf = [&] {
    i128 val = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) val += G[i][j] * y[i] * y[j];
    if (val == 0 || val > bound2) return;
    if (!visit(combine(red, y), narrow(val))) stop = true;
  };

  auto recurse = [&](auto&& self, int level) -> void {
    long double center = 0;
    for (int j = level + 1; j < 4; ++j) center -= q[level][j] * static_cast<long double>(y[j]);
    const long double budget = remaining[level];
    if (budget < -slack) return;
    const long double radius = std::sqrt(std::max<long double>(budget + slack, 0) / q[level][level]);
    const auto lo = static_cast<std::int64_t>(std::ceil(center - radius));
    const auto hi = static_cast<std::int64_t>(std::floor(center + radius));
    for (std::int64_t v = lo; v <= hi && !stop; ++v) {
      y[level] = v;
      const long double t = static_cast<long double>(v) - center;
      const long double used = q[level][level] * t * t;
      if (level == 0) {
        leaf();
      } else {
        remaining[level - 1] = budget - used;
        self(self, level - 1);
      }
    }
    y[level] = 0;
  };
  remaining[3] = static_cast<long double>(bound2);
  recurse(recurse, 3);
}

}  // namespace brandt
