#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "brandt/averages.hpp"

namespace testing_support {

using namespace brandt;

// Per-process memo of fully computed levels.
inline const LevelData& level(std::int64_t N) {
  static std::map<std::int64_t, LevelData> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(N);
  if (it == memo.end()) it = memo.emplace(N, compute_level(N, 20, 1e-9)).first;
  return it->second;
}

inline std::vector<std::int64_t> primes_between(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = lo; p <= hi; ++p) {
    bool prime = p > 1;
    for (std::int64_t d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    if (prime) out.push_back(p);
  }
  return out;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20091);
  return gen;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

// Weighted count of SL2(Z)-classes of all positive definite forms of
// discriminant -D, forms equivalent to a(x^2+y^2) or a(x^2+xy+y^2) counted 1/2, 1/3.
inline Rational hurwitz_brute(std::int64_t D) {
  Rational total(0);
  for (std::int64_t a = 1; 3 * a * a <= D; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      const std::int64_t num = b * b + D;
      if (num % (4 * a)) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a || (a == c && b < 0)) continue;
      if (a == c && b == 0) total += Rational(1, 2);
      else if (a == b && b == c) total += Rational(1, 3);
      else total += 1;
    }
  return total;
}

// Legendre symbol by listing squares mod an odd prime p.
inline int legendre_brute(std::int64_t a, std::int64_t p) {
  const std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  for (std::int64_t x = 1; x < p; ++x)
    if (x * x % p == r) return 1;
  return -1;
}

// Number of x in the lattice with x^T B x = target, scanning the coordinate box
// |c_k| <= sqrt(target (G^-1)_kk) that contains the whole ellipsoid (G the Gram matrix).
inline std::int64_t box_count(const Mat4& basis, const Mat4& B, std::int64_t target) {
  Eigen::Matrix4d G;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) G(r, s) = static_cast<double>(bilinear(B, basis[r], basis[s]));
  const Eigen::Matrix4d Ginv = G.inverse();
  std::array<std::int64_t, 4> radius{};
  for (int k = 0; k < 4; ++k) radius[k] = static_cast<std::int64_t>(std::sqrt(target * Ginv(k, k))) + 1;
  std::int64_t count = 0;
  Vec4 c{};
  for (c[0] = -radius[0]; c[0] <= radius[0]; ++c[0])
    for (c[1] = -radius[1]; c[1] <= radius[1]; ++c[1])
      for (c[2] = -radius[2]; c[2] <= radius[2]; ++c[2])
        for (c[3] = -radius[3]; c[3] <= radius[3]; ++c[3]) {
          const Vec4 x = combine(basis, c);
          if (bilinear(B, x, x) == target) ++count;
        }
  return count;
}

}  // namespace testing_support
