#pragma once

// Hecke eigenforms on the weighted space of functions on ideal classes.
//
// B(m) is self-adjoint for <x, y> = sum_i w_i x_i y_i, so M(m) = W^{-1/2} B(m) W^{1/2}
// is symmetric. A fixed combination of M(p) over small primes p != N is
// diagonalized in double precision on the orthogonal complement of the
// Eisenstein line, each eigenvector is refined by Rayleigh quotient iteration
// in 50-digit arithmetic, and lambda = W^{-1/2} v is the normalized form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "brandt/arith.hpp"
#include "brandt/brandt_matrix.hpp"
#include "brandt/rational.hpp"

namespace brandt {

struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResidualTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RealVector = std::vector<Real>;

inline Real weighted_inner(const std::vector<std::int64_t>& w, const RealVector& x, const RealVector& y) {
  Real s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += Real(w[i]) * x[i] * y[i];
  return s;
}

// e = sum_i e_i / w_i; <e, e> = (N-1)/12.
inline std::vector<Rational> eisenstein_vector(const IdealClassData& data) {
  std::vector<Rational> e;
  for (const auto& c : data.classes) e.push_back(make_rational(1, c.weight));
  return e;
}

struct Eigenform {
  std::string label;
  std::int64_t level = 0;
  RealVector lambda;  // coefficients on the characteristic functions e_i
  Real error_bound = 0;
  std::map<std::int64_t, Real> eigenvalues;  // m -> a_m

  const Real& a(std::int64_t m) const {
    auto it = eigenvalues.find(m);
    if (it == eigenvalues.end()) throw std::out_of_range("eigenvalue a_" + std::to_string(m) + " not computed");
    return it->second;
  }

  // a_N snapped to +-1, if it is within tol of one of them.
  std::optional<int> sign_at_level(const Real& tol) const {
    const Real& aN = a(level);
    if (boost::multiprecision::abs(aN - 1) <= tol) return 1;
    if (boost::multiprecision::abs(aN + 1) <= tol) return -1;
    return std::nullopt;
  }
};

namespace detail {

inline std::vector<std::vector<Real>> symmetrized(const BrandtMatrix& B, const std::vector<Real>& sqrt_w) {
  const std::size_t n = B.n;
  std::vector<std::vector<Real>> M(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = Real(B(i, j)) * sqrt_w[j] / sqrt_w[i];
  return M;
}

inline RealVector mat_vec(const std::vector<std::vector<Real>>& M, const RealVector& v) {
  RealVector out(v.size(), Real(0));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += M[i][j] * v[j];
  return out;
}

inline Real dot(const RealVector& x, const RealVector& y) {
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Real norm2(const RealVector& x) { return boost::multiprecision::sqrt(dot(x, x)); }

// Solves A y = b by Gaussian elimination with partial pivoting; nullopt if singular.
inline std::optional<RealVector> solve(std::vector<std::vector<Real>> A, RealVector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (boost::multiprecision::abs(A[r][c]) > boost::multiprecision::abs(A[piv][c])) piv = r;
    if (A[piv][c] == 0) return std::nullopt;
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Real f = A[r][c] / A[c][c];
      if (f == 0) continue;
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  RealVector y(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * y[k];
    y[i] = s / A[i][i];
  }
  return y;
}

inline void project_out(RealVector& v, const RealVector& unit) {
  const Real c = dot(v, unit);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * unit[i];
  const Real nv = norm2(v);
  for (auto& x : v) x /= nv;
}

// Rayleigh quotient iteration from v, kept orthogonal to `unit`.
inline RealVector refine(const std::vector<std::vector<Real>>& C, RealVector v, const RealVector& unit) {
  project_out(v, unit);
  for (int iter = 0; iter < 8; ++iter) {
    const RealVector Cv = mat_vec(C, v);
    const Real mu = dot(v, Cv);
    RealVector r = Cv;
    for (std::size_t i = 0; i < v.size(); ++i) r[i] -= mu * v[i];
    if (norm2(r) < Real("1e-45")) break;
    auto shifted = C;
    for (std::size_t i = 0; i < v.size(); ++i) shifted[i][i] -= mu;
    const auto y = solve(shifted, v);
    if (!y) break;
    v = *y;
    project_out(v, unit);
  }
  return v;
}

inline std::vector<std::int64_t> separator_primes(const BrandtFamily& family) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= std::min<std::int64_t>(50, family.max_index()); ++p)
    if (is_prime(p) && p != family.level()) out.push_back(p);
  return out;
}

}  // namespace detail

// Normalized eigenforms of the cuspidal part, one per newform of level N.
inline std::vector<Eigenform> eigenbasis(const BrandtFamily& family, double tol = 1e-9) {
  const std::int64_t N = family.level();
  const std::size_t n = family.size();
  const auto w = family.classdata->weights();
  const std::int64_t expected = dim_newforms(N);
  if (static_cast<std::int64_t>(n) - 1 != expected)
    throw DimensionMismatch("eigenbasis: " + std::to_string(n - 1) + " cusp dimensions but " +
                            std::to_string(expected) + " newforms expected");
  if (expected == 0) return {};

  std::vector<Real> sqrt_w;
  for (auto x : w) sqrt_w.push_back(boost::multiprecision::sqrt(Real(x)));
  // Eisenstein direction in the symmetrized coordinates: v_i = w_i^{-1/2}.
  RealVector unit(n);
  for (std::size_t i = 0; i < n; ++i) unit[i] = 1 / sqrt_w[i];
  {
    const Real u = detail::norm2(unit);
    for (auto& x : unit) x /= u;
  }

  // Orthonormal basis of the complement of the Eisenstein line (Householder).
  Eigen::VectorXd u(n);
  for (std::size_t i = 0; i < n; ++i) u(static_cast<Eigen::Index>(i)) = unit[i].convert_to<double>();
  Eigen::VectorXd h = u;
  h(0) += u(0) >= 0 ? 1.0 : -1.0;
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - 2.0 * h * h.transpose() / h.squaredNorm();
  const Eigen::MatrixXd Q = H.rightCols(static_cast<Eigen::Index>(n - 1));

  const auto primes = detail::separator_primes(family);
  if (primes.empty()) throw DegenerateSpectrum("eigenbasis: no Hecke operators available");

  std::vector<std::vector<Real>> C(n, std::vector<Real>(n, Real(0)));
  Real weight = 1;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const auto M = detail::symmetrized(family.at(primes[k]), sqrt_w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) C[i][j] += weight * M[i][j];
    weight *= 3;
    if (k + 1 < 3 && k + 1 < primes.size()) continue;

    Eigen::MatrixXd Cd(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        Cd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = C[i][j].convert_to<double>();
    const Eigen::MatrixXd restricted = Q.transpose() * Cd * Q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
    const Eigen::VectorXd values = solver.eigenvalues();
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    double gap = INFINITY;
    for (Eigen::Index i = 1; i < values.size(); ++i) gap = std::min(gap, values(i) - values(i - 1));
    if (values.size() > 1 && gap < tol * scale) {
      if (k + 1 == primes.size())
        throw DegenerateSpectrum("eigenbasis: eigenvalue gap " + std::to_string(gap) + " below tolerance");
      continue;
    }

    std::vector<Eigenform> forms;
    const Eigen::MatrixXd vectors = Q * solver.eigenvectors();
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
      RealVector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = Real(vectors(static_cast<Eigen::Index>(i), c));
      v = detail::refine(C, v, unit);

      Eigenform f;
      f.level = N;
      f.lambda.resize(n);
      for (std::size_t i = 0; i < n; ++i) f.lambda[i] = v[i] / sqrt_w[i];
      for (const auto& x : f.lambda) {
        if (boost::multiprecision::abs(x) <= tol) continue;
        if (x < 0)
          for (auto& y : f.lambda) y = -y;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = f.lambda[i] * sqrt_w[i];

      RealVector Cv = detail::mat_vec(C, v);
      const Real mu = detail::dot(v, Cv);
      for (std::size_t i = 0; i < n; ++i) Cv[i] -= mu * v[i];
      const Real rel_gap = gap == INFINITY ? Real(1) : Real(gap);
      f.error_bound = detail::norm2(Cv) / rel_gap + std::numeric_limits<Real>::epsilon() * 100;

      for (const auto& [m, B] : family.matrices) {
        const auto M = detail::symmetrized(B, sqrt_w);
        RealVector Mv = detail::mat_vec(M, v);
        Real a = detail::dot(v, Mv);
        for (std::size_t i = 0; i < n; ++i) Mv[i] -= a * v[i];
        if (detail::norm2(Mv) > real_from_double(tol) * std::max(Real(1), boost::multiprecision::abs(a)))
          throw ResidualTooLarge("eigenbasis: residual of B(" + std::to_string(m) + ") exceeds tolerance");
        const Real nearest = boost::multiprecision::round(a);
        if (boost::multiprecision::abs(a - nearest) <= tol) a = nearest;
        f.eigenvalues[m] = a;
      }
      forms.push_back(std::move(f));
    }

    // Labels N.k ordered by (a_2, a_3, a_5, ...).
    std::sort(forms.begin(), forms.end(), [&](const Eigenform& x, const Eigenform& y) {
      for (std::int64_t p : primes) {
        const Real d = x.a(p) - y.a(p);
        if (boost::multiprecision::abs(d) > tol) return d < 0;
      }
      return false;
    });
    for (std::size_t k2 = 0; k2 < forms.size(); ++k2) forms[k2].label = std::to_string(N) + "." + std::to_string(k2 + 1);
    return forms;
  }
  throw DegenerateSpectrum("eigenbasis: spectrum not separated by available Hecke operators");
}

// a_m(f) as the Rayleigh quotient <T_m f', f'>, with a residual check.
inline Real hecke_eigenvalue(const Eigenform& f, const BrandtMatrix& B, const std::vector<std::int64_t>& w,
                             double tol = 1e-9) {
  const std::size_t n = B.n;
  RealVector action(n, Real(0));  // (B^T lambda)_j
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) action[j] += Real(B(i, j)) * f.lambda[i];
  Real a = weighted_inner(w, action, f.lambda);
  Real res = 0;
  for (std::size_t j = 0; j < n; ++j) res += Real(w[j]) * (action[j] - a * f.lambda[j]) * (action[j] - a * f.lambda[j]);
  if (boost::multiprecision::sqrt(res) > real_from_double(tol) * std::max(Real(1), boost::multiprecision::abs(a)))
    throw ResidualTooLarge("hecke_eigenvalue: residual exceeds tolerance at m = " + std::to_string(B.index));
  const Real nearest = boost::multiprecision::round(a);
  if (boost::multiprecision::abs(a - nearest) <= tol) a = nearest;
  return a;
}

inline Real hecke_eigenvalue(const Eigenform& f, std::int64_t m, BrandtFamily& family, double tol = 1e-9) {
  family.ensure(m);
  return hecke_eigenvalue(f, family.at(m), family.classdata->weights(), tol);
}

// Orthonormality, completeness, aggregate traces and Hecke relations of an eigenbasis.
inline VerificationReport verify_eigenforms(const BrandtFamily& family, const std::vector<Eigenform>& forms,
                                            double tol = 1e-9) {
  VerificationReport rep;
  const std::int64_t N = family.level();
  rep.level = N;
  const std::size_t n = family.size();
  const auto w = family.classdata->weights();
  const Real t = real_from_double(tol);

  rep.rows.push_back(exact_row("eigenform_count", "", Rational(static_cast<std::int64_t>(forms.size())),
                               Rational(dim_newforms(N))));
  if (forms.empty()) return rep;

  Real worst_inner = 0, worst_eis = 0;
  for (std::size_t a = 0; a < forms.size(); ++a) {
    Real s = 0;
    for (const auto& x : forms[a].lambda) s += x;
    worst_eis = std::max(worst_eis, Real(boost::multiprecision::abs(s)));
    for (std::size_t b = a; b < forms.size(); ++b) {
      const Real ip = weighted_inner(w, forms[a].lambda, forms[b].lambda) - (a == b ? 1 : 0);
      worst_inner = std::max(worst_inner, Real(boost::multiprecision::abs(ip)));
    }
  }
  rep.rows.push_back(real_row("orthonormality", "max |<f,g> - delta|", worst_inner, Real(0), 10 * t));
  rep.rows.push_back(real_row("eisenstein_orthogonality", "max |<f,e>|", worst_eis, Real(0), 10 * t));

  Real worst_parseval = 0;
  const Real eis_scale = Real(12) / Real(N - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Real s = eis_scale / (Real(w[i]) * Real(w[j]));
      for (const auto& f : forms) s += f.lambda[i] * f.lambda[j];
      if (i == j) s -= 1 / Real(w[i]);
      worst_parseval = std::max(worst_parseval, Real(boost::multiprecision::abs(s)));
    }
  rep.rows.push_back(real_row("parseval", "max entry of sum f'f'^T + ee^T/<e,e> - W^-1", worst_parseval, Real(0), 10 * t));

  for (const auto& [m, B] : family.matrices) {
    if (m > 50) break;
    Real s = 0;
    for (const auto& f : forms) s += f.a(m);
    const Rational expected = trace_brandt_closed_form(N, m) - sigma_N(m, N);
    rep.rows.push_back(real_row("hecke_trace", "m=" + std::to_string(m), s, to_real(expected), Real(n) * t));
  }

  Real worst_sign = 0;
  for (const auto& f : forms)
    worst_sign = std::max(worst_sign, Real(boost::multiprecision::abs(f.a(N) * f.a(N) - 1)));
  rep.rows.push_back(real_row("level_eigenvalue_sign", "max |a_N^2 - 1|", worst_sign, Real(0), t));

  Real worst_rec = 0;
  const std::int64_t limit = std::min<std::int64_t>(50, family.max_index());
  for (std::int64_t p = 2; p * p <= limit; ++p) {
    if (!is_prime(p) || p == N) continue;
    for (std::int64_t prev = 1, pk = p; pk * p <= limit; prev = pk, pk *= p)
      for (const auto& f : forms)
        worst_rec = std::max(worst_rec, Real(boost::multiprecision::abs(f.a(p) * f.a(pk) - f.a(pk * p) - p * f.a(prev))));
  }
  rep.rows.push_back(real_row("eigenvalue_hecke_recursion", "max residual", worst_rec, Real(0), t));
  return rep;
}

}  // namespace brandt
