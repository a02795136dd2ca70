#pragma once

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace brandt {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Working precision for eigenvector refinement and every eigen-side sum.
using Real = boost::multiprecision::cpp_bin_float_50;

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) {
  if (q == 0) throw std::domain_error("zero denominator");
  return Rational(Int(p), Int(q));
}

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

// Lossless text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  const Int& den = boost::multiprecision::denominator(r);
  std::string s = boost::multiprecision::numerator(r).str();
  if (den != 1) s += "/" + den.str();
  return s;
}

inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Int(std::string(text)));
    Int num(std::string(text.substr(0, slash)));
    Int den(std::string(text.substr(slash + 1)));
    if (den == 0) throw std::domain_error("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: " + std::string(text));
  }
}

inline Real to_real(const Rational& r) {
  return Real(boost::multiprecision::numerator(r)) / Real(boost::multiprecision::denominator(r));
}

inline std::int64_t to_int64(const Int& v) {
  if (v > Int(INT64_MAX) || v < Int(INT64_MIN)) throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

// Fixed-format decimal text of a real at `digits` significant digits.
inline std::string to_decimal(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

// The shortest decimal that round-trips the double, as a Real (1e-9 becomes exactly 10^-9).
inline Real real_from_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  for (int digits = 1; digits <= 17; ++digits) {
    std::ostringstream trial;
    trial << std::setprecision(digits) << x;
    if (std::stod(trial.str()) == x) return Real(trial.str());
  }
  return Real(os.str());
}

// Continued-fraction reconstruction: the first convergent p/q with q <= max_den
// lying within tol of x.
inline std::optional<Rational> reconstruct_within(const Real& x, const Real& tol, const Int& max_den) {
  using boost::multiprecision::abs;
  using boost::multiprecision::floor;
  Int p_prev = 1, q_prev = 0;
  Int p = static_cast<Int>(floor(x)), q = 1;
  Real frac = x - floor(x);
  for (int iter = 0; iter < 200; ++iter) {
    if (q > max_den) return std::nullopt;
    if (abs(x - Real(p) / Real(q)) <= tol) return Rational(p, q);
    if (frac == 0) return std::nullopt;
    const Real inv = 1 / frac;
    const Int a = static_cast<Int>(floor(inv));
    frac = inv - floor(inv);
    Int p_next = a * p + p_prev;
    Int q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return std::nullopt;
}

// Accepts a reconstruction only if it is unchanged when the demanded accuracy
// is squared (tol -> tol^2), i.e. the agreement survives doubling the digits.
inline std::optional<Rational> reconstruct(const Real& x, const Real& tol, const Int& max_den) {
  auto coarse = reconstruct_within(x, tol, max_den);
  if (!coarse) return std::nullopt;
  auto fine = reconstruct_within(x, tol * tol, max_den);
  if (!fine || *fine != *coarse) return std::nullopt;
  return coarse;
}

}  // namespace brandt
