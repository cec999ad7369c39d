#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invforge {

/// Arbitrary-precision rational, always in canonical form (gcd 1, positive
/// denominator). Expression templates are off so the type composes with Eigen.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;

/// Parses "n", "-n", "n/d" (d may be negative; the result is canonicalized).
/// Throws InputError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Formats as "num/den"; integers keep the "/1" so the form is uniform.
std::string format_rational(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// x^p for a nonnegative integer exponent, by repeated squaring.
template <typename Scalar>
Scalar power(Scalar base, int exponent) {
  Scalar result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

/// Floor of the p-th root of a nonnegative integer.
BigInt integer_root_floor(const BigInt& value, int p);

/// The exact rational p-th root of a nonnegative rational, if one exists.
std::optional<Rational> exact_root(const Rational& value, int p);

/// Smallest integer >= value.
BigInt ceil_of(const Rational& value);
/// Largest integer <= value.
BigInt floor_of(const Rational& value);

/// Best rational approximation of x with denominator at most max_den
/// (continued fractions). Non-finite input throws InputError.
Rational rationalize(double x, std::int64_t max_den);

BigInt lcm_of(const BigInt& a, const BigInt& b);

template <typename Derived>
RationalVector to_rational_vector(const Eigen::MatrixBase<Derived>& v) {
  RationalVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = Rational(v(i));
  return out;
}

std::vector<std::string> format_vector(const RationalVector& v);
RationalVector parse_vector(const std::vector<std::string>& items);

}  // namespace invforge
