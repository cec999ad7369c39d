#include "invforge/scalar.hpp"

#include "invforge/error.hpp"

#include <gmp.h>

#include <cctype>
#include <cmath>

namespace invforge {
namespace {

bool is_signed_digits(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  const std::string_view num_text = text.substr(0, slash);
  const std::string_view den_text = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!is_signed_digits(num_text) || !is_signed_digits(den_text)) {
    throw InputError("malformed rational '" + std::string(text) + "'");
  }
  const BigInt den = parse_integer(den_text);
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(num_text), den);
}

std::string format_rational(const Rational& value) {
  return numerator_of(value).str() + "/" + denominator_of(value).str();
}

BigInt integer_root_floor(const BigInt& value, int p) {
  if (value < 0) throw InputError("integer root of a negative value");
  BigInt result;
  mpz_root(result.backend().data(), value.backend().data(), static_cast<unsigned long>(p));
  return result;
}

std::optional<Rational> exact_root(const Rational& value, int p) {
  if (value < 0 || p < 1) return std::nullopt;
  const BigInt num = numerator_of(value);
  const BigInt den = denominator_of(value);
  const BigInt rn = integer_root_floor(num, p);
  const BigInt rd = integer_root_floor(den, p);
  if (power(rn, p) != num || power(rd, p) != den) return std::nullopt;
  return Rational(rn, rd);
}

BigInt floor_of(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.backend().data(), numerator_of(value).backend().data(),
             denominator_of(value).backend().data());
  return q;
}

BigInt ceil_of(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.backend().data(), numerator_of(value).backend().data(),
             denominator_of(value).backend().data());
  return q;
}

BigInt lcm_of(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

Rational rationalize(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw InputError("cannot rationalize a non-finite value");
  if (max_den < 1) max_den = 1;
  // Convergents h/k of the continued fraction of x; the last one within the
  // denominator bound is compared against the best semiconvergent.
  const bool negative = x < 0;
  double rest = std::fabs(x);
  BigInt h_prev = 1, h = static_cast<std::int64_t>(std::floor(rest));
  BigInt k_prev = 0, k = 1;
  double frac = rest - std::floor(rest);
  const BigInt bound(max_den);
  for (int iter = 0; iter < 64 && frac > 1e-18; ++iter) {
    rest = 1.0 / frac;
    const double a_d = std::floor(rest);
    if (a_d > 1e18) break;
    const BigInt a(static_cast<std::int64_t>(a_d));
    frac = rest - a_d;
    const BigInt k_next = a * k + k_prev;
    if (k_next > bound) {
      // Semiconvergent with the largest admissible multiplier.
      const BigInt t = (bound - k_prev) / k;
      const BigInt hs = t * h + h_prev;
      const BigInt ks = t * k + k_prev;
      const Rational target(std::fabs(x));
      const Rational conv(h, k);
      if (ks > 0) {
        const Rational semi(hs, ks);
        if (abs_value(Rational(semi - target)) < abs_value(Rational(conv - target))) {
          h = hs;
          k = ks;
        }
      }
      break;
    }
    const BigInt h_next = a * h + h_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  Rational result(h, k);
  return negative ? Rational(-result) : result;
}

std::vector<std::string> format_vector(const RationalVector& v) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out.push_back(format_rational(v(i)));
  return out;
}

RationalVector parse_vector(const std::vector<std::string>& items) {
  RationalVector v(static_cast<Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v(static_cast<Index>(i)) = parse_rational(items[i]);
  return v;
}

}  // namespace invforge
