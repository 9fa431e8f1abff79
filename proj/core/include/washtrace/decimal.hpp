#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace washtrace {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact signed decimal: an arbitrary-precision integer mantissa and a
/// base-10 scale. Addition, subtraction and multiplication never round,
/// so money arithmetic is reproducible bit for bit. Values are compared
/// numerically; 1.50 == 1.5.
class Decimal {
 public:
  /// Largest number of fractional digits accepted by parse() (wei precision).
  static constexpr unsigned kMaxParseScale = 18;

  Decimal() = default;
  Decimal(long long whole) : units_(whole) {}  // NOLINT(implicit)

  static Decimal from_units(BigInt units, unsigned scale);

  /// Parses "[-]digits[.digits]". Throws std::invalid_argument on anything
  /// else, including exponents and more than kMaxParseScale fractional digits.
  static Decimal parse(std::string_view text);

  /// Rounds half away from zero to `scale` fractional digits.
  static Decimal from_rational(const Rational& value, unsigned scale);

  const BigInt& units() const noexcept { return units_; }
  unsigned scale() const noexcept { return scale_; }

  bool is_zero() const { return units_.is_zero(); }
  int sign() const { return units_.sign(); }

  Decimal abs() const;
  Decimal operator-() const;

  /// Same value with trailing fractional zeros removed.
  Decimal normalized() const;
  /// Rounds half away from zero to at most `scale` fractional digits.
  Decimal rounded(unsigned scale) const;

  Rational to_rational() const;
  double to_double() const;

  /// Shortest exact rendering, e.g. "13.86", "0", "-0.000001".
  std::string str() const;
  /// Fixed rendering with exactly `digits` fractional digits (rounded).
  std::string fixed(unsigned digits) const;

  Decimal& operator+=(const Decimal& rhs);
  Decimal& operator-=(const Decimal& rhs);
  Decimal& operator*=(const Decimal& rhs);

  friend Decimal operator+(Decimal lhs, const Decimal& rhs) { return lhs += rhs; }
  friend Decimal operator-(Decimal lhs, const Decimal& rhs) { return lhs -= rhs; }
  friend Decimal operator*(Decimal lhs, const Decimal& rhs) { return lhs *= rhs; }

  friend bool operator==(const Decimal& lhs, const Decimal& rhs);
  friend std::strong_ordering operator<=>(const Decimal& lhs, const Decimal& rhs);

 private:
  Decimal(BigInt units, unsigned scale) : units_(std::move(units)), scale_(scale) {}

  BigInt units_{0};
  unsigned scale_ = 0;
};

BigInt pow10(unsigned exponent);

/// Renders a rational with `digits` fractional digits, rounded half away from zero.
std::string to_fixed_string(const Rational& value, unsigned digits);

}  // namespace washtrace
