#include "washtrace/decimal.hpp"

#include <array>
#include <stdexcept>

namespace washtrace {

namespace {

constexpr unsigned kPowCache = 80;

const std::array<BigInt, kPowCache>& pow_table() {
  static const std::array<BigInt, kPowCache> table = [] {
    std::array<BigInt, kPowCache> t;
    t[0] = 1;
    for (unsigned i = 1; i < kPowCache; ++i) t[i] = t[i - 1] * 10;
    return t;
  }();
  return table;
}

// Integer division rounding half away from zero.
BigInt div_round(const BigInt& num, const BigInt& den) {
  BigInt q;
  BigInt r;
  boost::multiprecision::divide_qr(num, den, q, r);
  BigInt twice = abs(r) * 2;
  if (twice >= abs(den)) {
    q += (num.sign() * den.sign() < 0) ? -1 : 1;
  }
  return q;
}

}  // namespace

BigInt pow10(unsigned exponent) {
  if (exponent < kPowCache) return pow_table()[exponent];
  BigInt out = pow_table()[kPowCache - 1];
  for (unsigned i = kPowCache - 1; i < exponent; ++i) out *= 10;
  return out;
}

Decimal Decimal::from_units(BigInt units, unsigned scale) {
  return Decimal(std::move(units), scale);
}

Decimal Decimal::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("bad decimal: " + std::string(text)); };
  std::size_t pos = 0;
  const bool negative = !text.empty() && text[0] == '-';
  if (negative) pos = 1;
  BigInt units = 0;
  unsigned scale = 0;
  std::size_t int_digits = 0;
  for (; pos < text.size() && text[pos] != '.'; ++pos) {
    char ch = text[pos];
    if (ch < '0' || ch > '9') throw bad();
    units = units * 10 + (ch - '0');
    ++int_digits;
  }
  if (int_digits == 0) throw bad();
  if (pos < text.size()) {
    ++pos;
    if (pos == text.size()) throw bad();
    for (; pos < text.size(); ++pos) {
      char ch = text[pos];
      if (ch < '0' || ch > '9') throw bad();
      units = units * 10 + (ch - '0');
      if (++scale > kMaxParseScale) {
        throw std::invalid_argument("more than 18 fractional digits: " + std::string(text));
      }
    }
  }
  if (negative) units = -units;
  return Decimal(std::move(units), scale);
}

Decimal Decimal::from_rational(const Rational& value, unsigned scale) {
  BigInt num = boost::multiprecision::numerator(value) * pow10(scale);
  return Decimal(div_round(num, boost::multiprecision::denominator(value)), scale);
}

Decimal Decimal::abs() const { return Decimal(boost::multiprecision::abs(units_), scale_); }

Decimal Decimal::operator-() const { return Decimal(-units_, scale_); }

Decimal Decimal::normalized() const {
  if (units_.is_zero()) return Decimal();
  BigInt u = units_;
  unsigned s = scale_;
  while (s > 0 && u % 10 == 0) {
    u /= 10;
    --s;
  }
  return Decimal(std::move(u), s);
}

Decimal Decimal::rounded(unsigned scale) const {
  if (scale >= scale_) return *this;
  return Decimal(div_round(units_, pow10(scale_ - scale)), scale);
}

Rational Decimal::to_rational() const { return Rational(units_, pow10(scale_)); }

double Decimal::to_double() const {
  // Exact rational to double conversion rounds once.
  return to_rational().convert_to<double>();
}

std::string Decimal::str() const {
  Decimal n = normalized();
  std::string digits = BigInt(boost::multiprecision::abs(n.units_)).str();
  if (n.scale_ > 0) {
    if (digits.size() <= n.scale_) digits.insert(0, n.scale_ - digits.size() + 1, '0');
    digits.insert(digits.size() - n.scale_, 1, '.');
  }
  if (n.units_.sign() < 0) digits.insert(0, 1, '-');
  return digits;
}

std::string Decimal::fixed(unsigned digits) const {
  Decimal r = rounded(digits);
  BigInt u = r.units_ * pow10(digits - r.scale_);
  std::string text = BigInt(boost::multiprecision::abs(u)).str();
  if (digits > 0) {
    if (text.size() <= digits) text.insert(0, digits - text.size() + 1, '0');
    text.insert(text.size() - digits, 1, '.');
  }
  if (u.sign() < 0) text.insert(0, 1, '-');
  return text;
}

Decimal& Decimal::operator+=(const Decimal& rhs) {
  if (rhs.scale_ == scale_) {
    units_ += rhs.units_;
  } else if (rhs.scale_ > scale_) {
    units_ = units_ * pow10(rhs.scale_ - scale_) + rhs.units_;
    scale_ = rhs.scale_;
  } else {
    units_ += rhs.units_ * pow10(scale_ - rhs.scale_);
  }
  return *this;
}

Decimal& Decimal::operator-=(const Decimal& rhs) { return *this += -rhs; }

Decimal& Decimal::operator*=(const Decimal& rhs) {
  units_ *= rhs.units_;
  scale_ += rhs.scale_;
  return *this;
}

std::strong_ordering operator<=>(const Decimal& lhs, const Decimal& rhs) {
  int cmp = 0;
  if (lhs.scale_ == rhs.scale_) {
    cmp = lhs.units_.compare(rhs.units_);
  } else if (lhs.scale_ < rhs.scale_) {
    cmp = BigInt(lhs.units_ * pow10(rhs.scale_ - lhs.scale_)).compare(rhs.units_);
  } else {
    cmp = lhs.units_.compare(BigInt(rhs.units_ * pow10(lhs.scale_ - rhs.scale_)));
  }
  if (cmp < 0) return std::strong_ordering::less;
  if (cmp > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const Decimal& lhs, const Decimal& rhs) { return (lhs <=> rhs) == 0; }

std::string to_fixed_string(const Rational& value, unsigned digits) {
  return Decimal::from_rational(value, digits).fixed(digits);
}

}  // namespace washtrace
