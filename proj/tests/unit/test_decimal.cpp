#include <doctest.h>

#include <stdexcept>

#include "washtrace/decimal.hpp"

using washtrace::Decimal;
using washtrace::Rational;

TEST_CASE("decimal parsing and rendering") {
  CHECK(Decimal::parse("13.86").str() == "13.86");
  CHECK(Decimal::parse("-0.000001").str() == "-0.000001");
  CHECK(Decimal::parse("1.500").str() == "1.5");
  CHECK(Decimal::parse("007").str() == "7");
  CHECK(Decimal::parse("0.000000000000000001").scale() == 18);
  CHECK_THROWS_AS(Decimal::parse("0.0000000000000000001"), std::invalid_argument);
  for (const char* bad : {"", "-", ".5", "5.", "1e3", "1,5", " 1", "+1", "0x10", "1.2.3"}) {
    CHECK_THROWS_AS(Decimal::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("decimal arithmetic is exact") {
  Decimal a = Decimal::parse("0.1");
  Decimal b = Decimal::parse("0.2");
  CHECK(a + b == Decimal::parse("0.3"));
  CHECK(Decimal::parse("14.85") - Decimal::parse("0.99") == Decimal::parse("13.86"));
  CHECK(Decimal::parse("1.5") * Decimal::parse("-0.02") == Decimal::parse("-0.03"));
  Decimal big = Decimal::parse("123456789012345678901234567890.123456789012345678");
  CHECK((big + big - big) == big);
  CHECK(Decimal::parse("1.50") == Decimal::parse("1.5"));
  CHECK(Decimal::parse("-2") < Decimal::parse("-1.999"));
  CHECK(Decimal(3) > Decimal::parse("2.999999"));
}

TEST_CASE("decimal rounding is half away from zero") {
  CHECK(Decimal::parse("2.345").fixed(2) == "2.35");
  CHECK(Decimal::parse("-2.345").fixed(2) == "-2.35");
  CHECK(Decimal::parse("2.344").fixed(2) == "2.34");
  CHECK(Decimal::parse("7").fixed(3) == "7.000");
  CHECK(Decimal::parse("0.004").fixed(2) == "0.00");
  CHECK(Decimal::from_rational(Rational(1, 3), 4) == Decimal::parse("0.3333"));
  CHECK(Decimal::from_rational(Rational(-2, 3), 2) == Decimal::parse("-0.67"));
  CHECK(washtrace::to_fixed_string(Rational(1, 8), 2) == "0.13");
  CHECK(washtrace::to_fixed_string(Rational(-1, 8), 2) == "-0.13");
}

TEST_CASE("decimal round trips through rationals") {
  Decimal d = Decimal::parse("-1234.5678");
  CHECK(d.to_rational() == Rational(-12345678, 10000));
  CHECK(Decimal::from_rational(d.to_rational(), 4) == d);
  CHECK(d.abs() == Decimal::parse("1234.5678"));
  CHECK((-d).sign() == 1);
  CHECK(Decimal().is_zero());
}
