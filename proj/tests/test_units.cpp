#include "ehc/units.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ehc;

TEST_CASE("decimal parsing is exact") {
    CHECK(parse_decimal("0.70") == Rational(7, 10));
    CHECK(parse_decimal("070") == 70);
    CHECK(parse_decimal("-1.25") == Rational(-5, 4));
    CHECK(parse_decimal("1e-3") == Rational(1, 1000));
    CHECK(parse_decimal("2.5E2") == 250);
    CHECK(parse_decimal("3/8") == Rational(3, 8));
    CHECK(parse_decimal("09/010") == Rational(9, 10));
    CHECK_THROWS_AS(parse_decimal("abc"), ParseError);
    CHECK_THROWS_AS(parse_decimal(""), ParseError);
    CHECK_THROWS_AS(parse_decimal("1/0"), ParseError);
}

TEST_CASE("quantities convert to SI") {
    CHECK(parse_quantity("120ms", Dimension::Time) == Rational(3, 25));
    CHECK(parse_quantity("2 s", Dimension::Time) == 2);
    CHECK(parse_quantity("129.96Wh", Dimension::Energy) == parse_decimal("467856"));
    CHECK(parse_quantity("8GiB", Dimension::Bytes) == Rational(8L << 30));
    CHECK(parse_quantity("15Mbit/s", Dimension::Bandwidth) == 15000000);
    CHECK(parse_quantity("0.70uJ/bit", Dimension::EnergyPerBit) == Rational(7, 10000000));
    CHECK(parse_quantity("2Mbit", Dimension::DataBits) == 2000000);
    CHECK(parse_quantity("1MB", Dimension::DataBits) == 8000000);
    CHECK(parse_quantity("4.2W", Dimension::Power) == Rational(21, 5));
    CHECK(parse_quantity("7", Dimension::Time) == 7);
    CHECK_THROWS_AS(parse_quantity("5 parsecs", Dimension::Time), ParseError);
    CHECK_THROWS_AS(parse_quantity("5W", Dimension::Time), ParseError);
}

TEST_CASE("formatting round-trips") {
    CHECK(format_quantity(Rational(3, 25), "ms", Dimension::Time) == "120ms");
    CHECK(format_decimal(Rational(1, 8)) == "0.125");
    CHECK(format_decimal(Rational(-7, 2)) == "-3.5");
    CHECK(format_decimal(Rational(0)) == "0");

    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        long num = static_cast<long>(rng() % 2000000) - 1000000;
        long pow = static_cast<long>(rng() % 7);
        long den = 1;
        for (long k = 0; k < pow; ++k) den *= 10;
        Rational v(num, den);
        v.canonicalize();
        for (auto [unit, dim] : {std::pair{"ms", Dimension::Time}, {"uJ/bit", Dimension::EnergyPerBit},
                                 {"GiB", Dimension::Bytes}, {"Mbit/s", Dimension::Bandwidth}}) {
            std::string text = format_quantity(v, unit, dim);
            CHECK(parse_quantity(text, dim) == v);
        }
    }
}

TEST_CASE("double conversion and quantization") {
    CHECK(rational_from_double(0.1) == Rational(1, 10));
    CHECK(rational_from_double(3.0) == 3);
    CHECK(quantize(Rational(7, 3), Rational(1, 100)) == Rational(233, 100));
    CHECK(quantize(Rational(5, 2), 1) == 3);
    CHECK(quantize(Rational(-5, 2), 1) == -3);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        double d = std::ldexp(static_cast<double>(rng() >> 11), -40);
        Rational r = rational_from_double(d);
        CHECK(to_double(r) == d);
    }
}
