// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "cyclosched/rational.hpp"

using namespace cyclosched;

TEST_CASE("decimal strings parse to exact rationals")
{
    CHECK(parse_decimal("0.2") == Rat(1, 5));
    CHECK(parse_decimal("0.232787") == Rat(232787, 1000000));
    CHECK(parse_decimal("1.25") == Rat(5, 4));
    CHECK(parse_decimal("-3") == Rat(-3));
    CHECK(parse_decimal("-0.5") == Rat(-1, 2));
    CHECK(parse_decimal("+.5") == Rat(1, 2));
    CHECK(parse_decimal("10.00") == Rat(10));
    CHECK(parse_decimal("0") == Rat(0));
    CHECK(parse_decimal("007") == Rat(7));
}

TEST_CASE("malformed decimal strings are rejected")
{
    CHECK_THROWS_AS(parse_decimal(""), ParseError);
    CHECK_THROWS_AS(parse_decimal("."), ParseError);
    CHECK_THROWS_AS(parse_decimal("-"), ParseError);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), ParseError);
    CHECK_THROWS_AS(parse_decimal("12a"), ParseError);
    CHECK_THROWS_AS(parse_decimal("1e6"), ParseError);
    CHECK_THROWS_AS(parse_decimal("1/2"), ParseError);
    CHECK_THROWS_AS(parse_decimal(" 1"), ParseError);
}

TEST_CASE("fixed-point rendering rounds half to even")
{
    CHECK(to_decimal(Rat(1, 8), 2) == "0.12");  // 0.125 -> even neighbor
    CHECK(to_decimal(Rat(3, 8), 2) == "0.38");  // 0.375 -> even neighbor
    CHECK(to_decimal(Rat(1, 3), 6) == "0.333333");
    CHECK(to_decimal(Rat(2, 3), 6) == "0.666667");
    CHECK(to_decimal(Rat(-1, 8), 2) == "-0.12");
    CHECK(to_decimal(Rat(-1, 1000), 2) == "0.00"); // never "-0.00"
    CHECK(to_decimal(Rat(5, 2), 0) == "2");        // ties to even, whole part
    CHECK(to_decimal(Rat(7, 2), 0) == "4");
    CHECK(to_decimal(Rat(19461, 83600), 7) == "0.2327871");
    CHECK(to_decimal(Rat(0), 3) == "0.000");
}

TEST_CASE("trimmed rendering drops trailing zeros only")
{
    CHECK(to_decimal_trim(Rat(3, 2)) == "1.5");
    CHECK(to_decimal_trim(Rat(2)) == "2");
    CHECK(to_decimal_trim(Rat(1, 5)) == "0.2");
    CHECK(to_decimal_trim(Rat(1, 3), 4) == "0.3333");
}

TEST_CASE("parse and render round-trip on exactly representable values")
{
    for (int num = -20; num <= 20; ++num)
        for (int den : {1, 2, 4, 5, 8, 10, 16, 25, 32}) {
            Rat x(num, den);
            CHECK(parse_decimal(to_decimal(x, 9)) == x);
        }
}
