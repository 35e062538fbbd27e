// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "cyclosched/errors.hpp"

namespace cyclosched {

// All schedule/objective arithmetic is exact. Doubles appear only in
// presentation code, never in comparisons.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses a plain decimal string ("0.2", "-3", "1.25") into an exact rational.
inline Rat parse_decimal(std::string_view text)
{
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = (text[pos] == '-');
        ++pos;
    }

    BigInt digits = 0;
    BigInt scale = 1;
    std::size_t digit_count = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_point)
                throw ParseError("invalid decimal literal: '" + std::string(text) + "'");
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw ParseError("invalid decimal literal: '" + std::string(text) + "'");
        digits = digits * 10 + (c - '0');
        if (seen_point)
            scale *= 10;
        ++digit_count;
    }
    if (digit_count == 0)
        throw ParseError("invalid decimal literal: '" + std::string(text) + "'");
    if (negative)
        digits = -digits;
    return Rat(digits, scale);
}

/// Renders `value` with exactly `places` fractional digits, rounding
/// half to even on ties.
inline std::string to_decimal(const Rat& value, unsigned places = 6)
{
    BigInt num = numerator(value);
    BigInt den = denominator(value); // > 0 after normalization
    bool negative = num < 0;
    if (negative)
        num = -num;

    BigInt pow10 = 1;
    for (unsigned i = 0; i < places; ++i)
        pow10 *= 10;

    BigInt scaled = num * pow10;
    BigInt q = scaled / den;
    BigInt r = scaled % den;
    BigInt twice = r * 2;
    if (twice > den || (twice == den && (q % 2) != 0))
        ++q;

    BigInt whole = q / pow10;
    BigInt frac = q % pow10;

    std::string out;
    if (negative && q != 0)
        out += '-';
    out += whole.str();
    if (places > 0) {
        std::string f = frac.str();
        out += '.';
        out.append(places - f.size(), '0');
        out += f;
    }
    return out;
}

/// Like to_decimal but with trailing zeros removed ("1.50" -> "1.5",
/// "2.00" -> "2"). Used by text renderings.
inline std::string to_decimal_trim(const Rat& value, unsigned places = 6)
{
    std::string s = to_decimal(value, places);
    if (s.find('.') == std::string::npos)
        return s;
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

} // namespace cyclosched
