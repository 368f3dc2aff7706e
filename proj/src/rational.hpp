/*
 * Copyright 2026 The stsynth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STSYNTH_RATIONAL_HPP
#define STSYNTH_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "error.hpp"

namespace stsynth {

/// Reduced fraction with positive denominator.
struct Rational
{
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d = 1) : num(n), den(d)
    {
        if (den == 0) throw ConfigError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return double(num) / double(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b)
    {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(checked(a.num * (__int128)b.num), checked(a.den * (__int128)b.den)); }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * Rational(b.den, b.num); }

private:
    static int64_t checked(__int128 v)
    {
        if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("rational arithmetic overflow", 128);
        return (int64_t)v;
    }
};

/// Parses "3/4", "0.75", "2" exactly. Throws ConfigError otherwise.
Rational parse_rational(const std::string& text);

} // namespace stsynth

#endif
