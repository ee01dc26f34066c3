/*
   Copyright 2026 The recdel Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "recdel/numeric.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <limits>
#include <system_error>

namespace recdel {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

std::string_view strip_sign(std::string_view s, bool& negative)
{
    negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    return s;
}

mpz_class ten_to(unsigned long exponent)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
    return r;
}

} // namespace

bool is_fraction_text(std::string_view text)
{
    return text.find_first_of(".eE") == std::string_view::npos;
}

Rational parse_rational(std::string_view text)
{
    const std::string original(text);
    bool negative = false;
    std::string_view body = strip_sign(text, negative);

    Rational result;
    if (const auto slash = body.find('/'); slash != std::string_view::npos) {
        const auto num = body.substr(0, slash);
        const auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed fraction '" + original + "'");
        }
        mpz_class n(std::string(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + original + "'");
        }
        result = Rational(n, d);
        result.canonicalize();
    } else {
        long exponent = 0;
        if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            bool exp_negative = false;
            auto digits = strip_sign(body.substr(e + 1), exp_negative);
            if (!all_digits(digits) || digits.size() > 6) {
                throw std::invalid_argument("malformed exponent in '" + original + "'");
            }
            exponent = std::stol(std::string(digits));
            if (exp_negative) {
                exponent = -exponent;
            }
            body = body.substr(0, e);
        }
        std::string mantissa;
        if (const auto dot = body.find('.'); dot != std::string_view::npos) {
            const auto int_part = body.substr(0, dot);
            const auto frac_part = body.substr(dot + 1);
            if ((int_part.empty() && frac_part.empty())
                || (!int_part.empty() && !all_digits(int_part))
                || (!frac_part.empty() && !all_digits(frac_part))) {
                throw std::invalid_argument("malformed number '" + original + "'");
            }
            mantissa = std::string(int_part) + std::string(frac_part);
            exponent -= static_cast<long>(frac_part.size());
        } else {
            if (!all_digits(body)) {
                throw std::invalid_argument("malformed number '" + original + "'");
            }
            mantissa = std::string(body);
        }
        result = Rational(mpz_class(mantissa, 10));
        if (exponent > 0) {
            result *= Rational(ten_to(static_cast<unsigned long>(exponent)));
        } else if (exponent < 0) {
            result /= Rational(ten_to(static_cast<unsigned long>(-exponent)));
        }
        result.canonicalize();
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value)
{
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

Rational exact_rational(double value)
{
    if (!std::isfinite(value)) {
        throw std::domain_error("exact_rational: non-finite value");
    }
    // mpq_set_d is exact for finite doubles.
    return Rational(value);
}

bool is_dyadic_double(const Rational& value)
{
    const mpz_class& den = value.get_den();
    // Power-of-two denominator and a numerator that fits in the 53-bit significand.
    if (mpz_popcount(den.get_mpz_t()) != 1) {
        return false;
    }
    const double d = value.get_d();
    return std::isfinite(d) && exact_rational(d) == value;
}

} // namespace recdel
