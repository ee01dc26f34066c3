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

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

namespace recdel {

/// Exact arbitrary-precision rational; the arithmetic of the "rational" numeric mode.
using Rational = mpq_class;

/// num/den in lowest terms.
inline Rational ratio(long num, long den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Thrown when an operation would need more memory than the configured cap allows.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an operation needs information an object cannot provide.
class unsupported_operation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The two numeric modes used throughout: `double` and `Rational`.
template <class T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, Rational>;

/// Parses "a/b", an integer, or a plain decimal ("0.3", "-1.25e-2") into an exact rational.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// True when the text is written as a fraction "a/b" or an integer (no decimal point or exponent).
bool is_fraction_text(std::string_view text);

/// "num/den" in lowest terms; integers are written with denominator 1.
std::string to_string(const Rational& value);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

/// Exact rational value of a finite double.
Rational exact_rational(double value);

/// True when the rational has an exact binary64 representation.
bool is_dyadic_double(const Rational& value);

template <Scalar T>
T from_rational(const Rational& value)
{
    if constexpr (std::is_same_v<T, double>) {
        return value.get_d();
    } else {
        return value;
    }
}

inline double to_double(double value) { return value; }
inline double to_double(const Rational& value) { return value.get_d(); }

inline std::string format_scalar(double value) { return format_double(value); }
inline std::string format_scalar(const Rational& value) { return to_string(value); }

template <Scalar T>
T abs_value(const T& value)
{
    if constexpr (std::is_same_v<T, double>) {
        return std::fabs(value);
    } else {
        return abs(value);
    }
}

/// Sum accumulator: Neumaier compensation for doubles, plain addition for rationals.
template <Scalar T>
class Accumulator {
public:
    void add(const T& value)
    {
        if constexpr (std::is_same_v<T, double>) {
            const double t = sum_ + value;
            if (std::fabs(sum_) >= std::fabs(value)) {
                compensation_ += (sum_ - t) + value;
            } else {
                compensation_ += (value - t) + sum_;
            }
            sum_ = t;
        } else {
            sum_ += value;
        }
    }

    T value() const
    {
        if constexpr (std::is_same_v<T, double>) {
            return sum_ + compensation_;
        } else {
            return sum_;
        }
    }

private:
    T sum_{0};
    T compensation_{0};
};

/// H_0..H_upto with H_0 = 0.
template <Scalar T>
std::vector<T> harmonic_numbers(std::size_t upto)
{
    std::vector<T> h(upto + 1);
    h[0] = T{0};
    for (std::size_t k = 1; k <= upto; ++k) {
        T term{1};
        term /= T(static_cast<unsigned long>(k));
        h[k] = h[k - 1] + term;
    }
    return h;
}

} // namespace recdel
