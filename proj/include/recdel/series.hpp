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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "recdel/numeric.hpp"
#include "recdel/process.hpp"

namespace recdel {

/// Truncated power series c_0 + c_1 z + ... + c_N z^N.
///
/// Every retained coefficient is exact; results of binary operations keep the
/// smaller of the two truncation orders.
template <Scalar T>
class PowerSeries {
public:
    /// The zero series of order N.
    explicit PowerSeries(std::size_t order) : coeffs_(order + 1, T{0}) {}

    explicit PowerSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw std::invalid_argument("PowerSeries: at least one coefficient is required");
        }
    }

    static PowerSeries constant(const T& c, std::size_t order)
    {
        PowerSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    /// a + b z.
    static PowerSeries linear(const T& a, const T& b, std::size_t order)
    {
        PowerSeries s = constant(a, order);
        if (order >= 1) {
            s.coeffs_[1] = b;
        }
        return s;
    }

    /// 1 / (1 - z)^m.
    static PowerSeries inverse_power_of_one_minus_z(unsigned m, std::size_t order)
    {
        // Coefficients C(n + m - 1, m - 1), built by m-fold prefix summation.
        PowerSeries s = constant(T{1}, order);
        for (unsigned r = 0; r < m; ++r) {
            for (std::size_t n = 1; n <= order; ++n) {
                s.coeffs_[n] += s.coeffs_[n - 1];
            }
        }
        return s;
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    const T& operator[](std::size_t n) const { return coeffs_.at(n); }
    const std::vector<T>& coefficients() const noexcept { return coeffs_; }

    PowerSeries truncated(std::size_t order) const
    {
        std::vector<T> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
        return PowerSeries(std::move(c));
    }

    /// Multiplies by z; the top coefficient falls off.
    PowerSeries shifted_up() const
    {
        PowerSeries s(order());
        for (std::size_t n = 1; n <= order(); ++n) {
            s.coeffs_[n] = coeffs_[n - 1];
        }
        return s;
    }

    /// Divides by z. The constant term must be zero; the order drops by one.
    PowerSeries shifted_down() const
    {
        if (coeffs_[0] != 0) {
            throw std::domain_error("PowerSeries: dividing by z needs a zero constant term");
        }
        if (order() == 0) {
            throw std::domain_error("PowerSeries: dividing an order-0 series by z leaves no coefficients");
        }
        return PowerSeries(std::vector<T>(coeffs_.begin() + 1, coeffs_.end()));
    }

    PowerSeries scaled(const T& factor) const
    {
        PowerSeries s = *this;
        for (auto& c : s.coeffs_) {
            c *= factor;
        }
        return s;
    }

    /// Horner evaluation of the truncated polynomial.
    T evaluate(const T& z) const
    {
        T acc{0};
        for (std::size_t n = coeffs_.size(); n-- > 0;) {
            acc = acc * z + coeffs_[n];
        }
        return acc;
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t n = 0; n <= s.order(); ++n) {
            s.coeffs_[n] = a.coeffs_[n] + b.coeffs_[n];
        }
        return s;
    }

    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t n = 0; n <= s.order(); ++n) {
            s.coeffs_[n] = a.coeffs_[n] - b.coeffs_[n];
        }
        return s;
    }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t i = 0; i <= s.order(); ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= s.order(); ++j) {
                s.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return s;
    }

    /// Throws std::domain_error when b has a zero constant term.
    friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b)
    {
        if (b.coeffs_[0] == 0) {
            throw std::domain_error("PowerSeries: division by a series with zero constant term");
        }
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t n = 0; n <= s.order(); ++n) {
            T acc = a.coeffs_[n];
            for (std::size_t j = 1; j <= n; ++j) {
                acc -= b.coeffs_[j] * s.coeffs_[n - j];
            }
            s.coeffs_[n] = acc / b.coeffs_[0];
        }
        return s;
    }

    bool operator==(const PowerSeries&) const = default;

private:
    std::vector<T> coeffs_;
};

enum class SeriesOp { add, sub, mul, div };

template <Scalar T>
PowerSeries<T> ps_arith(SeriesOp op, const PowerSeries<T>& a, const PowerSeries<T>& b)
{
    switch (op) {
    case SeriesOp::add:
        return a + b;
    case SeriesOp::sub:
        return a - b;
    case SeriesOp::mul:
        return a * b;
    case SeriesOp::div:
        return a / b;
    }
    throw std::invalid_argument("ps_arith: unknown operation");
}

namespace detail {

inline double exact_sqrt(double c) { return std::sqrt(c); }

inline Rational exact_sqrt(const Rational& c)
{
    const mpz_class& num = c.get_num();
    const mpz_class& den = c.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
        throw std::domain_error("ps_sqrt: constant term " + to_string(c) + " is not a rational square");
    }
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

} // namespace detail

/// Square root with positive constant term. Rational mode needs the constant term to be a rational square.
template <Scalar T>
PowerSeries<T> ps_sqrt(const PowerSeries<T>& a)
{
    if (!(a[0] > 0)) {
        throw std::domain_error("ps_sqrt: constant term must be positive");
    }
    std::vector<T> r(a.order() + 1, T{0});
    r[0] = detail::exact_sqrt(a[0]);
    const T twice_r0 = T{2} * r[0];
    for (std::size_t n = 1; n <= a.order(); ++n) {
        T acc = a[n];
        for (std::size_t j = 1; j < n; ++j) {
            acc -= r[j] * r[n - j];
        }
        r[n] = acc / twice_r0;
    }
    return PowerSeries<T>(std::move(r));
}

/// log a for a constant term of exactly 1, via (log a)' = a'/a integrated termwise.
template <Scalar T>
PowerSeries<T> ps_log(const PowerSeries<T>& a)
{
    if (a[0] != 1) {
        throw std::domain_error("ps_log: constant term must be 1");
    }
    const std::size_t order = a.order();
    if (order == 0) {
        return PowerSeries<T>(0);
    }
    std::vector<T> deriv(order, T{0});
    for (std::size_t n = 1; n <= order; ++n) {
        deriv[n - 1] = T(static_cast<unsigned long>(n)) * a[n];
    }
    const PowerSeries<T> quotient = PowerSeries<T>(std::move(deriv)) / a.truncated(order - 1);
    std::vector<T> out(order + 1, T{0});
    for (std::size_t n = 1; n <= order; ++n) {
        out[n] = quotient[n - 1] / T(static_cast<unsigned long>(n));
    }
    return PowerSeries<T>(std::move(out));
}

/// The generating functions with closed forms: P(S_n = 0), P(S_n = 1), E[S_n],
/// E[S_n(S_n - 1)], E[H_{S_n}] and E[1/Z_n].
enum class GfName { P0, P1, mu, mu2, H, h };

std::string_view to_string(GfName name) noexcept;

/// Throws std::domain_error for an unknown name.
GfName parse_gf_name(std::string_view name);

namespace detail {

/// sqrt(1 - 4pq z^2)
template <Scalar T>
PowerSeries<T> discriminant_root(const T& p, const T& q, std::size_t order)
{
    PowerSeries<T> d = PowerSeries<T>::constant(T{1}, order);
    if (order >= 2) {
        std::vector<T> c = d.coefficients();
        c[2] = -(T{4} * p * q);
        d = PowerSeries<T>(std::move(c));
    }
    return ps_sqrt(d);
}

/// 2 / (1 - 2qz + sqrt(1 - 4pq z^2))
template <Scalar T>
PowerSeries<T> root_gf(const T& q, const PowerSeries<T>& root)
{
    const std::size_t order = root.order();
    const auto den = PowerSeries<T>::linear(T{1}, -(T{2} * q), order) + root;
    return PowerSeries<T>::constant(T{2}, order) / den;
}

/// log((1 + sqrt(1 - 4pq z^2)) / (1 - 2pz + sqrt(1 - 4pq z^2)))
template <Scalar T>
PowerSeries<T> harmonic_log(const T& p, const PowerSeries<T>& root)
{
    const std::size_t order = root.order();
    const auto num = PowerSeries<T>::constant(T{1}, order) + root;
    const auto den = PowerSeries<T>::linear(T{1}, -(T{2} * p), order) + root;
    return ps_log(num / den);
}

} // namespace detail

/// Coefficients 0..N of the named generating function, composed from its closed form.
template <Scalar T>
PowerSeries<T> series_gf(GfName name, const ProcessParams& params, std::size_t order)
{
    const T p = params.template insertion<T>();
    const T q = params.template deletion<T>();
    // One spare coefficient absorbs the order lost when dividing by z.
    const std::size_t work = order + 1;
    const auto root = detail::discriminant_root(p, q, work);
    const auto p0 = detail::root_gf(q, root);
    const auto one = PowerSeries<T>::constant(T{1}, work);
    const auto z = PowerSeries<T>::linear(T{0}, T{1}, work);
    const auto one_minus_z = PowerSeries<T>::linear(T{1}, T{-1}, work);

    switch (name) {
    case GfName::P0:
        return p0.truncated(order);
    case GfName::P1: {
        if (q == 0) {
            throw std::domain_error("series_gf(P1): the closed form divides by q");
        }
        // (1/(qz) - 1) P0 - 1/(qz) = (P0 - 1)/(qz) - P0
        const auto lifted = (p0 - one).shifted_down().scaled(T{1} / q);
        return (lifted - p0).truncated(order);
    }
    case GfName::mu: {
        const auto first = (p0 * z).scaled(q) / one_minus_z;
        const auto second = z.scaled(p - q) * PowerSeries<T>::inverse_power_of_one_minus_z(2, work);
        return (first + second).truncated(order);
    }
    case GfName::mu2: {
        const auto inv2 = PowerSeries<T>::inverse_power_of_one_minus_z(2, work);
        const auto inv3 = PowerSeries<T>::inverse_power_of_one_minus_z(3, work);
        const auto a = (PowerSeries<T>::linear(T{-1}, T{2} * p, work) * z * p0).scaled(T{2} * q) * inv2;
        const auto b = (z * z).scaled(T{2} * (T{4} * p - T{3}) * p) * inv3;
        const auto c = z.scaled(T{2} * q) * inv3;
        return (a + b + c).truncated(order);
    }
    case GfName::H: {
        const auto lg = detail::harmonic_log(p, root);
        return (lg * PowerSeries<T>::inverse_power_of_one_minus_z(1, work)).truncated(order);
    }
    case GfName::h: {
        if (p == 0) {
            throw std::domain_error("series_gf(h): the closed form divides by p");
        }
        const auto lg = detail::harmonic_log(p, root);
        const auto num = (one + root) * lg;
        const auto den = PowerSeries<T>::linear(T{1}, -(T{2} * q), work) + root;
        return (num / den).shifted_down().scaled(T{1} / p).truncated(order);
    }
    }
    throw std::domain_error("series_gf: unknown generating function");
}

/// Closed form of the root-tree generating function, evaluated in double precision.
double root_gf_value(const ProcessParams& params, double z);

/// Closed form of the bivariate generating function of P(S_n = k), marking the stratum with u.
/// Throws std::domain_error where its denominator vanishes.
double bivariate_gf_value(const ProcessParams& params, double z, double u);

/// |sum_{n<=N} sum_k P(S_n = k) u^k z^n - closed form|.
///
/// Requires |z| <= 1/2 and |u| <= 1 so the truncated double sum converges quickly;
/// throws std::domain_error otherwise.
double bivariate_check(const ProcessParams& params, double z, double u, std::size_t order);

} // namespace recdel
