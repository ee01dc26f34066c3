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

#include "recdel/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace recdel {

namespace {

constexpr AsymFunctional kAsymFunctionals[] = {
    AsymFunctional::P0,       AsymFunctional::mean,            AsymFunctional::mu2,
    AsymFunctional::variance, AsymFunctional::harmonic,        AsymFunctional::reciprocal_size,
    AsymFunctional::harmonic_size, AsymFunctional::root_degree, AsymFunctional::leaf_count,
};

constexpr const char* kGeometric = "O((2sqrt(pq)+eps)^n)";

struct Term {
    double value;
    std::string error_order;
    bool bound_only = false;
};

Term root_probability(Regime r, double p, double q, double n)
{
    using std::numbers::pi;
    switch (r) {
    case Regime::subcritical:
        return {(q - p) / q, kGeometric};
    case Regime::critical:
        return {std::sqrt(2.0 / (pi * n)), "O(n^-3/2)"};
    case Regime::supercritical:
        return {0.0, "O((2sqrt(pq))^n n^-3/2)", true};
    }
    return {0.0, ""};
}

Term mean_stratum(Regime r, double p, double q, double n, bool refined)
{
    using std::numbers::pi;
    switch (r) {
    case Regime::subcritical:
        return {p / (q - p), kGeometric};
    case Regime::critical: {
        const double base = std::sqrt(2.0 * n / pi) - 0.5;
        if (refined) {
            return {base + 1.0 / (2.0 * std::sqrt(2.0 * pi * n)), "O(n^-3/2)"};
        }
        return {base, "O(n^-1/2)"};
    }
    case Regime::supercritical:
        return {(p - q) * n + q / (p - q), kGeometric};
    }
    return {0.0, ""};
}

Term harmonic_stratum(Regime r, double p, double q, double n)
{
    switch (r) {
    case Regime::subcritical:
        return {std::log(q / (q - p)), kGeometric};
    case Regime::critical:
        return {std::log(std::sqrt(n)), "O(1)"};
    case Regime::supercritical:
        return {std::log(p - q) + std::log(n), "O(1)"};
    }
    return {0.0, ""};
}

Term reciprocal_size(Regime r, double p, double q, double n)
{
    using std::numbers::pi;
    switch (r) {
    case Regime::subcritical:
        return {(q - p) / p * std::log(q / (q - p)), kGeometric};
    case Regime::critical:
        return {std::log(n) / std::sqrt(2.0 * pi * n), "O(n^-1/2)"};
    case Regime::supercritical:
        return {1.0 / ((p - q) * n), "O(n^-2)"};
    }
    return {0.0, ""};
}

} // namespace

std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::subcritical:
        return "subcritical";
    case Regime::critical:
        return "critical";
    case Regime::supercritical:
        return "supercritical";
    }
    return "?";
}

Regime regime_of(const ProcessParams& params)
{
    if (params.is_exact()) {
        const int c = cmp(params.p_exact(), Rational(1, 2));
        return c < 0 ? Regime::subcritical : c == 0 ? Regime::critical : Regime::supercritical;
    }
    const double p = params.p();
    if (std::fabs(p - 0.5) < 1e-12) {
        return Regime::critical;
    }
    return p < 0.5 ? Regime::subcritical : Regime::supercritical;
}

std::string_view to_string(AsymFunctional f) noexcept
{
    switch (f) {
    case AsymFunctional::P0:
        return "P0";
    case AsymFunctional::mean:
        return "mean";
    case AsymFunctional::mu2:
        return "mu2";
    case AsymFunctional::variance:
        return "variance";
    case AsymFunctional::harmonic:
        return "harmonic";
    case AsymFunctional::reciprocal_size:
        return "reciprocal_size";
    case AsymFunctional::harmonic_size:
        return "harmonic_size";
    case AsymFunctional::root_degree:
        return "root_degree";
    case AsymFunctional::leaf_count:
        return "leaf_count";
    }
    return "?";
}

AsymFunctional parse_asym_functional(std::string_view name)
{
    for (AsymFunctional f : kAsymFunctionals) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown asymptotic functional '" + std::string(name) + "'");
}

RegimeEstimate asym_estimate(AsymFunctional functional, const ProcessParams& params, std::size_t n, bool refined)
{
    using std::numbers::pi;
    if (n < 1) {
        throw std::domain_error("asym_estimate: n must be at least 1");
    }
    if (!(params.p_exact() > 0 && params.p_exact() < 1)) {
        throw std::domain_error("asym_estimate: p must lie strictly between 0 and 1");
    }
    const Regime regime = regime_of(params);
    const double p = params.p();
    const double q = params.q();
    const double nn = static_cast<double>(n);

    Term t{0.0, ""};
    switch (functional) {
    case AsymFunctional::P0:
        t = root_probability(regime, p, q, nn);
        break;
    case AsymFunctional::mean:
        t = mean_stratum(regime, p, q, nn, refined);
        break;
    case AsymFunctional::mu2:
        switch (regime) {
        case Regime::subcritical: {
            const double m = p / (q - p);
            t = {2.0 * m * m, kGeometric};
            break;
        }
        case Regime::critical:
            t = {nn + 1.0 - 2.0 * std::sqrt(2.0 * nn / pi), "O(n^-1/2)"};
            break;
        case Regime::supercritical: {
            const double d = p - q;
            t = {d * d * nn * nn - (4.0 * p * p - 3.0) * nn + 2.0 * q * (1.0 - 3.0 * p) / (d * d), kGeometric};
            break;
        }
        }
        break;
    case AsymFunctional::variance:
        switch (regime) {
        case Regime::subcritical:
            t = {p * q / ((q - p) * (q - p)), kGeometric};
            break;
        case Regime::critical:
            t = {(1.0 - 2.0 / pi) * nn + 0.25 - 1.0 / pi, "O(n^-1/2)"};
            break;
        case Regime::supercritical:
            t = {p * q * (4.0 * (1.0 - 4.0 * p * q) * nn - 3.0) / ((p - q) * (p - q)), "O(n (2sqrt(pq)+eps)^n)"};
            break;
        }
        break;
    case AsymFunctional::harmonic:
    case AsymFunctional::root_degree:
        t = harmonic_stratum(regime, p, q, nn);
        break;
    case AsymFunctional::reciprocal_size:
        t = reciprocal_size(regime, p, q, nn);
        break;
    case AsymFunctional::harmonic_size: {
        const Term h = harmonic_stratum(regime, p, q, nn);
        const Term r = reciprocal_size(regime, p, q, nn);
        t = {h.value + r.value, h.error_order};
        break;
    }
    case AsymFunctional::leaf_count: {
        const Term m = mean_stratum(regime, p, q, nn, refined);
        const Term z = root_probability(regime, p, q, nn);
        t = {(1.0 + m.value + z.value) / 2.0, regime == Regime::critical ? m.error_order : kGeometric};
        break;
    }
    }
    return {functional, regime, t.value, std::move(t.error_order), t.bound_only};
}

double exact_value(const MomentTable<double>& row, AsymFunctional functional)
{
    switch (functional) {
    case AsymFunctional::P0:
        return row.root_prob;
    case AsymFunctional::mean:
        return row.mean_stratum;
    case AsymFunctional::mu2:
        return row.second_factorial;
    case AsymFunctional::variance:
        return row.variance;
    case AsymFunctional::harmonic:
        return row.harmonic;
    case AsymFunctional::reciprocal_size:
        return row.reciprocal_size;
    case AsymFunctional::harmonic_size:
        return row.harmonic_size;
    case AsymFunctional::root_degree:
        return row.root_degree_mean;
    case AsymFunctional::leaf_count:
        return row.leaf_mean;
    }
    return 0.0;
}

std::vector<ConvergenceRow> convergence_table(AsymFunctional functional, const ProcessParams& params,
                                              std::vector<std::size_t> n_grid, bool refined)
{
    std::sort(n_grid.begin(), n_grid.end());
    n_grid.erase(std::unique(n_grid.begin(), n_grid.end()), n_grid.end());

    std::vector<ConvergenceRow> rows;
    rows.reserve(n_grid.size());
    StratumChain<double> chain(params);
    for (std::size_t n : n_grid) {
        while (chain.current().n < n) {
            chain.advance();
        }
        const double exact = exact_value(moments(chain.current()), functional);
        const double asym = asym_estimate(functional, params, n, refined).value;
        rows.push_back({n, exact, asym, std::fabs(exact - asym)});
    }
    return rows;
}

} // namespace recdel
