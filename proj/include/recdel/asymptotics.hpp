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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "recdel/exact.hpp"
#include "recdel/process.hpp"

namespace recdel {

enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime r) noexcept;

/// Critical exactly when p = 1/2: compared exactly for rational-mode parameters,
/// and within 1e-12 for float-mode parameters.
Regime regime_of(const ProcessParams& params);

enum class AsymFunctional {
    P0,
    mean,
    mu2,
    variance,
    harmonic,
    reciprocal_size,
    harmonic_size,
    root_degree,
    leaf_count,
};

std::string_view to_string(AsymFunctional f) noexcept;

/// Throws std::invalid_argument for an unknown name.
AsymFunctional parse_asym_functional(std::string_view name);

struct RegimeEstimate {
    AsymFunctional functional;
    Regime regime;
    double value = 0.0;
    /// Order of the neglected terms, e.g. "O((2sqrt(pq)+eps)^n)".
    std::string error_order;
    /// True when only a bound is known and `value` is 0.
    bool bound_only = false;
};

/// Regime-appropriate closed-form estimate at time n.
///
/// Critical regime: the mean optionally carries its second-order term
/// 1/(2 sqrt(2 pi n)) (`refined`), and the variance uses
/// (1 - 2/pi) n + 1/4 - 1/pi, which is what the mean and second factorial
/// moment expansions combine to. The expected root degree is estimated by
/// E[H_{S_n}]; E[H_{Z_n}] is `harmonic_size`.
///
/// Throws std::domain_error unless n >= 1 and 0 < p < 1.
RegimeEstimate asym_estimate(AsymFunctional functional, const ProcessParams& params, std::size_t n,
                             bool refined = false);

/// The exact counterpart of an asymptotic functional.
double exact_value(const MomentTable<double>& row, AsymFunctional functional);

struct ConvergenceRow {
    std::size_t n = 0;
    double exact = 0.0;
    double asymptotic = 0.0;
    double abs_difference = 0.0;
};

/// Exact (float mode) against asymptotic values on a grid, sorted by n with duplicates removed.
std::vector<ConvergenceRow> convergence_table(AsymFunctional functional, const ProcessParams& params,
                                              std::vector<std::size_t> n_grid, bool refined = false);

} // namespace recdel
