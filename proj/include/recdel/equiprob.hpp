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
#include <utility>
#include <vector>

#include "recdel/numeric.hpp"
#include "recdel/process.hpp"
#include "recdel/tree.hpp"

namespace recdel {

/// Row-compressed transition block between two strata; rows and columns follow canonical tree order (0-based).
template <Scalar T>
struct TransitionMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::size_t, T>>> entries;

    std::vector<T> row_sums() const;
    std::vector<T> column_sums() const;
    T at(std::size_t row, std::size_t col) const;
};

/// Uniform attachment from stratum k to k+1: entry p/(k+1) wherever one insertion turns tree i into tree j.
/// Throws resource_error when k+1 exceeds cap.
template <Scalar T>
TransitionMatrix<T> build_insertion_matrix(std::size_t k, const ProcessParams& params,
                                           std::size_t cap = kDefaultEnumerationCap);

/// Deletion from stratum `upper` (>= 1) to upper-1: row t is q times rule.row_distribution(t).
/// Throws unsupported_operation when the rule cannot state its distribution, resource_error past cap.
template <Scalar T>
TransitionMatrix<T> build_deletion_matrix(std::size_t upper, const DeletionRule& rule, const ProcessParams& params,
                                          std::size_t cap = kDefaultEnumerationCap);

template <Scalar T>
struct ColumnSumReport {
    bool equal = true;
    std::vector<T> sums;
};

/// All column sums identical: exactly for rationals, within `tol` (relative) for doubles.
template <Scalar T>
ColumnSumReport<T> check_column_sum_condition(const TransitionMatrix<T>& q, double tol = 1e-12);

/// Law of the tree at time n, one probability vector per stratum 0..min(n, K).
template <Scalar T>
struct TreeLevelDistribution {
    std::size_t n = 0;
    std::vector<std::vector<T>> strata;

    T total_mass() const;
};

/// Exact evolution of the tree-level law for n = 0..n_max with strata truncated at K.
///
/// Stratum 0 keeps its mass under deletion. Throws std::domain_error when
/// n_max > K (mass would leave the truncation) and resource_error when K > cap.
template <Scalar T>
std::vector<TreeLevelDistribution<T>> evolve_exact(std::size_t n_max, std::size_t K, const ProcessParams& params,
                                                   const DeletionRule& rule, std::size_t cap = kDefaultEnumerationCap);

template <Scalar T>
struct UniformityEntry {
    std::size_t n = 0;
    std::size_t k = 0;
    T mass{0};
    /// max over trees of |P(tree) / mass - 1/k!|; zero when the stratum has no mass.
    T max_deviation{0};
    bool uniform = true;
};

template <Scalar T>
std::vector<UniformityEntry<T>> check_conditional_uniformity(const std::vector<TreeLevelDistribution<T>>& dists,
                                                             double tol = 0.0);

/// Everything the `verify` command reports for one rule.
template <Scalar T>
struct VerificationReport {
    /// Index i holds the deletion block from stratum i+1.
    std::vector<ColumnSumReport<T>> column_sums;
    std::vector<UniformityEntry<T>> uniformity;
    bool column_sum_condition = true;
    bool uniform = true;
};

/// Column sums for strata 1..K and uniformity for n <= n_max (evolved with truncation max(K, n_max)).
template <Scalar T>
VerificationReport<T> verify_rule(const DeletionRule& rule, const ProcessParams& params, std::size_t K,
                                  std::size_t n_max, double tol = 0.0, std::size_t cap = kDefaultEnumerationCap);

} // namespace recdel
