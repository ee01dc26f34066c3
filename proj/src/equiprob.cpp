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

#include "recdel/equiprob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace recdel {

template <Scalar T>
std::vector<T> TransitionMatrix<T>::row_sums() const
{
    std::vector<T> sums(rows, T{0});
    for (std::size_t i = 0; i < rows; ++i) {
        for (const auto& [j, v] : entries[i]) {
            sums[i] += v;
        }
    }
    return sums;
}

template <Scalar T>
std::vector<T> TransitionMatrix<T>::column_sums() const
{
    std::vector<T> sums(cols, T{0});
    for (const auto& row : entries) {
        for (const auto& [j, v] : row) {
            sums[j] += v;
        }
    }
    return sums;
}

template <Scalar T>
T TransitionMatrix<T>::at(std::size_t row, std::size_t col) const
{
    T value{0};
    for (const auto& [j, v] : entries.at(row)) {
        if (j == col) {
            value += v;
        }
    }
    return value;
}

template <Scalar T>
TransitionMatrix<T> build_insertion_matrix(std::size_t k, const ProcessParams& params, std::size_t cap)
{
    if (k + 1 > cap) {
        throw resource_error("build_insertion_matrix: stratum " + std::to_string(k + 1) + " exceeds the cap of "
                             + std::to_string(cap));
    }
    const std::size_t rows = factorial(k);
    const std::size_t fanout = k + 1;
    T weight = params.template insertion<T>();
    weight /= T(static_cast<unsigned long>(fanout));

    TransitionMatrix<T> m{rows, rows * fanout, {}};
    m.entries.resize(rows);
    // Appending parent a to the vector of tree i yields the tree of rank i*(k+1) + (a-1):
    // the new node is the least significant mixed-radix digit.
    for (std::size_t i = 0; i < rows; ++i) {
        auto& row = m.entries[i];
        row.reserve(fanout);
        for (std::size_t a = 0; a < fanout; ++a) {
            row.emplace_back(i * fanout + a, weight);
        }
    }
    return m;
}

template <Scalar T>
TransitionMatrix<T> build_deletion_matrix(std::size_t upper, const DeletionRule& rule, const ProcessParams& params,
                                          std::size_t cap)
{
    if (upper < 1) {
        throw std::domain_error("build_deletion_matrix: deletion starts from stratum 1 or higher");
    }
    const std::vector<RecursiveTree> trees = enumerate_stratum(upper, cap);
    const T q = params.template deletion<T>();
    TransitionMatrix<T> m{trees.size(), factorial(upper - 1), {}};
    m.entries.resize(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const auto dist = rule.row_distribution(trees[i]);
        if (!dist) {
            throw unsupported_operation("deletion rule '" + rule.name() + "' does not provide its row distribution");
        }
        for (const auto& [idx, prob] : *dist) {
            if (idx < 1 || idx > m.cols) {
                throw std::logic_error("deletion rule '" + rule.name() + "' produced an index outside the lower stratum");
            }
            m.entries[i].emplace_back(static_cast<std::size_t>(idx - 1), q * from_rational<T>(prob));
        }
    }
    return m;
}

template <Scalar T>
ColumnSumReport<T> check_column_sum_condition(const TransitionMatrix<T>& q, double tol)
{
    ColumnSumReport<T> report;
    report.sums = q.column_sums();
    if (report.sums.empty()) {
        return report;
    }
    const T& first = report.sums.front();
    for (const T& s : report.sums) {
        if constexpr (std::is_same_v<T, double>) {
            if (std::fabs(s - first) > tol * std::max(1.0, std::fabs(first))) {
                report.equal = false;
            }
        } else {
            if (s != first) {
                report.equal = false;
            }
        }
    }
    return report;
}

template <Scalar T>
T TreeLevelDistribution<T>::total_mass() const
{
    Accumulator<T> acc;
    for (const auto& stratum : strata) {
        for (const T& v : stratum) {
            acc.add(v);
        }
    }
    return acc.value();
}

template <Scalar T>
std::vector<TreeLevelDistribution<T>> evolve_exact(std::size_t n_max, std::size_t K, const ProcessParams& params,
                                                   const DeletionRule& rule, std::size_t cap)
{
    if (n_max > K) {
        throw std::domain_error("evolve_exact: n_max = " + std::to_string(n_max) + " exceeds the stratum truncation K = "
                                + std::to_string(K));
    }
    if (K > cap) {
        throw resource_error("evolve_exact: K = " + std::to_string(K) + " exceeds the cap of " + std::to_string(cap));
    }
    // Only strata reachable by time n_max are needed.
    const std::size_t top = std::min(K, n_max);
    std::vector<TransitionMatrix<T>> insert, remove;
    for (std::size_t k = 0; k < top; ++k) {
        insert.push_back(build_insertion_matrix<T>(k, params, cap));
        remove.push_back(build_deletion_matrix<T>(k + 1, rule, params, cap));
    }
    const T q = params.template deletion<T>();

    std::vector<TreeLevelDistribution<T>> out;
    out.reserve(n_max + 1);
    out.push_back({0, {{T{1}}}});
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto& prev = out.back().strata;
        const std::size_t reach = std::min(n, top);
        std::vector<std::vector<T>> next(reach + 1);
        for (std::size_t k = 0; k <= reach; ++k) {
            next[k].assign(factorial(k), T{0});
        }
        for (std::size_t k = 0; k < prev.size(); ++k) {
            const auto& from = prev[k];
            if (k + 1 <= reach) {
                const auto& m = insert[k];
                for (std::size_t i = 0; i < from.size(); ++i) {
                    if (from[i] == 0) {
                        continue;
                    }
                    for (const auto& [j, v] : m.entries[i]) {
                        next[k + 1][j] += from[i] * v;
                    }
                }
            }
            if (k == 0) {
                next[0][0] += q * from[0];
            } else {
                const auto& m = remove[k - 1];
                for (std::size_t i = 0; i < from.size(); ++i) {
                    if (from[i] == 0) {
                        continue;
                    }
                    for (const auto& [j, v] : m.entries[i]) {
                        next[k - 1][j] += from[i] * v;
                    }
                }
            }
        }
        out.push_back({n, std::move(next)});
    }
    return out;
}

template <Scalar T>
std::vector<UniformityEntry<T>> check_conditional_uniformity(const std::vector<TreeLevelDistribution<T>>& dists,
                                                             double tol)
{
    std::vector<UniformityEntry<T>> report;
    for (const auto& d : dists) {
        for (std::size_t k = 0; k < d.strata.size(); ++k) {
            const auto& pi = d.strata[k];
            UniformityEntry<T> e;
            e.n = d.n;
            e.k = k;
            Accumulator<T> mass;
            for (const T& v : pi) {
                mass.add(v);
            }
            e.mass = mass.value();
            if (e.mass > 0) {
                T target{1};
                target /= T(static_cast<unsigned long>(pi.size()));
                for (const T& v : pi) {
                    T dev = v / e.mass - target;
                    dev = abs_value(dev);
                    if (dev > e.max_deviation) {
                        e.max_deviation = dev;
                    }
                }
            }
            if constexpr (std::is_same_v<T, double>) {
                e.uniform = e.max_deviation <= tol;
            } else {
                e.uniform = e.max_deviation <= exact_rational(tol);
            }
            report.push_back(std::move(e));
        }
    }
    return report;
}

template <Scalar T>
VerificationReport<T> verify_rule(const DeletionRule& rule, const ProcessParams& params, std::size_t K,
                                  std::size_t n_max, double tol, std::size_t cap)
{
    VerificationReport<T> report;
    for (std::size_t upper = 1; upper <= K; ++upper) {
        auto cs = check_column_sum_condition(build_deletion_matrix<T>(upper, rule, params, cap), tol);
        report.column_sum_condition = report.column_sum_condition && cs.equal;
        report.column_sums.push_back(std::move(cs));
    }
    const std::size_t truncation = std::max(K, n_max);
    report.uniformity = check_conditional_uniformity(evolve_exact<T>(n_max, truncation, params, rule, cap), tol);
    for (const auto& e : report.uniformity) {
        report.uniform = report.uniform && e.uniform;
    }
    return report;
}

#define RECDEL_INSTANTIATE(T)                                                                                          \
    template struct TransitionMatrix<T>;                                                                               \
    template struct TreeLevelDistribution<T>;                                                                          \
    template TransitionMatrix<T> build_insertion_matrix<T>(std::size_t, const ProcessParams&, std::size_t);            \
    template TransitionMatrix<T> build_deletion_matrix<T>(std::size_t, const DeletionRule&, const ProcessParams&,      \
                                                          std::size_t);                                                \
    template ColumnSumReport<T> check_column_sum_condition<T>(const TransitionMatrix<T>&, double);                     \
    template std::vector<TreeLevelDistribution<T>> evolve_exact<T>(std::size_t, std::size_t, const ProcessParams&,     \
                                                                   const DeletionRule&, std::size_t);                  \
    template std::vector<UniformityEntry<T>> check_conditional_uniformity<T>(                                          \
        const std::vector<TreeLevelDistribution<T>>&, double);                                                         \
    template VerificationReport<T> verify_rule<T>(const DeletionRule&, const ProcessParams&, std::size_t, std::size_t, \
                                                  double, std::size_t);

RECDEL_INSTANTIATE(double)
RECDEL_INSTANTIATE(Rational)

#undef RECDEL_INSTANTIATE

} // namespace recdel
