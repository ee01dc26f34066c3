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
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recdel/numeric.hpp"
#include "recdel/tree.hpp"

namespace recdel {

/// Insertion probability p and deletion probability q = 1 - p.
///
/// The exact value of p is always kept. `is_exact()` records the numeric mode
/// the caller asked for: rational computations use p exactly, float
/// computations use the nearest double.
class ProcessParams {
public:
    /// Throws std::domain_error unless 0 <= p <= 1.
    static ProcessParams exact(const Rational& p);
    static ProcessParams floating(double p);
    /// Float-mode parameters that remember the exact decimal the user wrote (e.g. 3/10 for "0.3").
    static ProcessParams floating(const Rational& p);

    const Rational& p_exact() const noexcept { return p_; }
    Rational q_exact() const { return Rational(1) - p_; }
    double p() const noexcept { return p_double_; }
    double q() const noexcept { return 1.0 - p_double_; }
    bool is_exact() const noexcept { return exact_; }

    template <Scalar T>
    T insertion() const
    {
        if constexpr (std::is_same_v<T, double>) {
            return p();
        } else {
            return p_;
        }
    }

    template <Scalar T>
    T deletion() const
    {
        if constexpr (std::is_same_v<T, double>) {
            return q();
        } else {
            return q_exact();
        }
    }

private:
    ProcessParams(Rational p, bool exact);

    Rational p_;
    double p_double_ = 0.0;
    bool exact_ = true;
};

/// Seeded generator with a fixed, implementation-independent draw protocol.
///
/// std::mt19937_64 is fully specified by the standard; the distributions below
/// are written out by hand because the standard library ones are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., bound-1}; unbiased by rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Seed of replication `index` under `master` (splitmix64 mixing of both).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

private:
    std::mt19937_64 engine_;
};

/// Exact deletion distribution of one tree: (1-based canonical index in the lower stratum, probability).
using RowDistribution = std::vector<std::pair<std::uint64_t, Rational>>;

/// A deletion rule maps a stratum-(k+1) tree to a stratum-k tree.
///
/// Implementations must be safe to call concurrently through a const reference.
class DeletionRule {
public:
    virtual ~DeletionRule() = default;

    virtual std::string name() const = 0;

    /// Replaces `t` (size >= 2) with its image; draws from `rng` only if the rule is randomized.
    virtual void apply(RecursiveTree& t, Rng& rng) const = 0;

    /// Law of apply() on `t`, or nullopt when the rule cannot state it.
    virtual std::optional<RowDistribution> row_distribution(const RecursiveTree& t) const = 0;

    RecursiveTree image(const RecursiveTree& t, Rng& rng) const
    {
        RecursiveTree copy = t;
        apply(copy, rng);
        return copy;
    }
};

/// Last in, first out: removes the highest label.
class LifoRule final : public DeletionRule {
public:
    std::string name() const override { return "lifo"; }
    void apply(RecursiveTree& t, Rng& rng) const override;
    std::optional<RowDistribution> row_distribution(const RecursiveTree& t) const override;
};

/// Test fixture outside the equiprobable class: every stratum-(k+1) tree becomes
/// the stratum-k star (canonical tree 1).
class CollapseRule final : public DeletionRule {
public:
    std::string name() const override { return "collapse"; }
    void apply(RecursiveTree& t, Rng& rng) const override;
    std::optional<RowDistribution> row_distribution(const RecursiveTree& t) const override;
};

/// "lifo" or "collapse"; throws std::invalid_argument for anything else.
std::shared_ptr<const DeletionRule> make_rule(std::string_view name);

/// Removes the highest-labelled node; throws std::invalid_argument on the single-node tree.
RecursiveTree lifo_delete(const RecursiveTree& t);

enum class Action { insert, remove, hold };

std::string_view to_string(Action a) noexcept;

/// Advances `t` by one step in place.
///
/// Draw order: one uniform01() for the insert/delete coin; on insertion one
/// below(m) for the parent; on deletion whatever the rule draws. Deleting
/// from the single-node tree is a no-op (`Action::hold`).
Action advance(RecursiveTree& t, const ProcessParams& params, const DeletionRule& rule, Rng& rng);

RecursiveTree step(const RecursiveTree& t, const ProcessParams& params, const DeletionRule& rule, Rng& rng);

struct TrajectoryStep {
    Action action;
    std::size_t stratum;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    RecursiveTree final_tree;
    /// Tree after each step, when requested.
    std::vector<RecursiveTree> snapshots;
};

/// n steps from the single-node tree, driven by Rng(seed).
Trajectory run(std::size_t n, const ProcessParams& params, const DeletionRule& rule, std::uint64_t seed,
               bool keep_snapshots = false);

enum class Functional { stratum, size, leaf_count, root_degree, harmonic_of_size, reciprocal_size };

std::string_view to_string(Functional f) noexcept;

/// Throws std::invalid_argument for an unknown name.
Functional parse_functional(std::string_view name);

inline constexpr Functional kAllFunctionals[] = {Functional::stratum,     Functional::size,
                                                 Functional::leaf_count,  Functional::root_degree,
                                                 Functional::harmonic_of_size, Functional::reciprocal_size};

struct FunctionalSummary {
    Functional functional;
    double mean = 0.0;
    /// Sample variance and standard error of the mean; absent when reps == 1.
    std::optional<double> variance;
    std::optional<double> std_error;
    std::size_t reps = 0;
};

struct MonteCarloConfig {
    std::size_t n = 0;
    std::size_t reps = 1;
    std::uint64_t master_seed = 0;
    std::vector<Functional> functionals{std::begin(kAllFunctionals), std::end(kAllFunctionals)};
    /// 0 means: RECDEL_THREADS if set, otherwise the hardware concurrency.
    unsigned threads = 0;
};

/// Independent replications of run(); replication r is seeded with Rng::derive_seed(master_seed, r).
/// Output is bit-identical for any thread count. Throws std::domain_error when reps == 0 or
/// no functional is requested.
std::vector<FunctionalSummary> monte_carlo(const MonteCarloConfig& config, const ProcessParams& params,
                                           const DeletionRule& rule);

/// Thread count honoring RECDEL_THREADS.
unsigned default_thread_count();

} // namespace recdel
