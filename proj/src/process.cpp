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

#include "recdel/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace recdel {

ProcessParams::ProcessParams(Rational p, bool exact) : p_(std::move(p)), exact_(exact)
{
    if (p_ < 0 || p_ > 1) {
        throw std::domain_error("ProcessParams: p = " + to_string(p_) + " is outside [0, 1]");
    }
    p_double_ = p_.get_d();
}

ProcessParams ProcessParams::exact(const Rational& p) { return ProcessParams(p, true); }

ProcessParams ProcessParams::floating(double p)
{
    if (!std::isfinite(p)) {
        throw std::domain_error("ProcessParams: p is not finite");
    }
    return ProcessParams(exact_rational(p), false);
}

ProcessParams ProcessParams::floating(const Rational& p) { return ProcessParams(p, false); }

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: empty range");
    }
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL));
}

void LifoRule::apply(RecursiveTree& t, Rng&) const { t.remove_last(); }

std::optional<RowDistribution> LifoRule::row_distribution(const RecursiveTree& t) const
{
    RecursiveTree lower = lifo_delete(t);
    return RowDistribution{{canonical_index(lower).idx, Rational(1)}};
}

void CollapseRule::apply(RecursiveTree& t, Rng&) const
{
    if (t.size() < 2) {
        throw std::invalid_argument("CollapseRule: the single-node tree cannot shrink");
    }
    t = RecursiveTree(std::vector<Label>(t.stratum() - 1, 1));
}

std::optional<RowDistribution> CollapseRule::row_distribution(const RecursiveTree& t) const
{
    if (t.size() < 2) {
        throw std::invalid_argument("CollapseRule: the single-node tree cannot shrink");
    }
    return RowDistribution{{1, Rational(1)}};
}

std::shared_ptr<const DeletionRule> make_rule(std::string_view name)
{
    if (name == "lifo") {
        return std::make_shared<LifoRule>();
    }
    if (name == "collapse") {
        return std::make_shared<CollapseRule>();
    }
    throw std::invalid_argument("unknown deletion rule '" + std::string(name) + "' (expected lifo or collapse)");
}

RecursiveTree lifo_delete(const RecursiveTree& t)
{
    RecursiveTree copy = t;
    copy.remove_last();
    return copy;
}

std::string_view to_string(Action a) noexcept
{
    switch (a) {
    case Action::insert:
        return "insert";
    case Action::remove:
        return "delete";
    case Action::hold:
        return "hold";
    }
    return "?";
}

Action advance(RecursiveTree& t, const ProcessParams& params, const DeletionRule& rule, Rng& rng)
{
    if (rng.uniform01() < params.p()) {
        t.attach(static_cast<Label>(rng.below(t.size()) + 1));
        return Action::insert;
    }
    if (t.size() == 1) {
        return Action::hold;
    }
    const std::size_t before = t.stratum();
    rule.apply(t, rng);
    if (t.stratum() + 1 != before) {
        throw std::logic_error("deletion rule '" + rule.name() + "' did not lower the stratum by one");
    }
    return Action::remove;
}

RecursiveTree step(const RecursiveTree& t, const ProcessParams& params, const DeletionRule& rule, Rng& rng)
{
    RecursiveTree next = t;
    advance(next, params, rule, rng);
    return next;
}

Trajectory run(std::size_t n, const ProcessParams& params, const DeletionRule& rule, std::uint64_t seed,
               bool keep_snapshots)
{
    Trajectory traj;
    traj.steps.reserve(n);
    if (keep_snapshots) {
        traj.snapshots.reserve(n);
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const Action a = advance(traj.final_tree, params, rule, rng);
        traj.steps.push_back({a, traj.final_tree.stratum()});
        if (keep_snapshots) {
            traj.snapshots.push_back(traj.final_tree);
        }
    }
    return traj;
}

std::string_view to_string(Functional f) noexcept
{
    switch (f) {
    case Functional::stratum:
        return "stratum";
    case Functional::size:
        return "size";
    case Functional::leaf_count:
        return "leaf_count";
    case Functional::root_degree:
        return "root_degree";
    case Functional::harmonic_of_size:
        return "harmonic_of_size";
    case Functional::reciprocal_size:
        return "reciprocal_size";
    }
    return "?";
}

Functional parse_functional(std::string_view name)
{
    for (Functional f : kAllFunctionals) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown functional '" + std::string(name) + "'");
}

unsigned default_thread_count()
{
    if (const char* env = std::getenv("RECDEL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double evaluate(Functional f, const RecursiveTree& t, const std::vector<double>& harmonic)
{
    switch (f) {
    case Functional::stratum:
        return static_cast<double>(t.stratum());
    case Functional::size:
        return static_cast<double>(t.size());
    case Functional::leaf_count:
        return static_cast<double>(leaf_count(t));
    case Functional::root_degree:
        return static_cast<double>(root_degree(t));
    case Functional::harmonic_of_size:
        return harmonic[t.size()];
    case Functional::reciprocal_size:
        return 1.0 / static_cast<double>(t.size());
    }
    return 0.0;
}

} // namespace

std::vector<FunctionalSummary> monte_carlo(const MonteCarloConfig& config, const ProcessParams& params,
                                           const DeletionRule& rule)
{
    if (config.reps == 0) {
        throw std::domain_error("monte_carlo: reps must be at least 1");
    }
    if (config.functionals.empty()) {
        throw std::domain_error("monte_carlo: no functional requested");
    }
    const std::size_t width = config.functionals.size();
    const std::vector<double> harmonic = harmonic_numbers<double>(config.n + 1);

    // One row per replication; reduced in index order so the result does not
    // depend on how replications were spread over threads.
    std::vector<double> values(config.reps * width);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            Rng rng(Rng::derive_seed(config.master_seed, r));
            RecursiveTree t;
            for (std::size_t i = 0; i < config.n; ++i) {
                advance(t, params, rule, rng);
            }
            for (std::size_t j = 0; j < width; ++j) {
                values[r * width + j] = evaluate(config.functionals[j], t, harmonic);
            }
        }
    };

    const unsigned threads = static_cast<unsigned>(
        std::min<std::size_t>(config.threads ? config.threads : default_thread_count(), config.reps));
    if (threads <= 1) {
        work(0, config.reps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (config.reps + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(config.reps, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<FunctionalSummary> out;
    out.reserve(width);
    const auto reps = static_cast<double>(config.reps);
    for (std::size_t j = 0; j < width; ++j) {
        Accumulator<double> sum;
        for (std::size_t r = 0; r < config.reps; ++r) {
            sum.add(values[r * width + j]);
        }
        FunctionalSummary s{config.functionals[j], sum.value() / reps, std::nullopt, std::nullopt, config.reps};
        if (config.reps > 1) {
            Accumulator<double> sq;
            for (std::size_t r = 0; r < config.reps; ++r) {
                const double d = values[r * width + j] - s.mean;
                sq.add(d * d);
            }
            s.variance = sq.value() / (reps - 1.0);
            s.std_error = std::sqrt(*s.variance / reps);
        }
        out.push_back(s);
    }
    return out;
}

} // namespace recdel
