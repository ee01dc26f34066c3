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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any selected criterion fails.
//
//   acceptance [--only ID ...] [--skip ID ...]

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "recdel/asymptotics.hpp"
#include "recdel/equiprob.hpp"
#include "recdel/exact.hpp"
#include "recdel/process.hpp"
#include "recdel/series.hpp"
#include "recdel/tree.hpp"

using namespace recdel;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    double budget_seconds;
    std::function<Outcome()> body;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const Rational kThreeTenths(3, 10);
const Rational kHalf(1, 2);
const Rational kSevenTenths(7, 10);

Outcome gf_equivalence()
{
    const std::size_t N = 200;
    std::size_t mismatches = 0;
    for (const Rational& p : {kThreeTenths, kHalf, kSevenTenths}) {
        const auto params = ProcessParams::exact(p);
        const auto rows = moment_history<Rational>(N, params);
        std::vector<Rational> p0, p1;
        StratumChain<Rational> chain(params);
        for (std::size_t n = 0; n <= N; ++n) {
            p0.push_back(chain.current().probs[0]);
            p1.push_back(n >= 1 ? chain.current().probs[1] : Rational(0));
            chain.advance();
        }
        for (GfName g : {GfName::P0, GfName::P1, GfName::mu, GfName::mu2, GfName::H, GfName::h}) {
            const auto s = series_gf<Rational>(g, params, N);
            for (std::size_t n = 0; n <= N; ++n) {
                Rational want;
                switch (g) {
                case GfName::P0:
                    want = p0[n];
                    break;
                case GfName::P1:
                    want = p1[n];
                    break;
                case GfName::mu:
                    want = rows[n].mean_stratum;
                    break;
                case GfName::mu2:
                    want = rows[n].second_factorial;
                    break;
                case GfName::H:
                    want = rows[n].harmonic;
                    break;
                case GfName::h:
                    want = rows[n].reciprocal_size;
                    break;
                }
                mismatches += s[n] != want;
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatching coefficients of 3x6x201"};
}

Outcome central_binomial()
{
    StratumChain<Rational> chain(ProcessParams::exact(kHalf));
    std::size_t bad = 0;
    for (unsigned n = 0; n <= 60; ++n) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), n, n / 2);
        Rational want(c);
        want /= Rational(mpz_class(1) << n);
        bad += chain.current().probs[0] != want;
        chain.advance();
    }
    return {bad == 0, std::to_string(bad) + " mismatches for n <= 60"};
}

Outcome subcritical_limits()
{
    const double p = 0.3, q = 0.7;
    const auto m = moment_history<double>(200, ProcessParams::floating(kThreeTenths)).back();
    const double L = std::log(q / (q - p));
    const double diffs[] = {
        std::fabs(m.root_prob - 4.0 / 7.0),
        std::fabs(m.mean_stratum - 0.75),
        std::fabs(m.variance - 1.3125),
        std::fabs(m.harmonic - L),
        std::fabs(m.reciprocal_size - (q - p) / p * L),
        std::fabs(m.harmonic_size - q / p * L),
    };
    const double worst = *std::max_element(std::begin(diffs), std::end(diffs));
    return {worst <= 1e-6, "max |exact - limit| = " + fmt(worst)};
}

Outcome supercritical_growth()
{
    const double p = 0.7, q = 0.3, n = 500.0;
    const auto m = moment_history<double>(500, ProcessParams::floating(kSevenTenths)).back();
    const double mean_diff = std::fabs(m.mean_stratum - (0.4 * n + 0.75));
    const double var_form = p * q * (4.0 * (1.0 - 4.0 * p * q) * n - 3.0) / ((p - q) * (p - q));
    const double var_diff = std::fabs(m.variance - var_form) / n;
    return {mean_diff <= 1e-6 && var_diff <= 1e-6,
            "mean diff " + fmt(mean_diff) + ", variance diff / n " + fmt(var_diff)};
}

MomentTable<double> critical_row()
{
    return moment_history<double>(10000, ProcessParams::floating(0.5)).back();
}

Outcome critical_mean()
{
    const double n = 1e4;
    const auto m = critical_row();
    const double diff = std::fabs(m.mean_stratum - (std::sqrt(2.0 * n / std::numbers::pi) - 0.5));
    return {diff <= 0.01, "|E[S_n] - (sqrt(2n/pi) - 1/2)| = " + fmt(diff)};
}

Outcome critical_variance()
{
    using std::numbers::pi;
    const double n = 1e4;
    const auto m = critical_row();
    const double form = (1.0 - 2.0 / pi) * n - 0.5 * std::sqrt(2.0 * n / pi) + (3.0 - 1.0 / pi) / 4.0;
    const double diff = std::fabs(m.variance - form);
    return {diff <= 0.5, "|Var - display| = " + fmt(diff) + " (tolerance 0.5)"};
}

Outcome lifo_equiprobable()
{
    std::ostringstream why;
    bool pass = true;
    const auto params = ProcessParams::exact(kHalf);
    LifoRule lifo;
    CollapseRule collapse;

    for (std::size_t upper = 1; upper <= 5; ++upper) {
        const auto report = check_column_sum_condition(build_deletion_matrix<Rational>(upper, lifo, params));
        const Rational want = params.q_exact() * static_cast<unsigned long>(upper);
        const bool ok = report.equal && std::all_of(report.sums.begin(), report.sums.end(),
                                                    [&](const Rational& s) { return s == want; });
        if (!ok) {
            pass = false;
            why << "lifo column sums wrong at k+1=" << upper << "; ";
        }
    }
    for (const auto& e : check_conditional_uniformity(evolve_exact<Rational>(8, 8, params, lifo))) {
        if (e.max_deviation != 0) {
            pass = false;
            why << "lifo deviation at (n,k)=(" << e.n << "," << e.k << "); ";
        }
    }

    bool collapse_columns_fail = false;
    for (std::size_t upper = 1; upper <= 5; ++upper) {
        collapse_columns_fail |= !check_column_sum_condition(build_deletion_matrix<Rational>(upper, collapse, params)).equal;
    }
    std::size_t first = 0;
    bool collapse_nonuniform = false;
    for (const auto& e : check_conditional_uniformity(evolve_exact<Rational>(8, 8, params, collapse))) {
        if (!e.uniform && !collapse_nonuniform) {
            collapse_nonuniform = true;
            first = e.n;
        }
    }
    if (!collapse_columns_fail || !collapse_nonuniform || first < 4) {
        pass = false;
        why << "fixture rule not rejected as expected; ";
    }
    why << "lifo uniform with zero deviation for n <= 8; fixture first non-uniform at n = " << first;
    return {pass, why.str()};
}

Outcome marginal_consistency()
{
    std::size_t bad = 0;
    const std::vector<std::shared_ptr<const DeletionRule>> rules{make_rule("lifo"), make_rule("collapse")};
    for (const Rational& p : {kThreeTenths, kHalf, kSevenTenths}) {
        const auto params = ProcessParams::exact(p);
        for (const auto& rule : rules) {
            const auto dists = evolve_exact<Rational>(8, 8, params, *rule);
            for (const auto& level : dists) {
                const auto want = stratum_recurrence<Rational>(level.n, params);
                for (std::size_t k = 0; k < level.strata.size(); ++k) {
                    Rational mass = 0;
                    for (const auto& v : level.strata[k]) {
                        mass += v;
                    }
                    bad += mass != (k < want.probs.size() ? want.probs[k] : Rational(0));
                }
            }
        }
    }
    return {bad == 0, std::to_string(bad) + " mismatching (n,k) masses"};
}

Outcome monte_carlo_consistency()
{
    const auto params = ProcessParams::floating(kSevenTenths);
    LifoRule lifo;
    MonteCarloConfig config;
    config.n = 1000;
    config.reps = 100000;
    config.master_seed = 42;
    config.functionals = {Functional::stratum, Functional::leaf_count, Functional::root_degree};
    const auto summary = monte_carlo(config, params, lifo);
    const auto exact = moment_history<double>(1000, params).back();
    const double want[] = {exact.mean_stratum, exact.leaf_mean, exact.root_degree_mean};

    bool pass = true;
    std::ostringstream why;
    for (std::size_t j = 0; j < summary.size(); ++j) {
        const double z = std::fabs(summary[j].mean - want[j]) / *summary[j].std_error;
        pass = pass && z <= 4.0;
        why << to_string(summary[j].functional) << " z=" << fmt(z) << " ";
    }

    // Determinism: the same seed gives bit-identical means under different thread counts.
    MonteCarloConfig small = config;
    small.reps = 2000;
    small.threads = 1;
    const auto a = monte_carlo(small, params, lifo);
    small.threads = 4;
    const auto b = monte_carlo(small, params, lifo);
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].mean != b[j].mean) {
            pass = false;
            why << "non-deterministic " << to_string(a[j].functional) << " ";
        }
    }
    return {pass, why.str()};
}

Outcome bivariate()
{
    double worst = 0.0;
    const std::pair<double, double> points[] = {{0.3, 0.5}, {0.5, 0.0}, {0.25, 1.0}};
    for (double p : {0.3, 0.5, 0.7}) {
        for (const auto& [z, u] : points) {
            worst = std::max(worst, bivariate_check(ProcessParams::floating(p), z, u, 400));
        }
    }
    return {worst < 1e-10, "max residual " + fmt(worst)};
}

Outcome functional_transfer()
{
    const auto harmonic = harmonic_numbers<Rational>(8);
    std::vector<Rational> degree_avg{Rational(0)};
    bool leaves_ok = true, degree_hk = true;
    for (std::size_t k = 1; k <= 7; ++k) {
        Rational leaves = 0, degree = 0;
        const auto trees = enumerate_stratum(k);
        for (const auto& t : trees) {
            leaves += static_cast<unsigned long>(leaf_count(t));
            degree += static_cast<unsigned long>(root_degree(t));
        }
        leaves /= static_cast<unsigned long>(trees.size());
        degree /= static_cast<unsigned long>(trees.size());
        Rational half_k1(static_cast<unsigned long>(k + 1));
        half_k1 /= 2;
        leaves_ok = leaves_ok && leaves == half_k1;
        degree_hk = degree_hk && degree == harmonic[k] && degree != harmonic[k + 1];
        degree_avg.push_back(degree);
    }

    // The exact engine's root-degree mean must be the mixture of the stratum averages.
    bool wired = true;
    for (const Rational& p : {kThreeTenths, kHalf, kSevenTenths}) {
        const auto params = ProcessParams::exact(p);
        for (std::size_t n = 0; n <= 7; ++n) {
            const auto d = stratum_recurrence<Rational>(n, params);
            Rational mix = 0;
            for (std::size_t k = 0; k <= n; ++k) {
                mix += d.probs[k] * degree_avg[k];
            }
            wired = wired && expected_root_degree(d) == mix && moments(d).root_degree_mean == mix;
        }
    }
    std::string detail = std::string("leaf mean (k+1)/2: ") + (leaves_ok ? "yes" : "no") +
                         "; root-degree mean over stratum k is H_k: " + (degree_hk ? "yes" : "no") +
                         "; exact engine consistent: " + (wired ? "yes" : "no");
    return {leaves_ok && degree_hk && wired, detail};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"recdel acceptance suite"};
    std::vector<std::string> only, skip;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--skip", skip, "Skip these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {"1", "series coefficients equal the exact engine (rational, n <= 200)", 30, gf_equivalence},
        {"2", "critical root probability is C(n, n/2)/2^n (n <= 60)", 1, central_binomial},
        {"3", "subcritical limits at p = 0.3, n = 200", 5, subcritical_limits},
        {"4", "supercritical linear growth at p = 0.7, n = 500", 10, supercritical_growth},
        {"5a", "critical mean at p = 1/2, n = 10^4", 30, critical_mean},
        {"5b", "critical variance display at p = 1/2, n = 10^4", 30, critical_variance},
        {"6", "LIFO equiprobable, fixture rule rejected (n <= 8, K = 8)", 60, lifo_equiprobable},
        {"7", "tree-level marginals equal the stratum recurrence (n <= 8)", 10, marginal_consistency},
        {"8", "Monte Carlo within 4 SE at p = 0.7, n = 1000, 10^5 reps", 120, monte_carlo_consistency},
        {"9", "bivariate closed form residual < 1e-10 (N = 400)", 10, bivariate},
        {"10", "leaf and root-degree averages over enumerated strata", 30, functional_transfer},
    };

    auto listed = [](const std::vector<std::string>& ids, const std::string& id) {
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if ((!only.empty() && !listed(only, c.id)) || listed(skip, c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        }
        std::printf("%s criterion %s: %s [%s] (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
