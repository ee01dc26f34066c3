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

#include <doctest.h>

#include <memory>
#include <stdexcept>
#include <vector>

#include "recdel/equiprob.hpp"
#include "recdel/exact.hpp"

using namespace recdel;

namespace {

const Rational kHalf(1, 2);
const Rational kP(2, 7);
const Rational kQ(5, 7);

class SilentRule final : public DeletionRule {
public:
    std::string name() const override { return "silent"; }
    void apply(RecursiveTree& t, Rng&) const override { t.remove_last(); }
    std::optional<RowDistribution> row_distribution(const RecursiveTree&) const override { return std::nullopt; }
};

// Deletes the highest label or, with probability 1/2, collapses to the star.
class MixedRule final : public DeletionRule {
public:
    std::string name() const override { return "mixed"; }
    void apply(RecursiveTree& t, Rng& rng) const override
    {
        if (rng.uniform01() < 0.5) {
            t.remove_last();
        } else {
            t = RecursiveTree(std::vector<Label>(t.stratum() - 1, 1));
        }
    }
    std::optional<RowDistribution> row_distribution(const RecursiveTree& t) const override
    {
        const auto lifo = canonical_index(lifo_delete(t)).idx;
        if (lifo == 1) {
            return RowDistribution{{1, Rational(1)}};
        }
        return RowDistribution{{lifo, kHalf}, {1, kHalf}};
    }
};

} // namespace

TEST_CASE("insertion matrix examples")
{
    const auto params = ProcessParams::exact(kP);
    const auto m0 = build_insertion_matrix<Rational>(0, params);
    CHECK(m0.rows == 1);
    CHECK(m0.cols == 1);
    CHECK(m0.at(0, 0) == kP);

    const auto m1 = build_insertion_matrix<Rational>(1, params);
    CHECK(m1.cols == 2);
    CHECK(m1.at(0, 0) == kP / 2);
    CHECK(m1.at(0, 1) == kP / 2);

    const auto m2 = build_insertion_matrix<Rational>(2, params);
    CHECK(m2.rows == 2);
    CHECK(m2.cols == 6);
    for (const auto& row : m2.entries) {
        CHECK(row.size() == 3);
    }
    for (const auto& s : m2.column_sums()) {
        CHECK(s == kP / 3);
    }
}

TEST_CASE("insertion matrix structure")
{
    const auto params = ProcessParams::exact(kP);
    for (std::size_t k = 0; k <= 6; ++k) {
        const auto m = build_insertion_matrix<Rational>(k, params);
        CHECK(m.rows == factorial(k));
        CHECK(m.cols == factorial(k + 1));
        for (const auto& s : m.row_sums()) {
            CHECK(s == kP);
        }
        for (const auto& s : m.column_sums()) {
            CHECK(s * static_cast<unsigned long>(k + 1) == kP);
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            CHECK(m.entries[i].size() == k + 1);
            const auto parent = tree_from_index({k, i + 1});
            for (const auto& [col, v] : m.entries[i]) {
                const auto child = tree_from_index({k + 1, col + 1});
                CHECK(lifo_delete(child) == parent);
            }
        }
    }
    CHECK_THROWS_AS(build_insertion_matrix<Rational>(8, params), resource_error);
    CHECK_NOTHROW(build_insertion_matrix<double>(3, ProcessParams::floating(0.3), 4));
}

TEST_CASE("lifo deletion matrices")
{
    const auto params = ProcessParams::exact(kP);
    LifoRule lifo;
    const auto q1 = build_deletion_matrix<Rational>(1, lifo, params);
    CHECK(q1.rows == 1);
    CHECK(q1.cols == 1);
    CHECK(q1.at(0, 0) == kQ);

    const auto q2 = build_deletion_matrix<Rational>(2, lifo, params);
    CHECK(q2.rows == 2);
    CHECK(q2.at(0, 0) == kQ);
    CHECK(q2.at(1, 0) == kQ);
    CHECK(q2.column_sums() == std::vector<Rational>{2 * kQ});

    const auto q3 = build_deletion_matrix<Rational>(3, lifo, params);
    CHECK(q3.rows == 6);
    CHECK(q3.cols == 2);
    for (const auto& row : q3.entries) {
        CHECK(row.size() == 1);
    }
    for (const auto& s : q3.column_sums()) {
        CHECK(s == 3 * kQ);
    }
    for (std::size_t upper = 1; upper <= 5; ++upper) {
        const auto q = build_deletion_matrix<Rational>(upper, lifo, params);
        for (const auto& s : q.row_sums()) {
            CHECK(s == kQ);
        }
        const auto report = check_column_sum_condition(q);
        CHECK(report.equal);
        for (const auto& s : report.sums) {
            CHECK(s == static_cast<unsigned long>(upper) * kQ);
        }
    }
    CHECK_THROWS_AS(build_deletion_matrix<Rational>(0, lifo, params), std::domain_error);
}

TEST_CASE("column-sum condition")
{
    const auto params = ProcessParams::exact(kP);
    CollapseRule collapse;
    CHECK(check_column_sum_condition(build_deletion_matrix<Rational>(2, collapse, params)).equal);
    for (std::size_t upper = 3; upper <= 5; ++upper) {
        const auto report = check_column_sum_condition(build_deletion_matrix<Rational>(upper, collapse, params));
        CHECK_FALSE(report.equal);
        CHECK(report.sums.front() == static_cast<unsigned long>(factorial(upper)) * kQ);
        CHECK(report.sums.back() == 0);
    }
    CHECK_FALSE(check_column_sum_condition(build_deletion_matrix<Rational>(3, MixedRule{}, params)).equal);

    const auto f = build_deletion_matrix<double>(4, LifoRule{}, ProcessParams::floating(0.3));
    CHECK(check_column_sum_condition(f).equal);

    CHECK_THROWS_AS(build_deletion_matrix<Rational>(2, SilentRule{}, params), unsupported_operation);
}

TEST_CASE("evolution examples")
{
    LifoRule lifo;
    const auto params = ProcessParams::exact(kP);
    const auto d = evolve_exact<Rational>(1, 1, params, lifo);
    REQUIRE(d.size() == 2);
    CHECK(d[0].strata[0] == std::vector<Rational>{1});
    CHECK(d[1].strata[0] == std::vector<Rational>{kQ});
    CHECK(d[1].strata[1] == std::vector<Rational>{kP});

    const auto h = evolve_exact<Rational>(2, 2, ProcessParams::exact(kHalf), lifo);
    CHECK(h[2].strata[2] == std::vector<Rational>{Rational(1, 8), Rational(1, 8)});

    for (const auto& level : evolve_exact<Rational>(6, 6, params, CollapseRule{})) {
        CHECK(level.total_mass() == 1);
        for (const auto& s : level.strata) {
            for (const auto& v : s) {
                CHECK(v >= 0);
            }
        }
    }
    CHECK_THROWS_AS(evolve_exact<Rational>(5, 4, params, lifo), std::domain_error);
    CHECK_THROWS_AS(evolve_exact<Rational>(9, 9, params, lifo), resource_error);
}

TEST_CASE("lifo keeps every stratum uniform")
{
    for (const Rational p : {kHalf, kP}) {
        const auto dists = evolve_exact<Rational>(7, 7, ProcessParams::exact(p), LifoRule{});
        for (const auto& e : check_conditional_uniformity(dists)) {
            CHECK(e.uniform);
            CHECK(e.max_deviation == 0);
        }
    }
}

TEST_CASE("pure insertion is uniform")
{
    const auto dists = evolve_exact<Rational>(7, 7, ProcessParams::exact(Rational(1)), CollapseRule{});
    for (const auto& e : check_conditional_uniformity(dists)) {
        CHECK(e.uniform);
        if (e.k == e.n) {
            CHECK(e.mass == 1);
        }
    }
}

TEST_CASE("collapse breaks uniformity")
{
    const auto dists = evolve_exact<Rational>(7, 7, ProcessParams::exact(kHalf), CollapseRule{});
    std::size_t first = 100;
    bool at_two = false;
    for (const auto& e : check_conditional_uniformity(dists)) {
        if (!e.uniform) {
            first = std::min(first, e.n);
            at_two = at_two || e.k == 2;
        }
    }
    CHECK(first == 4);
    CHECK(at_two);
}

TEST_CASE("tree-level marginals equal the stratum recurrence")
{
    for (const Rational p : {Rational(3, 10), kHalf, Rational(7, 10)}) {
        const auto params = ProcessParams::exact(p);
        const auto dists = evolve_exact<Rational>(7, 7, params, MixedRule{});
        StratumChain<Rational> chain(params);
        for (const auto& level : dists) {
            for (std::size_t k = 0; k < level.strata.size(); ++k) {
                Rational mass = 0;
                for (const auto& v : level.strata[k]) {
                    mass += v;
                }
                CHECK(mass == (k < chain.current().probs.size() ? chain.current().probs[k] : Rational(0)));
            }
            chain.advance();
        }
    }
}

TEST_CASE("equal column sums and uniformity agree")
{
    const auto params = ProcessParams::exact(Rational(2, 5));
    const std::vector<std::shared_ptr<const DeletionRule>> rules{make_rule("lifo"), make_rule("collapse"),
                                                                  std::make_shared<MixedRule>()};
    for (const auto& rule : rules) {
        const auto report = verify_rule<Rational>(*rule, params, 5, 6);
        CHECK(report.column_sum_condition == report.uniform);
    }
}

TEST_CASE("float verification")
{
    const auto report = verify_rule<double>(LifoRule{}, ProcessParams::floating(0.3), 5, 5, 1e-12);
    CHECK(report.column_sum_condition);
    CHECK(report.uniform);
    CHECK(report.column_sums.size() == 5);
}
