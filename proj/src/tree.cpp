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

#include "recdel/tree.hpp"

#include <stdexcept>
#include <string>

#include "recdel/numeric.hpp"

namespace recdel {

RecursiveTree::RecursiveTree(std::vector<Label> parents) : parents_(std::move(parents))
{
    for (std::size_t i = 0; i < parents_.size(); ++i) {
        const auto node = static_cast<Label>(i + 2);
        if (parents_[i] < 1 || parents_[i] >= node) {
            throw std::invalid_argument("RecursiveTree: parent of node " + std::to_string(node) + " is "
                                        + std::to_string(parents_[i]) + ", expected 1.."
                                        + std::to_string(node - 1));
        }
    }
}

Label RecursiveTree::parent(Label node) const
{
    if (node < 2 || node > size()) {
        throw std::out_of_range("RecursiveTree::parent: node " + std::to_string(node) + " has no parent");
    }
    return parents_[node - 2];
}

void RecursiveTree::attach(Label parent)
{
    if (parent < 1 || parent > size()) {
        throw std::invalid_argument("RecursiveTree::attach: no node " + std::to_string(parent));
    }
    parents_.push_back(parent);
}

void RecursiveTree::remove_last()
{
    if (parents_.empty()) {
        throw std::invalid_argument("RecursiveTree::remove_last: the single-node tree cannot shrink");
    }
    parents_.pop_back();
}

std::vector<std::size_t> RecursiveTree::child_counts() const
{
    std::vector<std::size_t> counts(size(), 0);
    for (Label p : parents_) {
        ++counts[p - 1];
    }
    return counts;
}

std::size_t stratum_number(const RecursiveTree& t) noexcept { return t.stratum(); }

std::size_t leaf_count(const RecursiveTree& t)
{
    std::size_t leaves = 0;
    for (std::size_t c : t.child_counts()) {
        leaves += c == 0 ? 1 : 0;
    }
    return leaves;
}

std::size_t root_degree(const RecursiveTree& t) noexcept
{
    std::size_t degree = 0;
    for (Label p : t.parents()) {
        degree += p == 1 ? 1 : 0;
    }
    return degree;
}

std::uint64_t factorial(std::size_t k)
{
    if (k > kMaxIndexableStratum) {
        throw std::overflow_error("factorial: " + std::to_string(k) + "! does not fit in 64 bits");
    }
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

// Mixed radix: p_i takes i-1 values, and p_2 is the most significant digit.
TreeIndex canonical_index(const RecursiveTree& t)
{
    const std::size_t k = t.stratum();
    if (k > kMaxIndexableStratum) {
        throw std::overflow_error("canonical_index: stratum " + std::to_string(k) + " exceeds "
                                  + std::to_string(kMaxIndexableStratum));
    }
    std::uint64_t rank = 0;
    const auto parents = t.parents();
    for (std::size_t j = 0; j < parents.size(); ++j) {
        const std::uint64_t radix = j + 1; // node j+2 has j+1 candidate parents
        rank = rank * radix + (parents[j] - 1);
    }
    return {k, rank + 1};
}

RecursiveTree tree_from_index(TreeIndex ix)
{
    const std::uint64_t count = factorial(ix.k);
    if (ix.idx < 1 || ix.idx > count) {
        throw std::domain_error("tree_from_index: index " + std::to_string(ix.idx) + " outside [1, "
                                + std::to_string(count) + "] for stratum " + std::to_string(ix.k));
    }
    std::vector<Label> parents(ix.k);
    std::uint64_t rank = ix.idx - 1;
    for (std::size_t j = ix.k; j-- > 0;) {
        const std::uint64_t radix = j + 1;
        parents[j] = static_cast<Label>(rank % radix + 1);
        rank /= radix;
    }
    return RecursiveTree(std::move(parents));
}

std::vector<RecursiveTree> enumerate_stratum(std::size_t k, std::size_t cap)
{
    if (k > cap) {
        throw resource_error("enumerate_stratum: stratum " + std::to_string(k) + " exceeds the cap of "
                             + std::to_string(cap));
    }
    const std::uint64_t count = factorial(k);
    std::vector<RecursiveTree> trees;
    trees.reserve(count);

    // Odometer over parent vectors in lexicographic order.
    std::vector<Label> digits(k, 1);
    for (std::uint64_t n = 0; n < count; ++n) {
        trees.emplace_back(digits);
        for (std::size_t j = k; j-- > 0;) {
            if (digits[j] < j + 1) {
                ++digits[j];
                break;
            }
            digits[j] = 1;
        }
    }
    return trees;
}

} // namespace recdel
