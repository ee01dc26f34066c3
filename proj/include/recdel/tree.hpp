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
#include <span>
#include <vector>

namespace recdel {

using Label = std::uint32_t;

/// Largest stratum whose k! trees can be ranked with 64-bit indices.
inline constexpr std::size_t kMaxIndexableStratum = 20;

/// Default cap on enumerate_stratum and the brute-force matrices (8! = 40320 trees).
inline constexpr std::size_t kDefaultEnumerationCap = 8;

/// A recursive tree on labels 1..m stored as its parent sequence.
///
/// parents()[i - 2] is the parent of node i, and it always lies in 1..i-1, so
/// labels increase along every root-to-leaf path and node 1 is the root. The
/// highest label is therefore always a leaf.
class RecursiveTree {
public:
    /// The single-node tree.
    RecursiveTree() = default;

    /// Validates the parent sequence; throws std::invalid_argument on a bad entry.
    explicit RecursiveTree(std::vector<Label> parents);

    std::size_t size() const noexcept { return parents_.size() + 1; }
    std::size_t stratum() const noexcept { return parents_.size(); }

    /// Parent of node `node`, for 2 <= node <= size().
    Label parent(Label node) const;

    std::span<const Label> parents() const noexcept { return parents_; }

    /// Adds node size()+1 as a child of `parent`.
    void attach(Label parent);

    /// Removes the highest-labelled node. Throws std::invalid_argument on the single-node tree.
    void remove_last();

    /// Number of children of every node; index 0 is node 1.
    std::vector<std::size_t> child_counts() const;

    bool operator==(const RecursiveTree&) const = default;

private:
    std::vector<Label> parents_;
};

struct TreeIndex {
    std::size_t k = 0;
    std::uint64_t idx = 1;

    bool operator==(const TreeIndex&) const = default;
};

std::size_t stratum_number(const RecursiveTree& t) noexcept;

/// Childless nodes. The single-node tree has one leaf.
std::size_t leaf_count(const RecursiveTree& t);

std::size_t root_degree(const RecursiveTree& t) noexcept;

/// k! as a 64-bit integer; throws std::overflow_error for k > 20.
std::uint64_t factorial(std::size_t k);

/// 1-based lexicographic rank of the parent vector (p_2, ..., p_{k+1}) among the k! valid vectors.
/// Throws std::overflow_error when the stratum exceeds kMaxIndexableStratum.
TreeIndex canonical_index(const RecursiveTree& t);

/// Inverse of canonical_index. Throws std::domain_error when idx is outside [1, k!].
RecursiveTree tree_from_index(TreeIndex ix);

/// All k! stratum-k trees in canonical order. Throws resource_error when k > cap.
std::vector<RecursiveTree> enumerate_stratum(std::size_t k, std::size_t cap = kDefaultEnumerationCap);

} // namespace recdel
