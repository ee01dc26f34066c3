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
#include <stdexcept>
#include <vector>

#include "recdel/numeric.hpp"
#include "recdel/process.hpp"

namespace recdel {

/// Law of the stratum number S_n: probs[k] = P(S_n = k), k = 0..n.
template <Scalar T>
struct StratumDistribution {
    std::size_t n = 0;
    std::vector<T> probs{T{1}};
};

/// Steps the birth-death chain of the stratum number one time unit at a time.
///
/// Interior states move up with probability p and down with probability q;
/// state 0 keeps its mass under deletion.
template <Scalar T>
class StratumChain {
public:
    explicit StratumChain(const ProcessParams& params)
        : p_(params.template insertion<T>()), q_(params.template deletion<T>())
    {
    }

    const StratumDistribution<T>& current() const noexcept { return dist_; }

    void advance()
    {
        const std::vector<T>& old = dist_.probs;
        std::vector<T> next(old.size() + 1, T{0});
        for (std::size_t k = 0; k < old.size(); ++k) {
            if (old[k] == 0) {
                continue;
            }
            next[k + 1] += p_ * old[k];
            next[k == 0 ? 0 : k - 1] += q_ * old[k];
        }
        dist_.probs = std::move(next);
        ++dist_.n;
    }

private:
    T p_;
    T q_;
    StratumDistribution<T> dist_;
};

template <Scalar T>
StratumDistribution<T> stratum_recurrence(std::size_t n, const ProcessParams& params)
{
    StratumChain<T> chain(params);
    for (std::size_t i = 0; i < n; ++i) {
        chain.advance();
    }
    return chain.current();
}

/// Expectations of the stratum number and the tree functionals at time n.
///
/// Root degree: the exhaustive average over stratum k is H_k, so the expected
/// root degree is E[H_{S_n}]. The harmonic number of the size, E[H_{Z_n}], is
/// reported separately as harmonic_size and exceeds it by E[1/Z_n].
template <Scalar T>
struct MomentTable {
    std::size_t n = 0;
    T mean_stratum{0};
    T second_factorial{0};
    T variance{0};
    T harmonic{0};
    T reciprocal_size{0};
    T harmonic_size{0};
    T leaf_mean{0};
    T root_degree_mean{0};
    T root_prob{0};
};

template <Scalar T>
MomentTable<T> moments(const StratumDistribution<T>& dist)
{
    const std::vector<T> h = harmonic_numbers<T>(dist.probs.size());
    Accumulator<T> mean, fact2, harm, recip;
    for (std::size_t k = 0; k < dist.probs.size(); ++k) {
        const T& pk = dist.probs[k];
        if (pk == 0) {
            continue;
        }
        const T kk(static_cast<unsigned long>(k));
        mean.add(kk * pk);
        if (k >= 2) {
            fact2.add(kk * T(static_cast<unsigned long>(k - 1)) * pk);
        }
        if (k >= 1) {
            harm.add(h[k] * pk);
        }
        recip.add(pk / T(static_cast<unsigned long>(k + 1)));
    }
    MomentTable<T> m;
    m.n = dist.n;
    m.mean_stratum = mean.value();
    m.second_factorial = fact2.value();
    m.variance = m.second_factorial + m.mean_stratum - m.mean_stratum * m.mean_stratum;
    m.harmonic = harm.value();
    m.reciprocal_size = recip.value();
    m.harmonic_size = m.harmonic + m.reciprocal_size;
    m.root_prob = dist.probs[0];
    m.leaf_mean = (T{1} + m.mean_stratum + m.root_prob) / T{2};
    m.root_degree_mean = m.harmonic;
    return m;
}

/// (1 + E[S_n] + P(S_n = 0)) / 2.
template <Scalar T>
T expected_leaf_count(const StratumDistribution<T>& dist)
{
    return moments(dist).leaf_mean;
}

/// E[H_{S_n}]; see MomentTable for why the index is the stratum rather than the size.
template <Scalar T>
T expected_root_degree(const StratumDistribution<T>& dist)
{
    return moments(dist).root_degree_mean;
}

/// E[H_{Z_n}], the harmonic number of the tree size.
template <Scalar T>
T expected_harmonic_size(const StratumDistribution<T>& dist)
{
    return moments(dist).harmonic_size;
}

/// MomentTable rows for every n in 0..n_max, computed in one pass of the chain.
template <Scalar T>
std::vector<MomentTable<T>> moment_history(std::size_t n_max, const ProcessParams& params)
{
    std::vector<MomentTable<T>> rows;
    rows.reserve(n_max + 1);
    StratumChain<T> chain(params);
    rows.push_back(moments(chain.current()));
    for (std::size_t i = 0; i < n_max; ++i) {
        chain.advance();
        rows.push_back(moments(chain.current()));
    }
    return rows;
}

} // namespace recdel
