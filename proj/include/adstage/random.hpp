#pragma once

// Deterministic seeding and sampling helpers. Every stochastic component
// (fold shuffles, bootstraps, undersampling, synthesis) derives its generator
// from a user seed plus a stream tag, so runs with equal seeds are
// reproducible regardless of evaluation order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace adstage {

// splitmix64 finalizer; decorrelates nearby seed/stream pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

namespace detail {

// n uniform draws in [0, n) with replacement.
inline std::vector<std::size_t> bootstrap_indices(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

// Weighted sampling without replacement (Efraimidis-Spirakis keys).
// Returns m indices into `weights`, selection probability proportional to weight.
inline std::vector<std::size_t> weighted_sample_without_replacement(
    const std::vector<double>& weights, std::size_t m, std::mt19937_64& rng) {
    if (m > weights.size())
        throw std::invalid_argument("weighted sample larger than population");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0)
            throw std::invalid_argument("negative sampling weight");
        double u = unit(rng);
        // key = u^(1/w); w == 0 never wins against positive weights
        double key = weights[i] > 0.0 ? std::pow(u, 1.0 / weights[i]) : -1.0;
        keyed.emplace_back(key, i);
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(m), keyed.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
    std::vector<std::size_t> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = keyed[i].second;
    return out;
}

}  // namespace detail

}  // namespace adstage
