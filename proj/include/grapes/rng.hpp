#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace grapes {

// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Folds a path of tags into a base seed so that every (cell, trial,
// engine) combination gets its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// mt19937_64 with portable sampling on top. The raw engine sequence is
// mandated by the standard, and the samplers below avoid the
// implementation-defined std::uniform_*_distribution, so identical seeds
// give identical draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // unbiased draw in [0, bound), bound > 0
    std::uint64_t below(std::uint64_t bound);

    // inclusive range
    int uniform_int(int lo, int hi);

    // [0, 1)
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values from [0, n), in random order
    std::vector<int> sample_distinct(int n, int k);

private:
    std::mt19937_64 eng_;
};

}  // namespace grapes
