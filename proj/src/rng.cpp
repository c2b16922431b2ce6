#include "grapes/rng.hpp"

#include <stdexcept>

namespace grapes {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(base);
    for (std::uint64_t tag : path) s = mix64(s ^ mix64(tag));
    return s;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    // rejection keeps the draw exact for any bound
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = eng_();
        if (r >= threshold) return r % bound;
    }
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

std::vector<int> Rng::sample_distinct(int n, int k) {
    if (k > n) throw std::invalid_argument("Rng::sample_distinct: k > n");
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    // partial Fisher-Yates: first k entries are the sample
    for (int i = 0; i < k; ++i) {
        std::size_t j = static_cast<std::size_t>(i) +
                        static_cast<std::size_t>(below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

}  // namespace grapes
