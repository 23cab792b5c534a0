#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace citree {

// Sub-seed derivation via SplitMix64. Every randomized procedure derives an
// independent stream per (seed, label...) so results do not depend on the
// order in which streams are consumed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(splitmix64(seed) ^ a);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(derive_seed(seed, a) ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// Portable generator: mt19937_64 has a standard-specified sequence, and the
// bounded draw below avoids std::uniform_int_distribution (whose output is
// implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased draw in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    double unit() {
        // 53 random bits in [0, 1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates partial shuffle: after the call, items[0..k) is a uniform
// simple random sample without replacement from items, in draw order.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(items[i], items[j]);
    }
}

template <typename T>
void full_shuffle(std::vector<T>& items, Rng& rng) {
    if (!items.empty()) partial_shuffle(items, items.size() - 1, rng);
}

} // namespace citree
