#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace polydither {

// splitmix64; used to derive independent sub-seeds from the one user seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d6a6ca9fde38d3ull;
    return x ^ (x >> 31);
}

inline std::uint64_t subSeed(std::uint64_t seed, const std::string& stream) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return splitmix64(seed ^ h);
}

// mt19937_64 raw draws with our own bounded mappings. The std distribution
// objects are implementation-defined; these are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform in [0, n) by rejection; exact and deterministic.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    int intBelow(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {  // Fisher-Yates with our bounded draw
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace polydither
