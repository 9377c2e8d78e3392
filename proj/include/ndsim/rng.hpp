#pragma once

#include <cstdint>

namespace ndsim {

// splitmix64: counter-based generator with a fixed additive stride.  Output
// depends only on (seed, call index), which keeps every trial stream
// reproducible and independent of thread scheduling.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform01() {  // [0, 1) with 53 random bits
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // unbiased integer in [0, n) via rejection on the top bits
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t v = (*this)();
            if (v >= threshold) return v % n;
        }
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    bool bernoulli(double p) { return uniform01() < p; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

// stateless mix used to derive independent substream seeds from (base, salt...)
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

}  // namespace ndsim
