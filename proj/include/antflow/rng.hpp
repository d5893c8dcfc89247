#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace antflow {

// SplitMix64 finalizer. Used only to turn (master seed, indices) into
// well-separated seeds for independent replica streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) noexcept {
    return splitmix64(master ^ splitmix64(a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(master, a), b);
}

// Thin wrapper over mt19937_64. The engine output sequence is fixed by the
// standard; the conversions below are written out so that draws are
// identical across standard library implementations.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0 (multiply-shift reduction).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    bool coin() { return (engine_() >> 63) != 0; }

    bool bernoulli(double p) { return uniform() < p; }

    // Continuous lifetime T with P(T > t) = (1 - f)^t for every real t >= 0.
    // f = 0 gives +inf, f = 1 gives 0.
    double survival_lifetime(double f) {
        if (f <= 0.0) return std::numeric_limits<double>::infinity();
        if (f >= 1.0) return 0.0;
        const double u = 1.0 - uniform(); // (0, 1]
        return std::log(u) / std::log1p(-f);
    }

    engine_type& engine() { return engine_; }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    engine_type engine_;
};

} // namespace antflow
