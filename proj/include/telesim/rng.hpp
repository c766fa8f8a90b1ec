#pragma once

#include <cstdint>

namespace telesim {

// SplitMix64: 64-bit state, full-period, passes BigCrush. Worker substreams
// are derived by hashing (seed, worker) so that any stream is reproducible
// from those two values alone.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t worker) {
    SplitMix64 h(seed);
    std::uint64_t a = h.next();
    SplitMix64 g(a ^ (worker * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    return g.next();
}

inline SplitMix64 worker_stream(std::uint64_t seed, std::uint64_t worker) {
    return SplitMix64(mix_seed(seed, worker));
}

}  // namespace telesim
