#pragma once

#include <cstdint>

namespace magbill {

// Counter-based 64-bit generator (SplitMix64).  Identical seeds reproduce
// identical streams bit-for-bit on one platform; no libstdc++ distribution
// objects are involved anywhere, so outputs are stable across toolchains
// that agree on IEEE doubles.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

private:
    std::uint64_t state_;
};

}  // namespace magbill
