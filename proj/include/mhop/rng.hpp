#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mhop {

// splitmix64 finalizer; used to derive independent engine seeds from
// (base seed, stream index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    return mix64(mix64(seed + golden) + golden * (stream + 1));
}

// Deterministic per-trial random stream.  A stream is fully determined by
// (seed, stream index), never by scheduling order, so trial results are
// reproducible for any worker count.  All variate mappings are implemented
// here on top of the (fully specified) mt19937_64 sequence, keeping draws
// bit-identical across platforms.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream)
        : eng_(stream_seed(seed, stream)) {}

    // uniform on [0, 1)
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1]; safe as a logarithm argument
    double uniform_pos() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // circularly symmetric complex Gaussian, zero mean, E|z|^2 = 1
    std::complex<double> complex_normal() {
        const double radius = std::sqrt(-std::log(uniform_pos()));
        const double angle = 2.0 * std::numbers::pi * uniform01();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace mhop
