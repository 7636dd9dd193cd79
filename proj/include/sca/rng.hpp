// Deterministic, seedable random generator for all sampling experiments.
//
// The generator is SplitMix64 run in counter mode: the i-th output is
// mix64(seed + i * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
// finalizer (Steele, Lea, Flood 2014). Identical seeds produce identical
// streams on every platform, outputs are independent of call batching,
// and per-replica streams are derived by remixing (seed, stream index),
// so replicas can run in any order (or in parallel) and still reproduce.

#pragma once

#include <cstdint>

namespace sca {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

class counter_rng {
public:
    explicit counter_rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

    // Independent stream for replica / worker `stream` of a master seed.
    static counter_rng derived(std::uint64_t seed, std::uint64_t stream)
    {
        return counter_rng(detail::mix64(seed + 0x9E3779B97F4A7C15ull) ^
                           detail::mix64(stream + 0xD1B54A32D192ED03ull));
    }

    std::uint64_t next_u64()
    {
        ++counter_;
        return detail::mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p)
    {
        return next_double() < p;
    }

    // Uniform integer in [0, n), n >= 1. Modulo bias is < n / 2^64,
    // far below anything our statistical tests can see.
    std::uint64_t next_below(std::uint64_t n)
    {
        return next_u64() % n;
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

} // namespace sca
