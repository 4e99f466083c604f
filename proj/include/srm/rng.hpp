#pragma once

#include <cstdint>
#include <random>

namespace srm {

// Seed derivation. Every random quantity in the library is drawn from a
// stream whose seed is child_seed(parent, index) applied along a path from
// one 64-bit base seed, e.g. child_seed(child_seed(base, row), replication).
// The mix is the SplitMix64 finalizer, so nearby (parent, index) pairs give
// unrelated seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) noexcept;

// A deterministic stream of uniforms on the open interval (0,1).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // ((x >> 11) + 0.5) * 2^-53: never 0, never 1.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Rejection sampling, bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

}  // namespace srm
