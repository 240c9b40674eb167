#pragma once

#include <cstdint>

namespace telecom {

// Deterministic random stream: xoshiro256++ seeded through splitmix64 from a
// (seed, stream) pair. Replicate i of a run uses stream i (or a hash of the
// branch and replicate), which makes every estimate reproducible and
// independent of the thread layout.
class RandomStream {
public:
    RandomStream() : RandomStream(0, 0) {}
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();

    // Uniform on the open interval (0, 1); safe for inverse power transforms.
    double uniform_open();

    // Poisson variate: exponential-product inversion for small means,
    // Hormann's PTRD transformed-rejection for mean >= 10.
    long long poisson(double mean);

private:
    std::uint64_t state_[4];
};

// 64-bit mix used for seeding and for hashing stream indices.
std::uint64_t splitmix64(std::uint64_t& state);

// Collapse (seed, a, b) into a single sub-stream id.
std::uint64_t substream_id(std::uint64_t a, std::uint64_t b);

}  // namespace telecom
