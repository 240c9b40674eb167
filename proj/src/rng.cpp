#include "telecom/rng.hpp"

#include <cmath>

#include "telecom/errors.hpp"

namespace telecom {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t substream_id(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a * 0x9E3779B97F4A7C15ULL + b;
    return splitmix64(s);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    s ^= stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    state_[0] = splitmix64(s);
    state_[1] = splitmix64(s);
    state_[2] = splitmix64(s);
    state_[3] = splitmix64(s);
    // A zero state would be a fixed point of xoshiro; splitmix output makes
    // that practically impossible, but guard anyway.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

long long RandomStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson mean must be nonnegative");
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        // Multiplicative inversion (Knuth).
        const double threshold = std::exp(-mean);
        long long k = 0;
        double prod = uniform();
        while (prod > threshold) {
            prod *= uniform();
            ++k;
        }
        return k;
    }

    // PTRD, W. Hormann (1993), valid for mean >= 10.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mean);

    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::abs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = k * log_mu - mean - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<long long>(kf);
    }
}

}  // namespace telecom
