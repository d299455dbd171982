#ifndef UBAD_RNG_HPP
#define UBAD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ubad {

/// splitmix64 step; used to derive well-mixed child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for one trial as a pure function of its coordinates. Adding trials,
/// policies or sweep points never changes the seeds of existing trials.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t policy_id,
                                 std::uint64_t sweep_index, std::uint64_t trial_index) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (policy_id + 1));
    h = splitmix64(h ^ (sweep_index + 1));
    h = splitmix64(h ^ (trial_index + 1));
    return h;
}

/// Seeded random stream owned by exactly one trial (or one analysis check)
/// at a time. Distributions are implemented here rather than taken from
/// <random> so that draw sequences do not depend on the standard library
/// vendor.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double unit_real() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, k); k must be >= 1.
    std::uint64_t uniform_below(std::uint64_t k) {
        const std::uint64_t threshold = (0ULL - k) % k;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % k;
        }
    }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        const double u1 = 1.0 - unit_real(); // (0, 1]
        const double u2 = unit_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

} // namespace ubad

#endif // UBAD_RNG_HPP
