#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace delib {

// Counter-based PRNG (SplitMix64). The state advances by a fixed increment
// per draw and the output is a bijective mix of the state, so streams with
// distinct seeds never correlate and results are identical on every platform.
// All randomness in the simulator flows through this engine; std::random
// distributions are avoided because their sequences are implementation-defined.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
    // exactly unbiased. bound must be positive.
    uint64_t below(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    // Box-Muller. Consumes two uniforms per call.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t state_;
};

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}
}  // namespace detail

// Derives an independent stream for (master seed, replication, phase tag).
// Adding phases or replications never perturbs the draws of existing ones.
inline uint64_t stream_key(uint64_t master_seed, uint64_t replication, std::string_view phase) {
    uint64_t k = detail::mix64(master_seed ^ 0x8c98dc8fbe17e213ULL);
    k = detail::mix64(k ^ (replication * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    k = detail::mix64(k ^ detail::fnv1a(phase));
    return k;
}

inline Rng make_stream(uint64_t master_seed, uint64_t replication, std::string_view phase) {
    return Rng(stream_key(master_seed, replication, phase));
}

}  // namespace delib
