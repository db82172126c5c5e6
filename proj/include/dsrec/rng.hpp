#pragma once

#include <cstdint>

namespace dsrec {

/// Deterministic 64-bit generator (splitmix64). All randomness in the project
/// goes through this class so that runs are reproducible bit for bit across
/// platforms; the standard <random> distributions are implementation-defined
/// and therefore avoided.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool() { return (next_u64() & 1ULL) != 0; }

    /// Uniform in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Independent child stream. Simulating sessions with one child stream per
    /// session index makes parallel and sequential execution agree exactly.
    static Rng child(std::uint64_t seed, std::uint64_t stream) {
        Rng mixer(seed ^ (0xa0761d6478bd642fULL * (stream + 1)));
        return Rng(mixer.next_u64());
    }

  private:
    std::uint64_t state_;
};

}  // namespace dsrec
