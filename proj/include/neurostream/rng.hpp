#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace neurostream {

// Deterministic seed derivation (splitmix64). Used to give every consumer of
// randomness (init, shuffle, dropout, synthesis) its own independent stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Seeded generator. All randomness in the library flows through this class so
// that identical seeds give bit-identical results. The uniform and normal
// transforms are implemented here rather than via std::*_distribution, whose
// output is not pinned down by the standard.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller. Two uniforms per draw, no caching.
    double normal();

    // Unbiased index in [0, n) by rejection.
    std::size_t index(std::size_t n);

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace neurostream
