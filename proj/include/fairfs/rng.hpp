#pragma once

#include <cstdint>
#include <cstddef>
#include <string_view>
#include <vector>

namespace fairfs {

// Deterministic pseudo-random generator (xoshiro256++) with hand-rolled
// distributions. std::* distributions are implementation-defined, which
// would break byte-identical reproducibility of seeded runs.
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double uniform();

    double uniform(double lo, double hi);

    // Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n);

    // Standard normal via Box-Muller; the spare value is cached.
    double normal();

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stateless seed derivation for independent deterministic streams.
uint64_t derive_seed(uint64_t base, std::string_view tag, uint64_t index = 0);

} // namespace fairfs
