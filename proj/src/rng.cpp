#include "fairfs/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fairfs {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

Rng::Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

uint64_t Rng::uniform_index(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const uint64_t bound = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= bound);
    return x % n;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 1 - uniform() is in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

uint64_t derive_seed(uint64_t base, std::string_view tag, uint64_t index) {
    // FNV-1a over the tag, then two splitmix rounds to decorrelate streams.
    uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : tag) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    uint64_t sm = base ^ h;
    uint64_t s = splitmix64(sm);
    sm ^= index * 0x9e3779b97f4a7c15ull;
    s ^= splitmix64(sm);
    return s;
}

} // namespace fairfs
