#include "mimoid/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimoid {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(parent ^ streams::kSeedDerivation);
    h = splitmix64(h ^ a);
    return splitmix64(h ^ (b * 0xd1b54a32d192ed03ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ counter);
    key_ = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
}

std::uint64_t CounterRng::next_u64() {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++index_);
}

double CounterRng::uniform() {
    // 53 random bits, shifted by half an ulp so 0 is excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

} // namespace mimoid
