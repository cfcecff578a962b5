#pragma once

#include <cstdint>

namespace mimoid {

// Counter-based random stream: every draw is a pure function of
// (seed, counter, stream, draw index), so results do not depend on which
// thread produced them or in what order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream);

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1).
    double uniform();
    double uniform(double lo, double hi);
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t index_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Well-known stream identifiers. Distinct ids keep e.g. process noise and
// measurement noise statistically independent under the same seed.
namespace streams {
inline constexpr std::uint64_t kProcessNoise = 0x70726f63;
inline constexpr std::uint64_t kMeasurementNoise = 0x6d656173;
inline constexpr std::uint64_t kInputs = 0x696e7075;
inline constexpr std::uint64_t kSystem = 0x73797374;
inline constexpr std::uint64_t kSeedDerivation = 0x73656564;
} // namespace streams

std::uint64_t splitmix64(std::uint64_t x);

// Deterministically derive a child seed, e.g. per trajectory or per trial.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0);

} // namespace mimoid
