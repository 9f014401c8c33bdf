#pragma once

#include <cstdint>
#include <random>

namespace asqkd {

/// Source of binary outcomes for every stochastic step (Born-rule measurement, attack coins).
///
/// `choose(p_one)` returns 1 with probability `p_one`. Sampling uses `Rng`; exact
/// branch enumeration substitutes a scripted source that walks every outcome.
class ChoiceSource {
public:
    virtual ~ChoiceSource() = default;
    virtual int choose(double p_one) = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seedable, splittable generator. Children depend only on (seed, stream), never on
/// how much of the parent has been consumed, so trial i is reproducible in isolation.
class Rng final : public ChoiceSource {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    Rng split(std::uint64_t stream) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits; platform independent.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bit() { return (engine_() >> 63) != 0; }
    double normal();

    // Always consumes exactly one draw so sibling streams stay aligned.
    int choose(double p_one) override { return uniform() < p_one ? 1 : 0; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace asqkd
