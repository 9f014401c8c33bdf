#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asqkd/protocol.hpp"

namespace asqkd {

/// Nonnegative fraction kept in lowest terms.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// n / ((2n + 2m) + (n + m)): key bits over every qubit generated by either party.
Rational qubit_efficiency(std::size_t n, std::size_t m);

enum class KeyPolicy { FreshPerTrial, Fixed };

struct BatchOptions {
    KeyPolicy key_policy = KeyPolicy::FreshPerTrial;
    /// Used by KeyPolicy::Fixed; drawn from the batch seed when absent.
    std::optional<PreSharedKeys> fixed_keys;
};

struct TrialRecord {
    std::size_t trial_index;
    bool alice_pass;
    bool bob_pass;
    bool key_match;
    bool recycled;
};

struct BatchStats {
    std::size_t trials = 0;
    double detection_rate = 0.0;      // sessions whose keys were not recycled
    double bob_hash_fail_rate = 0.0;
    double key_agreement_rate = 0.0;  // sk_prime == sk
    double recycled_rate = 0.0;
    double wilson_halfwidth = 0.0;    // 95% interval on detection_rate
    std::size_t decoy_checks = 0;
    std::size_t decoy_failures = 0;
    double per_decoy_detection_rate = 0.0;
};

double wilson_halfwidth(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Runs `trials` independent sessions; trial t uses Rng(seed).split(t) for its keys, SK
/// and every measurement, so results do not depend on scheduling. Appends one record per
/// trial to `records` when given.
BatchStats run_batch(const SessionConfig& config, const BatchOptions& options,
                     const AttackModel& attack, std::size_t trials,
                     std::vector<TrialRecord>* records = nullptr);

/// a*n + b*m.
struct AffineBits {
    std::uint64_t n_coeff;
    std::uint64_t m_coeff;

    std::uint64_t evaluate(std::size_t n, std::size_t m) const noexcept {
        return n_coeff * n + m_coeff * m;
    }
    std::string to_string() const;

    friend bool operator==(const AffineBits&, const AffineBits&) = default;
};

struct ComparisonRow {
    std::string protocol_name;
    std::string classical_capabilities;
    std::string quantum_resource;
    Rational qubit_efficiency;
    AffineBits pre_shared_bits_formula;
    std::uint64_t pre_shared_bits;  // formula evaluated at (n, m)
    std::string classical_channel;
    std::string hash_function;
};

/// The two earlier measure-resend schemes (stored constants) and this protocol.
std::vector<ComparisonRow> comparison_table(std::size_t n, std::size_t m);

}  // namespace asqkd
