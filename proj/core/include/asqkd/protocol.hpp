#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "asqkd/adversary.hpp"
#include "asqkd/bits.hpp"
#include "asqkd/quantum.hpp"

namespace asqkd {

struct SessionConfig {
    std::size_t n = 8;  // key bits
    std::size_t m = 8;  // hash bits
    std::uint64_t seed = 42;

    std::size_t payload_length() const noexcept { return n + m; }
    std::size_t photon_count() const noexcept { return 2 * (n + m); }
};

void validate_config(const SessionConfig& config);

struct PreSharedKeys {
    BitString k1;  // n+m bits: decoy position per logical index
    BitString k2;  // m bits: hash selection

    static PreSharedKeys random(const SessionConfig& config, Rng& rng);
};

void validate_keys(const SessionConfig& config, const PreSharedKeys& keys);

enum class PhotonRole { Payload, Decoy };

struct SlotAssignment {
    PhotonRole role;
    std::size_t logical_index;

    friend bool operator==(const SlotAssignment&, const SlotAssignment&) = default;
};

struct PhotonRecord {
    std::size_t slot;
    std::size_t logical_index;
    PhotonRole role;
    PureState sent_state;
    std::optional<int> returned_outcome;  // Alice's recheck result
};

struct Transcript {
    std::vector<PhotonRecord> photons;
    BitString bob_measured_bits;   // S_A positions, in logical order
    BitString alice_recheck_bits;  // Alice's outcomes in slot order
    std::optional<bool> alice_auth_bit;
    std::optional<bool> bob_auth_bit;
};

struct RunOutcome {
    bool alice_check_pass = false;
    bool bob_check_pass = false;
    BitString sk;
    BitString sk_prime;
    bool keys_recycled = false;
    std::size_t decoy_checks = 0;
    std::size_t decoy_failures = 0;
};

/// S_A = sk || hash_{k2}(sk).
BitString make_payload(const BitString& sk, const BitString& k2);

/// Slot order for S_A interleaved with S_D: k1[i] = 0 puts the decoy in front of
/// payload i, k1[i] = 1 behind it. Throws std::invalid_argument on a length mismatch.
std::vector<SlotAssignment> interleave(const BitString& s_a, const BitString& k1);

/// Inverse of the interleaving applied to a 2(n+m)-bit string: returns (S_A, S_D).
std::pair<BitString, BitString> deinterleave(const BitString& slots, const BitString& k1);

/// Role Bob assigns to global slot `slot`, from K1 alone.
PhotonRole slot_role(std::size_t slot, const BitString& k1);

std::vector<PhotonRecord> alice_prepare(const BitString& sk, const SessionConfig& config,
                                        const PreSharedKeys& keys);

struct BobAction {
    PureState state;
    std::optional<int> recorded_bit;
};

/// Classical Bob on `qubit` of `incoming`: Z-measure and resend the result for a
/// payload, reflect untouched for a decoy.
BobAction bob_process(const PureState& incoming, std::size_t qubit, PhotonRole role,
                      ChoiceSource& source);

/// One logical index as it comes back to Alice: qubits 0 and 1 are the photons in slot
/// order (any further qubits belong to the channel).
struct ReturnedPair {
    std::size_t logical_index;
    PureState state;
};

struct AliceCheck {
    bool pass = false;
    BitString outcomes;  // slot order
    std::size_t decoy_checks = 0;
    std::size_t decoy_failures = 0;
};

/// Z-measures payloads against S_A and X-measures decoys expecting |+>. Missing,
/// duplicate or extra pairs fail the check.
AliceCheck alice_verify(std::span<const ReturnedPair> returned, const BitString& s_a,
                        const BitString& k1, ChoiceSource& source);

struct BobCheck {
    bool pass = false;
    BitString sk_prime;
};

BobCheck bob_verify(const BitString& measured, std::size_t n, const BitString& k2);

struct SessionResult {
    RunOutcome outcome;
    Transcript transcript;
};

/// Runs one session: per logical index Alice emits the pair, the adversary acts on the
/// forward leg, Bob handles each photon, the adversary acts on the return leg and
/// Alice stores the returns; then both checks and the authenticated-bit exchange.
SessionResult run_session(const SessionConfig& config, const PreSharedKeys& keys,
                          const BitString& sk, const AttackModel& attack,
                          ChoiceSource& source);

/// Outcome summary used for exact distributions.
struct OutcomeKey {
    bool alice_pass;
    bool bob_pass;
    BitString sk_prime;
    bool recycled;

    friend bool operator==(const OutcomeKey&, const OutcomeKey&) = default;
};

struct OutcomeProbability {
    OutcomeKey key;
    double probability;
};

/// Exact outcome distribution of run_session, enumerating every measurement and
/// attack-coin branch with nonzero probability.
std::vector<OutcomeProbability> exact_outcome_distribution(const SessionConfig& config,
                                                           const PreSharedKeys& keys,
                                                           const BitString& sk,
                                                           const AttackModel& attack);

}  // namespace asqkd
