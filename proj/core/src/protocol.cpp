#include "asqkd/protocol.hpp"

#include <stdexcept>
#include <string>

#include "asqkd/hashing.hpp"

namespace asqkd {
namespace {

// Branches below this probability are treated as numerically impossible.
constexpr double kBranchCutoff = 1e-15;

std::size_t payload_qubit(const BitString& k1, std::size_t index) { return k1[index] ? 0 : 1; }

/// Alice's Step 4 on one returned pair: measures both photons in slot order.
struct PairCheck {
    int first_outcome;
    int second_outcome;
    bool payload_ok;
    bool decoy_ok;
};

PairCheck check_pair(const PureState& returned, std::size_t index, const BitString& s_a, const BitString& k1,
                     ChoiceSource& source) {
    if (returned.num_qubits() < 2) throw std::invalid_argument("returned pair has fewer than two qubits");
    const std::size_t pq = payload_qubit(k1, index);
    PureState state = returned;
    int outcomes[2] = {0, 0};
    for (std::size_t q = 0; q < 2; ++q) {
        const Basis basis = q == pq ? Basis::Z : Basis::X;
        Measurement m = measure(state, basis, q, source);
        outcomes[q] = m.outcome;
        state = std::move(m.collapsed);
    }
    const int expected = s_a[index] ? 1 : 0;
    return {outcomes[0], outcomes[1], outcomes[pq] == expected, outcomes[1 - pq] == 0};
}

class ScriptedChoices final : public ChoiceSource {
public:
    explicit ScriptedChoices(std::vector<int> prefix) : prefix_(std::move(prefix)) {}

    int choose(double p_one) override {
        int outcome;
        if (choices_.size() < prefix_.size()) {
            outcome = prefix_[choices_.size()];
        } else {
            outcome = (1.0 - p_one) > kBranchCutoff ? 0 : 1;
        }
        choices_.push_back(outcome);
        p_one_.push_back(p_one);
        weight_ *= outcome == 1 ? p_one : 1.0 - p_one;
        return outcome;
    }

    const std::vector<int>& choices() const { return choices_; }
    const std::vector<double>& p_one() const { return p_one_; }
    double weight() const { return weight_; }

private:
    std::vector<int> prefix_;
    std::vector<int> choices_;
    std::vector<double> p_one_;
    double weight_ = 1.0;
};

}  // namespace

void validate_config(const SessionConfig& config) {
    if (config.n < 1) throw std::invalid_argument("n must be >= 1");
    if (config.m < kMinHashBits || config.m > kMaxHashBits) {
        throw std::invalid_argument("m must lie in [1, 32]");
    }
}

PreSharedKeys PreSharedKeys::random(const SessionConfig& config, Rng& rng) {
    PreSharedKeys keys;
    keys.k1 = BitString::random(config.n + config.m, rng);
    keys.k2 = BitString::random(config.m, rng);
    return keys;
}

void validate_keys(const SessionConfig& config, const PreSharedKeys& keys) {
    if (keys.k1.size() != config.n + config.m) throw std::invalid_argument("K1 must have n+m bits");
    if (keys.k2.size() != config.m) throw std::invalid_argument("K2 must have m bits");
}

BitString make_payload(const BitString& sk, const BitString& k2) {
    return sk.concat(universal_hash(sk, select_hash(k2)));
}

std::vector<SlotAssignment> interleave(const BitString& s_a, const BitString& k1) {
    if (s_a.size() != k1.size()) throw std::invalid_argument("S_A and K1 differ in length");
    std::vector<SlotAssignment> order;
    order.reserve(2 * k1.size());
    for (std::size_t i = 0; i < k1.size(); ++i) {
        if (k1[i]) {
            order.push_back({PhotonRole::Payload, i});
            order.push_back({PhotonRole::Decoy, i});
        } else {
            order.push_back({PhotonRole::Decoy, i});
            order.push_back({PhotonRole::Payload, i});
        }
    }
    return order;
}

std::pair<BitString, BitString> deinterleave(const BitString& slots, const BitString& k1) {
    if (slots.size() != 2 * k1.size()) throw std::invalid_argument("slot string must be twice as long as K1");
    BitString s_a(k1.size());
    BitString s_d(k1.size());
    for (std::size_t i = 0; i < k1.size(); ++i) {
        const std::size_t pq = payload_qubit(k1, i);
        s_a.set(i, slots[2 * i + pq]);
        s_d.set(i, slots[2 * i + 1 - pq]);
    }
    return {s_a, s_d};
}

PhotonRole slot_role(std::size_t slot, const BitString& k1) {
    const std::size_t index = slot / 2;
    if (index >= k1.size()) throw std::out_of_range("slot beyond the photon sequence");
    return slot % 2 == payload_qubit(k1, index) ? PhotonRole::Payload : PhotonRole::Decoy;
}

std::vector<PhotonRecord> alice_prepare(const BitString& sk, const SessionConfig& config,
                                        const PreSharedKeys& keys) {
    validate_config(config);
    validate_keys(config, keys);
    if (sk.size() != config.n) throw std::invalid_argument("SK must have n bits");
    const BitString s_a = make_payload(sk, keys.k2);
    const auto order = interleave(s_a, keys.k1);
    std::vector<PhotonRecord> photons;
    photons.reserve(order.size());
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const auto& [role, index] = order[slot];
        // S_D is all zeros, so every decoy is |+>.
        PureState state = role == PhotonRole::Payload ? prepare_z(s_a[index] ? 1 : 0) : prepare_plus();
        photons.push_back({slot, index, role, std::move(state), std::nullopt});
    }
    return photons;
}

BobAction bob_process(const PureState& incoming, std::size_t qubit, PhotonRole role, ChoiceSource& source) {
    if (role == PhotonRole::Decoy) return {incoming, std::nullopt};
    // After a Z projection the qubit is exactly |outcome>, i.e. the resent photon.
    Measurement m = measure(incoming, Basis::Z, qubit, source);
    return {std::move(m.collapsed), m.outcome};
}

AliceCheck alice_verify(std::span<const ReturnedPair> returned, const BitString& s_a, const BitString& k1,
                        ChoiceSource& source) {
    if (s_a.size() != k1.size()) throw std::invalid_argument("S_A and K1 differ in length");
    AliceCheck check;
    const std::size_t count = k1.size();
    std::vector<const ReturnedPair*> by_index(count, nullptr);
    bool complete = returned.size() == count;
    for (const auto& r : returned) {
        if (r.logical_index >= count || by_index[r.logical_index] != nullptr) {
            complete = false;
            continue;
        }
        by_index[r.logical_index] = &r;
    }
    if (!complete) return check;  // lost or injected photons count as detection

    check.pass = true;
    check.outcomes = BitString(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
        const PairCheck pc = check_pair(by_index[i]->state, i, s_a, k1, source);
        check.outcomes.set(2 * i, pc.first_outcome == 1);
        check.outcomes.set(2 * i + 1, pc.second_outcome == 1);
        ++check.decoy_checks;
        if (!pc.decoy_ok) ++check.decoy_failures;
        check.pass = check.pass && pc.payload_ok && pc.decoy_ok;
    }
    return check;
}

BobCheck bob_verify(const BitString& measured, std::size_t n, const BitString& k2) {
    if (measured.size() != n + k2.size()) throw std::invalid_argument("Bob's string must have n+m bits");
    BobCheck check;
    check.sk_prime = measured.slice(0, n);
    const BitString tag = measured.slice(n, k2.size());
    check.pass = universal_hash(check.sk_prime, select_hash(k2)) == tag;
    return check;
}

SessionResult run_session(const SessionConfig& config, const PreSharedKeys& keys, const BitString& sk,
                          const AttackModel& attack, ChoiceSource& source) {
    validate_attack(attack);
    SessionResult result;
    Transcript& tr = result.transcript;
    tr.photons = alice_prepare(sk, config, keys);
    if (const auto* flip = std::get_if<BitFlip>(&attack)) {
        for (std::size_t slot : flip->slots) {
            if (slot >= config.photon_count()) throw std::invalid_argument("bit-flip slot out of range");
        }
    }

    const std::size_t count = config.payload_length();
    const BitString s_a = make_payload(sk, keys.k2);
    tr.bob_measured_bits = BitString(count);
    tr.alice_recheck_bits = BitString(2 * count);
    bool alice_ok = true;
    RunOutcome& out = result.outcome;

    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t first_slot = 2 * i;
        const PureState pair = tensor(tr.photons[first_slot].sent_state, tr.photons[first_slot + 1].sent_state);
        PureState joint = attack_forward(pair, attack, fresh_ancilla(attack), first_slot, source);

        // Bob holds one photon at a time, in slot order.
        for (std::size_t q = 0; q < 2; ++q) {
            BobAction action = bob_process(joint, q, slot_role(first_slot + q, keys.k1), source);
            joint = std::move(action.state);
            if (action.recorded_bit) tr.bob_measured_bits.set(i, *action.recorded_bit == 1);
        }

        joint = attack_backward(joint, attack, first_slot, source);

        // Alice measures on receipt; the verdict waits for the whole sequence.
        const PairCheck pc = check_pair(joint, i, s_a, keys.k1, source);
        tr.photons[first_slot].returned_outcome = pc.first_outcome;
        tr.photons[first_slot + 1].returned_outcome = pc.second_outcome;
        tr.alice_recheck_bits.set(first_slot, pc.first_outcome == 1);
        tr.alice_recheck_bits.set(first_slot + 1, pc.second_outcome == 1);
        ++out.decoy_checks;
        if (!pc.decoy_ok) ++out.decoy_failures;
        alice_ok = alice_ok && pc.payload_ok && pc.decoy_ok;
    }

    const BobCheck bob = bob_verify(tr.bob_measured_bits, config.n, keys.k2);
    out.alice_check_pass = alice_ok;
    out.bob_check_pass = bob.pass;
    out.sk = sk;
    out.sk_prime = bob.sk_prime;
    // Step 5: each side sends its verdict as an (ideal) authenticated bit.
    tr.alice_auth_bit = alice_ok;
    tr.bob_auth_bit = bob.pass;
    out.keys_recycled = *tr.alice_auth_bit && *tr.bob_auth_bit;
    return result;
}

std::vector<OutcomeProbability> exact_outcome_distribution(const SessionConfig& config, const PreSharedKeys& keys,
                                                           const BitString& sk, const AttackModel& attack) {
    std::vector<OutcomeProbability> dist;
    std::vector<std::vector<int>> pending{{}};
    while (!pending.empty()) {
        std::vector<int> prefix = std::move(pending.back());
        pending.pop_back();
        ScriptedChoices script(prefix);
        const std::size_t fixed = prefix.size();
        const SessionResult r = run_session(config, keys, sk, attack, script);

        const auto& choices = script.choices();
        const auto& p_one = script.p_one();
        for (std::size_t j = fixed; j < choices.size(); ++j) {
            const int alt = 1 - choices[j];
            const double p_alt = alt == 1 ? p_one[j] : 1.0 - p_one[j];
            if (p_alt > kBranchCutoff) {
                std::vector<int> next(choices.begin(), choices.begin() + static_cast<std::ptrdiff_t>(j));
                next.push_back(alt);
                pending.push_back(std::move(next));
            }
        }

        const OutcomeKey key{r.outcome.alice_check_pass, r.outcome.bob_check_pass, r.outcome.sk_prime,
                             r.outcome.keys_recycled};
        bool merged = false;
        for (auto& entry : dist) {
            if (entry.key == key) {
                entry.probability += script.weight();
                merged = true;
                break;
            }
        }
        if (!merged) dist.push_back({key, script.weight()});
    }
    return dist;
}

}  // namespace asqkd
