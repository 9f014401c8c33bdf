#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <variant>

#include "asqkd/quantum.hpp"

namespace asqkd {

struct HonestChannel {};

/// Measures each passing photon in `basis` with probability `p_attack` and resends the
/// observed basis state. Acts on both legs.
struct InterceptResend {
    Basis basis = Basis::Z;
    double p_attack = 1.0;
};

/// Pauli-X on the listed global slot indices, forward leg only.
struct BitFlip {
    std::set<std::size_t> slots;
};

/// Joint unitaries on (photon pair) x (ancilla). `u1` acts on the Alice->Bob leg, `u2`
/// on the return leg, and the ancilla register persists between them. A fresh ancilla
/// |0...0> is attached for every logical index.
struct Collective {
    UnitaryMatrix u1;
    UnitaryMatrix u2;
    std::size_t ancilla_qubits = 1;
};

using AttackModel = std::variant<HonestChannel, InterceptResend, BitFlip, Collective>;

inline constexpr std::size_t kMaxAncillaQubits = 4;

/// Throws std::invalid_argument when the variant's constraints are violated.
void validate_attack(const AttackModel& model);
std::string attack_name(const AttackModel& model);
std::size_t ancilla_qubits(const AttackModel& model);
PureState fresh_ancilla(const AttackModel& model);

// Joint state layout for one logical index: qubits 0 and 1 are the two photons in slot
// order, qubits 2.. are the ancilla. `first_slot` is the global slot of qubit 0.

PureState attack_forward(const PureState& pair, const AttackModel& model,
                         const PureState& ancilla, std::size_t first_slot,
                         ChoiceSource& source);
PureState attack_backward(const PureState& joint, const AttackModel& model,
                          std::size_t first_slot, ChoiceSource& source);

double von_neumann_entropy(const ComplexMatrix& rho);

struct WeightedState {
    double probability;
    PureState state;
};
struct WeightedDensity {
    double probability;
    ComplexMatrix rho;
};

/// Holevo quantity chi = S(sum p_i rho_i) - sum p_i S(rho_i), in bits. Throws
/// std::invalid_argument if probabilities are negative or do not sum to 1 within 1e-9.
double eve_information(std::span<const WeightedState> ensemble);
double eve_information(std::span<const WeightedDensity> ensemble);

/// The four equiprobable pairs Alice can emit for one logical index, in slot order:
/// |0+>, |+0>, |1+>, |+1>.
struct SentPair {
    int payload_bit;
    std::size_t payload_qubit;  // 0 or 1
};
inline constexpr std::array<SentPair, 4> kSentPairs{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
PureState sent_pair_state(const SentPair& pair);

struct RoundAnalysis {
    /// Probability that Bob's Z result, Alice's Z recheck or Alice's X decoy check
    /// disagrees with what Alice sent, averaged over kSentPairs.
    double detection_probability = 0.0;
    /// Holevo information of Eve's ancilla (after both legs) about which of the four
    /// pairs was sent, i.e. about the payload bit and the K1 bit jointly.
    double eve_information = 0.0;
    std::array<ComplexMatrix, 4> ancilla_states;
};

/// Exact (branch-summed) analysis of one logical index under a collective attack.
RoundAnalysis analyze_collective_round(const Collective& attack);
double detection_probability_exact(const Collective& attack);

namespace detail {

/// Staged evaluation of one collective round, shared by the exact analysis and the
/// attack search (which perturbs intermediate vectors directly).
class RoundKernel {
public:
    explicit RoundKernel(std::size_t ancilla_qubits);

    std::size_t ancilla_qubits() const noexcept { return ancilla_qubits_; }
    Eigen::Index dim() const noexcept { return dim_; }
    /// Columns are |pair_c>|0..0> for the four entries of kSentPairs.
    const ComplexMatrix& inputs() const noexcept { return inputs_; }

    /// Bob's unnormalized Z projection of the payload qubit onto `bob_bit` for pair c.
    void bob_branch(std::size_t c, int bob_bit, const ComplexVector& after_u1, ComplexVector& out) const;
    /// Columns 2c+r of the result are Bob's branches r for pair c; `after_u1` has one
    /// column per pair.
    ComplexMatrix bob_branches(const ComplexMatrix& after_u1) const;
    /// Scores the eight post-u2 vectors (column 2c+r = pair c, Bob outcome r).
    RoundAnalysis score(const ComplexMatrix& after_u2, bool with_states = false) const;
    RoundAnalysis analyze(const ComplexMatrix& u1, const ComplexMatrix& u2, bool with_states = false) const;

private:
    int pair_bit(Eigen::Index index, std::size_t qubit) const {
        return static_cast<int>(((index >> ancilla_qubits_) >> (1 - qubit)) & 1);
    }

    std::size_t ancilla_qubits_;
    Eigen::Index anc_dim_;
    Eigen::Index dim_;
    ComplexMatrix inputs_;
};

RoundAnalysis analyze_round(const ComplexMatrix& u1, const ComplexMatrix& u2,
                            std::size_t ancilla_qubits, bool with_states = false);
}  // namespace detail

}  // namespace asqkd
