#include "asqkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace asqkd {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::size_t> all_qubits(std::size_t n) {
    std::vector<std::size_t> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = i;
    return q;
}

PureState intercept(const PureState& joint, const InterceptResend& attack, ChoiceSource& source) {
    PureState out = joint;
    for (std::size_t q = 0; q < 2; ++q) {
        if (source.choose(attack.p_attack) == 1) {
            // The collapsed state is exactly the resent basis state on qubit q.
            out = measure(out, attack.basis, q, source).collapsed;
        }
    }
    return out;
}

double checked_probability_sum(double sum) {
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("ensemble probabilities sum to " + std::to_string(sum));
    }
    return sum;
}

}  // namespace

void validate_attack(const AttackModel& model) {
    std::visit(Overloaded{
                   [](const HonestChannel&) {},
                   [](const InterceptResend& a) {
                       if (!(a.p_attack >= 0.0 && a.p_attack <= 1.0)) {
                           throw std::invalid_argument("p_attack must lie in [0, 1]");
                       }
                   },
                   [](const BitFlip&) {},
                   [](const Collective& a) {
                       if (a.ancilla_qubits < 1 || a.ancilla_qubits > kMaxAncillaQubits) {
                           throw std::invalid_argument("ancilla_qubits must lie in [1, 4]");
                       }
                       const std::size_t dim = std::size_t{1} << (2 + a.ancilla_qubits);
                       if (a.u1.dim() != dim || a.u2.dim() != dim) {
                           throw std::invalid_argument("collective unitaries must be " +
                                                       std::to_string(dim) + "-dimensional");
                       }
                   },
               },
               model);
}

std::string attack_name(const AttackModel& model) {
    return std::visit(Overloaded{
                          [](const HonestChannel&) -> std::string { return "honest"; },
                          [](const InterceptResend& a) -> std::string {
                              return a.basis == Basis::Z ? "intercept-z" : "intercept-x";
                          },
                          [](const BitFlip&) -> std::string { return "bitflip"; },
                          [](const Collective&) -> std::string { return "collective"; },
                      },
                      model);
}

std::size_t ancilla_qubits(const AttackModel& model) {
    if (const auto* c = std::get_if<Collective>(&model)) return c->ancilla_qubits;
    return 0;
}

PureState fresh_ancilla(const AttackModel& model) { return PureState(ancilla_qubits(model)); }

PureState attack_forward(const PureState& pair, const AttackModel& model, const PureState& ancilla,
                         std::size_t first_slot, ChoiceSource& source) {
    if (pair.num_qubits() != 2) throw std::invalid_argument("attack_forward expects a photon pair");
    const PureState joint = tensor(pair, ancilla);
    return std::visit(Overloaded{
                          [&](const HonestChannel&) { return joint; },
                          [&](const InterceptResend& a) { return intercept(joint, a, source); },
                          [&](const BitFlip& a) {
                              PureState out = joint;
                              for (std::size_t q = 0; q < 2; ++q) {
                                  if (a.slots.contains(first_slot + q)) {
                                      out = apply_unitary(gates::pauli_x(), out, {q});
                                  }
                              }
                              return out;
                          },
                          [&](const Collective& a) {
                              if (a.u1.dim() != joint.dim()) {
                                  throw std::invalid_argument("u1 does not match pair x ancilla");
                              }
                              const auto q = all_qubits(joint.num_qubits());
                              return apply_unitary(a.u1, joint, q);
                          },
                      },
                      model);
}

PureState attack_backward(const PureState& joint, const AttackModel& model, std::size_t /*first_slot*/,
                          ChoiceSource& source) {
    return std::visit(Overloaded{
                          [&](const HonestChannel&) { return joint; },
                          [&](const InterceptResend& a) { return intercept(joint, a, source); },
                          [&](const BitFlip&) { return joint; },
                          [&](const Collective& a) {
                              if (a.u2.dim() != joint.dim()) {
                                  throw std::invalid_argument("u2 does not match pair x ancilla");
                              }
                              const auto q = all_qubits(joint.num_qubits());
                              return apply_unitary(a.u2, joint, q);
                          },
                      },
                      model);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    }
    return s;
}

double eve_information(std::span<const WeightedDensity> ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const auto dim = ensemble.front().rho.rows();
    ComplexMatrix average = ComplexMatrix::Zero(dim, dim);
    double total = 0.0;
    double conditional = 0.0;
    for (const auto& [p, rho] : ensemble) {
        if (p < 0.0) throw std::invalid_argument("negative ensemble probability");
        if (rho.rows() != dim || rho.cols() != dim) {
            throw std::invalid_argument("ensemble states differ in dimension");
        }
        total += p;
        average += p * rho;
        if (p > 0.0) conditional += p * von_neumann_entropy(rho);
    }
    checked_probability_sum(total);
    return std::max(0.0, von_neumann_entropy(average) - conditional);
}

double eve_information(std::span<const WeightedState> ensemble) {
    std::vector<WeightedDensity> mixed;
    mixed.reserve(ensemble.size());
    for (const auto& [p, state] : ensemble) {
        const ComplexVector& v = state.amplitudes();
        mixed.push_back({p, v * v.adjoint()});
    }
    return eve_information(std::span<const WeightedDensity>(mixed));
}

PureState sent_pair_state(const SentPair& pair) {
    const PureState payload = prepare_z(pair.payload_bit);
    return pair.payload_qubit == 0 ? tensor(payload, prepare_plus()) : tensor(prepare_plus(), payload);
}

namespace detail {

RoundKernel::RoundKernel(std::size_t ancilla_qubits)
    : ancilla_qubits_(ancilla_qubits),
      anc_dim_(Eigen::Index{1} << ancilla_qubits),
      dim_(Eigen::Index{4} << ancilla_qubits),
      inputs_(ComplexMatrix::Zero(dim_, 4)) {
    // Joint index = (pair index << ancilla_qubits) | ancilla index.
    for (std::size_t c = 0; c < kSentPairs.size(); ++c) {
        const PureState pair = sent_pair_state(kSentPairs[c]);
        for (Eigen::Index xy = 0; xy < 4; ++xy) {
            inputs_(xy * anc_dim_, static_cast<Eigen::Index>(c)) = pair.amplitudes()(xy);
        }
    }
}

void RoundKernel::bob_branch(std::size_t c, int bob_bit, const ComplexVector& after_u1, ComplexVector& out) const {
    const std::size_t pq = kSentPairs[c].payload_qubit;
    out.resize(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) out(i) = pair_bit(i, pq) == bob_bit ? after_u1(i) : Complex{};
}

ComplexMatrix RoundKernel::bob_branches(const ComplexMatrix& after_u1) const {
    ComplexMatrix out(dim_, 8);
    ComplexVector branch;
    for (std::size_t c = 0; c < 4; ++c) {
        for (int r = 0; r < 2; ++r) {
            bob_branch(c, r, after_u1.col(static_cast<Eigen::Index>(c)), branch);
            out.col(static_cast<Eigen::Index>(2 * c) + r) = branch;
        }
    }
    return out;
}

RoundAnalysis RoundKernel::score(const ComplexMatrix& after_u2, bool with_states) const {
    RoundAnalysis out;
    double pass_total = 0.0;
    ComplexMatrix average = ComplexMatrix::Zero(anc_dim_, anc_dim_);
    double conditional_entropy = 0.0;
    for (std::size_t c = 0; c < kSentPairs.size(); ++c) {
        const SentPair& sent = kSentPairs[c];
        const std::size_t decoy_qubit = 1 - sent.payload_qubit;
        const Eigen::Index decoy_offset = anc_dim_ << (1 - decoy_qubit);
        ComplexMatrix rho = ComplexMatrix::Zero(anc_dim_, anc_dim_);
        for (int bob = 0; bob < 2; ++bob) {
            const auto back = after_u2.col(static_cast<Eigen::Index>(2 * c) + bob);
            Eigen::Map<const ComplexMatrix> by_pair(back.data(), anc_dim_, 4);
            rho.noalias() += by_pair * by_pair.adjoint();

            if (bob != sent.payload_bit) continue;
            // Alice: payload Z must equal the sent bit, decoy X must give |+>.
            for (Eigen::Index i = 0; i < dim_; ++i) {
                if (pair_bit(i, decoy_qubit) != 0 || pair_bit(i, sent.payload_qubit) != sent.payload_bit) continue;
                pass_total += 2.0 * std::norm(0.5 * (back(i) + back(i + decoy_offset)));
            }
        }
        average += 0.25 * rho;
        conditional_entropy += 0.25 * von_neumann_entropy(rho);
        if (with_states) out.ancilla_states[c] = rho;
    }
    out.detection_probability = std::clamp(1.0 - pass_total / 4.0, 0.0, 1.0);
    out.eve_information = std::max(0.0, von_neumann_entropy(average) - conditional_entropy);
    return out;
}

RoundAnalysis RoundKernel::analyze(const ComplexMatrix& u1, const ComplexMatrix& u2, bool with_states) const {
    if (u1.rows() != dim_ || u1.cols() != dim_ || u2.rows() != dim_ || u2.cols() != dim_) {
        throw std::invalid_argument("round unitaries do not match pair x ancilla");
    }
    const ComplexMatrix after_u1 = u1 * inputs_;
    return score(u2 * bob_branches(after_u1), with_states);
}

RoundAnalysis analyze_round(const ComplexMatrix& u1, const ComplexMatrix& u2, std::size_t ancilla_qubits,
                            bool with_states) {
    return RoundKernel(ancilla_qubits).analyze(u1, u2, with_states);
}

}  // namespace detail

RoundAnalysis analyze_collective_round(const Collective& attack) {
    validate_attack(attack);
    return detail::analyze_round(attack.u1.matrix(), attack.u2.matrix(), attack.ancilla_qubits, true);
}

double detection_probability_exact(const Collective& attack) {
    return analyze_collective_round(attack).detection_probability;
}

}  // namespace asqkd
