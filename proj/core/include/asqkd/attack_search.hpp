#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "asqkd/adversary.hpp"

namespace asqkd {

/// Which unitaries the search may use.
enum class AttackFamily {
    /// Arbitrary u1, u2 on pair x ancilla.
    General,
    /// Block diagonal in the pair's Z basis: u = sum |xy><xy| (x) W_xy. Never alters Z
    /// values, which is the restriction Bob's hash check forces.
    ZPreserving,
};

struct SearchParams {
    std::size_t ancilla_qubits = 2;
    double epsilon = 0.0;
    AttackFamily family = AttackFamily::General;
    std::size_t restarts = 20;
    std::size_t max_iters = 500;
    double step = 0.1;
    double penalty = 1e3;
    double init_scale = 1.0;
    std::uint64_t seed = 42;
    /// Optional extra starting point, evaluated before the random restarts.
    std::vector<double> warm_start;
};

struct AttackSearchReport {
    double best_detection_prob = 0.0;
    double best_eve_info = 0.0;
    std::size_t iterations = 0;
    std::vector<double> parameter_vector;
    std::size_t ancilla_qubits = 0;
    AttackFamily family = AttackFamily::General;
    double epsilon = 0.0;
};

/// Real coefficients per generator: dim^2 for General, 4 * (dim/4)^2 for ZPreserving.
std::size_t generator_size(AttackFamily family, std::size_t ancilla_qubits);

/// Hermitian matrix from dim^2 reals: diagonal first, then (re, im) per upper entry.
ComplexMatrix hermitian_from_coefficients(std::span<const double> coeffs, std::size_t dim);
/// exp(iH), computed in H's eigenbasis.
ComplexMatrix unitary_exp(const ComplexMatrix& hermitian);

/// Builds (u1, u2) from a parameter vector of length 2 * generator_size(family, a).
Collective attack_from_parameters(std::span<const double> params, AttackFamily family,
                                  std::size_t ancilla_qubits);

/// Multi-restart finite-difference ascent of eve_information - penalty * max(0, detection
/// - epsilon). Returns the highest-information iterate with detection <= epsilon seen on
/// any restart; its detection and information are recomputed exactly. Throws
/// std::invalid_argument for invalid parameters.
AttackSearchReport constrained_attack_search(const SearchParams& params);

/// Runs the search for each epsilon in ascending order, seeding each run with the best
/// parameters of the previous one, so the returned frontier is non-decreasing.
std::vector<AttackSearchReport> epsilon_frontier(const SearchParams& params,
                                                 std::span<const double> epsilons);

/// CNOT-copies pair qubit j into ancilla qubit j (j < ancilla_qubits) on the forward
/// leg; u2 is the identity.
Collective copy_attack(std::size_t ancilla_qubits);

/// Random instance of u = sum |xy><xy| (x) W_xy with W_xy|0..0> = |f> for one common
/// |f> per leg (u2 maps that |f> to a common |f'>).
Collective random_diagonal_attack(std::size_t ancilla_qubits, Rng& rng);

}  // namespace asqkd
