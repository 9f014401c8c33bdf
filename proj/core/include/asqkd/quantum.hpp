#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "asqkd/rng.hpp"

namespace asqkd {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxQubits = 8;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-8;

/// Measurement basis. X outcome 0 is |+>, outcome 1 is |->.
enum class Basis { Z, X };

/// Normalized pure state over `num_qubits` qubits. Qubit 0 is the most significant bit
/// of the basis index, so |q0 q1 ...> reads left to right.
class PureState {
public:
    /// |0...0> on `num_qubits` qubits. Zero qubits is the trivial one-amplitude state.
    explicit PureState(std::size_t num_qubits = 0);
    /// Throws std::invalid_argument unless the length is a power of two <= 2^8 and the
    /// norm is 1 within kNormTolerance.
    explicit PureState(ComplexVector amplitudes);

    static PureState basis_state(std::size_t num_qubits, std::size_t index);

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    const ComplexVector& amplitudes() const noexcept { return amps_; }
    Complex amplitude(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
    double norm() const { return amps_.norm(); }

    Complex inner(const PureState& other) const;

private:
    std::size_t num_qubits_ = 0;
    ComplexVector amps_;
};

/// Square unitary matrix whose dimension is a power of two.
class UnitaryMatrix {
public:
    /// Throws std::invalid_argument if not square, not a power of two, or U^dagger U
    /// deviates from the identity by more than kUnitaryTolerance in any entry.
    explicit UnitaryMatrix(ComplexMatrix entries);

    static UnitaryMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t num_qubits() const noexcept;
    const ComplexMatrix& matrix() const noexcept { return m_; }

    /// Kronecker product; `*this` acts on the leading qubits.
    UnitaryMatrix kron(const UnitaryMatrix& rhs) const;

private:
    ComplexMatrix m_;
};

namespace gates {
UnitaryMatrix hadamard();
UnitaryMatrix pauli_x();
UnitaryMatrix cnot();  // control is the first target, flip on the second
UnitaryMatrix swap();
}  // namespace gates

PureState prepare_z(int bit);
PureState prepare_plus();
PureState prepare_minus();
PureState tensor(const PureState& a, const PureState& b);

/// Applies `u` to the listed qubits (in the given order, first = most significant input
/// of `u`), identity elsewhere.
PureState apply_unitary(const UnitaryMatrix& u, const PureState& s,
                        std::span<const std::size_t> targets);
PureState apply_unitary(const UnitaryMatrix& u, const PureState& s,
                        std::initializer_list<std::size_t> targets);

struct Measurement {
    int outcome;
    PureState collapsed;
};

/// Projective single-qubit measurement; draws exactly one choice from `source`.
Measurement measure(const PureState& s, Basis basis, std::size_t target, ChoiceSource& source);

/// Probability of `outcome` and the renormalized post-measurement state (when the
/// probability is nonzero; otherwise `collapsed` is left as the input).
struct Projection {
    double probability;
    PureState collapsed;
};
Projection project(const PureState& s, Basis basis, std::size_t target, int outcome);

double outcome_probability(const PureState& s, Basis basis, std::size_t target, int outcome);

/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// Reduced density operator of the qubits listed in `keep` (in that order).
ComplexMatrix reduced_density(const PureState& s, std::span<const std::size_t> keep);

/// Haar-distributed unitary from a seeded complex Gaussian matrix (QR with phase fix).
UnitaryMatrix random_unitary(std::size_t dim, Rng& rng);
PureState random_state(std::size_t num_qubits, Rng& rng);

}  // namespace asqkd
