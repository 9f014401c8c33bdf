#include "asqkd/quantum.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace asqkd {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

std::size_t bit_shift(std::size_t num_qubits, std::size_t qubit) { return num_qubits - 1 - qubit; }

void check_target(const PureState& s, std::size_t target) {
    if (target >= s.num_qubits()) {
        throw std::out_of_range("qubit " + std::to_string(target) + " out of range for a " +
                                std::to_string(s.num_qubits()) + "-qubit state");
    }
}

}  // namespace

PureState::PureState(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > kMaxQubits) throw std::invalid_argument("too many qubits");
    amps_ = ComplexVector::Zero(Eigen::Index{1} << num_qubits);
    amps_(0) = 1.0;
}

PureState::PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
    num_qubits_ = qubits_for_dim(static_cast<std::size_t>(amps_.size()));
    if (num_qubits_ > kMaxQubits) throw std::invalid_argument("too many qubits");
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("state is not normalized");
    }
}

PureState PureState::basis_state(std::size_t num_qubits, std::size_t index) {
    PureState s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(s.dim()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
}

Complex PureState::inner(const PureState& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("inner product of unequal dimensions");
    return amps_.dot(other.amps_);  // conjugates the first argument
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("unitary must be square");
    qubits_for_dim(static_cast<std::size_t>(m_.rows()));
    const ComplexMatrix residual =
        m_.adjoint() * m_ - ComplexMatrix::Identity(m_.rows(), m_.cols());
    if (residual.cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw std::invalid_argument("matrix is not unitary");
    }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return UnitaryMatrix(ComplexMatrix::Identity(d, d));
}

std::size_t UnitaryMatrix::num_qubits() const noexcept {
    return static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(m_.rows())));
}

UnitaryMatrix UnitaryMatrix::kron(const UnitaryMatrix& rhs) const {
    const auto ra = m_.rows();
    const auto rb = rhs.m_.rows();
    ComplexMatrix out(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i) {
        for (Eigen::Index j = 0; j < ra; ++j) {
            out.block(i * rb, j * rb, rb, rb) = m_(i, j) * rhs.m_;
        }
    }
    return UnitaryMatrix(std::move(out));
}

namespace gates {

UnitaryMatrix hadamard() {
    ComplexMatrix h(2, 2);
    h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return UnitaryMatrix(std::move(h));
}

UnitaryMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return UnitaryMatrix(std::move(x));
}

UnitaryMatrix cnot() {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
    return UnitaryMatrix(std::move(c));
}

UnitaryMatrix swap() {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    c(0, 0) = c(1, 2) = c(2, 1) = c(3, 3) = 1.0;
    return UnitaryMatrix(std::move(c));
}

}  // namespace gates

PureState prepare_z(int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    return PureState::basis_state(1, static_cast<std::size_t>(bit));
}

PureState prepare_plus() {
    ComplexVector v(2);
    v << kInvSqrt2, kInvSqrt2;
    return PureState(std::move(v));
}

PureState prepare_minus() {
    ComplexVector v(2);
    v << kInvSqrt2, -kInvSqrt2;
    return PureState(std::move(v));
}

PureState tensor(const PureState& a, const PureState& b) {
    if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
        throw std::invalid_argument("tensor product exceeds the qubit cap");
    }
    const auto da = static_cast<Eigen::Index>(a.dim());
    const auto db = static_cast<Eigen::Index>(b.dim());
    ComplexVector v(da * db);
    for (Eigen::Index i = 0; i < da; ++i) v.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
    return PureState(std::move(v));
}

PureState apply_unitary(const UnitaryMatrix& u, const PureState& s,
                        std::span<const std::size_t> targets) {
    const std::size_t n = s.num_qubits();
    const std::size_t k = targets.size();
    if (k == 0) throw std::invalid_argument("no target qubits");
    if (u.dim() != (std::size_t{1} << k)) {
        throw std::invalid_argument("unitary dimension does not match the number of targets");
    }
    std::size_t target_mask = 0;
    for (std::size_t t : targets) {
        check_target(s, t);
        const std::size_t bit = std::size_t{1} << bit_shift(n, t);
        if (target_mask & bit) throw std::invalid_argument("duplicate target qubit");
        target_mask |= bit;
    }

    // Global offset of each local basis index; local bit (k-1-j) belongs to targets[j].
    std::vector<std::size_t> offsets(u.dim(), 0);
    for (std::size_t local = 0; local < u.dim(); ++local) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1U) offsets[local] |= std::size_t{1} << bit_shift(n, targets[j]);
        }
    }

    const ComplexVector& in = s.amplitudes();
    ComplexVector out(in.size());
    ComplexVector local_in(static_cast<Eigen::Index>(u.dim()));
    for (std::size_t base = 0; base < s.dim(); ++base) {
        if (base & target_mask) continue;
        for (std::size_t l = 0; l < u.dim(); ++l) {
            local_in(static_cast<Eigen::Index>(l)) = in(static_cast<Eigen::Index>(base | offsets[l]));
        }
        const ComplexVector local_out = u.matrix() * local_in;
        for (std::size_t l = 0; l < u.dim(); ++l) {
            out(static_cast<Eigen::Index>(base | offsets[l])) = local_out(static_cast<Eigen::Index>(l));
        }
    }
    return PureState(std::move(out));
}

PureState apply_unitary(const UnitaryMatrix& u, const PureState& s,
                        std::initializer_list<std::size_t> targets) {
    return apply_unitary(u, s, std::span<const std::size_t>(targets.begin(), targets.size()));
}

Projection project(const PureState& s, Basis basis, std::size_t target, int outcome) {
    check_target(s, target);
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    const std::size_t bit = std::size_t{1} << bit_shift(s.num_qubits(), target);
    const ComplexVector& in = s.amplitudes();
    ComplexVector out = ComplexVector::Zero(in.size());
    for (std::size_t i0 = 0; i0 < s.dim(); ++i0) {
        if (i0 & bit) continue;
        const auto a = static_cast<Eigen::Index>(i0);
        const auto b = static_cast<Eigen::Index>(i0 | bit);
        if (basis == Basis::Z) {
            if (outcome == 0) {
                out(a) = in(a);
            } else {
                out(b) = in(b);
            }
        } else {
            const double sign = outcome == 0 ? 1.0 : -1.0;
            const Complex c = 0.5 * (in(a) + sign * in(b));
            out(a) = c;
            out(b) = sign * c;
        }
    }
    const double probability = out.squaredNorm();
    if (probability <= 0.0) return {0.0, s};
    out /= std::sqrt(probability);
    return {probability, PureState(std::move(out))};
}

double outcome_probability(const PureState& s, Basis basis, std::size_t target, int outcome) {
    check_target(s, target);
    const std::size_t bit = std::size_t{1} << bit_shift(s.num_qubits(), target);
    const ComplexVector& in = s.amplitudes();
    double p = 0.0;
    for (std::size_t i0 = 0; i0 < s.dim(); ++i0) {
        if (i0 & bit) continue;
        const Complex a = in(static_cast<Eigen::Index>(i0));
        const Complex b = in(static_cast<Eigen::Index>(i0 | bit));
        if (basis == Basis::Z) {
            p += std::norm(outcome == 0 ? a : b);
        } else {
            p += 0.5 * std::norm(outcome == 0 ? a + b : a - b);
        }
    }
    return p;
}

Measurement measure(const PureState& s, Basis basis, std::size_t target, ChoiceSource& source) {
    const double p_one = outcome_probability(s, basis, target, 1);
    const int outcome = source.choose(p_one);
    Projection proj = project(s, basis, target, outcome);
    if (proj.probability <= 0.0) {
        throw std::logic_error("choice source selected a zero-probability outcome");
    }
    return {outcome, std::move(proj.collapsed)};
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity of unequal dimensions");
    return std::norm(a.inner(b));
}

ComplexMatrix reduced_density(const PureState& s, std::span<const std::size_t> keep) {
    const std::size_t n = s.num_qubits();
    std::size_t keep_mask = 0;
    for (std::size_t q : keep) {
        check_target(s, q);
        const std::size_t bit = std::size_t{1} << bit_shift(n, q);
        if (keep_mask & bit) throw std::invalid_argument("duplicate qubit in reduced_density");
        keep_mask |= bit;
    }
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < n; ++q) {
        if (!(keep_mask & (std::size_t{1} << bit_shift(n, q)))) rest.push_back(q);
    }
    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index dr = Eigen::Index{1} << rest.size();
    ComplexMatrix block(dk, dr);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        Eigen::Index a = 0;
        for (std::size_t q : keep) a = (a << 1) | static_cast<Eigen::Index>((i >> bit_shift(n, q)) & 1U);
        Eigen::Index r = 0;
        for (std::size_t q : rest) r = (r << 1) | static_cast<Eigen::Index>((i >> bit_shift(n, q)) & 1U);
        block(a, r) = s.amplitudes()(static_cast<Eigen::Index>(i));
    }
    return block * block.adjoint();
}

UnitaryMatrix random_unitary(std::size_t dim, Rng& rng) {
    qubits_for_dim(dim);
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex(re, im) * kInvSqrt2;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex diag = r(j, j);
        const double mag = std::abs(diag);
        if (mag > 0.0) q.col(j) *= diag / mag;
    }
    return UnitaryMatrix(std::move(q));
}

PureState random_state(std::size_t num_qubits, Rng& rng) {
    if (num_qubits > kMaxQubits) throw std::invalid_argument("too many qubits");
    const Eigen::Index d = Eigen::Index{1} << num_qubits;
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v(i) = Complex(re, im);
    }
    v /= v.norm();
    return PureState(std::move(v));
}

}  // namespace asqkd
