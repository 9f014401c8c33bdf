#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "asqkd/quantum.hpp"

using namespace asqkd;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool close(const PureState& a, const PureState& b, double tol) {
    return a.dim() == b.dim() && (a.amplitudes() - b.amplitudes()).norm() <= tol;
}

}  // namespace

TEST_CASE("prepare_z gives computational basis states") {
    CHECK(prepare_z(0).amplitude(0) == Complex(1, 0));
    CHECK(prepare_z(0).amplitude(1) == Complex(0, 0));
    CHECK(prepare_z(1).amplitude(0) == Complex(0, 0));
    CHECK(prepare_z(1).amplitude(1) == Complex(1, 0));
    CHECK_THROWS_AS(prepare_z(2), std::invalid_argument);

    Rng rng(1);
    for (int i = 0; i < 50; ++i) CHECK(measure(prepare_z(1), Basis::Z, 0, rng).outcome == 1);
}

TEST_CASE("prepare_plus and its measurement statistics") {
    const PureState plus = prepare_plus();
    CHECK(plus.amplitude(0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(plus.amplitude(1).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(outcome_probability(plus, Basis::X, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(outcome_probability(prepare_minus(), Basis::X, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(7);
    const Measurement m = measure(plus, Basis::X, 0, rng);
    CHECK(m.outcome == 0);
    CHECK(close(m.collapsed, plus, 1e-12));

    const int trials = 100000;
    int zeros = 0;
    for (int i = 0; i < trials; ++i) zeros += measure(plus, Basis::Z, 0, rng).outcome == 0;
    CHECK(std::abs(zeros / double(trials) - 0.5) <= 0.005);
}

TEST_CASE("tensor composes in qubit-0-most-significant order") {
    const PureState s = tensor(prepare_z(0), prepare_z(1));
    REQUIRE(s.num_qubits() == 2);
    CHECK(close(s, PureState::basis_state(2, 1), 0));

    const PureState t = tensor(prepare_plus(), prepare_z(0));
    ComplexVector expected(4);
    expected << kInvSqrt2, 0, kInvSqrt2, 0;
    CHECK((t.amplitudes() - expected).norm() < 1e-15);

    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const PureState a = random_state(1 + i % 3, rng);
        const PureState b = random_state(1 + i % 4, rng);
        CHECK(tensor(a, b).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("PureState validation") {
    ComplexVector three(3);
    three << 1, 0, 0;
    CHECK_THROWS_AS(PureState{three}, std::invalid_argument);
    ComplexVector unnormalized(2);
    unnormalized << 1, 1;
    CHECK_THROWS_AS(PureState{unnormalized}, std::invalid_argument);
    CHECK_THROWS(PureState(kMaxQubits + 1));
    CHECK_THROWS(PureState::basis_state(2, 4));
}

TEST_CASE("UnitaryMatrix validation") {
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(UnitaryMatrix{bad}, std::invalid_argument);
    CHECK_THROWS_AS(UnitaryMatrix{ComplexMatrix::Identity(3, 3)}, std::invalid_argument);
    CHECK(gates::hadamard().kron(gates::pauli_x()).dim() == 4);
}

TEST_CASE("apply_unitary examples") {
    Rng rng(11);
    const PureState s = random_state(3, rng);
    CHECK(close(apply_unitary(UnitaryMatrix::identity(8), s, {0, 1, 2}), s, 1e-15));
    CHECK(close(apply_unitary(gates::hadamard(), prepare_z(0), {0}), prepare_plus(), 1e-12));

    const UnitaryMatrix u = random_unitary(8, rng);
    CHECK(apply_unitary(u, s, {0, 1, 2}).norm() == doctest::Approx(1.0).epsilon(1e-9));

    // CNOT with control on qubit 2 and target qubit 0 of |001> gives |101>.
    const PureState flipped = apply_unitary(gates::cnot(), PureState::basis_state(3, 1), {2, 0});
    CHECK(close(flipped, PureState::basis_state(3, 5), 1e-15));
}

TEST_CASE("apply_unitary errors") {
    const PureState s(2);
    CHECK_THROWS_AS(apply_unitary(gates::cnot(), s, {0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_unitary(gates::cnot(), s, {0, 0}), std::invalid_argument);
    CHECK_THROWS(apply_unitary(gates::hadamard(), s, {2}));
}

TEST_CASE("measure eigenstates and errors") {
    Rng rng(5);
    const Measurement m = measure(prepare_z(0), Basis::Z, 0, rng);
    CHECK(m.outcome == 0);
    CHECK(close(m.collapsed, prepare_z(0), 0));
    CHECK_THROWS(measure(prepare_z(0), Basis::Z, 1, rng));
}

TEST_CASE("fidelity examples") {
    Rng rng(9);
    const PureState s = random_state(2, rng);
    CHECK(fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(prepare_z(0), prepare_z(1)) == doctest::Approx(0.0));
    CHECK(fidelity(prepare_z(0), prepare_plus()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(fidelity(prepare_z(0), PureState(2)), std::invalid_argument);
}

TEST_CASE("property: norm is preserved through prepare, tensor, unitaries and collapse") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        PureState s = tensor(random_state(1, rng), tensor(prepare_plus(), prepare_z(trial % 2)));
        for (int step = 0; step < 6; ++step) {
            const std::size_t q = rng.next_u64() % 3;
            if (rng.bit()) {
                const std::size_t r = (q + 1 + rng.next_u64() % 2) % 3;
                s = apply_unitary(random_unitary(4, rng), s, {q, r});
            } else {
                s = measure(s, rng.bit() ? Basis::X : Basis::Z, q, rng).collapsed;
            }
            REQUIRE(std::abs(s.norm() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("property: measuring the collapsed state again repeats the outcome") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const PureState s = random_state(3, rng);
        const Basis basis = trial % 2 ? Basis::X : Basis::Z;
        const std::size_t q = trial % 3;
        const Measurement first = measure(s, basis, q, rng);
        CHECK(outcome_probability(first.collapsed, basis, q, first.outcome) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(measure(first.collapsed, basis, q, rng).outcome == first.outcome);
    }
}

TEST_CASE("property: Z statistics follow the Born rule") {
    Rng rng(31337);
    const int trials = 20000;
    for (int k = 0; k < 10; ++k) {
        const PureState s = random_state(1, rng);
        const double p = std::norm(s.amplitude(0));
        int zeros = 0;
        for (int i = 0; i < trials; ++i) zeros += measure(s, Basis::Z, 0, rng).outcome == 0;
        const double sigma = std::sqrt(p * (1 - p) / trials);
        CHECK(std::abs(zeros / double(trials) - p) <= 3 * sigma + 1e-12);
    }
}

TEST_CASE("property: unitaries preserve inner products") {
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const PureState a = random_state(3, rng);
        const PureState b = random_state(3, rng);
        const UnitaryMatrix u = random_unitary(4, rng);
        const std::size_t q = trial % 3;
        const std::vector<std::size_t> targets{q, (q + 1) % 3};
        const Complex before = a.inner(b);
        const Complex after = apply_unitary(u, a, targets).inner(apply_unitary(u, b, targets));
        CHECK(std::abs(before - after) <= 1e-8);
    }
}

TEST_CASE("reduced_density of a product state") {
    const PureState s = tensor(prepare_plus(), prepare_z(1));
    const std::vector<std::size_t> keep{1};
    const ComplexMatrix rho = reduced_density(s, keep);
    CHECK(std::abs(rho(1, 1) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(rho(0, 0)) < 1e-12);
}

TEST_CASE("Rng streams are reproducible and independent of call order") {
    const Rng root(42);
    Rng a = root.split(3);
    Rng b = Rng(42).split(3);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(root.split(1).seed() != root.split(2).seed());
}
