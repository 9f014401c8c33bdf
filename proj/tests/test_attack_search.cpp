#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "asqkd/attack_search.hpp"

using namespace asqkd;

TEST_CASE("generator sizes") {
    CHECK(generator_size(AttackFamily::General, 1) == 64);
    CHECK(generator_size(AttackFamily::General, 2) == 256);
    CHECK(generator_size(AttackFamily::ZPreserving, 1) == 16);
    CHECK(generator_size(AttackFamily::ZPreserving, 2) == 64);
}

TEST_CASE("hermitian_from_coefficients and unitary_exp") {
    Rng rng(1);
    std::vector<double> c(64);
    for (double& v : c) v = rng.normal();
    const ComplexMatrix h = hermitian_from_coefficients(c, 8);
    CHECK((h - h.adjoint()).norm() < 1e-14);
    CHECK(h(0, 0).real() == c[0]);
    const ComplexMatrix u = unitary_exp(h);
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(8, 8)).norm() < 1e-10);
    CHECK((unitary_exp(ComplexMatrix::Zero(4, 4)) - ComplexMatrix::Identity(4, 4)).norm() < 1e-14);
    CHECK_THROWS_AS(hermitian_from_coefficients(c, 4), std::invalid_argument);
}

TEST_CASE("zero parameters give the identity attack") {
    for (auto family : {AttackFamily::General, AttackFamily::ZPreserving}) {
        const std::vector<double> zero(2 * generator_size(family, 1), 0.0);
        const Collective c = attack_from_parameters(zero, family, 1);
        CHECK((c.u1.matrix() - ComplexMatrix::Identity(8, 8)).norm() < 1e-14);
        CHECK(detection_probability_exact(c) == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(attack_from_parameters(std::vector<double>(3), AttackFamily::General, 1), std::invalid_argument);
}

TEST_CASE("z-preserving attacks never disturb Z values") {
    Rng rng(2);
    std::vector<double> p(2 * generator_size(AttackFamily::ZPreserving, 2));
    for (double& v : p) v = rng.normal();
    const Collective c = attack_from_parameters(p, AttackFamily::ZPreserving, 2);
    for (std::size_t xy = 0; xy < 4; ++xy) {
        const PureState in = PureState::basis_state(4, xy * 4);
        const std::vector<std::size_t> pair{0, 1};
        const ComplexMatrix rho = reduced_density(apply_unitary(c.u1, in, {0, 1, 2, 3}), pair);
        CHECK(std::abs(rho(xy, xy).real() - 1.0) < 1e-10);
    }
}

TEST_CASE("search with a zero budget on the z-preserving family leaks nothing") {
    SearchParams p;
    p.ancilla_qubits = 2;
    p.epsilon = 0.0;
    p.family = AttackFamily::ZPreserving;
    p.restarts = 3;
    p.max_iters = 60;
    const AttackSearchReport r = constrained_attack_search(p);
    CHECK(r.best_detection_prob <= 1e-12);
    CHECK(r.best_eve_info <= 1e-6);
}

TEST_CASE("unconstrained search finds an informative attack") {
    SearchParams p;
    p.ancilla_qubits = 1;
    p.epsilon = 1.0;
    p.restarts = 2;
    p.max_iters = 200;
    const AttackSearchReport r = constrained_attack_search(p);
    CHECK(r.best_eve_info >= 0.9);
    CHECK(r.iterations > 0);
}

TEST_CASE("reported numbers are exact for the returned parameters and reproducible") {
    SearchParams p;
    p.ancilla_qubits = 1;
    p.epsilon = 0.05;
    p.restarts = 2;
    p.max_iters = 40;
    p.seed = 9;
    const AttackSearchReport a = constrained_attack_search(p);
    const AttackSearchReport b = constrained_attack_search(p);
    CHECK(a.parameter_vector == b.parameter_vector);
    CHECK(a.best_eve_info == b.best_eve_info);
    CHECK(a.best_detection_prob <= p.epsilon + 1e-12);

    const RoundAnalysis exact = analyze_collective_round(attack_from_parameters(a.parameter_vector, a.family, 1));
    CHECK(exact.detection_probability == a.best_detection_prob);
    CHECK(exact.eve_information == a.best_eve_info);
}

TEST_CASE("epsilon frontier is non-decreasing") {
    SearchParams p;
    p.ancilla_qubits = 1;
    p.restarts = 1;
    p.max_iters = 40;
    const std::vector<double> eps{0.2, 0.0, 0.05, 0.5};
    const auto frontier = epsilon_frontier(p, eps);
    REQUIRE(frontier.size() == 4);
    for (std::size_t i = 1; i < frontier.size(); ++i) {
        CHECK(frontier[i].epsilon >= frontier[i - 1].epsilon);
        CHECK(frontier[i].best_eve_info >= frontier[i - 1].best_eve_info - 1e-12);
    }
    for (const auto& r : frontier) CHECK(r.best_detection_prob <= r.epsilon + 1e-12);
}

TEST_CASE("invalid search parameters") {
    SearchParams p;
    p.ancilla_qubits = 0;
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    p = {};
    p.ancilla_qubits = 5;
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    p = {};
    p.epsilon = -1;
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    p = {};
    p.max_iters = 0;
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    p = {};
    p.step = 0;
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    p = {};
    p.warm_start = {1.0, 2.0};
    CHECK_THROWS_AS(constrained_attack_search(p), std::invalid_argument);
    CHECK_THROWS_AS(copy_attack(0), std::invalid_argument);
}
