#include "asqkd/attack_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace asqkd {
namespace {

constexpr double kFeasibilitySlack = 1e-12;
constexpr double kFiniteDifference = 1e-6;
constexpr double kMinStep = 1e-9;

std::size_t joint_dim(std::size_t ancilla_qubits) { return std::size_t{4} << ancilla_qubits; }

/// One real coordinate of a leg generator: H = sum_k theta_k G_k.
struct GeneratorTerm {
    enum Kind { Diagonal, Real, Imaginary } kind;
    Eigen::Index row;
    Eigen::Index col;
};

/// Coordinates in the order used by hermitian_from_coefficients, block by block for
/// the Z-preserving family.
std::vector<GeneratorTerm> generator_terms(AttackFamily family, std::size_t ancilla_qubits) {
    const auto dim = static_cast<Eigen::Index>(joint_dim(ancilla_qubits));
    const Eigen::Index block = family == AttackFamily::General ? dim : dim / 4;
    std::vector<GeneratorTerm> terms;
    for (Eigen::Index base = 0; base < dim; base += block) {
        for (Eigen::Index i = 0; i < block; ++i) terms.push_back({GeneratorTerm::Diagonal, base + i, base + i});
        for (Eigen::Index i = 0; i < block; ++i) {
            for (Eigen::Index j = i + 1; j < block; ++j) {
                terms.push_back({GeneratorTerm::Real, base + i, base + j});
                terms.push_back({GeneratorTerm::Imaginary, base + i, base + j});
            }
        }
    }
    return terms;
}

ComplexMatrix leg_hermitian(std::span<const double> coeffs, AttackFamily family, std::size_t ancilla_qubits) {
    const auto dim = static_cast<Eigen::Index>(joint_dim(ancilla_qubits));
    if (family == AttackFamily::General) return hermitian_from_coefficients(coeffs, static_cast<std::size_t>(dim));
    const Eigen::Index block = dim / 4;
    const auto per_block = static_cast<std::size_t>(block * block);
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index xy = 0; xy < 4; ++xy) {
        h.block(xy * block, xy * block, block, block) = hermitian_from_coefficients(
            coeffs.subspan(static_cast<std::size_t>(xy) * per_block, per_block), static_cast<std::size_t>(block));
    }
    return h;
}

/// exp(iH) together with the divided differences of exp(i.) in H's eigenbasis, which
/// give the exact derivative d exp(iH)[G] = V (Gamma o (V^dagger G V)) V^dagger.
struct LegExp {
    ComplexMatrix vectors;
    ComplexMatrix unitary;
    ComplexMatrix gamma;

    explicit LegExp(const ComplexMatrix& h) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
        const Eigen::VectorXd& lambda = solver.eigenvalues();
        vectors = solver.eigenvectors();
        const Eigen::Index d = lambda.size();
        ComplexVector phases(d);
        for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, lambda(i));
        unitary = vectors * phases.asDiagonal() * vectors.adjoint();
        gamma.resize(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                const double gap = lambda(i) - lambda(j);
                gamma(i, j) = std::abs(gap) > 1e-12 ? (phases(i) - phases(j)) / gap : Complex(0.0, 1.0) * phases(i);
            }
        }
    }

    /// V^dagger G V for one generator term.
    ComplexMatrix rotated(const GeneratorTerm& t) const {
        const auto a_row = vectors.row(t.row).adjoint();
        const auto a_col = vectors.row(t.col).adjoint();
        switch (t.kind) {
            case GeneratorTerm::Diagonal:
                return a_row * vectors.row(t.row);
            case GeneratorTerm::Real:
                return a_row * vectors.row(t.col) + a_col * vectors.row(t.row);
            case GeneratorTerm::Imaginary:
                return Complex(0.0, 1.0) * (a_row * vectors.row(t.col) - a_col * vectors.row(t.row));
        }
        return {};
    }

    /// d exp(iH)[G] applied to the columns of `x`, given v_adj_x = V^dagger x.
    ComplexMatrix derivative_times(const GeneratorTerm& t, const ComplexMatrix& v_adj_x) const {
        const ComplexMatrix inner = gamma.cwiseProduct(rotated(t));
        return vectors * (inner * v_adj_x);
    }
};

ComplexMatrix leg_unitary(std::span<const double> coeffs, AttackFamily family, std::size_t ancilla_qubits) {
    return unitary_exp(leg_hermitian(coeffs, family, ancilla_qubits));
}

struct Evaluation {
    double objective;
    double detection;
    double information;
};

class PenalizedObjective {
public:
    explicit PenalizedObjective(const SearchParams& params)
        : params_(params),
          kernel_(params.ancilla_qubits),
          terms_(generator_terms(params.family, params.ancilla_qubits)) {}

    std::size_t size() const { return 2 * terms_.size(); }

    Evaluation evaluate(std::span<const double> theta) const {
        const std::size_t half = terms_.size();
        const ComplexMatrix u1 = leg_unitary(theta.first(half), params_.family, params_.ancilla_qubits);
        const ComplexMatrix u2 = leg_unitary(theta.subspan(half), params_.family, params_.ancilla_qubits);
        return penalize(kernel_.analyze(u1, u2));
    }

    /// Forward differences along the exact tangent of each coordinate: the perturbed
    /// round is evaluated with U + h dU, so no eigendecomposition is repeated.
    std::vector<double> gradient(std::span<const double> theta, double base) const {
        const std::size_t half = terms_.size();
        const LegExp leg1(leg_hermitian(theta.first(half), params_.family, params_.ancilla_qubits));
        const LegExp leg2(leg_hermitian(theta.subspan(half), params_.family, params_.ancilla_qubits));

        const ComplexMatrix after_u1 = leg1.unitary * kernel_.inputs();
        const ComplexMatrix branches = kernel_.bob_branches(after_u1);
        const ComplexMatrix after_u2 = leg2.unitary * branches;
        const ComplexMatrix v1_inputs = leg1.vectors.adjoint() * kernel_.inputs();
        const ComplexMatrix v2_branches = leg2.vectors.adjoint() * branches;

        std::vector<double> g(2 * half);
        for (std::size_t k = 0; k < half; ++k) {
            const ComplexMatrix moved =
                after_u1 + kFiniteDifference * leg1.derivative_times(terms_[k], v1_inputs);
            const double f = penalize(kernel_.score(leg2.unitary * kernel_.bob_branches(moved))).objective;
            g[k] = (f - base) / kFiniteDifference;
        }
        for (std::size_t k = 0; k < half; ++k) {
            const ComplexMatrix moved =
                after_u2 + kFiniteDifference * leg2.derivative_times(terms_[k], v2_branches);
            const double f = penalize(kernel_.score(moved)).objective;
            g[half + k] = (f - base) / kFiniteDifference;
        }
        return g;
    }

private:
    Evaluation penalize(const RoundAnalysis& r) const {
        const double excess = std::max(0.0, r.detection_probability - params_.epsilon);
        return {r.eve_information - params_.penalty * excess, r.detection_probability, r.eve_information};
    }

    const SearchParams& params_;
    detail::RoundKernel kernel_;
    std::vector<GeneratorTerm> terms_;
};

struct Candidate {
    std::vector<double> theta;
    double information = -1.0;
};

void offer(Candidate& best, const std::vector<double>& theta, const Evaluation& e, double epsilon) {
    if (e.detection <= epsilon + kFeasibilitySlack && e.information > best.information) {
        best.theta = theta;
        best.information = e.information;
    }
}

std::size_t ascend(const PenalizedObjective& objective, std::vector<double> theta, const SearchParams& params,
                   Candidate& best) {
    Evaluation current = objective.evaluate(theta);
    offer(best, theta, current, params.epsilon);
    double alpha = params.step;
    std::size_t iterations = 0;
    std::vector<double> trial(theta.size());
    while (iterations < params.max_iters && alpha >= kMinStep) {
        ++iterations;
        const std::vector<double> g = objective.gradient(theta, current.objective);
        double norm = 0.0;
        for (double v : g) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 1e-12)) break;
        bool moved = false;
        while (alpha >= kMinStep) {
            for (std::size_t k = 0; k < theta.size(); ++k) trial[k] = theta[k] + alpha * g[k] / norm;
            const Evaluation next = objective.evaluate(trial);
            if (next.objective > current.objective) {
                theta.swap(trial);
                current = next;
                alpha *= 1.5;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        offer(best, theta, current, params.epsilon);
    }
    return iterations;
}

void validate_params(const SearchParams& p) {
    if (p.ancilla_qubits < 1 || p.ancilla_qubits > kMaxAncillaQubits) {
        throw std::invalid_argument("ancilla_qubits must lie in [1, 4]");
    }
    if (!(p.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (p.max_iters == 0) throw std::invalid_argument("max_iters must be >= 1");
    if (!(p.step > 0.0) || !std::isfinite(p.step)) throw std::invalid_argument("step must be > 0");
    if (!(p.penalty >= 0.0) || !std::isfinite(p.penalty)) throw std::invalid_argument("penalty must be >= 0");
    if (!(p.init_scale >= 0.0) || !std::isfinite(p.init_scale)) throw std::invalid_argument("init_scale must be >= 0");
    if (!p.warm_start.empty() && p.warm_start.size() != 2 * generator_size(p.family, p.ancilla_qubits)) {
        throw std::invalid_argument("warm_start has the wrong length");
    }
}

ComplexMatrix unitary_with_first_column(const ComplexVector& column, Rng& rng) {
    const Eigen::Index d = column.size();
    ComplexMatrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex(re, im);
        }
    }
    z.col(0) = column;
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const Complex overlap = q.col(0).dot(column);
    q.col(0) *= overlap / std::abs(overlap);
    return q;
}

}  // namespace

std::size_t generator_size(AttackFamily family, std::size_t ancilla_qubits) {
    const std::size_t dim = joint_dim(ancilla_qubits);
    if (family == AttackFamily::General) return dim * dim;
    const std::size_t block = dim / 4;
    return 4 * block * block;
}

ComplexMatrix hermitian_from_coefficients(std::span<const double> coeffs, std::size_t dim) {
    if (coeffs.size() != dim * dim) throw std::invalid_argument("generator needs dim^2 coefficients");
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix h(d, d);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < d; ++i) h(i, i) = coeffs[k++];
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            const Complex v(coeffs[k], coeffs[k + 1]);
            k += 2;
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

ComplexMatrix unitary_exp(const ComplexMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    ComplexVector phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, lambda(i));
    const ComplexMatrix& v = solver.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

Collective attack_from_parameters(std::span<const double> params, AttackFamily family, std::size_t ancilla_qubits) {
    if (ancilla_qubits < 1 || ancilla_qubits > kMaxAncillaQubits) {
        throw std::invalid_argument("ancilla_qubits must lie in [1, 4]");
    }
    const std::size_t half = generator_size(family, ancilla_qubits);
    if (params.size() != 2 * half) throw std::invalid_argument("parameter vector has the wrong length");
    return Collective{UnitaryMatrix(leg_unitary(params.first(half), family, ancilla_qubits)),
                      UnitaryMatrix(leg_unitary(params.subspan(half), family, ancilla_qubits)), ancilla_qubits};
}

AttackSearchReport constrained_attack_search(const SearchParams& params) {
    validate_params(params);
    const PenalizedObjective objective(params);

    // The identity attack is always feasible and carries no information.
    Candidate best{std::vector<double>(objective.size(), 0.0), 0.0};
    std::size_t iterations = 0;
    if (!params.warm_start.empty()) iterations += ascend(objective, params.warm_start, params, best);

    const Rng root(params.seed);
    for (std::size_t r = 0; r < params.restarts; ++r) {
        Rng rng = root.split(r);
        std::vector<double> theta(objective.size());
        for (double& v : theta) v = params.init_scale * rng.normal();
        iterations += ascend(objective, std::move(theta), params, best);
    }

    const RoundAnalysis exact =
        analyze_collective_round(attack_from_parameters(best.theta, params.family, params.ancilla_qubits));
    AttackSearchReport report;
    report.best_detection_prob = exact.detection_probability;
    report.best_eve_info = exact.eve_information;
    report.iterations = iterations;
    report.parameter_vector = std::move(best.theta);
    report.ancilla_qubits = params.ancilla_qubits;
    report.family = params.family;
    report.epsilon = params.epsilon;
    return report;
}

std::vector<AttackSearchReport> epsilon_frontier(const SearchParams& params, std::span<const double> epsilons) {
    std::vector<double> sorted(epsilons.begin(), epsilons.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<AttackSearchReport> frontier;
    SearchParams run = params;
    for (double eps : sorted) {
        run.epsilon = eps;
        frontier.push_back(constrained_attack_search(run));
        run.warm_start = frontier.back().parameter_vector;
    }
    return frontier;
}

Collective copy_attack(std::size_t ancilla_qubits) {
    if (ancilla_qubits < 1 || ancilla_qubits > kMaxAncillaQubits) {
        throw std::invalid_argument("ancilla_qubits must lie in [1, 4]");
    }
    const std::size_t anc_dim = std::size_t{1} << ancilla_qubits;
    const std::size_t dim = 4 * anc_dim;
    ComplexMatrix u1 = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t x = (i / anc_dim) >> 1;
        const std::size_t y = (i / anc_dim) & 1;
        std::size_t e = i % anc_dim;
        e ^= x << (ancilla_qubits - 1);
        if (ancilla_qubits >= 2) e ^= y << (ancilla_qubits - 2);
        const std::size_t j = (i / anc_dim) * anc_dim + e;
        u1(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return Collective{UnitaryMatrix(std::move(u1)), UnitaryMatrix::identity(dim), ancilla_qubits};
}

Collective random_diagonal_attack(std::size_t ancilla_qubits, Rng& rng) {
    if (ancilla_qubits < 1 || ancilla_qubits > kMaxAncillaQubits) {
        throw std::invalid_argument("ancilla_qubits must lie in [1, 4]");
    }
    const PureState forward = random_state(ancilla_qubits, rng);
    const PureState backward = random_state(ancilla_qubits, rng);
    const auto anc_dim = Eigen::Index{1} << ancilla_qubits;
    const Eigen::Index dim = 4 * anc_dim;
    ComplexMatrix u1 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix u2 = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index xy = 0; xy < 4; ++xy) {
        // W1 |0..0> = f; W2 f = f'.
        u1.block(xy * anc_dim, xy * anc_dim, anc_dim, anc_dim) = unitary_with_first_column(forward.amplitudes(), rng);
        const ComplexMatrix to_f = unitary_with_first_column(forward.amplitudes(), rng);
        const ComplexMatrix to_g = unitary_with_first_column(backward.amplitudes(), rng);
        u2.block(xy * anc_dim, xy * anc_dim, anc_dim, anc_dim) = to_g * to_f.adjoint();
    }
    return Collective{UnitaryMatrix(std::move(u1)), UnitaryMatrix(std::move(u2)), ancilla_qubits};
}

}  // namespace asqkd
