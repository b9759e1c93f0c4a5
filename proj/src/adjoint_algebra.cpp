#include "adjtrace/adjoint_algebra.h"

#include <algorithm>
#include <cmath>

namespace adjtrace::algebra {

DiscreteField::DiscreteField(Vector v, Vector w) : values(std::move(v)), weights(std::move(w)) {
    if (values.size() != weights.size())
        throw std::invalid_argument("DiscreteField: values and weights differ in size");
    if ((weights.array() <= 0).any())
        throw std::invalid_argument("DiscreteField: weights must be positive");
}

DiscreteField DiscreteField::unit_weights(Vector v) {
    Vector w = Vector::Ones(v.size());
    return {std::move(v), std::move(w)};
}

double inner_product(const DiscreteField &f, const DiscreteField &g) {
    if (f.size() != g.size())
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(f.size()) + " vs " + std::to_string(g.size()) +
                                    ")");
    if (f.weights != g.weights)
        throw std::invalid_argument("inner_product: fields use different weights");
    return (f.weights.array() * f.values.array() * g.values.array()).sum();
}

double weighted_norm(const Vector &v, const Vector &weights) {
    return std::sqrt((weights.array() * v.array().square()).sum());
}

Matrix adjoint_of(const Matrix &a, const Vector &weights) {
    return weights.cwiseInverse().asDiagonal() * a.transpose() * weights.asDiagonal();
}

DiscreteField neumann_solve(const Matrix &t, const DiscreteField &b, double tol, int max_terms) {
    if (t.rows() != t.cols() || t.rows() != b.size())
        throw std::invalid_argument("neumann_solve: operator/field dimension mismatch");
    Vector sum = Vector::Zero(b.size());
    Vector term = b.values;
    for (int k = 0; k < max_terms; ++k) {
        sum += term;
        term = t * term;
        const double n = weighted_norm(term, b.weights);
        if (!std::isfinite(n))
            break;
        if (n <= tol)
            return {sum, b.weights};
    }
    throw NonConvergence("neumann_solve: series did not reach tol " + std::to_string(tol) +
                         " within " + std::to_string(max_terms) +
                         " terms (spectral radius >= 1?)");
}

DualityReport measurement_duality_check(const Matrix &t, const DiscreteField &source,
                                        const DiscreteField &receiver, double tol) {
    DualityReport r;
    r.forward = inner_product(receiver, neumann_solve(t, source, tol));
    r.backward = inner_product(neumann_solve(adjoint_of(t, source.weights), receiver, tol), source);
    return r;
}

Matrix LinearStateProblem::transport(const std::vector<double> &theta) const {
    Matrix t = t0;
    for (std::size_t k = 0; k < dt.size(); ++k)
        t += theta[k] * dt[k];
    return t;
}

Vector LinearStateProblem::source(const std::vector<double> &theta) const {
    Vector b = b0;
    for (std::size_t k = 0; k < db.size(); ++k)
        b += theta[k] * db[k];
    return b;
}

void LinearStateProblem::validate(const std::vector<double> &theta) const {
    if (theta.size() != dt.size() || db.size() != dt.size())
        throw std::invalid_argument("LinearStateProblem: control count mismatch");
}

GradientResult adjoint_gradient(const LinearStateProblem &problem, const std::vector<double> &theta,
                                double tol) {
    problem.validate(theta);
    const Matrix t = problem.transport(theta);
    const DiscreteField u = neumann_solve(t, {problem.source(theta), problem.weights}, tol);
    const Vector residual = u.values - problem.target;

    GradientResult out;
    out.cost = 0.5 * weighted_norm(residual, problem.weights) * weighted_norm(residual, problem.weights);
    // (-I + T)* p = -(u - target)
    const DiscreteField p = neumann_solve(adjoint_of(t, problem.weights), {residual, problem.weights}, tol);
    out.grad.resize(problem.num_controls());
    for (std::size_t k = 0; k < problem.num_controls(); ++k) {
        const DiscreteField dE{problem.dt[k] * u.values + problem.db[k], problem.weights};
        out.grad[k] = inner_product(p, dE);
    }
    out.state = u.values;
    out.adjoint = p.values;
    return out;
}

double cost_of(const LinearStateProblem &problem, const std::vector<double> &theta, double tol) {
    problem.validate(theta);
    const DiscreteField u =
        neumann_solve(problem.transport(theta), {problem.source(theta), problem.weights}, tol);
    const double r = weighted_norm(u.values - problem.target, problem.weights);
    return 0.5 * r * r;
}

std::vector<double> fd_gradient_oracle(const LinearStateProblem &problem,
                                       const std::vector<double> &theta, double eps, double tol) {
    if (!(eps > 0))
        throw std::invalid_argument("fd_gradient_oracle: eps must be positive");
    std::vector<double> grad(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        auto plus = theta, minus = theta;
        plus[k] += eps;
        minus[k] -= eps;
        grad[k] = (cost_of(problem, plus, tol) - cost_of(problem, minus, tol)) / (2 * eps);
    }
    return grad;
}

double weighted_operator_norm(const Matrix &a, const Vector &weights) {
    const Vector s = weights.cwiseSqrt();
    const Matrix similar = s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
    return Eigen::JacobiSVD<Matrix>(similar).singularValues()(0);
}

Vector random_vector(std::mt19937_64 &rng, Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = dist(rng);
    return v;
}

Matrix random_contraction(std::mt19937_64 &rng, Eigen::Index n, const Vector &weights, double norm) {
    std::uniform_real_distribution<double> dist(-1, 1);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = dist(rng);
    return a * (norm / weighted_operator_norm(a, weights));
}

LinearStateProblem random_problem(std::mt19937_64 &rng, Eigen::Index n, std::size_t controls) {
    LinearStateProblem p;
    p.weights = random_vector(rng, n, 0.5, 2.0);
    // ||T0|| = 0.5 and sum_k ||dT_k|| = 0.3 keep ||T(theta)|| <= 0.8 for |theta_k| <= 1.
    p.t0 = random_contraction(rng, n, p.weights, 0.5);
    for (std::size_t k = 0; k < controls; ++k) {
        p.dt.push_back(random_contraction(rng, n, p.weights, 0.3 / static_cast<double>(controls)));
        p.db.push_back(random_vector(rng, n));
    }
    p.b0 = random_vector(rng, n);
    p.target = random_vector(rng, n);
    return p;
}

std::vector<CheckLine> run_algebra_checks(const CheckOptions &options) {
    std::mt19937_64 rng(options.seed);
    const Eigen::Index n = options.dim;
    CheckLine identity{"adjoint identity <Af,g> = <f,A*g> (scaled)", 0, 1e-12};
    CheckLine sum_rule{"(A+B)* = A* + B*", 0, 1e-12};
    CheckLine product_rule{"(AB)* = B*A*", 0, 1e-12};
    CheckLine duality{"measurement duality |I_fwd - I_bwd|", 0, 1e-10};
    CheckLine neumann{"neumann vs dense solve / tol", 0, 10};
    CheckLine gradient{"adjoint gradient vs central FD (rel)", 0, 1e-6};
    constexpr double kNeumannTol = 1e-10;
    constexpr double kFdEps = 1e-5;

    for (int trial = 0; trial < options.trials; ++trial) {
        const Vector w = random_vector(rng, n, 0.5, 2.0);
        const Matrix a = random_contraction(rng, n, w, 1.0);
        const Matrix b = random_contraction(rng, n, w, 1.0);
        const Matrix a_star = adjoint_of(a, w);

        const DiscreteField f{random_vector(rng, n), w};
        const DiscreteField g{random_vector(rng, n), w};
        const DiscreteField af{a * f.values, w};
        const DiscreteField asg{a_star * g.values, w};
        const double scale = weighted_operator_norm(a, w) * weighted_norm(f.values, w) *
                             weighted_norm(g.values, w);
        identity.worst =
            std::max(identity.worst, std::abs(inner_product(af, g) - inner_product(f, asg)) / scale);
        sum_rule.worst = std::max(
            sum_rule.worst, (adjoint_of(a + b, w) - (a_star + adjoint_of(b, w))).cwiseAbs().maxCoeff());
        product_rule.worst =
            std::max(product_rule.worst,
                     (adjoint_of(a * b, w) - adjoint_of(b, w) * a_star).cwiseAbs().maxCoeff());

        Matrix t = random_contraction(rng, n, w, 0.9);
        if (options.inject_noncontractive)
            t = Matrix::Identity(n, n) * 1.5;
        const DiscreteField l0{random_vector(rng, n, 0, 1), w};
        const DiscreteField w1{random_vector(rng, n, 0, 1), w};
        duality.worst = std::max(duality.worst, measurement_duality_check(t, l0, w1).residual());

        const DiscreteField x = neumann_solve(t, l0, kNeumannTol);
        const Vector dense = (Matrix::Identity(n, n) - t).partialPivLu().solve(l0.values);
        neumann.worst = std::max(neumann.worst, weighted_norm(x.values - dense, w) / kNeumannTol);

        const LinearStateProblem problem = random_problem(rng, n, options.controls);
        const std::vector<double> theta = [&] {
            std::uniform_real_distribution<double> d(-0.9, 0.9);
            std::vector<double> th(options.controls);
            for (double &v : th)
                v = d(rng);
            return th;
        }();
        const GradientResult adj = adjoint_gradient(problem, theta);
        const std::vector<double> fd = fd_gradient_oracle(problem, theta, kFdEps);
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const double denom = std::max(std::abs(adj.grad[k]), 1e-8);
            gradient.worst = std::max(gradient.worst, std::abs(adj.grad[k] - fd[k]) / denom);
        }
    }

    // Scalar problem u = t u + b with closed form dJ/db = u/(1-t), dJ/dt = u b/(1-t)^2.
    CheckLine scalar{"scalar oracle dJ/db = 4, dJ/dt = 8", 0, 1e-12};
    LinearStateProblem sp;
    sp.t0 = Matrix::Zero(1, 1);
    sp.dt = {Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
    sp.b0 = Vector::Zero(1);
    sp.db = {Vector::Zero(1), Vector::Ones(1)};
    sp.target = Vector::Zero(1);
    sp.weights = Vector::Ones(1);
    const GradientResult sr = adjoint_gradient(sp, {0.5, 1.0});
    scalar.worst = std::max(std::abs(sr.grad[1] - 4), std::abs(sr.grad[0] - 8));

    return {identity, sum_rule, product_rule, duality, neumann, gradient, scalar};
}

}  // namespace adjtrace::algebra
