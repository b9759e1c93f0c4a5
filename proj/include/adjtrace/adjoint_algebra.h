#pragma once

// Discrete operator algebra behind the adjoint method: weighted inner products,
// operator adjoints, Neumann-series transport solves, radiance/importance
// measurement duality and the Lagrangian adjoint gradient of a linear state
// problem u = T(theta) u + b(theta).

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjtrace::algebra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a Neumann series fails to reach tolerance within its term budget.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field over a discretized ray space with positive quadrature weights.
struct DiscreteField {
    Vector values;
    Vector weights;

    DiscreteField() = default;
    DiscreteField(Vector v, Vector w);
    static DiscreteField unit_weights(Vector v);

    Eigen::Index size() const { return values.size(); }
};

/// <f, g> = sum_i w_i f_i g_i. Throws std::invalid_argument on dimension or weight mismatch.
double inner_product(const DiscreteField &f, const DiscreteField &g);

/// Norm induced by the weighted inner product.
double weighted_norm(const Vector &v, const Vector &weights);

/// A* = W^-1 A^T W, the adjoint under the weighted inner product.
Matrix adjoint_of(const Matrix &a, const Vector &weights);

/// Partial sums of sum_k T^k b, stopping once the newest term has weighted norm <= tol.
/// The returned field therefore has residual ||x - T x - b|| <= tol.
DiscreteField neumann_solve(const Matrix &t, const DiscreteField &b, double tol = 1e-13,
                            int max_terms = 100000);

struct DualityReport {
    double forward = 0;   // <W1, (I - T)^-1 L0>
    double backward = 0;  // <(I - T*)^-1 W1, L0>
    double residual() const { return std::abs(forward - backward); }
};

DualityReport measurement_duality_check(const Matrix &t, const DiscreteField &source,
                                        const DiscreteField &receiver, double tol = 1e-13);

/// u = T(theta) u + b(theta) with T and b affine in the controls, and the cost
/// J = 1/2 ||u - target||_w^2.
struct LinearStateProblem {
    Matrix t0;
    std::vector<Matrix> dt;  // dT/dtheta_k
    Vector b0;
    std::vector<Vector> db;  // db/dtheta_k
    Vector target;
    Vector weights;

    std::size_t num_controls() const { return dt.size(); }
    Matrix transport(const std::vector<double> &theta) const;
    Vector source(const std::vector<double> &theta) const;
    void validate(const std::vector<double> &theta) const;
};

struct GradientResult {
    double cost = 0;
    std::vector<double> grad;
    Vector state;
    Vector adjoint;
};

/// Solves the state and adjoint equations and returns dJ/dtheta_k = <p, dT_k u + db_k>.
GradientResult adjoint_gradient(const LinearStateProblem &problem, const std::vector<double> &theta,
                                double tol = 1e-14);

double cost_of(const LinearStateProblem &problem, const std::vector<double> &theta,
               double tol = 1e-14);

/// Central differences of cost_of, one fresh solve per perturbation.
std::vector<double> fd_gradient_oracle(const LinearStateProblem &problem,
                                       const std::vector<double> &theta, double eps,
                                       double tol = 1e-14);

/// Operator norm induced by the weighted inner product.
double weighted_operator_norm(const Matrix &a, const Vector &weights);

/// Random matrix rescaled so its weighted operator norm equals `norm`
/// (hence spectral radius <= norm).
Matrix random_contraction(std::mt19937_64 &rng, Eigen::Index n, const Vector &weights,
                          double norm = 0.9);

Vector random_vector(std::mt19937_64 &rng, Eigen::Index n, double lo = -1, double hi = 1);

/// Random contractive problem with `controls` affine controls, contractive for
/// every theta with |theta_k| <= 1.
LinearStateProblem random_problem(std::mt19937_64 &rng, Eigen::Index n, std::size_t controls);

struct CheckLine {
    std::string name;
    double worst = 0;      // largest residual or relative error observed
    double tolerance = 0;
    bool pass() const { return worst <= tolerance; }
};

struct CheckOptions {
    std::uint64_t seed = 42;
    Eigen::Index dim = 8;
    int trials = 100;
    std::size_t controls = 4;
    /// Replace the duality operator by a non-contractive one.
    bool inject_noncontractive = false;
};

/// Randomized battery over the identities above. Throws NonConvergence when a
/// series diverges (only expected with inject_noncontractive).
std::vector<CheckLine> run_algebra_checks(const CheckOptions &options);

}  // namespace adjtrace::algebra
