#pragma once

#include "adjtrace/path_engine.h"

#include <array>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjtrace {

/// Raised when the objective or gradient stops being finite.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptimConfig {
    double learning_rate = 0.01;
    int iterations = 100;
    /// Tikhonov weight: adds reg/2 * |theta|^2 to the cost.
    double regularization = 0;
    ControlVector lower{};  // defaults to 0
    ControlVector upper = default_upper();
    std::array<bool, kNumControls> active = {true, true, true, true, true, true, true};
    TraceOptions trace;
    /// Draw a new seed every iteration instead of freezing the estimator.
    bool reseed_each_iteration = false;

    static ControlVector default_upper() {
        ControlVector u;
        u.fill(std::numeric_limits<double>::infinity());
        u[4] = 1e3;  // exponent
        return u;
    }
    void validate() const;
};

struct OptimRecord {
    int iteration = 0;
    ControlVector theta{};
    double cost = 0;
    double grad_norm = 0;
};

struct OptimTrajectory {
    std::vector<OptimRecord> records;
    ControlVector final_theta{};
    bool converged = false;

    /// CSV: iteration,J_total,theta1..theta7,grad_norm
    std::string to_csv() const;
};

struct CostAndGradient {
    double cost = 0;
    GradientVector grad{};
};

/// Rendering cost against `target` plus reg/2 |theta|^2, with its gradient.
CostAndGradient total_cost_and_grad(const Scene &scene, const ControlVector &theta,
                                    const ScalarImage &target, const OptimConfig &config);

/// theta - lr * grad on the active controls, clamped to the bounds.
ControlVector gd_step(const ControlVector &theta, const GradientVector &grad,
                      const OptimConfig &config);

/// Norm of the gradient restricted to the active controls.
double active_grad_norm(const GradientVector &grad, const OptimConfig &config);

/// Cost growth over the first iterate that counts as divergence.
inline constexpr double kDivergenceGrowth = 1e8;

/// Projected gradient descent. Stops early once the active gradient norm is <= 1e-9
/// or the cost is <= 1e-12. Throws DivergenceError on a non-finite cost or gradient,
/// or once the cost exceeds kDivergenceGrowth times the starting cost.
OptimTrajectory optimize(const Scene &scene, const ControlVector &theta0, const ScalarImage &target,
                         const OptimConfig &config);

}  // namespace adjtrace
