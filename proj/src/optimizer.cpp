#include "adjtrace/optimizer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace adjtrace {

void OptimConfig::validate() const {
    if (!(learning_rate > 0))
        throw std::invalid_argument("learning rate must be positive");
    if (iterations < 0)
        throw std::invalid_argument("iteration count must be non-negative");
    if (!(regularization >= 0))
        throw std::invalid_argument("regularization must be non-negative");
    for (std::size_t k = 0; k < kNumControls; ++k)
        if (!(lower[k] <= upper[k]))
            throw std::invalid_argument("lower bound exceeds upper bound for control " +
                                        std::to_string(k + 1));
}

CostAndGradient total_cost_and_grad(const Scene &scene, const ControlVector &theta,
                                    const ScalarImage &target, const OptimConfig &config) {
    TraceOptions opts = config.trace;
    opts.compute_gradients = true;
    const TraceOutput out = trace_image(scene, theta, opts, &target);
    CostAndGradient r;
    r.cost = out.cost;
    r.grad = out.grad;
    if (config.regularization != 0) {
        double sq = 0;
        for (std::size_t k = 0; k < kNumControls; ++k) {
            sq += theta[k] * theta[k];
            r.grad[k] += config.regularization * theta[k];
        }
        r.cost += 0.5 * config.regularization * sq;
    }
    return r;
}

ControlVector gd_step(const ControlVector &theta, const GradientVector &grad,
                      const OptimConfig &config) {
    ControlVector next = theta;
    for (std::size_t k = 0; k < kNumControls; ++k)
        if (config.active[k])
            next[k] = std::clamp(theta[k] - config.learning_rate * grad[k], config.lower[k],
                                 config.upper[k]);
    return next;
}

double active_grad_norm(const GradientVector &grad, const OptimConfig &config) {
    double sq = 0;
    for (std::size_t k = 0; k < kNumControls; ++k)
        if (config.active[k])
            sq += grad[k] * grad[k];
    return std::sqrt(sq);
}

OptimTrajectory optimize(const Scene &scene, const ControlVector &theta0, const ScalarImage &target,
                         const OptimConfig &config) {
    config.validate();
    OptimTrajectory traj;
    ControlVector theta = theta0;
    OptimConfig iter_config = config;
    double first_cost = 0;
    for (int it = 0; it < config.iterations; ++it) {
        if (config.reseed_each_iteration)
            iter_config.trace.seed = config.trace.seed + static_cast<std::uint64_t>(it);
        const CostAndGradient cg = total_cost_and_grad(scene, theta, target, iter_config);
        const double gnorm = active_grad_norm(cg.grad, config);
        if (!std::isfinite(cg.cost) || !std::isfinite(gnorm)) {
            traj.final_theta = theta;
            throw DivergenceError("optimization diverged at iteration " + std::to_string(it) +
                                  " (non-finite cost or gradient; learning rate too large?)");
        }
        if (it == 0)
            first_cost = cg.cost;
        else if (first_cost > 0 && cg.cost > kDivergenceGrowth * first_cost) {
            traj.final_theta = theta;
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "optimization diverged at iteration %d (cost grew from %.6g to %.6g; "
                          "learning rate too large?)",
                          it, first_cost, cg.cost);
            throw DivergenceError(msg);
        }
        traj.records.push_back({it, theta, cg.cost, gnorm});
        if (gnorm <= 1e-9 || cg.cost <= 1e-12) {
            traj.converged = true;
            break;
        }
        theta = gd_step(theta, cg.grad, config);
    }
    traj.final_theta = theta;
    return traj;
}

std::string OptimTrajectory::to_csv() const {
    std::ostringstream out;
    out << "iteration,J_total,theta1,theta2,theta3,theta4,theta5,theta6,theta7,grad_norm\n";
    char buf[64];
    for (const OptimRecord &r : records) {
        out << r.iteration;
        std::snprintf(buf, sizeof buf, ",%.17g", r.cost);
        out << buf;
        for (double v : r.theta) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g\n", r.grad_norm);
        out << buf;
    }
    return out.str();
}

}  // namespace adjtrace
