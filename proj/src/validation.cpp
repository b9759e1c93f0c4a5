#include "adjtrace/validation.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adjtrace {

FrozenEnsemble build_ensemble(const Scene &scene, const ControlVector &theta,
                              const ControlVector &target_theta, std::size_t count,
                              std::uint64_t seed, int max_depth) {
    if (count == 0)
        throw std::invalid_argument("build_ensemble: ensemble must hold at least one path");
    FrozenEnsemble e;
    const auto pixels = static_cast<std::size_t>(scene.camera.width) * scene.camera.height;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t pixel = ((2 * i + 1) * pixels) / (2 * count) % pixels;
        const int px = static_cast<int>(pixel % scene.camera.width);
        const int py = static_cast<int>(pixel / scene.camera.width);
        const int sample = static_cast<int>(i / pixels);
        Path p = trace_sample_path(scene, theta, seed, px, py, sample, max_depth);
        Path scratch = p;
        e.targets.push_back(forward_pass(scratch, scene, target_theta));
        e.paths.push_back(std::move(p));
        e.keys.push_back({px, py, sample});
    }
    return e;
}

double ensemble_cost(const FrozenEnsemble &ensemble, const Scene &scene, const ControlVector &theta) {
    double cost = 0;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        Path p = ensemble.paths[i];
        cost += cost_and_adjoint(forward_pass(p, scene, theta), ensemble.targets[i]).first;
    }
    return cost;
}

AdjointResult ensemble_adjoint(const FrozenEnsemble &ensemble, const Scene &scene,
                               const ControlVector &theta) {
    AdjointResult r;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        Path p = ensemble.paths[i];
        const auto [cost, seed] = cost_and_adjoint(forward_pass(p, scene, theta), ensemble.targets[i]);
        r.cost += cost;
        backward_pass(p, scene, seed, theta, r.grad);
    }
    return r;
}

ControlVector quantize(const ControlVector &theta, ControlPrecision precision) {
    if (precision == ControlPrecision::Double)
        return theta;
    ControlVector q;
    for (std::size_t k = 0; k < kNumControls; ++k) {
        // GCC 11 -O3 drops the float round trip on part of a vectorized loop.
        volatile float f = static_cast<float>(theta[k]);
        q[k] = f;
    }
    return q;
}

FdSample fd_gradient_frozen(const FrozenEnsemble &ensemble, const Scene &scene,
                            const ControlVector &theta, std::size_t k, double eps,
                            ControlPrecision precision) {
    if (!(eps > 0))
        throw std::invalid_argument("fd_gradient_frozen: eps must be positive");
    if (k >= kNumControls)
        throw std::out_of_range("fd_gradient_frozen: control index out of range");
    ControlVector plus = quantize(theta, precision);
    ControlVector minus = plus;
    plus[k] += eps;
    minus[k] -= eps;
    plus = quantize(plus, precision);
    minus = quantize(minus, precision);

    FdSample s;
    s.j_plus = ensemble_cost(ensemble, scene, plus);
    s.j_minus = ensemble_cost(ensemble, scene, minus);
    s.step = precision == ControlPrecision::Double ? 2 * eps : plus[k] - minus[k];
    s.fd = s.step == 0 ? 0 : (s.j_plus - s.j_minus) / s.step;
    return s;
}

double relative_error(double value, double reference) {
    if (reference == 0)
        return value == 0 ? 0 : std::numeric_limits<double>::infinity();
    return std::abs(value - reference) / std::abs(reference);
}

std::optional<bool> FdReport::all_pass_at(double eps) const {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (eps_list[i] != eps)
            continue;
        for (const FdRow &row : rows)
            if (!row.entries[i].pass)
                return false;
        return true;
    }
    return std::nullopt;
}

FdReport compare_against(const FrozenEnsemble &ensemble, const Scene &scene,
                         const ControlVector &theta, const AdjointResult &adjoint,
                         const std::vector<double> &eps_list, ControlPrecision precision) {
    if (eps_list.empty())
        throw std::invalid_argument("compare: eps list is empty");
    FdReport report;
    report.cost = adjoint.cost;
    report.eps_list = eps_list;
    report.rows.resize(kNumControls);
    for (std::size_t k = 0; k < kNumControls; ++k) {
        FdRow &row = report.rows[k];
        row.adjoint = adjoint.grad[k];
        for (double eps : eps_list) {
            FdEntry e;
            e.eps = eps;
            e.sample = fd_gradient_frozen(ensemble, scene, theta, k, eps, precision);
            e.rel_err = relative_error(e.sample.fd, row.adjoint);
            e.pass = e.rel_err <= kFdPassRelTol ||
                     (std::abs(e.sample.fd) <= kFdBothSmall && std::abs(row.adjoint) <= kFdBothSmall);
            row.entries.push_back(e);
        }
    }
    return report;
}

FdReport compare(const FrozenEnsemble &ensemble, const Scene &scene, const ControlVector &theta,
                 const std::vector<double> &eps_list, ControlPrecision precision) {
    const ControlVector base = quantize(theta, precision);
    return compare_against(ensemble, scene, base, ensemble_adjoint(ensemble, scene, base), eps_list,
                           precision);
}

std::string format_report(const FdReport &report) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "J = %.6g\ndJ/dtheta =", report.cost);
    out << buf;
    for (const FdRow &row : report.rows) {
        std::snprintf(buf, sizeof buf, " %.6g", row.adjoint);
        out << buf;
    }
    out << "\n----- Numerical gradients -----\n";
    for (std::size_t i = 0; i < report.eps_list.size(); ++i) {
        std::snprintf(buf, sizeof buf, "EPS = %g\n", report.eps_list[i]);
        out << buf;
        std::snprintf(buf, sizeof buf, "%-5s %-14s %-14s %-16s %-16s %-11s %s\n", "k", "J(+)", "J(-)",
                      "fd", "adjoint", "rel_err", "status");
        out << buf;
        for (std::size_t k = 0; k < report.rows.size(); ++k) {
            const FdRow &row = report.rows[k];
            const FdEntry &e = row.entries[i];
            std::snprintf(buf, sizeof buf, "%-5zu %-14.8f %-14.8f %-16.8g %-16.8g %-11.3e %s\n", k + 1,
                          e.sample.j_plus, e.sample.j_minus, e.sample.fd, row.adjoint, e.rel_err,
                          e.pass ? "PASS" : "FAIL");
            out << buf;
        }
        out << "\n";
    }
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        for (const FdEntry &e : report.rows[k].entries) {
            std::snprintf(buf, sizeof buf, "row,%zu,%.17g,%g,%.17g,%.6e,%s\n", k + 1,
                          report.rows[k].adjoint, e.eps, e.sample.fd, e.rel_err,
                          e.pass ? "PASS" : "FAIL");
            out << buf;
        }
    }
    return out.str();
}

GeometricChainResult analytic_geometric(int n, double theta1, double theta2, double e, double target) {
    if (n < 1)
        throw std::invalid_argument("analytic_geometric: N must be >= 1");
    GeometricChainResult r;
    r.radiance = std::pow(theta1, n - 1) * theta2 * e;
    const double residual = r.radiance - target;
    r.cost = 0.5 * residual * residual;
    r.d_theta1 = n == 1 ? 0 : residual * (n - 1) * std::pow(theta1, n - 2) * theta2 * e;
    r.d_theta2 = residual * std::pow(theta1, n - 1) * e;
    return r;
}

GeometricChain build_geometric_chain(int n, double e) {
    if (n < 1)
        throw std::invalid_argument("build_geometric_chain: N must be >= 1");
    GeometricChain c;
    c.scene.materials.push_back(Material::emitter("light", Param::bound(0), e));
    c.scene.materials.push_back(
        Material::lambert("wall", Param::constant(0), Param::bound(6), /*absorb=*/0));
    // Vertices stacked along +z, light travelling toward the receiver along -z.
    for (int k = 0; k < n; ++k) {
        PathVertex v;
        v.hit.t = 1;
        v.hit.point = {0, 0, static_cast<double>(k + 1)};
        v.hit.normal = {0, 0, -1};
        v.hit.material_id = k == n - 1 ? 0 : 1;
        v.dir_in = {0, 0, -1};
        if (k < n - 1) {
            v.dir_out = Vec3{0, 0, 1};
            v.tag = LobeTag::LambertOnly;
            v.u1 = 0.5;
        }
        c.path.vertices.push_back(v);
    }
    c.path.terminal = TerminalKind::Emitter;
    return c;
}

}  // namespace adjtrace
