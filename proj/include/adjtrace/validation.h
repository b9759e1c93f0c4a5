#pragma once

#include "adjtrace/path_engine.h"

#include <cstdint>
#include <string>
#include <vector>

namespace adjtrace {

/// Paths frozen for finite-difference replay: geometry and every sampler uniform are
/// fixed, so the cost over the ensemble is a deterministic function of the controls.
struct FrozenEnsemble {
    struct Key {
        int px = 0, py = 0, sample = 0;
    };
    std::vector<Path> paths;
    std::vector<Key> keys;
    std::vector<double> targets;

    std::size_t size() const { return paths.size(); }
};

/// Traces `count` paths at `theta` from pixels spread evenly over the image
/// (sample index 0) and sets each target to the frozen path's radiance at `target_theta`.
FrozenEnsemble build_ensemble(const Scene &scene, const ControlVector &theta,
                              const ControlVector &target_theta, std::size_t count,
                              std::uint64_t seed, int max_depth = kDefaultMaxDepth);

/// Sum over the ensemble of (L_i - target_i)^2 / 2.
double ensemble_cost(const FrozenEnsemble &ensemble, const Scene &scene, const ControlVector &theta);

struct AdjointResult {
    double cost = 0;
    GradientVector grad{};
};

AdjointResult ensemble_adjoint(const FrozenEnsemble &ensemble, const Scene &scene,
                               const ControlVector &theta);

/// How perturbed controls are materialized before the cost is re-evaluated.
/// Single stores controls as float32, like a renderer with single-precision
/// material parameters; the difference quotient then divides by the step that
/// actually survived rounding, and reports 0 when the step rounds away.
enum class ControlPrecision { Double, Single };

struct FdSample {
    double fd = 0;
    double j_plus = 0, j_minus = 0;
    double step = 0;  // realized (theta+) - (theta-)
};

FdSample fd_gradient_frozen(const FrozenEnsemble &ensemble, const Scene &scene,
                            const ControlVector &theta, std::size_t k, double eps,
                            ControlPrecision precision = ControlPrecision::Double);

ControlVector quantize(const ControlVector &theta, ControlPrecision precision);

inline constexpr double kFdPassRelTol = 1e-3;
inline constexpr double kFdBothSmall = 1e-9;

struct FdEntry {
    double eps = 0;
    FdSample sample;
    double rel_err = 0;
    bool pass = false;
};

struct FdRow {
    double adjoint = 0;
    std::vector<FdEntry> entries;  // one per eps
};

struct FdReport {
    double cost = 0;
    std::vector<double> eps_list;
    std::vector<FdRow> rows;  // kNumControls rows

    /// True iff every control passes at `eps`; nullopt when `eps` is not in the report.
    std::optional<bool> all_pass_at(double eps) const;
};

inline const std::vector<double> kDefaultEpsList = {1e-1, 1e-4, 1e-7, 1e-10};

double relative_error(double value, double reference);

/// Adjoint gradient once over the ensemble, then frozen central differences for every
/// (control, eps) pair.
FdReport compare(const FrozenEnsemble &ensemble, const Scene &scene, const ControlVector &theta,
                 const std::vector<double> &eps_list = kDefaultEpsList,
                 ControlPrecision precision = ControlPrecision::Single);

/// Same as compare() with a caller-supplied adjoint gradient (fault injection).
FdReport compare_against(const FrozenEnsemble &ensemble, const Scene &scene,
                         const ControlVector &theta, const AdjointResult &adjoint,
                         const std::vector<double> &eps_list,
                         ControlPrecision precision = ControlPrecision::Single);

/// Aligned text table followed by machine-readable rows
/// `row,<control>,<adjoint>,<eps>,<fd>,<rel_err>,<PASS|FAIL>`.
std::string format_report(const FdReport &report);

/// Closed form for a straight chain of N vertices: N-1 Lambert bounces of throughput
/// theta1 ending on an emitter of strength theta2 * E.
struct GeometricChainResult {
    double radiance = 0;
    double cost = 0;
    double d_theta1 = 0;
    double d_theta2 = 0;
};

GeometricChainResult analytic_geometric(int n, double theta1, double theta2, double e, double target);

/// Synthetic scene and path realizing the chain above: Lambert diffuse bound to
/// control 7 (no ambient, no roulette), emitter strength bound to control 1 with base E.
struct GeometricChain {
    Scene scene;
    Path path;
};

GeometricChain build_geometric_chain(int n, double e);

}  // namespace adjtrace
