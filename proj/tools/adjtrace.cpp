// adjtrace: render, differentiate, validate and optimize scenes with the
// adjoint path tracer.
//
// Exit codes: 0 success, 1 usage or input error, 2 validation failure,
// 3 numerical divergence.

#include "adjtrace/adjoint_algebra.h"
#include "adjtrace/image_io.h"
#include "adjtrace/optimizer.h"
#include "adjtrace/path_engine.h"
#include "adjtrace/scene_io.h"
#include "adjtrace/validation.h"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace adjtrace;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidationFail = 2, kDiverged = 3 };

struct CommonArgs {
    std::string scene_path;
    bool cornell = false;
    std::uint64_t seed = 42;
    int spp = 16;
    std::vector<int> resolution;
    int threads = 1;
    int max_depth = kDefaultMaxDepth;
    std::vector<double> theta;
    std::string output = "out";
};

void add_common(CLI::App *app, CommonArgs &a, bool with_output = true) {
    auto *scene = app->add_option("--scene", a.scene_path, "Scene file");
    auto *cornell = app->add_flag("--cornell", a.cornell, "Use the built-in Cornell box");
    scene->excludes(cornell);
    app->add_option("--seed", a.seed, "Global RNG seed")->capture_default_str();
    app->add_option("--spp", a.spp, "Samples per pixel")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--res", a.resolution, "Resolution override: W H")->expected(2);
    app->add_option("--threads", a.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--max-depth", a.max_depth, "Maximum path length")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--theta", a.theta, "Controls theta1..theta7")->expected(7);
    if (with_output)
        app->add_option("-o,--output", a.output, "Output path prefix")->capture_default_str();
}

Scene load_scene(const CommonArgs &a) {
    Scene scene;
    if (a.cornell) {
        scene = build_cornell_box();
    } else {
        if (a.scene_path.empty())
            throw CLI::ValidationError("scene", "either --scene FILE or --cornell is required");
        const Bytes bytes = read_file(a.scene_path);
        scene = parse_scene(std::string(bytes.begin(), bytes.end()));
    }
    if (!a.resolution.empty()) {
        scene.camera.width = a.resolution[0];
        scene.camera.height = a.resolution[1];
        if (scene.camera.width < 1 || scene.camera.height < 1)
            throw CLI::ValidationError("--res", "resolution must be at least 1x1");
    }
    if (!a.theta.empty())
        std::copy(a.theta.begin(), a.theta.end(), scene.theta.begin());
    return scene;
}

TraceOptions trace_options(const CommonArgs &a) {
    TraceOptions o;
    o.spp = a.spp;
    o.seed = a.seed;
    o.threads = a.threads;
    o.max_depth = a.max_depth;
    return o;
}

ControlVector to_controls(const std::vector<double> &v, const ControlVector &fallback) {
    ControlVector c = fallback;
    if (!v.empty())
        std::copy(v.begin(), v.end(), c.begin());
    return c;
}

void write_image_pair(const std::string &prefix, const ScalarImage &img, bool signed_preview,
                      double gamma = 2.2) {
    write_file(prefix + ".pfm", write_pfm(img));
    write_file(prefix + ".ppm", signed_preview ? gradient_preview(img) : write_ppm_preview(img, gamma));
}

void print_theta(const char *label, const ControlVector &t) {
    std::printf("%s", label);
    for (double v : t)
        std::printf(" %.9g", v);
    std::printf("\n");
}

// Target image either from file or rendered in-process at target_theta with the same seed.
struct TargetArgs {
    std::string path;
    bool self = false;
    std::vector<double> theta;
};

void add_target(CLI::App *app, TargetArgs &t) {
    auto *file = app->add_option("--target", t.path, "Target radiance PFM");
    auto *self = app->add_flag("--target-self", t.self, "Render the target in-process");
    file->excludes(self);
    app->add_option("--target-theta", t.theta, "Controls for --target-self (default: current)")->expected(7);
}

ScalarImage load_target(const TargetArgs &t, const Scene &scene, const TraceOptions &opts) {
    if (t.self) {
        TraceOptions o = opts;
        o.compute_gradients = false;
        return trace_image(scene, to_controls(t.theta, scene.theta), o).image;
    }
    if (t.path.empty())
        throw CLI::ValidationError("target", "either --target FILE or --target-self is required");
    return read_pfm(read_file(t.path));
}

int run_render(const CommonArgs &a, double gamma) {
    const Scene scene = load_scene(a);
    const auto start = std::chrono::steady_clock::now();
    const TraceOutput out = trace_image(scene, scene.theta, trace_options(a));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_image_pair(a.output, out.image, false, gamma);
    std::printf("paths traced: %lld\nmean depth: %.4f\nwall time: %.3f s\nwrote %s.pfm %s.ppm\n",
                static_cast<long long>(out.sample_count),
                static_cast<double>(out.vertex_count) / static_cast<double>(out.sample_count), secs,
                a.output.c_str(), a.output.c_str());
    return kOk;
}

int run_gradients(const CommonArgs &a, const TargetArgs &t) {
    const Scene scene = load_scene(a);
    TraceOptions opts = trace_options(a);
    const ScalarImage target = load_target(t, scene, opts);
    opts.compute_gradients = true;
    opts.gradient_images = true;
    const TraceOutput out = trace_image(scene, scene.theta, opts, &target);
    write_image_pair(a.output, out.image, false);
    for (std::size_t k = 0; k < kNumControls; ++k)
        write_image_pair(a.output + "_grad" + std::to_string(k + 1), out.grad_images[k], true);
    std::printf("J = %.9g\ndJ/dtheta =", out.cost);
    for (double g : out.grad)
        std::printf(" %.9g", g);
    std::printf("\nwrote %s.pfm and %s_grad{1..7}.pfm (+ .ppm previews)\n", a.output.c_str(),
                a.output.c_str());
    return kOk;
}

int run_validate(const CommonArgs &a, int ensemble_size, bool single_path,
                 std::vector<double> eps_list, const std::vector<double> &target_theta,
                 const std::string &precision) {
    const Scene scene = load_scene(a);
    ControlVector target = scene.theta;
    for (double &v : target)
        v *= 0.8;
    target = to_controls(target_theta, target);
    if (single_path)
        ensemble_size = 1;
    if (ensemble_size < 1)
        throw CLI::ValidationError("--ensemble", "ensemble size must be >= 1");
    const FrozenEnsemble ensemble =
        build_ensemble(scene, scene.theta, target, static_cast<std::size_t>(ensemble_size), a.seed,
                       a.max_depth);
    const ControlPrecision prec =
        precision == "double" ? ControlPrecision::Double : ControlPrecision::Single;
    const FdReport report = compare(ensemble, scene, scene.theta, eps_list, prec);
    std::printf("frozen ensemble: %zu path(s), control storage: %s\n", ensemble.size(),
                precision.c_str());
    std::fputs(format_report(report).c_str(), stdout);
    const auto verdict = report.all_pass_at(1e-4);
    if (!verdict) {
        std::printf("eps = 1e-4 not requested; no pass/fail verdict\n");
        return kOk;
    }
    std::printf("eps = 1e-4 verdict: %s\n", *verdict ? "PASS" : "FAIL");
    return *verdict ? kOk : kValidationFail;
}

struct OptimizeArgs {
    double lr = 1e-4;
    int iterations = 200;
    double reg = 0;
    std::vector<int> active;
    bool reseed = false;
    std::string trajectory;
    std::string scene_out;
};

int run_optimize(const CommonArgs &a, const TargetArgs &t, const OptimizeArgs &o) {
    Scene scene = load_scene(a);
    OptimConfig config;
    config.learning_rate = o.lr;
    config.iterations = o.iterations;
    config.regularization = o.reg;
    config.trace = trace_options(a);
    config.reseed_each_iteration = o.reseed;
    if (!o.active.empty()) {
        config.active.fill(false);
        for (int k : o.active) {
            if (k < 1 || k > static_cast<int>(kNumControls))
                throw CLI::ValidationError("--active", "control index must lie in 1..7");
            config.active[static_cast<std::size_t>(k - 1)] = true;
        }
    }
    const ScalarImage target = load_target(t, scene, config.trace);
    const std::string traj_path = o.trajectory.empty() ? a.output + "_trajectory.csv" : o.trajectory;
    const std::string scene_path = o.scene_out.empty() ? a.output + "_final.scene" : o.scene_out;

    OptimTrajectory traj;
    try {
        traj = optimize(scene, scene.theta, target, config);
    } catch (const DivergenceError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDiverged;
    }
    const std::string csv = traj.to_csv();
    write_file(traj_path, Bytes(csv.begin(), csv.end()));
    scene.theta = traj.final_theta;
    const std::string text = serialize_scene(scene);
    write_file(scene_path, Bytes(text.begin(), text.end()));

    const OptimRecord &last = traj.records.back();
    std::printf("iterations: %zu%s\nfinal J: %.9g\n", traj.records.size(),
                traj.converged ? " (converged)" : "", last.cost);
    print_theta("final theta:", traj.final_theta);
    std::printf("wrote %s %s\n", traj_path.c_str(), scene_path.c_str());
    return kOk;
}

int run_adjoint_check(const algebra::CheckOptions &opts) {
    std::vector<algebra::CheckLine> lines;
    try {
        lines = algebra::run_algebra_checks(opts);
    } catch (const algebra::NonConvergence &e) {
        std::printf("non-convergence: %s\n", e.what());
        return kDiverged;
    }
    bool ok = true;
    for (const auto &l : lines) {
        std::printf("%-48s max %.3e  tol %.1e  %s\n", l.name.c_str(), l.worst, l.tolerance,
                    l.pass() ? "PASS" : "FAIL");
        ok = ok && l.pass();
    }
    return ok ? kOk : kValidationFail;
}

int run_dump_path(const CommonArgs &a, int px, int py, int sample) {
    const Scene scene = load_scene(a);
    const int w = scene.camera.width, h = scene.camera.height;
    if (px < 0 || px >= w || py < 0 || py >= h) {
        std::fprintf(stderr, "error: pixel (%d, %d) outside image bounds [0, %d) x [0, %d)\n", px, py,
                     w, h);
        return kUsage;
    }
    Path path = trace_sample_path(scene, scene.theta, a.seed, px, py, sample, a.max_depth);
    const double radiance = forward_pass(path, scene, scene.theta);
    std::printf("pixel (%d, %d) sample %d: %zu vertices, radiance %.9g\n", px, py, sample,
                path.vertices.size(), radiance);
    for (std::size_t k = 0; k < path.vertices.size(); ++k) {
        const PathVertex &v = path.vertices[k];
        const Material &m = scene.materials[v.hit.material_id];
        const bool scatters = k < path.scattering_count();
        const double throughput =
            scatters ? bsdf_d_pdf(m, v.state(), scene.theta) / (1 - m.absorb) : 0.0;
        std::printf("  [%zu] %-8s pos (%.4f, %.4f, %.4f) n (%.4f, %.4f, %.4f) lobe %-11s "
                    "u1 %.6f u2 %.6f throughput %.6g radiance %.6g\n",
                    k, m.name.c_str(), v.hit.point.x, v.hit.point.y, v.hit.point.z, v.hit.normal.x,
                    v.hit.normal.y, v.hit.normal.z, to_string(v.tag), v.u1, v.u2, throughput,
                    v.stored_radiance);
    }
    std::printf("terminal: %s\n", to_string(path.terminal));
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adjoint path tracer: radiance, exact control gradients, FD validation"};
    app.require_subcommand(1);

    CommonArgs common;
    TargetArgs target;

    auto *render = app.add_subcommand("render", "Render a radiance image");
    add_common(render, common);
    double gamma = 2.2;
    render->add_option("--gamma", gamma, "Preview gamma")->capture_default_str()->check(CLI::PositiveNumber);

    auto *gradients = app.add_subcommand("gradients", "Per-control gradient images");
    add_common(gradients, common);
    add_target(gradients, target);

    auto *validate = app.add_subcommand("validate", "Adjoint vs finite differences on frozen paths");
    add_common(validate, common, false);
    int ensemble_size = 64;
    bool single_path = false;
    std::vector<double> eps_list = kDefaultEpsList;
    std::vector<double> validate_target;
    std::string precision = "single";
    validate->add_option("--ensemble", ensemble_size, "Frozen ensemble size")->capture_default_str();
    validate->add_flag("--single-path", single_path, "Compare on one path");
    validate->add_option("--eps", eps_list, "Perturbation sizes");
    validate->add_option("--target-theta", validate_target, "Controls that define the targets (default 0.8 theta)")
        ->expected(7);
    validate->add_option("--precision", precision, "Control storage for FD: single|double")
        ->check(CLI::IsMember({"single", "double"}))
        ->capture_default_str();

    auto *opt = app.add_subcommand("optimize", "Gradient-descent inverse rendering");
    add_common(opt, common);
    add_target(opt, target);
    OptimizeArgs oargs;
    opt->add_option("--lr", oargs.lr, "Learning rate")->capture_default_str();
    opt->add_option("--iters", oargs.iterations, "Iteration budget")->capture_default_str();
    opt->add_option("--reg", oargs.reg, "Tikhonov regularization weight")->capture_default_str();
    opt->add_option("--active", oargs.active, "Controls to optimize (1-based; default all)");
    opt->add_flag("--reseed", oargs.reseed, "New seed every iteration");
    opt->add_option("--trajectory", oargs.trajectory, "Trajectory CSV path");
    opt->add_option("--scene-out", oargs.scene_out, "Scene copy with the final theta");

    auto *check = app.add_subcommand("adjoint-check", "Randomized operator-algebra checks");
    algebra::CheckOptions check_opts;
    check->add_option("--seed", check_opts.seed, "RNG seed")->capture_default_str();
    check->add_option("--dim", check_opts.dim, "Operator dimension")->capture_default_str()->check(CLI::PositiveNumber);
    check->add_option("--trials", check_opts.trials, "Random instances")->capture_default_str()->check(CLI::PositiveNumber);
    check->add_flag("--inject-noncontractive", check_opts.inject_noncontractive,
                    "Use a non-contractive transport operator");

    auto *dump = app.add_subcommand("dump-path", "Print one path vertex by vertex");
    add_common(dump, common, false);
    int px = 0, py = 0, sample = 0;
    dump->add_option("--px", px, "Pixel column")->required();
    dump->add_option("--py", py, "Pixel row")->required();
    dump->add_option("--sample", sample, "Sample index")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*render)
            return run_render(common, gamma);
        if (*gradients)
            return run_gradients(common, target);
        if (*validate)
            return run_validate(common, ensemble_size, single_path, eps_list, validate_target, precision);
        if (*opt)
            return run_optimize(common, target, oargs);
        if (*check)
            return run_adjoint_check(check_opts);
        if (*dump)
            return run_dump_path(common, px, py, sample);
    } catch (const CLI::ValidationError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
