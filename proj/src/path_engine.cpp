#include "adjtrace/path_engine.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace adjtrace {

const char *to_string(TerminalKind kind) {
    switch (kind) {
    case TerminalKind::Emitter: return "Emitter";
    case TerminalKind::Absorbed: return "Absorbed";
    case TerminalKind::Escaped: return "Escaped";
    case TerminalKind::MaxDepth: return "MaxDepth";
    case TerminalKind::BelowHorizon: return "BelowHorizon";
    }
    return "?";
}

Path make_path(const Ray &primary, const Scene &scene, const ControlVector &theta, RngStream &rng,
               int max_depth) {
    if (max_depth < 1)
        throw std::invalid_argument("make_path: max_depth must be >= 1");
    Path path;
    Ray ray = primary;
    for (;;) {
        const auto hit = intersect_scene(ray, scene);
        if (!hit) {
            path.terminal = TerminalKind::Escaped;
            return path;
        }
        const Material &m = scene.materials[hit->material_id];
        PathVertex v;
        v.hit = *hit;
        v.dir_in = -ray.dir;

        const double u = rng.next();
        if (u < m.absorb) {
            path.terminal = m.kind == MaterialKind::Emitter ? TerminalKind::Emitter
                                                            : TerminalKind::Absorbed;
            path.vertices.push_back(v);
            return path;
        }
        if (static_cast<int>(path.vertices.size()) + 1 >= max_depth) {
            path.terminal = TerminalKind::MaxDepth;
            path.vertices.push_back(v);
            return path;
        }
        const ScatterSample s = sample_direction(m, v.hit.normal, v.dir_in, theta, rng);
        v.tag = s.tag;
        v.u1 = s.u1;
        v.u2 = s.u2;
        v.dir_out = s.dir;
        path.vertices.push_back(v);
        if (!s.dir) {
            path.terminal = TerminalKind::BelowHorizon;
            return path;
        }
        ray = Ray{v.hit.point, *s.dir, ray.depth + 1};
    }
}

namespace {

double continuation_weight(const Material &m) { return 1 / (1 - m.absorb); }

}  // namespace

double forward_pass(Path &path, const Scene &scene, const ControlVector &theta, PassTrace *trace) {
    if (path.vertices.empty())
        return 0;
    double radiance = 0;
    if (path.terminal == TerminalKind::Emitter) {
        PathVertex &last = path.vertices.back();
        const Material &m = scene.materials[last.hit.material_id];
        radiance = emitted(m, theta) / m.absorb;
        last.stored_radiance = radiance;
    } else if (path.terminal != TerminalKind::Escaped) {
        path.vertices.back().stored_radiance = 0;
    }
    for (std::size_t k = path.scattering_count(); k-- > 0;) {
        PathVertex &v = path.vertices[k];
        const Material &m = scene.materials[v.hit.material_id];
        v.stored_radiance = radiance;
        const double factor = bsdf_d_pdf(m, v.state(), theta) * continuation_weight(m);
        if (trace)
            trace->factors.push_back(factor);
        radiance = ambient_of(m, theta) + factor * radiance;
    }
    return radiance;
}

void backward_pass(const Path &path, const Scene &scene, double adjoint_seed,
                   const ControlVector &theta, GradientVector &grad, PassTrace *trace) {
    double adjoint = adjoint_seed;
    const std::size_t n = path.scattering_count();
    for (std::size_t k = 0; k < n; ++k) {
        const PathVertex &v = path.vertices[k];
        const Material &m = scene.materials[v.hit.material_id];
        const double w = continuation_weight(m);
        const VertexState st = v.state();
        accumulate_gradients(m, st, v.stored_radiance * w, adjoint, theta, grad);
        const double factor = bsdf_d_pdf(m, st, theta) * w;
        if (trace)
            trace->factors.push_back(factor);
        adjoint *= factor;
    }
    if (path.terminal == TerminalKind::Emitter)
        accumulate_emission_gradient(scene.materials[path.vertices.back().hit.material_id], adjoint,
                                     grad);
}

std::pair<double, double> cost_and_adjoint(double radiance, double target) {
    const double r = radiance - target;
    return {0.5 * r * r, r};
}

Path trace_sample_path(const Scene &scene, const ControlVector &theta, std::uint64_t seed, int px,
                       int py, int sample, int max_depth) {
    const auto pixel = static_cast<std::uint64_t>(py) * scene.camera.width + px;
    RngStream rng(seed, pixel, static_cast<std::uint64_t>(sample));
    const double jx = rng.next();
    const double jy = rng.next();
    return make_path(scene.camera.generate_ray(px, py, jx, jy), scene, theta, rng, max_depth);
}

namespace {

struct PixelResult {
    double radiance = 0;
    double cost = 0;
    GradientVector grad{};
    std::int64_t vertices = 0;
};

PixelResult trace_pixel(const Scene &scene, const ControlVector &theta, const TraceOptions &opts,
                        int px, int py, const ScalarImage *target, std::vector<Path> &paths) {
    PixelResult out;
    paths.clear();
    double sum = 0;
    for (int s = 0; s < opts.spp; ++s) {
        Path p = trace_sample_path(scene, theta, opts.seed, px, py, s, opts.max_depth);
        sum += forward_pass(p, scene, theta);
        out.vertices += static_cast<std::int64_t>(p.vertices.size());
        if (opts.compute_gradients)
            paths.push_back(std::move(p));
    }
    out.radiance = sum / opts.spp;
    if (opts.compute_gradients) {
        const auto [cost, dcost] = cost_and_adjoint(out.radiance, target->at(px, py));
        out.cost = cost;
        const double seed = dcost / opts.spp;
        for (const Path &p : paths)
            backward_pass(p, scene, seed, theta, out.grad);
    }
    return out;
}

}  // namespace

TraceOutput trace_image(const Scene &scene, const ControlVector &theta, const TraceOptions &opts,
                        const ScalarImage *target) {
    const int w = scene.camera.width;
    const int h = scene.camera.height;
    if (opts.spp < 1)
        throw std::invalid_argument("trace_image: spp must be >= 1");
    if (opts.compute_gradients) {
        if (!target)
            throw std::invalid_argument("trace_image: gradients requested without a target image");
        if (target->width != w || target->height != h)
            throw std::invalid_argument(
                "trace_image: target resolution " + std::to_string(target->width) + "x" +
                std::to_string(target->height) + " does not match camera " + std::to_string(w) +
                "x" + std::to_string(h));
    }

    std::vector<PixelResult> results(static_cast<std::size_t>(w) * h);
    const int workers = std::max(1, std::min(opts.threads, h));
    auto run_rows = [&](int first) {
        std::vector<Path> paths;
        for (int y = first; y < h; y += workers)
            for (int x = 0; x < w; ++x)
                results[static_cast<std::size_t>(y) * w + x] =
                    trace_pixel(scene, theta, opts, x, y, target, paths);
    };
    if (workers == 1) {
        run_rows(0);
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i)
            pool.emplace_back(run_rows, i);
    }

    // Fixed pixel-order reduction keeps the output independent of the worker count.
    TraceOutput out;
    out.image = ScalarImage(w, h);
    if (opts.compute_gradients && opts.gradient_images)
        out.grad_images.assign(kNumControls, ScalarImage(w, h));
    for (std::size_t i = 0; i < results.size(); ++i) {
        const PixelResult &r = results[i];
        out.image.data[i] = r.radiance;
        out.vertex_count += r.vertices;
        if (!opts.compute_gradients)
            continue;
        out.cost += r.cost;
        for (std::size_t k = 0; k < kNumControls; ++k) {
            out.grad[k] += r.grad[k];
            if (opts.gradient_images)
                out.grad_images[k].data[i] = r.grad[k];
        }
    }
    out.sample_count = static_cast<std::int64_t>(w) * h * opts.spp;
    return out;
}

}  // namespace adjtrace
