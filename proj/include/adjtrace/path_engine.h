#pragma once

#include "adjtrace/geometry.h"
#include "adjtrace/image.h"
#include "adjtrace/material.h"
#include "adjtrace/rng.h"
#include "adjtrace/scene.h"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace adjtrace {

inline constexpr int kDefaultMaxDepth = 16;

enum class TerminalKind { Emitter, Absorbed, Escaped, MaxDepth, BelowHorizon };

const char *to_string(TerminalKind kind);

struct PathVertex {
    Hit hit;
    Vec3 dir_in;                 // toward the previous vertex
    std::optional<Vec3> dir_out; // sampled continuation, absent on a terminal vertex
    LobeTag tag = LobeTag::None;
    double u1 = 0, u2 = 0;
    double stored_radiance = 0;  // radiance arriving along dir_out, set by forward_pass

    VertexState state() const { return {hit.normal, dir_in, dir_out, tag, u1}; }
};

/// Vertex 0 is the first hit seen from the receiver. Every vertex except the last
/// has a continuation; an Escaped path's last vertex also has one (into the void).
struct Path {
    std::vector<PathVertex> vertices;
    TerminalKind terminal = TerminalKind::Escaped;

    /// Number of vertices that scattered light toward the receiver.
    std::size_t scattering_count() const {
        if (vertices.empty())
            return 0;
        return terminal == TerminalKind::Escaped ? vertices.size() : vertices.size() - 1;
    }
};

/// Optional instrumentation of the per-vertex throughput factors used by a pass,
/// in the order the pass applies them.
struct PassTrace {
    std::vector<double> factors;
};

Path make_path(const Ray &primary, const Scene &scene, const ControlVector &theta, RngStream &rng,
               int max_depth = kDefaultMaxDepth);

/// Radiance at the receiver. Stores the downstream radiance at every vertex.
double forward_pass(Path &path, const Scene &scene, const ControlVector &theta,
                    PassTrace *trace = nullptr);

/// Propagates `adjoint_seed` from the receiver toward the emitter and accumulates
/// dJ/dtheta into `grad`. Requires a prior forward_pass on `path`.
void backward_pass(const Path &path, const Scene &scene, double adjoint_seed,
                   const ControlVector &theta, GradientVector &grad, PassTrace *trace = nullptr);

/// J = (radiance - target)^2 / 2 and dJ/dL.
std::pair<double, double> cost_and_adjoint(double radiance, double target);

struct TraceOptions {
    int spp = 16;
    std::uint64_t seed = 42;
    int max_depth = kDefaultMaxDepth;
    int threads = 1;
    bool compute_gradients = false;
    /// Keep the per-pixel contribution to each gradient entry.
    bool gradient_images = false;
};

struct TraceOutput {
    ScalarImage image;
    double cost = 0;
    GradientVector grad{};
    std::int64_t sample_count = 0;
    std::int64_t vertex_count = 0;
    std::vector<ScalarImage> grad_images;  // kNumControls entries when requested
};

/// Replays the path for one (pixel, sample) key exactly as trace_image builds it.
Path trace_sample_path(const Scene &scene, const ControlVector &theta, std::uint64_t seed, int px,
                       int py, int sample, int max_depth = kDefaultMaxDepth);

/// Renders the scene. With gradients on, each pixel's cost is J = (mean - target)^2 / 2
/// over its spp samples, and every sample path is back-propagated with seed
/// (mean - target) / spp. Results are independent of the worker count.
TraceOutput trace_image(const Scene &scene, const ControlVector &theta, const TraceOptions &opts,
                        const ScalarImage *target = nullptr);

}  // namespace adjtrace
