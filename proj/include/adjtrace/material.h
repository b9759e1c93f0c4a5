#pragma once

#include "adjtrace/geometry.h"
#include "adjtrace/rng.h"

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace adjtrace {

inline constexpr std::size_t kNumControls = 7;

/// The optimizable controls, indexed 0..6 here and 1..7 in scene files and reports:
/// emission (M1); ambient, diffuse, specular, exponent (M2); ambient, diffuse (M3).
using ControlVector = std::array<double, kNumControls>;
using GradientVector = std::array<double, kNumControls>;

/// Probability of choosing the specular lobe at a Phong-Blinn vertex.
inline constexpr double kSpecularLobeProbability = 0.5;

/// A material parameter: either a constant or a binding to a control (0-based).
struct Param {
    double value = 0;
    std::optional<std::size_t> control;

    static Param constant(double v) { return {v, std::nullopt}; }
    static Param bound(std::size_t k) { return {0, k}; }

    double eval(const ControlVector &theta) const { return control ? theta[*control] : value; }
    bool operator==(const Param &) const = default;
};

enum class MaterialKind { Emitter, PhongBlinn, Lambert };

enum class LobeTag { None, Diffuse, Specular, LambertOnly };

const char *to_string(MaterialKind kind);
const char *to_string(LobeTag tag);

struct Material {
    std::string name;
    MaterialKind kind = MaterialKind::Lambert;
    Param emission;  // Emitter
    double base_emission = 1;
    Param ambient;   // PhongBlinn, Lambert
    Param diffuse;   // PhongBlinn, Lambert
    Param specular;  // PhongBlinn
    Param exponent;  // PhongBlinn
    /// Russian-roulette termination probability. Emitters use 1.
    double absorb = 1;

    static Material emitter(std::string name, Param emission, double base);
    static Material phong(std::string name, Param ambient, Param diffuse, Param specular,
                          Param exponent, double absorb);
    static Material lambert(std::string name, Param ambient, Param diffuse, double absorb);

    bool reflective() const { return kind != MaterialKind::Emitter; }
};

/// Scattering decision at a vertex, kept for replay.
struct ScatterSample {
    std::optional<Vec3> dir;
    LobeTag tag = LobeTag::None;
    double u1 = 0, u2 = 0;
};

/// Vertex quantities needed to re-evaluate throughput and its derivatives.
struct VertexState {
    Vec3 normal;
    Vec3 dir_in;
    std::optional<Vec3> dir_out;
    LobeTag tag = LobeTag::None;
    double u1 = 0;
};

double emitted(const Material &m, const ControlVector &theta);

/// Draws the continuation direction. `incoming` points from the surface toward the
/// previous vertex.
ScatterSample sample_direction(const Material &m, const Vec3 &normal, const Vec3 &incoming,
                               const ControlVector &theta, RngStream &rng);

/// BSDF x cosine / PDF for the sampled lobe, including the lobe-selection weight.
double bsdf_d_pdf(const Material &m, const VertexState &v, const ControlVector &theta);

double ambient_of(const Material &m, const ControlVector &theta);

/// Adds d(throughput)/d(theta) * radiance * adjoint for every bound parameter, plus
/// the ambient term's adjoint. `radiance` already carries the continuation weight.
void accumulate_gradients(const Material &m, const VertexState &v, double radiance, double adjoint,
                          const ControlVector &theta, GradientVector &grad);

/// Terminal emitter gradient: d(emitted/absorb)/d(theta) * adjoint.
void accumulate_emission_gradient(const Material &m, double adjoint, GradientVector &grad);

}  // namespace adjtrace
