#pragma once

#include "adjtrace/geometry.h"

#include <optional>

namespace adjtrace {

/// Floor applied to sin(theta_m) inside dsin_dalpha.
inline constexpr double kSinClamp = 1e-6;

struct LobeSample {
    Vec3 dir;
    double u1 = 0, u2 = 0;
};

/// Inverse of the cosine-weighted Phong CDF P(theta) = 1 - cos(theta)^(alpha+2).
/// Throws std::domain_error for alpha < 0 or u outside [0, 1).
double cdf_inverse_phong(double alpha, double u);

/// Phong CDF P(theta) = 1 - cos(theta)^(alpha+2).
double cdf_phong(double alpha, double theta);

/// Cosine-power lobe around frame.z: z = u1^(1/(alpha+2)), phi = 2 pi u2.
/// alpha = 0 is the cosine-weighted (Lambert) sampler.
LobeSample sample_cosine_lobe(const Frame &frame, double alpha, double u1, double u2);

/// Samples a half vector from the lobe around `normal` and reflects `incoming`
/// about it. `incoming` points away from the surface. Returns nullopt when the
/// reflected direction lies on or below the horizon.
std::optional<Vec3> sample_phong_reflection(const Vec3 &normal, const Vec3 &incoming, double alpha,
                                            double u1, double u2);

/// sin(theta_m) = sqrt(1 - u1^(2/(alpha+2))) for the half vector drawn from u1.
double sin_m_of(double alpha, double u1);

/// d sin(theta_m) / d alpha at fixed u1:
///   cos^2(theta_m) log(cos theta_m) / ((alpha+2) sin theta_m),
/// with sin(theta_m) floored at kSinClamp.
double dsin_dalpha(double alpha, double u1);

}  // namespace adjtrace
