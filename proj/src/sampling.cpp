#include "adjtrace/sampling.h"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adjtrace {

namespace {

void check_alpha(double alpha, const char *who) {
    if (!(alpha >= 0))
        throw std::domain_error(std::string(who) + ": exponent must be >= 0, got " +
                                std::to_string(alpha));
}

}  // namespace

double cdf_inverse_phong(double alpha, double u) {
    check_alpha(alpha, "cdf_inverse_phong");
    if (!(u >= 0 && u < 1))
        throw std::domain_error("cdf_inverse_phong: u must lie in [0, 1), got " + std::to_string(u));
    return std::acos(std::pow(1 - u, 1 / (alpha + 2)));
}

double cdf_phong(double alpha, double theta) {
    check_alpha(alpha, "cdf_phong");
    return 1 - std::pow(std::cos(theta), alpha + 2);
}

LobeSample sample_cosine_lobe(const Frame &frame, double alpha, double u1, double u2) {
    const double t = std::pow(u1, 2 / (alpha + 2));
    const double z = std::sqrt(t);
    const double r = std::sqrt(std::max(0.0, 1 - t));
    const double phi = 2 * std::numbers::pi * u2;
    const Vec3 local(std::cos(phi) * r, std::sin(phi) * r, z);
    return {frame.to_world(local), u1, u2};
}

std::optional<Vec3> sample_phong_reflection(const Vec3 &normal, const Vec3 &incoming, double alpha,
                                            double u1, double u2) {
    Vec3 half = sample_cosine_lobe(make_frame(normal), alpha, u1, u2).dir;
    if (dot(half, incoming) < 0)
        half = 2 * dot(half, normal) * normal - half;
    const Vec3 out = 2 * dot(half, incoming) * half - incoming;
    if (dot(out, normal) <= 0)
        return std::nullopt;
    return out;
}

double sin_m_of(double alpha, double u1) {
    check_alpha(alpha, "sin_m_of");
    if (!(u1 > 0 && u1 < 1))
        throw std::domain_error("sin_m_of: u1 must lie in (0, 1), got " + std::to_string(u1));
    return std::sqrt(-std::expm1(2 * std::log(u1) / (alpha + 2)));
}

double dsin_dalpha(double alpha, double u1) {
    const double log_cos = std::log(u1) / (alpha + 2);
    const double cos2 = std::exp(2 * log_cos);
    const double sin_m = std::max(kSinClamp, std::sqrt(std::max(0.0, -std::expm1(2 * log_cos))));
    return cos2 * log_cos / ((alpha + 2) * sin_m);
}

}  // namespace adjtrace
