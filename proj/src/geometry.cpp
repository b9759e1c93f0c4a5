#include "adjtrace/geometry.h"

namespace adjtrace {

std::optional<Hit> intersect_sphere(const Ray &ray, const Vec3 &center, double radius) {
    // |o + t d - c|^2 = r^2 with |d| = 1
    const Vec3 oc = ray.origin - center;
    const double half_b = dot(oc, ray.dir);
    const double c = dot(oc, oc) - radius * radius;
    const double disc = half_b * half_b - c;
    if (disc < 0)
        return std::nullopt;
    const double sq = std::sqrt(disc);
    double t = -half_b - sq;
    if (t <= kRayEpsilon) {
        t = -half_b + sq;
        if (t <= kRayEpsilon)
            return std::nullopt;
    }
    Hit hit;
    hit.t = t;
    hit.point = ray.origin + t * ray.dir;
    hit.normal = (hit.point - center) / radius;
    if (dot(hit.normal, ray.dir) > 0)
        hit.normal = -hit.normal;
    return hit;
}

std::optional<Hit> intersect_quad(const Ray &ray, const Vec3 &corner, const Vec3 &edge_u,
                                  const Vec3 &edge_v) {
    const Vec3 n = cross(edge_u, edge_v);
    const double denom = dot(n, ray.dir);
    if (denom == 0)
        return std::nullopt;
    const double t = dot(n, corner - ray.origin) / denom;
    if (!(t > kRayEpsilon))
        return std::nullopt;
    const Vec3 p = ray.origin + t * ray.dir;
    // Barycentric coordinates in the (edge_u, edge_v) basis.
    const Vec3 rel = p - corner;
    const double nn = dot(n, n);
    const double a = dot(cross(rel, edge_v), n) / nn;
    const double b = dot(cross(edge_u, rel), n) / nn;
    if (a < 0 || a > 1 || b < 0 || b > 1)
        return std::nullopt;
    Hit hit;
    hit.t = t;
    hit.point = p;
    hit.normal = n / std::sqrt(nn);
    if (dot(hit.normal, ray.dir) > 0)
        hit.normal = -hit.normal;
    return hit;
}

Frame make_frame(const Vec3 &normal) {
    Frame f;
    f.z = normal;
    Vec3 helper = normal + Vec3(0.1, 0.2, 0.3);
    Vec3 y = cross(f.z, helper);
    if (length(y) < 1e-8) {
        helper = normal + Vec3(0.3, 0.1, 0.2);
        y = cross(f.z, helper);
    }
    f.y = normalize(y);
    f.x = normalize(cross(f.y, f.z));
    return f;
}

}  // namespace adjtrace
