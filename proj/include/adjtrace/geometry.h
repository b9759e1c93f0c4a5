#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

namespace adjtrace {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3 &) const = default;
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3 &v) { return v / length(v); }

/// Self-intersection guard for ray parameters.
inline constexpr double kRayEpsilon = 1e-4;

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
    int depth = 0;
};

/// Surface hit record. The normal is always oriented to face the incoming ray.
struct Hit {
    double t = 0;
    Vec3 point;
    Vec3 normal;
    std::size_t material_id = 0;
    std::size_t primitive = 0;
};

/// Right-handed orthonormal frame; z is the surface normal.
struct Frame {
    Vec3 x, y, z;

    Vec3 to_world(const Vec3 &local) const { return local.x * x + local.y * y + local.z * z; }
};

std::optional<Hit> intersect_sphere(const Ray &ray, const Vec3 &center, double radius);

/// Parallelogram spanned by `edge_u` and `edge_v` from `corner`.
std::optional<Hit> intersect_quad(const Ray &ray, const Vec3 &corner, const Vec3 &edge_u,
                                  const Vec3 &edge_v);

Frame make_frame(const Vec3 &normal);

}  // namespace adjtrace
