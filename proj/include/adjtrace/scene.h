#pragma once

#include "adjtrace/geometry.h"
#include "adjtrace/material.h"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace adjtrace {

struct Sphere {
    Vec3 center;
    double radius = 1;
    bool operator==(const Sphere &) const = default;
};

struct Quad {
    Vec3 corner, edge_u, edge_v;
    bool operator==(const Quad &) const = default;
};

struct Primitive {
    std::variant<Quad, Sphere> shape;
    std::size_t material_id = 0;
};

/// Pinhole camera. Pixel (0, 0) is the top-left corner of the image.
struct Camera {
    Vec3 eye{0, 0, 0};
    Vec3 look_at{0, 0, 1};
    Vec3 up{0, 1, 0};
    double vertical_fov_degrees = 60;
    int width = 64;
    int height = 64;

    /// Primary ray through image-plane position (px + jx, py + jy), with jx, jy in [0, 1).
    Ray generate_ray(int px, int py, double jx, double jy) const;
};

struct Scene {
    Camera camera;
    std::vector<Material> materials;
    std::vector<Primitive> primitives;
    ControlVector theta{};

    std::optional<std::size_t> find_material(const std::string &name) const;
};

std::optional<Hit> intersect_primitive(const Ray &ray, const Primitive &prim);

/// Nearest hit over all primitives; equal t resolves to the lowest primitive index.
std::optional<Hit> intersect_scene(const Ray &ray, const Scene &scene);

}  // namespace adjtrace
