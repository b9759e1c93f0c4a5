#include "adjtrace/scene.h"

#include <numbers>

namespace adjtrace {

Ray Camera::generate_ray(int px, int py, double jx, double jy) const {
    const Vec3 forward = normalize(look_at - eye);
    const Vec3 right = normalize(cross(forward, up));
    const Vec3 true_up = cross(right, forward);
    const double half_h = std::tan(vertical_fov_degrees * std::numbers::pi / 360);
    const double half_w = half_h * width / height;
    const double sx = ((px + jx) / width) * 2 - 1;
    const double sy = 1 - ((py + jy) / height) * 2;
    Ray r;
    r.origin = eye;
    r.dir = normalize(forward + (sx * half_w) * right + (sy * half_h) * true_up);
    r.depth = 0;
    return r;
}

std::optional<std::size_t> Scene::find_material(const std::string &name) const {
    for (std::size_t i = 0; i < materials.size(); ++i)
        if (materials[i].name == name)
            return i;
    return std::nullopt;
}

std::optional<Hit> intersect_primitive(const Ray &ray, const Primitive &prim) {
    if (const auto *q = std::get_if<Quad>(&prim.shape))
        return intersect_quad(ray, q->corner, q->edge_u, q->edge_v);
    const auto &s = std::get<Sphere>(prim.shape);
    return intersect_sphere(ray, s.center, s.radius);
}

std::optional<Hit> intersect_scene(const Ray &ray, const Scene &scene) {
    std::optional<Hit> best;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        auto hit = intersect_primitive(ray, scene.primitives[i]);
        if (hit && (!best || hit->t < best->t)) {
            hit->material_id = scene.primitives[i].material_id;
            hit->primitive = i;
            best = hit;
        }
    }
    return best;
}

}  // namespace adjtrace
