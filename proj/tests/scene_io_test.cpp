#include <gtest/gtest.h>

#include "adjtrace/scene_io.h"

#include <random>
#include <set>

using namespace adjtrace;

namespace {

constexpr const char *kMinimal = R"(# one light
camera eye 0 0 0 look 0 0 1 up 0 1 0 fov 45 res 4 3
material lamp emitter emission @1 base 2 absorb 1
quad p -1 -1 5 u 2 0 0 v 0 2 0 mat lamp
)";

int error_line(const std::string &text) {
    try {
        parse_scene(text);
    } catch (const ParseError &e) {
        EXPECT_NE(std::string::npos, std::string(e.what()).find("line " + std::to_string(e.line())));
        return e.line();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return -1;
}

void expect_same(const Param &a, const Param &b) {
    EXPECT_EQ(a.control, b.control);
    EXPECT_NEAR(a.value, b.value, 1e-12);
}

void expect_near(const Vec3 &a, const Vec3 &b) {
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(a.y, b.y, 1e-12);
    EXPECT_NEAR(a.z, b.z, 1e-12);
}

void expect_equivalent(const Scene &a, const Scene &b) {
    expect_near(a.camera.eye, b.camera.eye);
    expect_near(a.camera.look_at, b.camera.look_at);
    expect_near(a.camera.up, b.camera.up);
    EXPECT_NEAR(a.camera.vertical_fov_degrees, b.camera.vertical_fov_degrees, 1e-12);
    EXPECT_EQ(a.camera.width, b.camera.width);
    EXPECT_EQ(a.camera.height, b.camera.height);
    ASSERT_EQ(a.materials.size(), b.materials.size());
    for (std::size_t i = 0; i < a.materials.size(); ++i) {
        const Material &x = a.materials[i], &y = b.materials[i];
        EXPECT_EQ(x.name, y.name);
        EXPECT_EQ(x.kind, y.kind);
        EXPECT_NEAR(x.absorb, y.absorb, 1e-12);
        if (x.kind == MaterialKind::Emitter) {
            expect_same(x.emission, y.emission);
            EXPECT_NEAR(x.base_emission, y.base_emission, 1e-12);
            continue;
        }
        expect_same(x.ambient, y.ambient);
        expect_same(x.diffuse, y.diffuse);
        if (x.kind == MaterialKind::PhongBlinn) {
            expect_same(x.specular, y.specular);
            expect_same(x.exponent, y.exponent);
        }
    }
    ASSERT_EQ(a.primitives.size(), b.primitives.size());
    for (std::size_t i = 0; i < a.primitives.size(); ++i) {
        EXPECT_EQ(a.primitives[i].material_id, b.primitives[i].material_id);
        ASSERT_EQ(a.primitives[i].shape.index(), b.primitives[i].shape.index());
        if (const auto *q = std::get_if<Quad>(&a.primitives[i].shape)) {
            const Quad &r = std::get<Quad>(b.primitives[i].shape);
            expect_near(q->corner, r.corner);
            expect_near(q->edge_u, r.edge_u);
            expect_near(q->edge_v, r.edge_v);
        } else {
            const Sphere &s = std::get<Sphere>(a.primitives[i].shape);
            const Sphere &r = std::get<Sphere>(b.primitives[i].shape);
            expect_near(s.center, r.center);
            EXPECT_NEAR(s.radius, r.radius, 1e-12);
        }
    }
    for (std::size_t k = 0; k < kNumControls; ++k)
        EXPECT_NEAR(a.theta[k], b.theta[k], 1e-12);
}

}  // namespace

TEST(ParseScene, MinimalScene) {
    const Scene s = parse_scene(kMinimal);
    EXPECT_EQ(1u, s.primitives.size());
    EXPECT_EQ(4, s.camera.width);
    EXPECT_EQ(3, s.camera.height);
    EXPECT_EQ(45, s.camera.vertical_fov_degrees);
    ASSERT_EQ(1u, s.materials.size());
    EXPECT_EQ(MaterialKind::Emitter, s.materials[0].kind);
    EXPECT_EQ(std::optional<std::size_t>(0), s.materials[0].emission.control);
    EXPECT_EQ(cornell_default_theta(), s.theta);
}

TEST(ParseScene, KeysInAnyOrderAndConstants) {
    const Scene s = parse_scene(R"(camera res 2 2 fov 30 up 0 1 0 look 0 0 1 eye 0 0 0
material w lambert diffuse 0.5 absorb 0.2 ambient @6
sphere mat w r 2 c 0 0 9
theta 1 2 3 4 5 6 7
)");
    EXPECT_EQ(0.5, s.materials[0].diffuse.value);
    EXPECT_FALSE(s.materials[0].diffuse.control);
    EXPECT_EQ(std::optional<std::size_t>(5), s.materials[0].ambient.control);
    EXPECT_EQ((ControlVector{1, 2, 3, 4, 5, 6, 7}), s.theta);
    EXPECT_EQ(2, std::get<Sphere>(s.primitives[0].shape).radius);
}

TEST(ParseScene, MisspelledMaterialNamesLine) {
    EXPECT_EQ(5, error_line(std::string(kMinimal) + "quad p 0 0 9 u 1 0 0 v 0 1 0 mat lmap\n"));
}

TEST(ParseScene, ThetaArity) {
    EXPECT_EQ(4, error_line(std::string(kMinimal).insert(std::string(kMinimal).find("quad"),
                                                           "theta 1 2 3 4 5 6\n")));
}

TEST(ParseScene, ErrorsCarryLines) {
    const std::string cam = "camera eye 0 0 0 look 0 0 1 up 0 1 0 fov 45 res 4 3\n";
    EXPECT_EQ(2, error_line(cam + "teapot 1 2 3\n"));
    EXPECT_EQ(2, error_line(cam + "material m lambert ambient 0 diffuse @8 absorb 0.3\n"));
    EXPECT_EQ(2, error_line(cam + "material m lambert ambient 0 diffuse @0 absorb 0.3\n"));
    EXPECT_EQ(3, error_line(cam + "material m lambert ambient @6 diffuse @7 absorb 0.3\n"
                                  "material n lambert ambient 0 diffuse @7 absorb 0.3\n"));
    EXPECT_EQ(2, error_line(cam + "material m lambert ambient 0 diffuse 0.5 absorb 1.5\n"));
    EXPECT_EQ(2, error_line(cam + "material m emitter emission 1 base 1 absorb 0.5\n"));
    EXPECT_EQ(2, error_line(cam + "material m lambert ambient 0 diffuse 0.5\n"));
    EXPECT_EQ(2, error_line(cam + "material m lambert ambient 0 ambient 0 diffuse 0.5 absorb 0.3\n"));
    EXPECT_EQ(3, error_line(cam + "material m lambert ambient 0 diffuse 0.5 absorb 0.3\n"
                                  "material m lambert ambient 0 diffuse 0.5 absorb 0.3\n"));
    EXPECT_EQ(3, error_line(cam + "material m lambert ambient 0 diffuse 0.5 absorb 0.3\n"
                                  "sphere c 0 0 0 r 0 mat m\n"));
    EXPECT_EQ(3, error_line(cam + "material m lambert ambient 0 diffuse 0.5 absorb 0.3\n"
                                  "quad p 0 0 0 u 1 0 0 v 2 0 0 mat m\n"));
    EXPECT_EQ(2, error_line(cam + cam));
    EXPECT_EQ(1, error_line("camera eye 0 0 0 look 0 0 1 up 0 1 0 fov 180 res 4 3\n"));
    EXPECT_EQ(1, error_line("camera eye 0 0 0 look 0 0 1 up 0 1 0 fov 45 res 0 3\n"));
    EXPECT_EQ(1, error_line("camera eye 0 0 x look 0 0 1 up 0 1 0 fov 45 res 4 3\n"));
    EXPECT_EQ(2, error_line("# only a comment\nmaterial m lambert ambient 0 diffuse 0.5 absorb 0.3\n"));
}

TEST(SerializeScene, CornellRoundTrip) {
    const Scene a = build_cornell_box();
    expect_equivalent(a, parse_scene(serialize_scene(a)));
}

TEST(SerializeScene, RandomScenesRoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-1000, 1000), pos(0.01, 10), ab(0.01, 0.99);
    for (int trial = 0; trial < 50; ++trial) {
        Scene s;
        s.camera.eye = {d(rng), d(rng), d(rng)};
        s.camera.look_at = s.camera.eye + Vec3(1, d(rng) / 1000, 2);
        s.camera.vertical_fov_degrees = 10 + pos(rng);
        s.camera.width = 7;
        s.camera.height = 5;
        s.materials.push_back(Material::emitter("e", Param::constant(pos(rng)), pos(rng)));
        s.materials.push_back(Material::phong("p", Param::bound(1), Param::constant(pos(rng)),
                                              Param::bound(3), Param::constant(pos(rng)), ab(rng)));
        s.materials.push_back(Material::lambert("l", Param::constant(pos(rng)), Param::bound(6), ab(rng)));
        s.primitives.push_back({Sphere{{d(rng), d(rng), d(rng)}, pos(rng)}, 1});
        s.primitives.push_back({Quad{{d(rng), d(rng), d(rng)}, {pos(rng), 0, 0}, {0, pos(rng), 1}}, 2});
        for (double &t : s.theta)
            t = d(rng);
        expect_equivalent(s, parse_scene(serialize_scene(s)));
    }
}

TEST(Cornell, Layout) {
    const Scene s = build_cornell_box();
    EXPECT_EQ(8u, s.primitives.size());
    EXPECT_EQ((ControlVector{1.0, 0.1, 0.6, 0.4, 20.0, 0.1, 0.7}), cornell_default_theta());
    EXPECT_EQ(cornell_default_theta(), s.theta);
    int quads = 0, spheres = 0, lights = 0, walls = 0;
    for (const Primitive &p : s.primitives) {
        quads += std::holds_alternative<Quad>(p.shape);
        spheres += std::holds_alternative<Sphere>(p.shape);
        const MaterialKind k = s.materials[p.material_id].kind;
        lights += k == MaterialKind::Emitter;
        walls += k == MaterialKind::Lambert;
        if (k == MaterialKind::PhongBlinn)
            EXPECT_TRUE(std::holds_alternative<Sphere>(p.shape));
    }
    EXPECT_EQ(7, quads);
    EXPECT_EQ(1, spheres);
    EXPECT_EQ(1, lights);
    EXPECT_EQ(6, walls);
    for (const Material &m : s.materials)
        EXPECT_EQ(m.reflective() ? 0.3 : 1.0, m.absorb);
}

TEST(Cornell, CenterRayHitsSphere) {
    const Scene s = build_cornell_box();
    const Ray r = s.camera.generate_ray(s.camera.width / 2, s.camera.height / 2, 0, 0);
    const auto hit = intersect_scene(r, s);
    ASSERT_TRUE(hit);
    EXPECT_EQ(7u, hit->primitive);
    EXPECT_EQ(MaterialKind::PhongBlinn, s.materials[hit->material_id].kind);
}

TEST(Cornell, EveryControlBoundOnce) {
    const Scene s = build_cornell_box();
    std::multiset<std::size_t> bound;
    for (const Material &m : s.materials)
        for (const Param *p : {&m.emission, &m.ambient, &m.diffuse, &m.specular, &m.exponent})
            if (p->control)
                bound.insert(*p->control);
    EXPECT_EQ((std::multiset<std::size_t>{0, 1, 2, 3, 4, 5, 6}), bound);
}

TEST(Cornell, CameraInsideBox) {
    const Camera &c = build_cornell_box().camera;
    EXPECT_GT(c.eye.z, 0);
    EXPECT_LT(c.eye.z, 559);
    EXPECT_GT(c.look_at.z, c.eye.z);
}
