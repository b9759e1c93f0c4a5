#include "adjtrace/scene_io.h"

#include <array>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace adjtrace {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#')
            break;
        out.push_back(tok);
    }
    return out;
}

class LineParser {
public:
    LineParser(int line, std::vector<std::string> tokens) : line_(line), toks_(std::move(tokens)) {}

    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(line_, msg); }

    bool done() const { return pos_ >= toks_.size(); }

    const std::string &word(const char *what) {
        if (done())
            fail(std::string("missing ") + what);
        return toks_[pos_++];
    }

    double number(const char *what) {
        const std::string &t = word(what);
        double v = 0;
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size())
            fail(std::string("expected a number for ") + what + ", got '" + t + "'");
        return v;
    }

    Vec3 vec3(const char *what) {
        const double x = number(what);
        const double y = number(what);
        const double z = number(what);
        return {x, y, z};
    }

    int integer(const char *what) {
        const std::string &t = word(what);
        int v = 0;
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size())
            fail(std::string("expected an integer for ") + what + ", got '" + t + "'");
        return v;
    }

    Param param(const char *what, std::set<std::size_t> &bound) {
        const std::string &t = word(what);
        if (t[0] != '@') {
            --pos_;
            return Param::constant(number(what));
        }
        int k = 0;
        const auto [p, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), k);
        if (ec != std::errc() || p != t.data() + t.size())
            fail("bad control binding '" + t + "'");
        if (k < 1 || k > static_cast<int>(kNumControls))
            fail("control index " + std::to_string(k) + " outside 1.." +
                 std::to_string(kNumControls));
        const auto idx = static_cast<std::size_t>(k - 1);
        if (!bound.insert(idx).second)
            fail("control @" + std::to_string(k) + " is already bound");
        return Param::bound(idx);
    }

    /// Reads `key value...` pairs; every key in `keys` must appear exactly once.
    template <typename Handler>
    void pairs(std::initializer_list<const char *> keys, Handler &&handle) {
        std::set<std::string> seen;
        while (!done()) {
            const std::string key = word("key");
            bool known = false;
            for (const char *k : keys)
                known = known || key == k;
            if (!known)
                fail("unknown key '" + key + "'");
            if (!seen.insert(key).second)
                fail("duplicate key '" + key + "'");
            handle(key);
        }
        for (const char *k : keys)
            if (!seen.count(k))
                fail(std::string("missing key '") + k + "'");
    }

    int line() const { return line_; }

private:
    int line_;
    std::vector<std::string> toks_;
    std::size_t pos_ = 1;
};

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vec(const Vec3 &v) { return fmt_num(v.x) + " " + fmt_num(v.y) + " " + fmt_num(v.z); }

std::string fmt_param(const Param &p) {
    return p.control ? "@" + std::to_string(*p.control + 1) : fmt_num(p.value);
}

}  // namespace

Scene parse_scene(std::string_view text) {
    Scene scene;
    scene.theta = cornell_default_theta();
    std::set<std::size_t> bound;
    bool have_camera = false, have_theta = false;
    int line_no = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto toks = tokenize(raw);
        if (toks.empty())
            continue;
        const std::string directive = toks[0];
        LineParser lp(line_no, std::move(toks));

        if (directive == "camera") {
            if (have_camera)
                lp.fail("duplicate camera");
            have_camera = true;
            Camera &c = scene.camera;
            lp.pairs({"eye", "look", "up", "fov", "res"}, [&](const std::string &key) {
                if (key == "eye") c.eye = lp.vec3("eye");
                else if (key == "look") c.look_at = lp.vec3("look");
                else if (key == "up") c.up = lp.vec3("up");
                else if (key == "fov") c.vertical_fov_degrees = lp.number("fov");
                else {
                    c.width = lp.integer("width");
                    c.height = lp.integer("height");
                }
            });
            if (c.width < 1 || c.height < 1)
                lp.fail("resolution must be at least 1x1");
            if (!(c.vertical_fov_degrees > 0 && c.vertical_fov_degrees < 180))
                lp.fail("fov must lie in (0, 180)");
            if (length(cross(c.look_at - c.eye, c.up)) == 0)
                lp.fail("camera up vector is parallel to the view direction");
        } else if (directive == "material") {
            const std::string name = lp.word("material name");
            if (scene.find_material(name))
                lp.fail("material '" + name + "' already defined");
            const std::string kind = lp.word("material kind");
            Material m;
            m.name = name;
            if (kind == "emitter") {
                m.kind = MaterialKind::Emitter;
                lp.pairs({"emission", "base", "absorb"}, [&](const std::string &key) {
                    if (key == "emission") m.emission = lp.param("emission", bound);
                    else if (key == "base") m.base_emission = lp.number("base");
                    else m.absorb = lp.number("absorb");
                });
                if (m.absorb != 1)
                    lp.fail("emitter absorb must be 1.0");
            } else if (kind == "phong") {
                m.kind = MaterialKind::PhongBlinn;
                lp.pairs({"ambient", "diffuse", "specular", "exponent", "absorb"},
                         [&](const std::string &key) {
                             if (key == "ambient") m.ambient = lp.param("ambient", bound);
                             else if (key == "diffuse") m.diffuse = lp.param("diffuse", bound);
                             else if (key == "specular") m.specular = lp.param("specular", bound);
                             else if (key == "exponent") m.exponent = lp.param("exponent", bound);
                             else m.absorb = lp.number("absorb");
                         });
            } else if (kind == "lambert") {
                m.kind = MaterialKind::Lambert;
                lp.pairs({"ambient", "diffuse", "absorb"}, [&](const std::string &key) {
                    if (key == "ambient") m.ambient = lp.param("ambient", bound);
                    else if (key == "diffuse") m.diffuse = lp.param("diffuse", bound);
                    else m.absorb = lp.number("absorb");
                });
            } else {
                lp.fail("unknown material kind '" + kind + "'");
            }
            if (m.reflective() && !(m.absorb > 0 && m.absorb < 1))
                lp.fail("absorb must lie in (0, 1) for reflective materials");
            scene.materials.push_back(std::move(m));
        } else if (directive == "quad" || directive == "sphere") {
            Primitive prim;
            std::string mat;
            if (directive == "quad") {
                Quad q;
                lp.pairs({"p", "u", "v", "mat"}, [&](const std::string &key) {
                    if (key == "p") q.corner = lp.vec3("p");
                    else if (key == "u") q.edge_u = lp.vec3("u");
                    else if (key == "v") q.edge_v = lp.vec3("v");
                    else mat = lp.word("material name");
                });
                if (length(cross(q.edge_u, q.edge_v)) == 0)
                    lp.fail("degenerate quad (parallel edges)");
                prim.shape = q;
            } else {
                Sphere s;
                lp.pairs({"c", "r", "mat"}, [&](const std::string &key) {
                    if (key == "c") s.center = lp.vec3("c");
                    else if (key == "r") s.radius = lp.number("r");
                    else mat = lp.word("material name");
                });
                if (!(s.radius > 0))
                    lp.fail("sphere radius must be positive");
                prim.shape = s;
            }
            const auto id = scene.find_material(mat);
            if (!id)
                lp.fail("undefined material '" + mat + "'");
            prim.material_id = *id;
            scene.primitives.push_back(prim);
        } else if (directive == "theta") {
            if (have_theta)
                lp.fail("duplicate theta line");
            have_theta = true;
            for (std::size_t k = 0; k < kNumControls; ++k)
                scene.theta[k] = lp.number("theta value (7 expected)");
            if (!lp.done())
                lp.fail("theta takes exactly 7 values");
        } else {
            lp.fail("unknown directive '" + directive + "'");
        }
    }
    if (!have_camera)
        throw ParseError(line_no, "scene has no camera");
    return scene;
}

std::string serialize_scene(const Scene &scene) {
    std::ostringstream out;
    const Camera &c = scene.camera;
    out << "camera eye " << fmt_vec(c.eye) << " look " << fmt_vec(c.look_at) << " up "
        << fmt_vec(c.up) << " fov " << fmt_num(c.vertical_fov_degrees) << " res " << c.width << " "
        << c.height << "\n";
    for (const Material &m : scene.materials) {
        out << "material " << m.name << " " << to_string(m.kind);
        switch (m.kind) {
        case MaterialKind::Emitter:
            out << " emission " << fmt_param(m.emission) << " base " << fmt_num(m.base_emission);
            break;
        case MaterialKind::PhongBlinn:
            out << " ambient " << fmt_param(m.ambient) << " diffuse " << fmt_param(m.diffuse)
                << " specular " << fmt_param(m.specular) << " exponent " << fmt_param(m.exponent);
            break;
        case MaterialKind::Lambert:
            out << " ambient " << fmt_param(m.ambient) << " diffuse " << fmt_param(m.diffuse);
            break;
        }
        out << " absorb " << fmt_num(m.absorb) << "\n";
    }
    for (const Primitive &p : scene.primitives) {
        const std::string &mat = scene.materials[p.material_id].name;
        if (const auto *q = std::get_if<Quad>(&p.shape))
            out << "quad p " << fmt_vec(q->corner) << " u " << fmt_vec(q->edge_u) << " v "
                << fmt_vec(q->edge_v) << " mat " << mat << "\n";
        else {
            const auto &s = std::get<Sphere>(p.shape);
            out << "sphere c " << fmt_vec(s.center) << " r " << fmt_num(s.radius) << " mat " << mat
                << "\n";
        }
    }
    out << "theta";
    for (double v : scene.theta)
        out << " " << fmt_num(v);
    out << "\n";
    return out.str();
}

ControlVector cornell_default_theta() { return {1.0, 0.1, 0.6, 0.4, 20.0, 0.1, 0.7}; }

Scene build_cornell_box() {
    constexpr double W = 552, H = 548, D = 559;
    Scene s;
    s.camera.eye = {W / 2, H / 2, 5};
    s.camera.look_at = {W / 2, H / 2, D / 2};
    s.camera.up = {0, 1, 0};
    s.camera.vertical_fov_degrees = 60;
    s.camera.width = 64;
    s.camera.height = 64;

    s.materials.push_back(Material::emitter("light", Param::bound(0), 10.0));
    s.materials.push_back(Material::phong("sphere", Param::bound(1), Param::bound(2),
                                          Param::bound(3), Param::bound(4), 0.3));
    s.materials.push_back(Material::lambert("wall", Param::bound(5), Param::bound(6), 0.3));
    constexpr std::size_t light = 0, sphere = 1, wall = 2;

    auto quad = [&](Vec3 p, Vec3 u, Vec3 v, std::size_t mat) {
        s.primitives.push_back({Quad{p, u, v}, mat});
    };
    quad({0, 0, 0}, {W, 0, 0}, {0, 0, D}, wall);  // floor
    quad({0, H, 0}, {W, 0, 0}, {0, 0, D}, wall);  // ceiling
    quad({0, 0, D}, {W, 0, 0}, {0, H, 0}, wall);  // back
    quad({0, 0, 0}, {W, 0, 0}, {0, H, 0}, wall);  // front, behind the camera
    quad({0, 0, 0}, {0, H, 0}, {0, 0, D}, wall);  // right (x = 0)
    quad({W, 0, 0}, {0, H, 0}, {0, 0, D}, wall);  // left (x = W)
    quad({W / 2 - 100, H - 1, D / 2 - 80}, {200, 0, 0}, {0, 0, 160}, light);
    s.primitives.push_back({Sphere{{W / 2, H / 2, D / 2}, 110}, sphere});

    s.theta = cornell_default_theta();
    return s;
}

}  // namespace adjtrace
