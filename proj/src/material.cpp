#include "adjtrace/material.h"

#include "adjtrace/sampling.h"

#include <stdexcept>
#include <utility>

namespace adjtrace {

const char *to_string(MaterialKind kind) {
    switch (kind) {
    case MaterialKind::Emitter: return "emitter";
    case MaterialKind::PhongBlinn: return "phong";
    case MaterialKind::Lambert: return "lambert";
    }
    return "?";
}

const char *to_string(LobeTag tag) {
    switch (tag) {
    case LobeTag::None: return "None";
    case LobeTag::Diffuse: return "Diffuse";
    case LobeTag::Specular: return "Specular";
    case LobeTag::LambertOnly: return "LambertOnly";
    }
    return "?";
}

Material Material::emitter(std::string name, Param emission, double base) {
    Material m;
    m.name = std::move(name);
    m.kind = MaterialKind::Emitter;
    m.emission = emission;
    m.base_emission = base;
    m.absorb = 1;
    return m;
}

Material Material::phong(std::string name, Param ambient, Param diffuse, Param specular,
                         Param exponent, double absorb) {
    Material m;
    m.name = std::move(name);
    m.kind = MaterialKind::PhongBlinn;
    m.ambient = ambient;
    m.diffuse = diffuse;
    m.specular = specular;
    m.exponent = exponent;
    m.absorb = absorb;
    return m;
}

Material Material::lambert(std::string name, Param ambient, Param diffuse, double absorb) {
    Material m;
    m.name = std::move(name);
    m.kind = MaterialKind::Lambert;
    m.ambient = ambient;
    m.diffuse = diffuse;
    m.absorb = absorb;
    return m;
}

double emitted(const Material &m, const ControlVector &theta) {
    if (m.kind != MaterialKind::Emitter)
        throw std::logic_error("emitted() called on non-emitter material '" + m.name + "'");
    return m.emission.eval(theta) * m.base_emission;
}

ScatterSample sample_direction(const Material &m, const Vec3 &normal, const Vec3 &incoming,
                               const ControlVector &theta, RngStream &rng) {
    ScatterSample s;
    switch (m.kind) {
    case MaterialKind::Emitter:
        throw std::logic_error("sample_direction() called on emitter '" + m.name + "'");
    case MaterialKind::Lambert: {
        s.tag = LobeTag::LambertOnly;
        s.u1 = rng.next_open();
        s.u2 = rng.next();
        s.dir = sample_cosine_lobe(make_frame(normal), 0, s.u1, s.u2).dir;
        break;
    }
    case MaterialKind::PhongBlinn: {
        const bool specular = rng.next() < kSpecularLobeProbability;
        s.u1 = rng.next_open();
        s.u2 = rng.next();
        if (specular) {
            s.tag = LobeTag::Specular;
            s.dir = sample_phong_reflection(normal, incoming, m.exponent.eval(theta), s.u1, s.u2);
        } else {
            s.tag = LobeTag::Diffuse;
            s.dir = sample_cosine_lobe(make_frame(normal), 0, s.u1, s.u2).dir;
        }
        break;
    }
    }
    return s;
}

double bsdf_d_pdf(const Material &m, const VertexState &v, const ControlVector &theta) {
    switch (m.kind) {
    case MaterialKind::Emitter:
        return 0;
    case MaterialKind::Lambert:
        return m.diffuse.eval(theta);
    case MaterialKind::PhongBlinn:
        if (v.tag == LobeTag::Specular)
            return m.specular.eval(theta) * sin_m_of(m.exponent.eval(theta), v.u1) /
                   kSpecularLobeProbability;
        return m.diffuse.eval(theta) / (1 - kSpecularLobeProbability);
    }
    return 0;
}

double ambient_of(const Material &m, const ControlVector &theta) {
    return m.reflective() ? m.ambient.eval(theta) : 0;
}

namespace {

void add(GradientVector &grad, const Param &p, double value) {
    if (p.control)
        grad[*p.control] += value;
}

}  // namespace

void accumulate_gradients(const Material &m, const VertexState &v, double radiance, double adjoint,
                          const ControlVector &theta, GradientVector &grad) {
    if (adjoint == 0)
        return;
    const double ra = radiance * adjoint;
    switch (m.kind) {
    case MaterialKind::Emitter:
        return;
    case MaterialKind::Lambert:
        add(grad, m.diffuse, ra);
        add(grad, m.ambient, adjoint);
        return;
    case MaterialKind::PhongBlinn:
        if (v.tag == LobeTag::Specular) {
            const double alpha = m.exponent.eval(theta);
            const double q = kSpecularLobeProbability;
            add(grad, m.specular, sin_m_of(alpha, v.u1) * ra / q);
            add(grad, m.exponent, m.specular.eval(theta) * dsin_dalpha(alpha, v.u1) * ra / q);
        } else {
            add(grad, m.diffuse, ra / (1 - kSpecularLobeProbability));
        }
        add(grad, m.ambient, adjoint);
        return;
    }
}

void accumulate_emission_gradient(const Material &m, double adjoint, GradientVector &grad) {
    if (m.kind == MaterialKind::Emitter)
        add(grad, m.emission, m.base_emission * adjoint / m.absorb);
}

}  // namespace adjtrace
