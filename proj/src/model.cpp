#include "pmpy/model.hpp"

#include "pmpy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmpy {

namespace {

std::string describe(const ControlPoint &p) {
    std::ostringstream os;
    os.precision(17);
    os << "(ell=" << p.ell << ", v=" << p.v << ")";
    return os.str();
}

} // namespace

const char *to_string(Fidelity f) {
    switch (f) {
    case Fidelity::Leading:
        return "leading";
    case Fidelity::Refined:
        return "refined";
    }
    return "unknown";
}

Fidelity fidelity_from_string(const std::string &name) {
    if (name == "leading")
        return Fidelity::Leading;
    if (name == "refined")
        return Fidelity::Refined;
    throw DomainError("unknown fidelity '" + name + "' (expected leading or refined)");
}

SwimmerConfig SwimmerConfig::nondimensional(double v0) {
    SwimmerConfig cfg;
    cfg.mu = 1.0;
    cfg.rho = 0.0;
    cfg.v0 = v0;
    return cfg;
}

void SwimmerConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw DomainError("viscosity mu must be positive and finite");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw DomainError("density rho must be non-negative and finite");
    if (!(v0 > 0.0) || !std::isfinite(v0))
        throw DomainError("total volume v0 must be positive and finite");
    if (!(volume_margin >= 0.0 && volume_margin < 0.5))
        throw DomainError("volume_margin must lie in [0, 0.5)");
}

double SphereState::eps(double ell) const { return std::max(a1, a2) / ell; }

double radius_of_volume(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError("radius_of_volume: volume must be positive and finite");
    return std::cbrt(3.0 * v / (4.0 * pi));
}

double volume_of_radius(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("volume_of_radius: radius must be positive and finite");
    return 4.0 * pi * a * a * a / 3.0;
}

SphereState sphere_state(const SwimmerConfig &cfg, const ControlPoint &p) {
    const double lo = cfg.volume_margin * cfg.v0;
    const double hi = (1.0 - cfg.volume_margin) * cfg.v0;
    if (!(p.v > 0.0 && p.v < cfg.v0 && p.v >= lo && p.v <= hi))
        throw ModelValidityError("left-bladder volume outside the admissible band at " + describe(p));
    if (!std::isfinite(p.ell))
        throw ModelValidityError("non-finite separation at " + describe(p));

    SphereState s;
    s.v1 = p.v;
    s.v2 = cfg.v0 - p.v;
    s.a1 = radius_of_volume(s.v1);
    s.a2 = radius_of_volume(s.v2);
    if (!(p.ell > s.a1 + s.a2))
        throw ModelValidityError("spheres overlap at " + describe(p));
    return s;
}

FlowSample flow_field(const SwimmerConfig &cfg, double a, const Vec3 &f, double v_dot, const Vec3 &x) {
    if (!(a > 0.0))
        throw DomainError("flow_field: radius must be positive");
    const double r = x.norm();
    // Points constructed on the surface may land a rounding error inside.
    if (!(r >= a * (1.0 - 1e-12)))
        throw DomainError("flow_field: field point lies inside the sphere");

    const Vec3 xhat = x / r;
    const double s = a * a / (r * r);
    const Vec3 stokes = ((3.0 + s) * f + (1.0 - s) * 3.0 * f.dot(xhat) * xhat) / (24.0 * pi * cfg.mu * r);
    const Vec3 source = v_dot / (4.0 * pi * r * r) * xhat;
    return FlowSample{x, stokes + source};
}

SphereVelocities sphere_velocities(const SwimmerConfig &cfg, const ControlPoint &p, double force_on_sphere2,
                                   double v_dot) {
    const SphereState s = sphere_state(cfg, p);
    const double F = force_on_sphere2 / cfg.mu;
    const double source = v_dot / (2.0 * p.ell * p.ell);
    const double inv_2l = 1.0 / (2.0 * p.ell);
    SphereVelocities u;
    u.u2 = (F * (1.0 / (3.0 * s.a2) - inv_2l) + source) / (2.0 * pi);
    u.u1 = (-F * (1.0 / (3.0 * s.a1) - inv_2l) + source) / (2.0 * pi);
    return u;
}

SphereVelocities superposed_sphere_velocities(const SwimmerConfig &cfg, const ControlPoint &p,
                                              double force_on_sphere2, double v_dot) {
    const SphereState s = sphere_state(cfg, p);
    const Vec3 axis = Vec3::UnitX();
    const Vec3 f2 = force_on_sphere2 * axis;
    const Vec3 f1 = -f2;

    // Sphere 1 at the origin, sphere 2 at ell * axis.
    const Vec3 self1 = flow_field(cfg, s.a1, f1, 0.0, s.a1 * axis).velocity;
    const Vec3 from2 = flow_field(cfg, s.a2, f2, -v_dot, -p.ell * axis).velocity;
    const Vec3 self2 = flow_field(cfg, s.a2, f2, 0.0, s.a2 * axis).velocity;
    const Vec3 from1 = flow_field(cfg, s.a1, f1, v_dot, p.ell * axis).velocity;

    return SphereVelocities{(self1 + from2).dot(axis), (self2 + from1).dot(axis)};
}

namespace {

double refined_denominator(const SphereState &s, const ControlPoint &p) {
    const double d = 1.0 / s.a1 + 1.0 / s.a2 - 3.0 / p.ell;
    if (!(d > 0.0))
        throw ModelValidityError("refined rod-force inversion is singular at " + describe(p));
    return d;
}

double harmonic(const SphereState &s) { return s.a1 * s.a2 / (s.a1 + s.a2); }

} // namespace

double rod_force(const SwimmerConfig &cfg, const ControlPoint &p, double ell_dot) {
    const SphereState s = sphere_state(cfg, p);
    if (cfg.fidelity == Fidelity::Leading)
        return -6.0 * pi * cfg.mu * harmonic(s) * ell_dot;
    return -6.0 * pi * cfg.mu * ell_dot / refined_denominator(s, p);
}

DisplacementForm displacement_form(const SwimmerConfig &cfg, const ControlPoint &p) {
    const SphereState s = sphere_state(cfg, p);
    DisplacementForm form;
    form.d_v = 1.0 / (4.0 * pi * p.ell * p.ell);
    if (cfg.fidelity == Fidelity::Leading)
        form.d_ell = 0.5 * (s.a1 - s.a2) / (s.a1 + s.a2);
    else
        form.d_ell = 0.5 * (1.0 / s.a2 - 1.0 / s.a1) / refined_denominator(s, p);
    return form;
}

double displacement_rate(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w) {
    if (cfg.fidelity == Fidelity::Leading) {
        const SphereState s = sphere_state(cfg, p);
        return 0.5 * ((s.a1 - s.a2) / (s.a1 + s.a2) * w.ell_dot + w.v_dot / (2.0 * pi * p.ell * p.ell));
    }
    const double f1 = rod_force(cfg, p, w.ell_dot);
    const SphereVelocities u = sphere_velocities(cfg, p, -f1, w.v_dot);
    return 0.5 * (u.u1 + u.u2);
}

DissipationMetric dissipation_metric(const SwimmerConfig &cfg, const ControlPoint &p) {
    const SphereState s = sphere_state(cfg, p);
    DissipationMetric g;
    g.v_v = 4.0 * cfg.mu / 3.0 * (1.0 / s.v1 + 1.0 / s.v2);
    if (cfg.fidelity == Fidelity::Leading)
        g.ell_ell = 6.0 * pi * cfg.mu * harmonic(s);
    else
        g.ell_ell = 6.0 * pi * cfg.mu / refined_denominator(s, p);
    return g;
}

double power(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w) {
    return dissipation_metric(cfg, p)(w);
}

double surface_stress(const SwimmerConfig &cfg, double a, double v_dot) {
    if (!(a > 0.0))
        throw DomainError("surface_stress: radius must be positive");
    return cfg.mu * v_dot / (pi * a * a * a);
}

double dilation_power(const SwimmerConfig &cfg, double v, double v_dot) {
    if (!(v > 0.0))
        throw DomainError("dilation_power: volume must be positive");
    return 4.0 * cfg.mu * v_dot * v_dot / (3.0 * v);
}

ValidityReport validity(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w,
                        const ValidityThresholds &thresholds) {
    const SphereState s = sphere_state(cfg, p);
    const double speed = std::abs(displacement_rate(cfg, p, w));
    const double a_max = std::max(s.a1, s.a2);

    ValidityReport r;
    r.reynolds = cfg.rho * a_max * speed / cfg.mu;
    r.eps = a_max / p.ell;
    r.far_field_measure = cfg.rho * p.ell * speed / cfg.mu;
    r.far_field_ok = cfg.rho == 0.0 || r.far_field_measure <= thresholds.far_field;

    r.warnings = validity_warnings(r, thresholds);
    return r;
}

std::vector<std::string> validity_warnings(const ValidityReport &r, const ValidityThresholds &thresholds) {
    std::vector<std::string> out;
    std::ostringstream os;
    os.precision(6);
    if (r.reynolds > thresholds.reynolds) {
        os << "reynolds number " << r.reynolds << " exceeds " << thresholds.reynolds;
        out.push_back(os.str());
        os.str("");
    }
    if (r.eps > thresholds.eps) {
        os << "eps = max(a)/ell = " << r.eps << " exceeds " << thresholds.eps;
        out.push_back(os.str());
        os.str("");
    }
    if (!r.far_field_ok) {
        os << "far-field condition ell |Xdot| rho / mu = " << r.far_field_measure << " exceeds "
           << thresholds.far_field;
        out.push_back(os.str());
    }
    return out;
}

} // namespace pmpy
