#pragma once

// Hydrodynamics of two spherical bladders joined by a rod, in the far-field
// (a_i / ell << 1) Stokes approximation.
//
// Axis convention: the swimming axis points from sphere 1 (left, volume v) to
// sphere 2 (right, volume v0 - v). Positive displacement, sphere velocities
// and forces point along this axis.

#include <Eigen/Core>

#include <numbers>
#include <string>
#include <vector>

namespace pmpy {

using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

enum class Fidelity {
    Leading, ///< drops the O(a/ell) cross-interaction in the rod-force inversion
    Refined, ///< keeps the 1/(2 ell) terms of the superposed sphere velocities
};

const char *to_string(Fidelity f);
/// Accepts "leading" / "refined"; throws DomainError otherwise.
Fidelity fidelity_from_string(const std::string &name);

struct SwimmerConfig {
    double mu = 1.0;             ///< ambient dynamic viscosity [Pa s]
    double rho = 0.0;            ///< fluid density [kg/m^3], diagnostics only
    double v0 = 1.0;             ///< conserved total bladder volume [m^3]
    Fidelity fidelity = Fidelity::Leading;
    double volume_margin = 1e-6; ///< admissible band: v in [m v0, (1-m) v0]

    /// mu = 1, rho = 0.
    static SwimmerConfig nondimensional(double v0);

    /// Throws DomainError unless mu > 0, rho >= 0, v0 > 0, 0 <= margin < 1/2.
    void validate() const;

    bool operator==(const SwimmerConfig &) const = default;
};

/// A point of control space: separation ell and left-bladder volume v.
struct ControlPoint {
    double ell = 0.0;
    double v = 0.0;
    bool operator==(const ControlPoint &) const = default;
};

/// Rate of a control point; also used for derivatives with respect to a path
/// parameter.
struct ControlVelocity {
    double ell_dot = 0.0;
    double v_dot = 0.0;
    bool operator==(const ControlVelocity &) const = default;
};

struct SphereState {
    double a1 = 0.0;
    double a2 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;

    /// max(a1, a2) / ell
    double eps(double ell) const;
};

struct FlowSample {
    Vec3 position; ///< relative to the sphere center
    Vec3 velocity;
};

/// Thresholds above which validity() emits warnings. The model only requires
/// each quantity to be << 1.
struct ValidityThresholds {
    double reynolds = 0.1;
    double eps = 0.2;
    double far_field = 0.1; ///< on ell |Xdot| rho / mu
};

struct ValidityReport {
    double reynolds = 0.0;          ///< rho max(a_i) |Xdot| / mu
    double eps = 0.0;               ///< max(a_i) / ell
    double far_field_measure = 0.0; ///< ell |Xdot| rho / mu
    bool far_field_ok = true;
    std::vector<std::string> warnings;
};

/// Axial velocities of the two sphere centers.
struct SphereVelocities {
    double u1 = 0.0;
    double u2 = 0.0;
};

/// Coefficients of the displacement 1-form: dX = d_ell * dell + d_v * dv.
struct DisplacementForm {
    double d_ell = 0.0;
    double d_v = 0.0;
};

/// Diagonal dissipation metric: P = ell_ell * ell_dot^2 + v_v * v_dot^2.
struct DissipationMetric {
    double ell_ell = 0.0;
    double v_v = 0.0;

    double operator()(const ControlVelocity &w) const {
        return ell_ell * w.ell_dot * w.ell_dot + v_v * w.v_dot * w.v_dot;
    }
};

/// (3 v / 4 pi)^(1/3). Throws DomainError for v <= 0.
double radius_of_volume(double v);
/// 4 pi a^3 / 3. Throws DomainError for a <= 0.
double volume_of_radius(double a);

/// Throws ModelValidityError when v leaves the admissible band or the spheres
/// overlap (ell <= a1 + a2).
SphereState sphere_state(const SwimmerConfig &cfg, const ControlPoint &p);

/// Flow around a single sphere of radius a, dragged by force f and dilating at
/// volume rate v_dot: a Stokes translation solution plus a point source. On
/// |x| = a the velocity is f / (6 pi mu a) + v_dot / (4 pi a^2) xhat, and the
/// volume flux through any sphere |x| = r >= a equals v_dot.
/// Throws DomainError for |x| < a or a <= 0.
FlowSample flow_field(const SwimmerConfig &cfg, double a, const Vec3 &f, double v_dot, const Vec3 &x);

/// Leading-order axial sphere velocities when the rod pushes sphere 2 with
/// force_on_sphere2 (and sphere 1 with its negative) while the left bladder
/// dilates at v_dot:
///   2 pi U2 =  (F/mu)(1/(3 a2) - 1/(2 ell)) + v_dot/(2 ell^2)
///   2 pi U1 = -(F/mu)(1/(3 a1) - 1/(2 ell)) + v_dot/(2 ell^2)
SphereVelocities sphere_velocities(const SwimmerConfig &cfg, const ControlPoint &p, double force_on_sphere2,
                                   double v_dot);

/// Same velocities evaluated from the full superposition of two flow_field
/// solutions (self term at the surface plus the other sphere's field at
/// distance ell), without the leading-order reduction. Differs from
/// sphere_velocities by O(eps^2) relative.
SphereVelocities superposed_sphere_velocities(const SwimmerConfig &cfg, const ControlPoint &p,
                                              double force_on_sphere2, double v_dot);

/// Axial force the rod exerts on sphere 1 (sphere 2 feels the negative).
/// Leading: -6 pi mu (1/a1 + 1/a2)^-1 ell_dot.
/// Refined: -6 pi mu ell_dot / (1/a1 + 1/a2 - 3/ell); throws ModelValidityError
/// when the denominator is not positive.
double rod_force(const SwimmerConfig &cfg, const ControlPoint &p, double ell_dot);

DisplacementForm displacement_form(const SwimmerConfig &cfg, const ControlPoint &p);

/// Swimming velocity Xdot = (U1 + U2) / 2.
double displacement_rate(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w);

DissipationMetric dissipation_metric(const SwimmerConfig &cfg, const ControlPoint &p);

/// Power invested in driving the controls.
double power(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w);

/// mu v_dot / (pi a^3)
double surface_stress(const SwimmerConfig &cfg, double a, double v_dot);

/// Power to dilate one bladder of volume v at rate v_dot: 4 mu v_dot^2 / (3 v).
double dilation_power(const SwimmerConfig &cfg, double v, double v_dot);

ValidityReport validity(const SwimmerConfig &cfg, const ControlPoint &p, const ControlVelocity &w,
                        const ValidityThresholds &thresholds = {});

/// Warning messages for the threshold breaches recorded in a report.
std::vector<std::string> validity_warnings(const ValidityReport &report, const ValidityThresholds &thresholds);

} // namespace pmpy
