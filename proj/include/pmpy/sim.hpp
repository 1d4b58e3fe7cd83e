#pragma once

// Stroke integration (displacement, dissipated energy, drag), closed forms for
// rectangular strokes, and the asymptotic predictors they are compared with.

#include "pmpy/model.hpp"
#include "pmpy/quadrature.hpp"
#include "pmpy/stroke.hpp"

#include <array>
#include <string>
#include <vector>

namespace pmpy {

struct IntegrationOptions {
    quadrature::Settings quadrature;
    /// Approximate number of trajectory samples; 0 disables sampling.
    std::size_t samples = 0;
    /// Points per segment at which validity diagnostics are evaluated.
    std::size_t validity_points_per_segment = 33;
    ValidityThresholds thresholds;
};

struct TrajectorySample {
    double t = 0.0;
    double ell = 0.0;
    double v = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double X = 0.0;     ///< displacement accumulated since t = 0
    double P = 0.0;     ///< instantaneous power
    double E_cum = 0.0; ///< energy dissipated since t = 0
};

struct StrokeResult {
    double displacement = 0.0;
    double energy = 0.0;
    /// tau * energy / (6 pi mu X^2); +infinity when X vanishes.
    double drag = 0.0;
    bool drag_finite = true;
    std::string drag_note;
    double period = 0.0;
    Fidelity fidelity = Fidelity::Leading;
    double displacement_error = 0.0; ///< quadrature error estimate
    double energy_error = 0.0;
    std::vector<TrajectorySample> samples;
    ValidityReport validity; ///< worst case over the stroke
};

/// Displacement is integrated as the line integral of the displacement 1-form
/// (independent of timing); energy as the time integral of the power. The
/// drag is formed from the viscosity-normalized dissipation, so it does not
/// depend on mu.
///
/// Throws IntegrationAccuracyError when a segment integral misses the
/// tolerance at the maximum refinement depth, ModelValidityError when the
/// stroke leaves the admissible region.
StrokeResult integrate(const SwimmerConfig &cfg, const Stroke &stroke, const IntegrationOptions &options = {});

/// Metric length of one segment, int sqrt(g(gamma', gamma')) ds.
double metric_length(const SwimmerConfig &cfg, const Segment &segment, const quadrature::Settings &settings = {});

/// Same path with constant metric speed on every segment and durations
/// proportional to segment metric length: the minimum-energy timing for the
/// path at the given period.
Stroke optimize_timing(const SwimmerConfig &cfg, const Stroke &stroke, double period,
                       const quadrature::Settings &settings = {});

/// Exact Leading-model displacement of a rectangle:
///   (a_L - a_s)/(a_L + a_s) (ell_L - ell_s) + (v_L - v_s)/(4 pi) (1/ell_s^2 - 1/ell_L^2)
double rectangle_displacement_closed_form(const SwimmerConfig &cfg, const RectangleStroke &rect);

struct RectangleEnergy {
    double total = 0.0;
    /// In leg order (ell-leg, v-leg, ell-leg, v-leg); leg energy is C / T.
    std::array<double, 4> coefficients{};
    std::array<double, 4> leg_energies{};
};

/// Dissipated energy of a rectangle traversed at constant ell_dot on the
/// ell-legs and constant x_dot on the v-legs.
RectangleEnergy rectangle_energy_closed_form(const SwimmerConfig &cfg, const RectangleStroke &rect);

/// Share of the large bladder's volume moved per stroke, (v_L - v_s) / v_L.
double volume_shuttle_fraction(const RectangleStroke &rect);

struct Condition {
    std::string name;
    double value = 0.0;
};

/// An asymptotic prediction together with the numeric size of the
/// assumptions it rests on.
struct Prediction {
    std::string name;
    double value = 0.0;
    std::vector<Condition> conditions;
};

/// Small loop near equal bladders: X = d_log_v * d_ell / 6.
Prediction predict_small_stroke_displacement(const SwimmerConfig &cfg, const ControlPoint &center, double d_log_v,
                                             double d_ell);

/// X = (a_L - a_s)/(a_L + a_s) (ell_L - ell_s), up to O(eps^3).
Prediction predict_large_stroke_displacement(const SwimmerConfig &cfg, const RectangleStroke &rect);

/// Energy ~ 6 pi mu * 2 a_s ell_L^2 / T_ell for ell_L >> ell_s and
/// ell_L / a_s >> sqrt(v_L / v_s).
Prediction predict_rectangle_energy(const SwimmerConfig &cfg, const RectangleStroke &rect);

/// drag ~ 4 a_s for large strokes with most of the period on the ell-legs.
Prediction predict_drag_large_stroke(const SwimmerConfig &cfg, const RectangleStroke &rect);

/// drag ~ 72 a / d_log_v^2 for small strokes near equal bladders of radius a.
Prediction predict_drag_small_stroke(const SwimmerConfig &cfg, double a, double d_log_v);

/// Published small-stroke result for the symmetric three-linked-spheres
/// swimmer: 0.7 eps d_log_l2 d_l1.
double three_sphere_small_stroke(double eps, double d_log_l2, double d_l1);

struct NamedValue {
    std::string name;
    double value = 0.0;
};

/// Drag of other swimmers for a body of radius a: a dragged sphere (a), the
/// lower bound for surface-wave squirmers (4a/3) and flagellar models (100a).
std::vector<NamedValue> reference_drags(double a);

} // namespace pmpy
