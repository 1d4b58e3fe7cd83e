#include "pmpy/sim.hpp"

#include "pmpy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmpy {

namespace {

SwimmerConfig unit_viscosity(SwimmerConfig cfg) {
    cfg.mu = 1.0;
    return cfg;
}

struct RangeIntegrals {
    quadrature::Result displacement;
    quadrature::Result quadratic; ///< int g(gamma'_s, gamma'_s) ds
    quadrature::Result length;    ///< int sqrt(g(gamma'_s, gamma'_s)) ds
};

// Integrals over s in [s0, s1] of one segment, evaluated piece by piece so
// that polyline vertices fall on panel boundaries.
RangeIntegrals integrate_range(const SwimmerConfig &cfg, const std::vector<Piece> &pieces, double s0, double s1,
                               const quadrature::Settings &settings) {
    RangeIntegrals out;
    for (const Piece &piece : pieces) {
        const double lo = std::max(s0, piece.s_begin);
        const double hi = std::min(s1, piece.s_end);
        if (!(hi > lo))
            continue;
        const double span = piece.s_end - piece.s_begin;
        const double t0 = (lo - piece.s_begin) / span;
        const double t1 = (hi - piece.s_begin) / span;
        const Geometry &g = piece.geometry;

        auto one_form = [&](double t) {
            const DisplacementForm form = displacement_form(cfg, point_at(g, t));
            const ControlVelocity d = tangent_at(g, t);
            return form.d_ell * d.ell_dot + form.d_v * d.v_dot;
        };
        auto quadratic = [&](double t) { return dissipation_metric(cfg, point_at(g, t))(tangent_at(g, t)) / span; };
        auto speed = [&](double t) {
            return std::sqrt(dissipation_metric(cfg, point_at(g, t))(tangent_at(g, t)));
        };
        out.displacement += quadrature::integrate(one_form, t0, t1, settings);
        out.quadratic += quadrature::integrate(quadratic, t0, t1, settings);
        out.length += quadrature::integrate(speed, t0, t1, settings);
    }
    return out;
}

void require_converged(const quadrature::Result &r, const quadrature::Settings &settings, std::size_t segment,
                       const char *what) {
    if (r.converged)
        return;
    const double achieved = r.error / std::max(std::abs(r.value), 1e-300);
    std::ostringstream os;
    os.precision(3);
    os << "segment " << segment << ": " << what << " integral did not reach relative tolerance "
       << settings.rel_tol << " (estimated " << achieved << ")";
    throw IntegrationAccuracyError(os.str(), achieved, settings.rel_tol);
}

// Time-derivative of the segment parameter at s.
double parameter_rate(const SwimmerConfig &unit, const Segment &seg, double metric_len, double s) {
    if (seg.profile == SpeedProfile::ConstantControlSpeed || metric_len == 0.0)
        return 1.0 / seg.duration;
    const double g = dissipation_metric(unit, point_at(seg.geometry, s))(tangent_at(seg.geometry, s));
    if (!(g > 0.0))
        return 1.0 / seg.duration;
    return metric_len / (seg.duration * std::sqrt(g));
}

struct SegmentTotals {
    double displacement = 0.0;
    double energy_unit = 0.0; ///< energy at mu = 1
    double metric_length = 0.0;
};

void merge_validity(ValidityReport &worst, const ValidityReport &r) {
    worst.reynolds = std::max(worst.reynolds, r.reynolds);
    worst.eps = std::max(worst.eps, r.eps);
    worst.far_field_measure = std::max(worst.far_field_measure, r.far_field_measure);
    worst.far_field_ok = worst.far_field_ok && r.far_field_ok;
}

} // namespace

StrokeResult integrate(const SwimmerConfig &cfg, const Stroke &stroke, const IntegrationOptions &options) {
    cfg.validate();
    check_admissible(cfg, stroke);
    const SwimmerConfig unit = unit_viscosity(cfg);
    const quadrature::Settings &q = options.quadrature;

    StrokeResult result;
    result.period = stroke.period();
    result.fidelity = cfg.fidelity;

    std::vector<std::vector<Piece>> pieces;
    std::vector<SegmentTotals> totals;
    double energy_unit = 0.0;
    double energy_unit_error = 0.0;
    double displacement_scale = 0.0;

    for (std::size_t k = 0; k < stroke.size(); ++k) {
        const Segment &seg = stroke[k];
        pieces.push_back(smooth_pieces(seg.geometry));
        const RangeIntegrals r = integrate_range(unit, pieces.back(), 0.0, 1.0, q);
        require_converged(r.displacement, q, k, "displacement");

        SegmentTotals t;
        t.displacement = r.displacement.value;
        t.metric_length = r.length.value;
        if (seg.profile == SpeedProfile::ConstantControlSpeed) {
            require_converged(r.quadratic, q, k, "energy");
            t.energy_unit = r.quadratic.value / seg.duration;
            energy_unit_error += r.quadratic.error / seg.duration;
        } else {
            require_converged(r.length, q, k, "metric length");
            t.energy_unit = t.metric_length * t.metric_length / seg.duration;
            energy_unit_error += 2.0 * t.metric_length * r.length.error / seg.duration;
        }
        result.displacement += t.displacement;
        result.displacement_error += r.displacement.error;
        displacement_scale += std::abs(t.displacement);
        energy_unit += t.energy_unit;
        totals.push_back(t);
    }

    result.energy = cfg.mu * energy_unit;
    result.energy_error = cfg.mu * energy_unit_error;
    if (std::abs(result.displacement) <= 1e-13 * displacement_scale) {
        result.drag = std::numeric_limits<double>::infinity();
        result.drag_finite = false;
        result.drag_note = "displacement vanishes (self-retracing stroke); drag diverges";
    } else {
        result.drag = result.period * energy_unit / (6.0 * pi * result.displacement * result.displacement);
    }

    // Worst-case diagnostics on a fixed grid per segment.
    const std::size_t m = std::max<std::size_t>(options.validity_points_per_segment, 2);
    for (std::size_t k = 0; k < stroke.size(); ++k) {
        const Segment &seg = stroke[k];
        for (std::size_t j = 0; j < m; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(m - 1);
            const ControlPoint p = point_at(seg.geometry, s);
            const ControlVelocity d = tangent_at(seg.geometry, s);
            const double rate = parameter_rate(unit, seg, totals[k].metric_length, s);
            merge_validity(result.validity,
                           validity(cfg, p, {d.ell_dot * rate, d.v_dot * rate}, options.thresholds));
        }
    }
    result.validity.warnings = validity_warnings(result.validity, options.thresholds);

    if (options.samples == 0)
        return result;

    auto make_sample = [&](const Segment &seg, double metric_len, double s, double t, double X, double E) {
        const ControlPoint p = point_at(seg.geometry, s);
        const ControlVelocity d = tangent_at(seg.geometry, s);
        const double rate = parameter_rate(unit, seg, metric_len, s);
        const SphereState st = sphere_state(cfg, p);
        return TrajectorySample{t,     p.ell, p.v, st.a1, st.a2, X,
                                power(cfg, p, {d.ell_dot * rate, d.v_dot * rate}), E};
    };

    double t_offset = 0.0;
    double X_acc = 0.0;
    double E_acc = 0.0;
    for (std::size_t k = 0; k < stroke.size(); ++k) {
        const Segment &seg = stroke[k];
        const SegmentTotals &tot = totals[k];
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(static_cast<double>(options.samples) * seg.duration / result.period));

        double X_part = 0.0;
        double quad_part = 0.0;
        double len_part = 0.0;
        double s_prev = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(n);
            if (s > s_prev) {
                const RangeIntegrals r = integrate_range(unit, pieces[k], s_prev, s, q);
                X_part += r.displacement.value;
                quad_part += r.quadratic.value;
                len_part += r.length.value;
            }
            s_prev = s;

            double t_local = seg.duration * s;
            double E_part = quad_part / seg.duration;
            if (seg.profile == SpeedProfile::ConstantMetricSpeed && tot.metric_length > 0.0) {
                t_local = seg.duration * len_part / tot.metric_length;
                E_part = tot.metric_length * len_part / seg.duration;
            }
            result.samples.push_back(make_sample(seg, tot.metric_length, s, t_offset + t_local, X_acc + X_part,
                                                 cfg.mu * (E_acc + E_part)));
        }
        t_offset += seg.duration;
        X_acc += tot.displacement;
        E_acc += tot.energy_unit;
    }
    const Segment &last = stroke[stroke.size() - 1];
    result.samples.push_back(
        make_sample(last, totals.back().metric_length, 1.0, result.period, result.displacement, result.energy));
    return result;
}

double metric_length(const SwimmerConfig &cfg, const Segment &segment, const quadrature::Settings &settings) {
    const RangeIntegrals r = integrate_range(cfg, smooth_pieces(segment.geometry), 0.0, 1.0, settings);
    require_converged(r.length, settings, 0, "metric length");
    return r.length.value;
}

Stroke optimize_timing(const SwimmerConfig &cfg, const Stroke &stroke, double period,
                       const quadrature::Settings &settings) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw DomainError("optimize_timing: period must be positive and finite");
    std::vector<double> lengths;
    double total = 0.0;
    for (std::size_t k = 0; k < stroke.size(); ++k) {
        const double L = metric_length(cfg, stroke[k], settings);
        if (!(L > 0.0))
            throw ConstructionError("optimize_timing: segment " + std::to_string(k) +
                                    " has zero metric length and cannot be given a duration");
        lengths.push_back(L);
        total += L;
    }
    for (double &L : lengths)
        L *= period / total;
    return with_profile(with_durations(stroke, lengths), SpeedProfile::ConstantMetricSpeed);
}

double rectangle_displacement_closed_form(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    (void)cfg;
    const double a_s = radius_of_volume(rect.v_s);
    const double a_L = radius_of_volume(rect.v_L);
    const double anchor = (a_L - a_s) / (a_L + a_s) * (rect.ell_L - rect.ell_s);
    const double source =
        (rect.v_L - rect.v_s) / (4.0 * pi) * (1.0 / (rect.ell_s * rect.ell_s) - 1.0 / (rect.ell_L * rect.ell_L));
    return anchor + source;
}

RectangleEnergy rectangle_energy_closed_form(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    const RectangleLegCoefficients c = rectangle_leg_coefficients(cfg, rect);
    RectangleEnergy e;
    e.coefficients = {c.ell_leg, c.v_leg, c.ell_leg, c.v_leg};
    const std::array<double, 4> durations{rect.T_ell, rect.T_v, rect.T_ell, rect.T_v};
    for (std::size_t i = 0; i < 4; ++i) {
        e.leg_energies[i] = e.coefficients[i] / durations[i];
        e.total += e.leg_energies[i];
    }
    return e;
}

double volume_shuttle_fraction(const RectangleStroke &rect) { return (rect.v_L - rect.v_s) / rect.v_L; }

Prediction predict_small_stroke_displacement(const SwimmerConfig &cfg, const ControlPoint &center, double d_log_v,
                                             double d_ell) {
    const double a1 = radius_of_volume(center.v);
    const double a2 = radius_of_volume(cfg.v0 - center.v);
    const double eps = std::max(a1, a2) / center.ell;
    return Prediction{"small_stroke_displacement",
                      d_log_v * d_ell / 6.0,
                      {{"eps", eps},
                       {"eps_cubed", eps * eps * eps},
                       {"d_log_v", d_log_v},
                       {"d_ell_over_ell", d_ell / center.ell},
                       {"center_volume_offset", center.v / cfg.v0 - 0.5}}};
}

namespace {

struct RectangleRadii {
    double a_s;
    double a_L;
};

RectangleRadii radii(const RectangleStroke &rect) {
    return {radius_of_volume(rect.v_s), radius_of_volume(rect.v_L)};
}

std::vector<Condition> energy_conditions(const RectangleStroke &rect, const RectangleRadii &r) {
    const double eps = r.a_s / rect.ell_L;
    const double short_ratio = rect.ell_s / rect.ell_L;
    return {{"ell_ratio_squared", short_ratio * short_ratio},
            {"anchor_margin", (rect.ell_L / r.a_s) / std::sqrt(rect.v_L / rect.v_s)},
            {"correction_margin", eps * eps * (rect.v_L / rect.v_s) * (rect.T_ell / rect.T_v)}};
}

} // namespace

Prediction predict_large_stroke_displacement(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    (void)cfg;
    const RectangleRadii r = radii(rect);
    const double eps = r.a_L / rect.ell_s;
    return Prediction{"large_stroke_displacement",
                      (r.a_L - r.a_s) / (r.a_L + r.a_s) * (rect.ell_L - rect.ell_s),
                      {{"eps", eps}, {"eps_cubed", eps * eps * eps}, {"radius_ratio", r.a_s / r.a_L}}};
}

Prediction predict_rectangle_energy(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    const RectangleRadii r = radii(rect);
    return Prediction{"rectangle_energy", 6.0 * pi * cfg.mu * 2.0 * r.a_s * rect.ell_L * rect.ell_L / rect.T_ell,
                      energy_conditions(rect, r)};
}

Prediction predict_drag_large_stroke(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    (void)cfg;
    const RectangleRadii r = radii(rect);
    Prediction p{"large_stroke_drag", 4.0 * r.a_s, energy_conditions(rect, r)};
    p.conditions.push_back({"radius_ratio", r.a_s / r.a_L});
    p.conditions.push_back({"volume_shuttle_fraction", volume_shuttle_fraction(rect)});
    p.conditions.push_back({"ell_time_fraction", 2.0 * rect.T_ell / rect.period()});
    return p;
}

Prediction predict_drag_small_stroke(const SwimmerConfig &cfg, double a, double d_log_v) {
    (void)cfg;
    return Prediction{"small_stroke_drag", 72.0 * a / (d_log_v * d_log_v), {{"d_log_v", d_log_v}}};
}

double three_sphere_small_stroke(double eps, double d_log_l2, double d_l1) { return 0.7 * eps * d_log_l2 * d_l1; }

std::vector<NamedValue> reference_drags(double a) {
    if (!(a > 0.0))
        throw DomainError("reference_drags: radius must be positive");
    return {{"dragged-sphere", a}, {"stone-samuel-bound", 4.0 * a / 3.0}, {"flagellar-models", 100.0 * a}};
}

} // namespace pmpy
