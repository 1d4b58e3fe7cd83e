#include "pmpy/stroke.hpp"

#include "pmpy/errors.hpp"
#include "pmpy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pmpy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool close_to(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool same_point(const ControlPoint &a, const ControlPoint &b) {
    constexpr double tol = 1e-12;
    return close_to(a.ell, b.ell, tol) && close_to(a.v, b.v, tol);
}

double shape_of(double v, double v0) { return std::asin(std::sqrt(v / v0)); }

} // namespace

ControlPoint point_at(const Geometry &g, double s) {
    return std::visit(
        overloaded{
            [s](const LineSegment &l) {
                if (s <= 0.0)
                    return l.from;
                if (s >= 1.0)
                    return l.to;
                return ControlPoint{l.from.ell + s * (l.to.ell - l.from.ell), l.from.v + s * (l.to.v - l.from.v)};
            },
            [s](const ShapeLineSegment &l) {
                if (s <= 0.0)
                    return l.from;
                if (s >= 1.0)
                    return l.to;
                const double x0 = shape_of(l.from.v, l.v0);
                const double x1 = shape_of(l.to.v, l.v0);
                const double x = x0 + s * (x1 - x0);
                const double sx = std::sin(x);
                return ControlPoint{l.from.ell + s * (l.to.ell - l.from.ell), l.v0 * sx * sx};
            },
            [s](const LogVolumeEllipseArc &e) {
                const double theta = e.theta_begin + s * (e.theta_end - e.theta_begin);
                return ControlPoint{e.ell_center + e.ell_radius * std::sin(theta),
                                    std::exp(e.log_v_center + e.log_v_radius * std::cos(theta))};
            },
            [s](const PolylineSegment &p) {
                const std::size_t edges = p.vertices.size() - 1;
                if (s <= 0.0)
                    return p.vertices.front();
                if (s >= 1.0)
                    return p.vertices.back();
                const double scaled = s * static_cast<double>(edges);
                const std::size_t k = std::min(static_cast<std::size_t>(scaled), edges - 1);
                const double t = scaled - static_cast<double>(k);
                const ControlPoint &a = p.vertices[k];
                const ControlPoint &b = p.vertices[k + 1];
                return ControlPoint{a.ell + t * (b.ell - a.ell), a.v + t * (b.v - a.v)};
            },
        },
        g);
}

ControlVelocity tangent_at(const Geometry &g, double s) {
    return std::visit(
        overloaded{
            [](const LineSegment &l) { return ControlVelocity{l.to.ell - l.from.ell, l.to.v - l.from.v}; },
            [s](const ShapeLineSegment &l) {
                const double x0 = shape_of(l.from.v, l.v0);
                const double x1 = shape_of(l.to.v, l.v0);
                const double x = x0 + std::clamp(s, 0.0, 1.0) * (x1 - x0);
                return ControlVelocity{l.to.ell - l.from.ell, l.v0 * std::sin(2.0 * x) * (x1 - x0)};
            },
            [s](const LogVolumeEllipseArc &e) {
                const double dtheta = e.theta_end - e.theta_begin;
                const double theta = e.theta_begin + s * dtheta;
                const double v = std::exp(e.log_v_center + e.log_v_radius * std::cos(theta));
                return ControlVelocity{e.ell_radius * std::cos(theta) * dtheta,
                                       -v * e.log_v_radius * std::sin(theta) * dtheta};
            },
            [s](const PolylineSegment &p) {
                const std::size_t edges = p.vertices.size() - 1;
                const double n = static_cast<double>(edges);
                const double scaled = std::clamp(s, 0.0, 1.0) * n;
                const std::size_t k = std::min(static_cast<std::size_t>(scaled), edges - 1);
                const ControlPoint &a = p.vertices[k];
                const ControlPoint &b = p.vertices[k + 1];
                return ControlVelocity{(b.ell - a.ell) * n, (b.v - a.v) * n};
            },
        },
        g);
}

std::vector<double> breakpoints(const Geometry &g) {
    std::vector<double> out;
    if (const auto *p = std::get_if<PolylineSegment>(&g)) {
        const std::size_t edges = p->vertices.size() - 1;
        for (std::size_t k = 1; k < edges; ++k)
            out.push_back(static_cast<double>(k) / static_cast<double>(edges));
    }
    return out;
}

Geometry reversed(const Geometry &g) {
    return std::visit(overloaded{
                          [](const LineSegment &l) -> Geometry { return LineSegment{l.to, l.from}; },
                          [](const ShapeLineSegment &l) -> Geometry { return ShapeLineSegment{l.to, l.from, l.v0}; },
                          [](const LogVolumeEllipseArc &e) -> Geometry {
                              LogVolumeEllipseArc r = e;
                              std::swap(r.theta_begin, r.theta_end);
                              return r;
                          },
                          [](const PolylineSegment &p) -> Geometry {
                              PolylineSegment r = p;
                              std::reverse(r.vertices.begin(), r.vertices.end());
                              return r;
                          },
                      },
                      g);
}

std::vector<Piece> smooth_pieces(const Geometry &g) {
    std::vector<Piece> out;
    if (const auto *p = std::get_if<PolylineSegment>(&g)) {
        const std::size_t edges = p->vertices.size() - 1;
        for (std::size_t k = 0; k < edges; ++k)
            out.push_back(Piece{LineSegment{p->vertices[k], p->vertices[k + 1]},
                                static_cast<double>(k) / static_cast<double>(edges),
                                static_cast<double>(k + 1) / static_cast<double>(edges)});
        return out;
    }
    out.push_back(Piece{g, 0.0, 1.0});
    return out;
}

Stroke::Stroke(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty())
        throw ConstructionError("stroke needs at least one segment");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment &seg = segments_[i];
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration))
            throw ConstructionError("segment " + std::to_string(i) + ": duration must be positive and finite");
        if (const auto *p = std::get_if<PolylineSegment>(&seg.geometry); p && p->vertices.size() < 2)
            throw ConstructionError("segment " + std::to_string(i) + ": polyline needs at least two vertices");
        period_ += seg.duration;
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const std::size_t next = (i + 1) % segments_.size();
        const ControlPoint end = point_at(segments_[i].geometry, 1.0);
        const ControlPoint begin = point_at(segments_[next].geometry, 0.0);
        if (!same_point(end, begin)) {
            if (next == 0)
                throw ConstructionError("stroke is not closed");
            throw ConstructionError("segments " + std::to_string(i) + " and " + std::to_string(next) +
                                    " do not join");
        }
    }
}

ControlPoint Stroke::start() const { return point_at(segments_.front().geometry, 0.0); }

void check_admissible(const SwimmerConfig &cfg, const Stroke &stroke, std::size_t points_per_segment) {
    const std::size_t n = std::max<std::size_t>(points_per_segment, 2);
    for (const Segment &seg : stroke.segments()) {
        if (const auto *l = std::get_if<ShapeLineSegment>(&seg.geometry); l && !close_to(l->v0, cfg.v0, 1e-12))
            throw ConstructionError("shape-line segment was built for a different total volume");
        if (const auto *p = std::get_if<PolylineSegment>(&seg.geometry))
            for (const ControlPoint &q : p->vertices)
                sphere_state(cfg, q);
        for (std::size_t j = 0; j < n; ++j)
            sphere_state(cfg, point_at(seg.geometry, static_cast<double>(j) / static_cast<double>(n - 1)));
    }
}

double shape_coordinate(const SwimmerConfig &cfg, double v) {
    if (!(v > 0.0 && v < cfg.v0))
        throw DomainError("shape_coordinate: volume must lie strictly between 0 and v0");
    return shape_of(v, cfg.v0);
}

double volume_of_shape_coordinate(const SwimmerConfig &cfg, double x) {
    const double s = std::sin(x);
    return cfg.v0 * s * s;
}

RectangleStroke make_rectangle(const SwimmerConfig &cfg, double ell_s, double ell_L, double v_s, double T_ell,
                               double T_v) {
    cfg.validate();
    if (!(ell_s < ell_L))
        throw ConstructionError("rectangle: ell_s must be smaller than ell_L");
    if (!(v_s > 0.0))
        throw ConstructionError("rectangle: v_s must be positive");
    if (!(v_s < 0.5 * cfg.v0))
        throw ConstructionError("rectangle: v_s must be smaller than v0 / 2");
    if (!(T_ell > 0.0) || !(T_v > 0.0) || !std::isfinite(T_ell) || !std::isfinite(T_v))
        throw ConstructionError("rectangle: leg durations must be positive and finite");

    RectangleStroke rect{ell_s, ell_L, v_s, cfg.v0 - v_s, T_ell, T_v};
    try {
        for (double ell : {ell_s, ell_L})
            for (double v : {rect.v_s, rect.v_L})
                sphere_state(cfg, {ell, v});
        // The v-legs pass through equal volumes, where a1 + a2 is largest.
        sphere_state(cfg, {ell_s, 0.5 * cfg.v0});
    } catch (const ModelValidityError &e) {
        throw ConstructionError(std::string("rectangle: ") + e.what());
    }
    return rect;
}

Stroke build_rectangle(const SwimmerConfig &cfg, const RectangleStroke &rect, VolumeLegProfile volume_legs) {
    if (!close_to(rect.v_s + rect.v_L, cfg.v0, 1e-12))
        throw ConstructionError("rectangle: v_s + v_L must equal v0");
    // Revalidate fields that may have been edited after make_rectangle.
    make_rectangle(cfg, rect.ell_s, rect.ell_L, rect.v_s, rect.T_ell, rect.T_v);

    const ControlPoint c0{rect.ell_s, rect.v_L};
    const ControlPoint c1{rect.ell_L, rect.v_L};
    const ControlPoint c2{rect.ell_L, rect.v_s};
    const ControlPoint c3{rect.ell_s, rect.v_s};
    auto v_leg = [&](ControlPoint a, ControlPoint b) -> Geometry {
        if (volume_legs == VolumeLegProfile::ConstantShapeRate)
            return ShapeLineSegment{a, b, cfg.v0};
        return LineSegment{a, b};
    };
    const auto profile = SpeedProfile::ConstantControlSpeed;
    Stroke stroke({
        Segment{LineSegment{c0, c1}, rect.T_ell, profile},
        Segment{v_leg(c1, c2), rect.T_v, profile},
        Segment{LineSegment{c2, c3}, rect.T_ell, profile},
        Segment{v_leg(c3, c0), rect.T_v, profile},
    });
    try {
        check_admissible(cfg, stroke);
    } catch (const ModelValidityError &e) {
        throw ConstructionError(std::string("rectangle: ") + e.what());
    }
    return stroke;
}

Stroke build_rectangle(const SwimmerConfig &cfg, double ell_s, double ell_L, double v_s, double T_ell, double T_v) {
    return build_rectangle(cfg, make_rectangle(cfg, ell_s, ell_L, v_s, T_ell, T_v));
}

RectangleLegCoefficients rectangle_leg_coefficients(const SwimmerConfig &cfg, const RectangleStroke &rect) {
    const double a_s = radius_of_volume(rect.v_s);
    const double a_L = radius_of_volume(rect.v_L);
    const double d_ell = rect.ell_L - rect.ell_s;
    const double d_x = shape_of(rect.v_L, cfg.v0) - shape_of(rect.v_s, cfg.v0);
    return RectangleLegCoefficients{6.0 * pi * cfg.mu * (a_s * a_L / (a_s + a_L)) * d_ell * d_ell,
                                    16.0 * cfg.mu / 3.0 * cfg.v0 * d_x * d_x};
}

LegSplit optimal_leg_split(double c_ell, double c_v, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("optimal_leg_split: period must be positive and finite");
    if (!(c_ell >= 0.0) || !(c_v >= 0.0))
        throw DomainError("optimal_leg_split: energy coefficients must be non-negative");
    const double half = 0.5 * tau;
    const double se = std::sqrt(c_ell);
    const double sv = std::sqrt(c_v);
    if (se + sv == 0.0)
        return {0.5 * half, 0.5 * half};
    const double t_ell = half * se / (se + sv);
    return {t_ell, half - t_ell};
}

LegSplit optimal_leg_split(const SwimmerConfig &cfg, const RectangleStroke &rect, double tau) {
    const RectangleLegCoefficients c = rectangle_leg_coefficients(cfg, rect);
    return optimal_leg_split(c.ell_leg, c.v_leg, tau);
}

std::vector<double> optimal_time_split(std::span<const double> coefficients, double total) {
    if (!(total > 0.0))
        throw DomainError("optimal_time_split: total time must be positive");
    std::vector<double> out(coefficients.size(), 0.0);
    if (coefficients.empty())
        return out;
    double sum = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (!(coefficients[i] >= 0.0))
            throw DomainError("optimal_time_split: coefficients must be non-negative");
        out[i] = std::sqrt(coefficients[i]);
        sum += out[i];
    }
    if (sum == 0.0) {
        std::fill(out.begin(), out.end(), total / static_cast<double>(out.size()));
        return out;
    }
    for (double &t : out)
        t *= total / sum;
    return out;
}

Stroke build_small_loop(const SwimmerConfig &cfg, const ControlPoint &center, double d_log_v, double d_ell,
                        double period, LoopShape shape, SpeedProfile profile) {
    cfg.validate();
    if (!(period > 0.0) || !std::isfinite(period))
        throw ConstructionError("small loop: period must be positive and finite");
    if (!std::isfinite(d_log_v) || !std::isfinite(d_ell))
        throw ConstructionError("small loop: loop sides must be finite");
    if (!(center.v > 0.0))
        throw ConstructionError("small loop: center volume must be positive");

    const double log_vc = std::log(center.v);
    std::vector<Segment> segments;
    if (shape == LoopShape::Rectangle) {
        const double v_lo = std::exp(log_vc - 0.5 * d_log_v);
        const double v_hi = std::exp(log_vc + 0.5 * d_log_v);
        const double l_lo = center.ell - 0.5 * d_ell;
        const double l_hi = center.ell + 0.5 * d_ell;
        const ControlPoint c0{l_lo, v_lo};
        const ControlPoint c1{l_lo, v_hi};
        const ControlPoint c2{l_hi, v_hi};
        const ControlPoint c3{l_hi, v_lo};
        const double t = 0.25 * period;
        segments = {Segment{LineSegment{c0, c1}, t, profile}, Segment{LineSegment{c1, c2}, t, profile},
                    Segment{LineSegment{c2, c3}, t, profile}, Segment{LineSegment{c3, c0}, t, profile}};
    } else {
        const double k = 1.0 / std::sqrt(pi);
        LogVolumeEllipseArc arc{center.ell, log_vc, k * d_ell, k * d_log_v, 0.0, 2.0 * pi};
        segments = {Segment{arc, period, profile}};
    }
    Stroke stroke(std::move(segments));
    try {
        check_admissible(cfg, stroke);
    } catch (const ModelValidityError &e) {
        throw ConstructionError(std::string("small loop: ") + e.what());
    }
    return stroke;
}

Stroke build_polyline(const SwimmerConfig &cfg, std::vector<ControlPoint> vertices, double period,
                      SpeedProfile profile) {
    cfg.validate();
    if (vertices.size() < 4)
        throw ConstructionError("polyline: need at least three distinct vertices plus the closing vertex");
    if (!(vertices.front() == vertices.back()))
        throw ConstructionError("polyline: first and last vertex must coincide");
    if (!(period > 0.0) || !std::isfinite(period))
        throw ConstructionError("polyline: period must be positive and finite");
    Stroke stroke({Segment{PolylineSegment{std::move(vertices)}, period, profile}});
    try {
        check_admissible(cfg, stroke);
    } catch (const ModelValidityError &e) {
        throw ConstructionError(std::string("polyline: ") + e.what());
    }
    return stroke;
}

std::vector<ControlPoint> sample_closed_curve(const std::function<ControlPoint(double)> &curve,
                                              std::size_t refinement) {
    if (refinement < 3)
        throw DomainError("sample_closed_curve: refinement must be at least 3");
    std::vector<ControlPoint> out;
    out.reserve(refinement + 1);
    for (std::size_t k = 0; k < refinement; ++k)
        out.push_back(curve(static_cast<double>(k) / static_cast<double>(refinement)));
    out.push_back(out.front());
    return out;
}

Stroke reverse(const Stroke &stroke) {
    std::vector<Segment> out;
    out.reserve(stroke.size());
    for (auto it = stroke.segments().rbegin(); it != stroke.segments().rend(); ++it)
        out.push_back(Segment{reversed(it->geometry), it->duration, it->profile});
    return Stroke(std::move(out));
}

Stroke reparametrize(const Stroke &stroke, double new_period) {
    if (!(new_period > 0.0) || !std::isfinite(new_period))
        throw DomainError("reparametrize: new period must be positive and finite");
    const double factor = new_period / stroke.period();
    std::vector<Segment> out(stroke.segments().begin(), stroke.segments().end());
    for (Segment &seg : out)
        seg.duration *= factor;
    return Stroke(std::move(out));
}

Stroke with_durations(const Stroke &stroke, std::span<const double> durations) {
    if (durations.size() != stroke.size())
        throw DomainError("with_durations: one duration per segment required");
    std::vector<Segment> out(stroke.segments().begin(), stroke.segments().end());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].duration = durations[i];
    return Stroke(std::move(out));
}

Stroke with_profile(const Stroke &stroke, SpeedProfile profile) {
    std::vector<Segment> out(stroke.segments().begin(), stroke.segments().end());
    for (Segment &seg : out)
        seg.profile = profile;
    return Stroke(std::move(out));
}

Stroke relabel_bladders(const Stroke &stroke, double v0) {
    auto flip = [v0](ControlPoint p) { return ControlPoint{p.ell, v0 - p.v}; };
    std::vector<Segment> out;
    out.reserve(stroke.size());
    for (const Segment &seg : stroke.segments()) {
        Geometry g = std::visit(
            overloaded{
                [&](const LineSegment &l) -> Geometry { return LineSegment{flip(l.from), flip(l.to)}; },
                [&](const ShapeLineSegment &l) -> Geometry {
                    return ShapeLineSegment{flip(l.from), flip(l.to), l.v0};
                },
                [](const LogVolumeEllipseArc &) -> Geometry {
                    throw UnsupportedOperation("relabel_bladders: log-volume ellipse arcs are not closed under "
                                               "v -> v0 - v; approximate the loop by a polyline");
                },
                [&](const PolylineSegment &p) -> Geometry {
                    PolylineSegment r;
                    r.vertices.reserve(p.vertices.size());
                    for (const ControlPoint &q : p.vertices)
                        r.vertices.push_back(flip(q));
                    return r;
                },
            },
            seg.geometry);
        out.push_back(Segment{std::move(g), seg.duration, seg.profile});
    }
    return Stroke(std::move(out));
}

double signed_area_log_v_ell(const Stroke &stroke) {
    quadrature::Settings settings;
    settings.rel_tol = 1e-13;
    double area = 0.0;
    for (const Segment &seg : stroke.segments()) {
        for (const Piece &piece : smooth_pieces(seg.geometry)) {
            auto integrand = [&](double s) {
                return std::log(point_at(piece.geometry, s).v) * tangent_at(piece.geometry, s).ell_dot;
            };
            area += quadrature::integrate(integrand, 0.0, 1.0, settings).value;
        }
    }
    return area;
}

} // namespace pmpy
