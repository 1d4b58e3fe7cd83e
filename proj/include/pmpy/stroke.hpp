#pragma once

// Closed, timed strokes in the (ell, v) control plane.
//
// A stroke is an ordered list of segments. Each segment carries a geometry
// from a closed set of primitives, a duration and a speed profile. Geometry
// is parametrized by s in [0, 1]; the speed profile fixes how s advances in
// time.

#include "pmpy/model.hpp"

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace pmpy {

enum class SpeedProfile {
    ConstantControlSpeed, ///< s advances uniformly in time
    ConstantMetricSpeed,  ///< dissipated power is constant along the segment
};

/// Straight line in (ell, v).
struct LineSegment {
    ControlPoint from;
    ControlPoint to;
    bool operator==(const LineSegment &) const = default;
};

/// Straight line in (ell, x) with x = arcsin(sqrt(v / v0)). Constant control
/// speed along it means constant ell_dot and x_dot.
struct ShapeLineSegment {
    ControlPoint from;
    ControlPoint to;
    double v0 = 1.0;
    bool operator==(const ShapeLineSegment &) const = default;
};

/// Elliptic arc in (log v, ell):
///   log v = log_v_center + log_v_radius cos(theta)
///   ell   = ell_center   + ell_radius   sin(theta)
/// with theta running linearly from theta_begin to theta_end. Increasing theta
/// is counter-clockwise in the (log v, ell) chart.
struct LogVolumeEllipseArc {
    double ell_center = 0.0;
    double log_v_center = 0.0;
    double ell_radius = 0.0;
    double log_v_radius = 0.0;
    double theta_begin = 0.0;
    double theta_end = 0.0;
    bool operator==(const LogVolumeEllipseArc &) const = default;
};

/// Piecewise-linear path in (ell, v); each edge takes an equal share of s.
struct PolylineSegment {
    std::vector<ControlPoint> vertices;
    bool operator==(const PolylineSegment &) const = default;
};

using Geometry = std::variant<LineSegment, ShapeLineSegment, LogVolumeEllipseArc, PolylineSegment>;

ControlPoint point_at(const Geometry &g, double s);
/// d(ell, v)/ds
ControlVelocity tangent_at(const Geometry &g, double s);
/// Interior parameter values where the geometry is only C0 (sorted).
std::vector<double> breakpoints(const Geometry &g);
Geometry reversed(const Geometry &g);

/// A C1 piece of a geometry occupying [s_begin, s_end] of its parameter.
struct Piece {
    Geometry geometry;
    double s_begin = 0.0;
    double s_end = 1.0;
};

/// Splits a geometry at its breakpoints into C1 pieces, each reparametrized
/// over [0, 1]. Polyline edges become line segments.
std::vector<Piece> smooth_pieces(const Geometry &g);

struct Segment {
    Geometry geometry;
    double duration = 1.0;
    SpeedProfile profile = SpeedProfile::ConstantControlSpeed;
    bool operator==(const Segment &) const = default;
};

/// Immutable closed stroke. The constructor rejects open or discontinuous
/// paths and non-positive durations with ConstructionError.
class Stroke {
  public:
    explicit Stroke(std::vector<Segment> segments);

    std::span<const Segment> segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    const Segment &operator[](std::size_t i) const { return segments_[i]; }
    double period() const { return period_; }
    ControlPoint start() const;

    bool operator==(const Stroke &) const = default;

  private:
    std::vector<Segment> segments_;
    double period_ = 0.0;
};

/// Checks every segment against the model's admissibility conditions (volume
/// band, no overlap) on a dense parameter grid; throws ModelValidityError.
/// Shape-line segments must share cfg.v0.
void check_admissible(const SwimmerConfig &cfg, const Stroke &stroke, std::size_t points_per_segment = 129);

/// Shape coordinate x = arcsin(sqrt(v / v0)). Throws DomainError unless
/// 0 < v < v0.
double shape_coordinate(const SwimmerConfig &cfg, double v);
/// Inverse of shape_coordinate: v0 sin^2 x.
double volume_of_shape_coordinate(const SwimmerConfig &cfg, double x);

/// Box ell_s <= ell <= ell_L, v_s <= v1, v2 <= v_L = v0 - v_s, with the time
/// spent on each ell-leg (T_ell) and on each v-leg (T_v).
struct RectangleStroke {
    double ell_s = 0.0;
    double ell_L = 0.0;
    double v_s = 0.0;
    double v_L = 0.0;
    double T_ell = 0.0;
    double T_v = 0.0;

    double period() const { return 2.0 * (T_ell + T_v); }
    bool operator==(const RectangleStroke &) const = default;
};

/// Validates the box against cfg and returns it; throws ConstructionError.
RectangleStroke make_rectangle(const SwimmerConfig &cfg, double ell_s, double ell_L, double v_s, double T_ell,
                               double T_v);

enum class VolumeLegProfile {
    ConstantShapeRate,  ///< constant x_dot (optimal)
    ConstantVolumeRate, ///< constant v_dot
};

/// Four legs in the order (ell_s, v_L) -> (ell_L, v_L) -> (ell_L, v_s)
/// -> (ell_s, v_s) -> (ell_s, v_L): ell extends while the left bladder is
/// large, so the stroke swims in +X.
Stroke build_rectangle(const SwimmerConfig &cfg, const RectangleStroke &rect,
                       VolumeLegProfile volume_legs = VolumeLegProfile::ConstantShapeRate);
Stroke build_rectangle(const SwimmerConfig &cfg, double ell_s, double ell_L, double v_s, double T_ell, double T_v);

/// Per-leg energy coefficients of a rectangle: a leg traversed at its optimal
/// constant rate in time T dissipates C / T.
struct RectangleLegCoefficients {
    double ell_leg = 0.0; ///< 6 pi mu (a_s a_L / (a_s + a_L)) (ell_L - ell_s)^2
    double v_leg = 0.0;   ///< (16 mu / 3) v0 (x_L - x_s)^2
};

RectangleLegCoefficients rectangle_leg_coefficients(const SwimmerConfig &cfg, const RectangleStroke &rect);

struct LegSplit {
    double T_ell = 0.0;
    double T_v = 0.0;
};

/// Minimizes 2 C_ell / T_ell + 2 C_v / T_v subject to 2 (T_ell + T_v) = tau.
/// The minimizer allocates time in proportion to sqrt(C).
LegSplit optimal_leg_split(double c_ell, double c_v, double tau);
LegSplit optimal_leg_split(const SwimmerConfig &cfg, const RectangleStroke &rect, double tau);

/// Durations proportional to sqrt(C_i) summing to total. All-zero
/// coefficients give an equal split.
std::vector<double> optimal_time_split(std::span<const double> coefficients, double total);

enum class LoopShape { Rectangle, Ellipse };

/// Small positively oriented loop around center in the (log v, ell) chart
/// with signed area d_log_v * d_ell. The rectangle has sides d_log_v and
/// d_ell and four legs of period / 4; the ellipse has semi-axes
/// d_log_v / sqrt(pi) and d_ell / sqrt(pi) and is a single segment.
Stroke build_small_loop(const SwimmerConfig &cfg, const ControlPoint &center, double d_log_v, double d_ell,
                        double period, LoopShape shape = LoopShape::Rectangle,
                        SpeedProfile profile = SpeedProfile::ConstantControlSpeed);

/// Closed polyline stroke; vertices.front() must equal vertices.back().
Stroke build_polyline(const SwimmerConfig &cfg, std::vector<ControlPoint> vertices, double period,
                      SpeedProfile profile = SpeedProfile::ConstantMetricSpeed);

/// Samples a closed curve c(t), t in [0, 1], at refinement + 1 equally spaced
/// parameters, forcing exact closure. The polyline error in any line integral
/// is O(refinement^-2).
std::vector<ControlPoint> sample_closed_curve(const std::function<ControlPoint(double)> &curve,
                                              std::size_t refinement);

/// Reverses traversal order and direction; durations are kept per segment.
Stroke reverse(const Stroke &stroke);
/// Scales all durations by new_period / period. Throws DomainError for
/// new_period <= 0.
Stroke reparametrize(const Stroke &stroke, double new_period);
/// Replaces the durations, keeping geometry and profiles.
Stroke with_durations(const Stroke &stroke, std::span<const double> durations);
Stroke with_profile(const Stroke &stroke, SpeedProfile profile);
/// Exchanges the roles of the bladders: v -> v0 - v everywhere.
/// Throws UnsupportedOperation for log-volume ellipse arcs.
Stroke relabel_bladders(const Stroke &stroke, double v0);

/// Signed area enclosed in the (log v, ell) chart, counter-clockwise positive.
double signed_area_log_v_ell(const Stroke &stroke);

} // namespace pmpy
