#pragma once

// Declarative experiment configuration (JSON).
//
// Parsing is strict: unknown keys, wrong types and out-of-range values are
// rejected with a ConfigError naming the offending field path, e.g.
// "stroke.v_s". to_json() writes the normalized form, which parses back to
// an equal config.

#include "pmpy/model.hpp"
#include "pmpy/quadrature.hpp"
#include "pmpy/stroke.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pmpy::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

struct RectangleSpec {
    double ell_s = 0.0;
    double ell_L = 0.0;
    double v_s = 0.0;
    VolumeLegProfile volume_legs = VolumeLegProfile::ConstantShapeRate;
    bool operator==(const RectangleSpec &) const = default;
};

struct SmallLoopSpec {
    ControlPoint center;
    double d_log_v = 0.0;
    double d_ell = 0.0;
    LoopShape shape = LoopShape::Rectangle;
    bool operator==(const SmallLoopSpec &) const = default;
};

struct PolylineSpec {
    std::vector<ControlPoint> points;
    bool operator==(const PolylineSpec &) const = default;
};

using StrokeSpec = std::variant<RectangleSpec, SmallLoopSpec, PolylineSpec>;

/// Either explicit durations or a total period. For rectangles the durations
/// are [T_ell, T_v]; otherwise one per stroke segment. With optimal set, the
/// period is distributed to minimize dissipation.
struct TimingSpec {
    std::vector<double> durations;
    double period = 0.0;
    bool optimal = false;
    bool operator==(const TimingSpec &) const = default;
};

struct QuadratureSpec {
    double tolerance = 1e-10;
    int max_depth = 40;
    bool operator==(const QuadratureSpec &) const = default;
};

struct OutputSpec {
    std::size_t samples = 200;
    std::string trajectory = "trajectory.csv";
    std::string summary = "summary.json";
    bool operator==(const OutputSpec &) const = default;
};

struct SweepAxis {
    std::string field; ///< dotted path into the config, e.g. "stroke.eps"
    std::vector<double> values;
    bool operator==(const SweepAxis &) const = default;
};

/// Cartesian product of the axes, first axis slowest. No axes, or an axis
/// without values, is an empty grid.
struct SweepSpec {
    std::vector<SweepAxis> grid;
    std::size_t max_points = 100000;
    std::string output = "sweep.csv";
    bool operator==(const SweepSpec &) const = default;
};

/// One sphere at the origin dragged by force and dilating at v_dot.
struct SingleSourceSpec {
    double a = 1.0;
    Vec3 force = Vec3::Zero();
    double v_dot = 0.0;
    bool operator==(const SingleSourceSpec &) const = default;
};

/// Both bladders in the state (ell, v) moving at (ell_dot, v_dot). Sphere 1
/// sits at x = -ell/2 and sphere 2 at x = +ell/2.
struct PairSourceSpec {
    ControlPoint state;
    ControlVelocity rate;
    bool operator==(const PairSourceSpec &) const = default;
};

struct FlowfieldSpec {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();
    std::array<std::size_t, 3> resolution{};
    std::variant<SingleSourceSpec, PairSourceSpec> source;
    std::string output = "flowfield.csv";
    bool operator==(const FlowfieldSpec &) const = default;
};

struct ExperimentConfig {
    SwimmerConfig swimmer;
    std::optional<StrokeSpec> stroke;
    TimingSpec timing;
    QuadratureSpec quadrature;
    OutputSpec outputs;
    std::optional<SweepSpec> sweep;
    std::optional<FlowfieldSpec> flowfield;
    bool operator==(const ExperimentConfig &) const = default;
};

/// Rectangles may be given either as {ell_s, ell_L, v_s} or as
/// {eps, ell_ratio, v_s} with ell_s = a_L / eps and ell_L = ell_ratio ell_s;
/// both normalize to the former.
ExperimentConfig parse_config(const Json &j);
ExperimentConfig parse_config_text(const std::string &text);
/// Reads and parses a file; unreadable files raise std::runtime_error.
ExperimentConfig load_config(const std::string &path);
Json load_json(const std::string &path);

Json to_json(const ExperimentConfig &cfg);

/// Replaces the number at a dotted path such as "stroke.center.ell". Only
/// object keys are traversed, and the field must already hold a number.
void set_numeric_field(Json &j, const std::string &dotted_path, double value);

/// Built stroke with its timing applied.
struct BuiltStroke {
    Stroke stroke;
    std::optional<RectangleStroke> rectangle;
};

/// Requires cfg.stroke. Construction failures are re-raised as ConfigError
/// against the relevant field.
BuiltStroke build_stroke(const ExperimentConfig &cfg);

quadrature::Settings quadrature_settings(const QuadratureSpec &q);

} // namespace pmpy::cli
