#include "pmpy/cli/config.hpp"

#include "pmpy/errors.hpp"
#include "pmpy/sim.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pmpy::cli {

namespace {

std::string join(const std::string &base, const std::string &key) { return base.empty() ? key : base + "." + key; }

std::string indexed(const std::string &base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

double as_number(const Json &j, const std::string &path) {
    if (!j.is_number())
        throw ConfigError(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(path, "must be finite");
    return x;
}

long long as_integer(const Json &j, const std::string &path) {
    const double x = as_number(j, path);
    if (x != std::floor(x) || std::abs(x) > 9.0e15)
        throw ConfigError(path, "expected an integer");
    return static_cast<long long>(x);
}

std::string as_string(const Json &j, const std::string &path) {
    if (!j.is_string())
        throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const Json &j, const std::string &path) {
    if (!j.is_boolean())
        throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

const Json &as_array(const Json &j, const std::string &path) {
    if (!j.is_array())
        throw ConfigError(path, "expected an array");
    return j;
}

/// Strict object reader: every key must be consumed before finish().
class Reader {
  public:
    Reader(const Json &j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string &key) const { return j_.contains(key); }
    std::string path(const std::string &key) const { return join(path_, key); }
    const std::string &path() const { return path_; }

    const Json &at(const std::string &key) {
        if (!j_.contains(key))
            throw ConfigError(path(key), "required field is missing");
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string &key) { return as_number(at(key), path(key)); }
    double number(const std::string &key, double fallback) { return has(key) ? number(key) : fallback; }
    long long integer(const std::string &key) { return as_integer(at(key), path(key)); }
    long long integer(const std::string &key, long long fallback) { return has(key) ? integer(key) : fallback; }
    std::string string(const std::string &key) { return as_string(at(key), path(key)); }
    std::string string(const std::string &key, const std::string &fallback) {
        return has(key) ? string(key) : fallback;
    }
    bool boolean(const std::string &key, bool fallback) { return has(key) ? as_bool(at(key), path(key)) : fallback; }

    void finish() const {
        for (const auto &item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(path(item.key()), "unknown field");
    }

  private:
    const Json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string &path, const std::string &message) {
    if (!ok)
        throw ConfigError(path, message);
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

Vec3 parse_vec3(const Json &j, const std::string &path) {
    as_array(j, path);
    require(j.size() == 3, path, "expected three components");
    return {as_number(j[0], indexed(path, 0)), as_number(j[1], indexed(path, 1)), as_number(j[2], indexed(path, 2))};
}

SwimmerConfig parse_swimmer(const Json &j) {
    Reader r(j, "swimmer");
    SwimmerConfig s;
    s.mu = r.number("mu", s.mu);
    require(s.mu > 0.0, r.path("mu"), "must be positive");
    s.rho = r.number("rho", s.rho);
    require(s.rho >= 0.0, r.path("rho"), "must be non-negative");
    s.v0 = r.number("v0", s.v0);
    require(s.v0 > 0.0, r.path("v0"), "must be positive");
    if (r.has("fidelity")) {
        const std::string f = r.string("fidelity");
        require(f == "leading" || f == "refined", r.path("fidelity"), "must be \"leading\" or \"refined\"");
        s.fidelity = fidelity_from_string(f);
    }
    s.volume_margin = r.number("volume_margin", s.volume_margin);
    require(s.volume_margin >= 0.0 && s.volume_margin < 0.5, r.path("volume_margin"), "must lie in [0, 0.5)");
    r.finish();
    return s;
}

RectangleSpec parse_rectangle(Reader &r, const SwimmerConfig &sw) {
    RectangleSpec spec;
    spec.v_s = r.number("v_s");
    require(spec.v_s > 0.0 && spec.v_s < 0.5 * sw.v0, r.path("v_s"),
            "must satisfy 0 < v_s < v0/2 (v0 = " + fmt_double(sw.v0) + ", got " + fmt_double(spec.v_s) + ")");
    const bool explicit_lengths = r.has("ell_s") || r.has("ell_L");
    const bool scaled = r.has("eps") || r.has("ell_ratio");
    require(!(explicit_lengths && scaled), r.path(), "give either {ell_s, ell_L} or {eps, ell_ratio}, not both");
    if (scaled) {
        const double eps = r.number("eps");
        require(eps > 0.0, r.path("eps"), "must be positive");
        const double ratio = r.number("ell_ratio");
        require(ratio > 1.0, r.path("ell_ratio"), "must exceed 1");
        spec.ell_s = radius_of_volume(sw.v0 - spec.v_s) / eps;
        spec.ell_L = ratio * spec.ell_s;
    } else {
        spec.ell_s = r.number("ell_s");
        require(spec.ell_s > 0.0, r.path("ell_s"), "must be positive");
        spec.ell_L = r.number("ell_L");
        require(spec.ell_L > spec.ell_s, r.path("ell_L"), "must exceed ell_s");
    }
    const std::string rate = r.string("volume_rate", "shape");
    require(rate == "shape" || rate == "volume", r.path("volume_rate"), "must be \"shape\" or \"volume\"");
    spec.volume_legs = rate == "shape" ? VolumeLegProfile::ConstantShapeRate : VolumeLegProfile::ConstantVolumeRate;
    return spec;
}

ControlPoint parse_point(const Json &j, const std::string &path) {
    if (j.is_array()) {
        require(j.size() == 2, path, "expected [ell, v]");
        return {as_number(j[0], indexed(path, 0)), as_number(j[1], indexed(path, 1))};
    }
    Reader r(j, path);
    ControlPoint p{r.number("ell"), r.number("v")};
    r.finish();
    return p;
}

SmallLoopSpec parse_small_loop(Reader &r) {
    SmallLoopSpec spec;
    spec.center = parse_point(r.at("center"), r.path("center"));
    require(spec.center.ell > 0.0, r.path("center") + ".ell", "must be positive");
    require(spec.center.v > 0.0, r.path("center") + ".v", "must be positive");
    spec.d_log_v = r.number("d_log_v");
    spec.d_ell = r.number("d_ell");
    const std::string shape = r.string("shape", "rectangle");
    require(shape == "rectangle" || shape == "ellipse", r.path("shape"), "must be \"rectangle\" or \"ellipse\"");
    spec.shape = shape == "rectangle" ? LoopShape::Rectangle : LoopShape::Ellipse;
    return spec;
}

PolylineSpec parse_polyline(Reader &r) {
    PolylineSpec spec;
    const std::string path = r.path("points");
    const Json &points = as_array(r.at("points"), path);
    for (std::size_t i = 0; i < points.size(); ++i)
        spec.points.push_back(parse_point(points[i], indexed(path, i)));
    require(spec.points.size() >= 4, path, "need at least three vertices plus the closing vertex");
    require(spec.points.front() == spec.points.back(), path, "first and last point must coincide");
    return spec;
}

StrokeSpec parse_stroke(const Json &j, const SwimmerConfig &sw) {
    Reader r(j, "stroke");
    const std::string type = r.string("type");
    StrokeSpec spec;
    if (type == "rectangle")
        spec = parse_rectangle(r, sw);
    else if (type == "small_loop")
        spec = parse_small_loop(r);
    else if (type == "polyline")
        spec = parse_polyline(r);
    else
        throw ConfigError(r.path("type"), "must be \"rectangle\", \"small_loop\" or \"polyline\"");
    r.finish();
    return spec;
}

TimingSpec parse_timing(const Json &j) {
    Reader r(j, "timing");
    TimingSpec t;
    if (r.has("durations")) {
        require(!r.has("period") && !r.has("optimal"), r.path(), "give either durations or period, not both");
        const std::string path = r.path("durations");
        const Json &d = as_array(r.at("durations"), path);
        require(!d.empty(), path, "must not be empty");
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double x = as_number(d[i], indexed(path, i));
            require(x > 0.0, indexed(path, i), "must be positive");
            t.durations.push_back(x);
        }
    } else {
        t.period = r.number("period");
        require(t.period > 0.0, r.path("period"), "must be positive");
        t.optimal = r.boolean("optimal", false);
    }
    r.finish();
    return t;
}

QuadratureSpec parse_quadrature(const Json &j) {
    Reader r(j, "quadrature");
    QuadratureSpec q;
    q.tolerance = r.number("tolerance", q.tolerance);
    require(q.tolerance > 0.0 && q.tolerance < 1.0, r.path("tolerance"), "must lie in (0, 1)");
    const long long depth = r.integer("max_depth", q.max_depth);
    require(depth >= 4 && depth <= 60, r.path("max_depth"), "must lie in [4, 60]");
    q.max_depth = static_cast<int>(depth);
    r.finish();
    return q;
}

std::string parse_filename(Reader &r, const std::string &key, const std::string &fallback) {
    const std::string name = r.string(key, fallback);
    require(!name.empty(), r.path(key), "must not be empty");
    return name;
}

OutputSpec parse_outputs(const Json &j) {
    Reader r(j, "outputs");
    OutputSpec o;
    const long long samples = r.integer("samples", static_cast<long long>(o.samples));
    require(samples >= 0 && samples <= 10000000, r.path("samples"), "must lie in [0, 1e7]");
    o.samples = static_cast<std::size_t>(samples);
    o.trajectory = parse_filename(r, "trajectory", o.trajectory);
    o.summary = parse_filename(r, "summary", o.summary);
    r.finish();
    return o;
}

SweepSpec parse_sweep(const Json &j) {
    Reader r(j, "sweep");
    SweepSpec s;
    const std::string path = r.path("grid");
    const Json &grid = as_array(r.at("grid"), path);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Reader axis(grid[i], indexed(path, i));
        SweepAxis a;
        a.field = axis.string("field");
        require(!a.field.empty(), axis.path("field"), "must not be empty");
        const std::string vpath = axis.path("values");
        const Json &values = as_array(axis.at("values"), vpath);
        for (std::size_t k = 0; k < values.size(); ++k)
            a.values.push_back(as_number(values[k], indexed(vpath, k)));
        axis.finish();
        s.grid.push_back(std::move(a));
    }
    const long long cap = r.integer("max_points", static_cast<long long>(s.max_points));
    require(cap >= 0, r.path("max_points"), "must be non-negative");
    s.max_points = static_cast<std::size_t>(cap);
    s.output = parse_filename(r, "output", s.output);
    r.finish();
    return s;
}

FlowfieldSpec parse_flowfield(const Json &j) {
    Reader r(j, "flowfield");
    FlowfieldSpec f;
    {
        Reader g(r.at("grid"), r.path("grid"));
        f.min = parse_vec3(g.at("min"), g.path("min"));
        f.max = parse_vec3(g.at("max"), g.path("max"));
        const std::string rpath = g.path("resolution");
        const Json &res = as_array(g.at("resolution"), rpath);
        require(res.size() == 3, rpath, "expected three components");
        for (std::size_t i = 0; i < 3; ++i) {
            const long long n = as_integer(res[i], indexed(rpath, i));
            require(n >= 1, indexed(rpath, i), "resolution must be positive");
            require(n <= 10000, indexed(rpath, i), "resolution must not exceed 10000");
            f.resolution[i] = static_cast<std::size_t>(n);
        }
        for (int i = 0; i < 3; ++i)
            require(f.max[i] >= f.min[i], g.path("max"), "must not be below min");
        require(f.resolution[0] * f.resolution[1] * f.resolution[2] <= 10000000, rpath,
                "grid exceeds 1e7 points");
        g.finish();
    }
    {
        Reader s(r.at("source"), r.path("source"));
        const std::string type = s.string("type");
        if (type == "single") {
            SingleSourceSpec single;
            single.a = s.number("a");
            require(single.a > 0.0, s.path("a"), "must be positive");
            single.force = s.has("force") ? parse_vec3(s.at("force"), s.path("force")) : Vec3::Zero();
            single.v_dot = s.number("v_dot", 0.0);
            f.source = single;
        } else if (type == "pair") {
            PairSourceSpec pair;
            pair.state = {s.number("ell"), s.number("v")};
            pair.rate = {s.number("ell_dot", 0.0), s.number("v_dot", 0.0)};
            f.source = pair;
        } else {
            throw ConfigError(s.path("type"), "must be \"single\" or \"pair\"");
        }
        s.finish();
    }
    f.output = parse_filename(r, "output", f.output);
    r.finish();
    return f;
}

Json to_json(const Vec3 &v) { return Json::array({v[0], v[1], v[2]}); }

Json to_json(const StrokeSpec &spec) {
    Json j;
    if (const auto *rect = std::get_if<RectangleSpec>(&spec)) {
        j["type"] = "rectangle";
        j["ell_s"] = rect->ell_s;
        j["ell_L"] = rect->ell_L;
        j["v_s"] = rect->v_s;
        j["volume_rate"] = rect->volume_legs == VolumeLegProfile::ConstantShapeRate ? "shape" : "volume";
    } else if (const auto *loop = std::get_if<SmallLoopSpec>(&spec)) {
        j["type"] = "small_loop";
        j["center"] = Json{{"ell", loop->center.ell}, {"v", loop->center.v}};
        j["d_log_v"] = loop->d_log_v;
        j["d_ell"] = loop->d_ell;
        j["shape"] = loop->shape == LoopShape::Rectangle ? "rectangle" : "ellipse";
    } else {
        const auto &poly = std::get<PolylineSpec>(spec);
        j["type"] = "polyline";
        Json points = Json::array();
        for (const ControlPoint &p : poly.points)
            points.push_back(Json::array({p.ell, p.v}));
        j["points"] = points;
    }
    return j;
}

Json to_json(const FlowfieldSpec &f) {
    Json j;
    j["grid"] = Json{{"min", to_json(f.min)},
                     {"max", to_json(f.max)},
                     {"resolution", Json::array({f.resolution[0], f.resolution[1], f.resolution[2]})}};
    Json s;
    if (const auto *single = std::get_if<SingleSourceSpec>(&f.source)) {
        s["type"] = "single";
        s["a"] = single->a;
        s["force"] = to_json(single->force);
        s["v_dot"] = single->v_dot;
    } else {
        const auto &pair = std::get<PairSourceSpec>(f.source);
        s["type"] = "pair";
        s["ell"] = pair.state.ell;
        s["v"] = pair.state.v;
        s["ell_dot"] = pair.rate.ell_dot;
        s["v_dot"] = pair.rate.v_dot;
    }
    j["source"] = s;
    j["output"] = f.output;
    return j;
}

} // namespace

ExperimentConfig parse_config(const Json &j) {
    Reader r(j, "");
    ExperimentConfig cfg;
    if (r.has("swimmer"))
        cfg.swimmer = parse_swimmer(r.at("swimmer"));
    if (r.has("stroke")) {
        cfg.stroke = parse_stroke(r.at("stroke"), cfg.swimmer);
        cfg.timing = parse_timing(r.at("timing"));
    } else if (r.has("timing")) {
        cfg.timing = parse_timing(r.at("timing"));
    }
    if (r.has("quadrature"))
        cfg.quadrature = parse_quadrature(r.at("quadrature"));
    if (r.has("outputs"))
        cfg.outputs = parse_outputs(r.at("outputs"));
    if (r.has("sweep"))
        cfg.sweep = parse_sweep(r.at("sweep"));
    if (r.has("flowfield"))
        cfg.flowfield = parse_flowfield(r.at("flowfield"));
    r.finish();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

Json load_json(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return Json::parse(text.str());
    } catch (const Json::parse_error &e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string &path) { return parse_config(load_json(path)); }

Json to_json(const ExperimentConfig &cfg) {
    Json j;
    j["swimmer"] = Json{{"mu", cfg.swimmer.mu},
                        {"rho", cfg.swimmer.rho},
                        {"v0", cfg.swimmer.v0},
                        {"fidelity", to_string(cfg.swimmer.fidelity)},
                        {"volume_margin", cfg.swimmer.volume_margin}};
    if (cfg.stroke)
        j["stroke"] = to_json(*cfg.stroke);
    if (!cfg.timing.durations.empty())
        j["timing"] = Json{{"durations", cfg.timing.durations}};
    else if (cfg.timing.period > 0.0)
        j["timing"] = Json{{"period", cfg.timing.period}, {"optimal", cfg.timing.optimal}};
    j["quadrature"] = Json{{"tolerance", cfg.quadrature.tolerance}, {"max_depth", cfg.quadrature.max_depth}};
    j["outputs"] = Json{{"samples", cfg.outputs.samples},
                        {"trajectory", cfg.outputs.trajectory},
                        {"summary", cfg.outputs.summary}};
    if (cfg.sweep) {
        Json grid = Json::array();
        for (const SweepAxis &a : cfg.sweep->grid)
            grid.push_back(Json{{"field", a.field}, {"values", a.values}});
        j["sweep"] = Json{{"grid", grid}, {"max_points", cfg.sweep->max_points}, {"output", cfg.sweep->output}};
    }
    if (cfg.flowfield)
        j["flowfield"] = to_json(*cfg.flowfield);
    return j;
}

void set_numeric_field(Json &j, const std::string &dotted_path, double value) {
    Json *node = &j;
    std::string walked;
    std::stringstream parts(dotted_path);
    std::string key;
    while (std::getline(parts, key, '.')) {
        walked = join(walked, key);
        if (!node->is_object() || !node->contains(key))
            throw ConfigError(walked, "sweep field does not exist in the base config");
        node = &(*node)[key];
    }
    if (walked.empty() || !node->is_number())
        throw ConfigError(dotted_path, "sweep field must name an existing numeric value");
    *node = value;
}

quadrature::Settings quadrature_settings(const QuadratureSpec &q) {
    quadrature::Settings s;
    s.rel_tol = q.tolerance;
    s.max_depth = q.max_depth;
    return s;
}

namespace {

Stroke apply_durations(const Stroke &stroke, const std::vector<double> &durations) {
    if (durations.size() != stroke.size())
        throw ConfigError("timing.durations", "expected " + std::to_string(stroke.size()) +
                                                  " durations for this stroke, got " +
                                                  std::to_string(durations.size()));
    return with_durations(stroke, durations);
}

BuiltStroke build_rectangle_stroke(const ExperimentConfig &cfg, const RectangleSpec &spec) {
    const TimingSpec &t = cfg.timing;
    RectangleStroke rect = make_rectangle(cfg.swimmer, spec.ell_s, spec.ell_L, spec.v_s, 1.0, 1.0);
    if (!t.durations.empty()) {
        if (t.durations.size() != 2)
            throw ConfigError("timing.durations", "a rectangle takes [T_ell, T_v]");
        rect.T_ell = t.durations[0];
        rect.T_v = t.durations[1];
    } else if (t.optimal) {
        if (spec.volume_legs != VolumeLegProfile::ConstantShapeRate)
            throw ConfigError("timing.optimal", "optimal timing requires volume_rate = \"shape\"");
        const LegSplit split = optimal_leg_split(cfg.swimmer, rect, t.period);
        rect.T_ell = split.T_ell;
        rect.T_v = split.T_v;
    } else {
        rect.T_ell = rect.T_v = 0.25 * t.period;
    }
    return {build_rectangle(cfg.swimmer, rect, spec.volume_legs), rect};
}

BuiltStroke build_stroke_unchecked(const ExperimentConfig &cfg) {
    const TimingSpec &t = cfg.timing;
    if (t.durations.empty() && !(t.period > 0.0))
        throw ConfigError("timing", "required field is missing");
    const double period = t.durations.empty() ? t.period : 1.0;

    if (const auto *rect = std::get_if<RectangleSpec>(&*cfg.stroke))
        return build_rectangle_stroke(cfg, *rect);

    Stroke stroke = [&] {
        if (const auto *loop = std::get_if<SmallLoopSpec>(&*cfg.stroke))
            return build_small_loop(cfg.swimmer, loop->center, loop->d_log_v, loop->d_ell, period, loop->shape);
        const auto &poly = std::get<PolylineSpec>(*cfg.stroke);
        return build_polyline(cfg.swimmer, poly.points, period,
                              t.optimal ? SpeedProfile::ConstantMetricSpeed : SpeedProfile::ConstantControlSpeed);
    }();
    if (!t.durations.empty())
        stroke = apply_durations(stroke, t.durations);
    else if (t.optimal)
        stroke = optimize_timing(cfg.swimmer, stroke, t.period, quadrature_settings(cfg.quadrature));
    return {stroke, std::nullopt};
}

} // namespace

BuiltStroke build_stroke(const ExperimentConfig &cfg) {
    if (!cfg.stroke)
        throw ConfigError("stroke", "required field is missing");
    try {
        return build_stroke_unchecked(cfg);
    } catch (const ConstructionError &e) {
        throw ConfigError("stroke", e.what());
    } catch (const DomainError &e) {
        throw ConfigError("stroke", e.what());
    }
}

} // namespace pmpy::cli
