#include "pmpy/cli/commands.hpp"

#include "pmpy/cli/output.hpp"
#include "pmpy/cli/validation.hpp"
#include "pmpy/errors.hpp"

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

namespace pmpy::cli {

void apply_overrides(ExperimentConfig &cfg, const CommandOptions &options) {
    if (options.fidelity)
        cfg.swimmer.fidelity = *options.fidelity;
    if (options.tolerance) {
        if (!(*options.tolerance > 0.0 && *options.tolerance < 1.0))
            throw ConfigError("--tolerance", "must lie in (0, 1)");
        cfg.quadrature.tolerance = *options.tolerance;
    }
    if (options.samples)
        cfg.outputs.samples = *options.samples;
}

namespace {

IntegrationOptions integration_options(const ExperimentConfig &cfg, std::size_t samples) {
    IntegrationOptions o;
    o.quadrature = quadrature_settings(cfg.quadrature);
    o.samples = samples;
    return o;
}

Json conditions_json(const std::vector<Condition> &conditions) {
    Json j = Json::object();
    for (const Condition &c : conditions)
        j[c.name] = c.value;
    return j;
}

const char *quantity_name(Quantity q) {
    switch (q) {
    case Quantity::Displacement:
        return "displacement";
    case Quantity::Energy:
        return "energy";
    case Quantity::Drag:
        return "drag";
    }
    return "";
}

const char *profile_name(SpeedProfile p) {
    return p == SpeedProfile::ConstantControlSpeed ? "constant_control_speed" : "constant_metric_speed";
}

Json validity_json(const ValidityReport &v) {
    return Json{{"reynolds", v.reynolds},
                {"eps", v.eps},
                {"far_field_measure", v.far_field_measure},
                {"far_field_ok", v.far_field_ok},
                {"warnings", v.warnings}};
}

Json toolkit_json() { return Json{{"name", toolkit_name}, {"version", toolkit_version}}; }

Json rectangle_json(const RectangleStroke &r) {
    return Json{{"ell_s", r.ell_s}, {"ell_L", r.ell_L}, {"v_s", r.v_s},
                {"v_L", r.v_L},     {"T_ell", r.T_ell}, {"T_v", r.T_v}};
}

bool closed_forms_apply(const ExperimentConfig &cfg) {
    const auto *rect = std::get_if<RectangleSpec>(&*cfg.stroke);
    return rect && cfg.swimmer.fidelity == Fidelity::Leading &&
           rect->volume_legs == VolumeLegProfile::ConstantShapeRate;
}

Json result_json(const ExperimentConfig &cfg, const BuiltStroke &built, const StrokeResult &r) {
    Json j;
    j["displacement"] = r.displacement;
    j["energy"] = r.energy;
    j["drag"] = r.drag;
    j["drag_finite"] = r.drag_finite;
    j["drag_note"] = r.drag_note;
    j["period"] = r.period;
    j["displacement_error"] = r.displacement_error;
    j["energy_error"] = r.energy_error;

    Json segments = Json::array();
    for (const Segment &s : built.stroke.segments())
        segments.push_back(Json{{"duration", s.duration}, {"profile", profile_name(s.profile)}});
    j["segments"] = segments;
    if (built.rectangle) {
        j["rectangle"] = rectangle_json(*built.rectangle);
        if (closed_forms_apply(cfg)) {
            const RectangleEnergy e = rectangle_energy_closed_form(cfg.swimmer, *built.rectangle);
            j["closed_form"] = Json{{"displacement", rectangle_displacement_closed_form(cfg.swimmer, *built.rectangle)},
                                    {"energy", e.total}};
        }
    }

    Json predictions = Json::array();
    for (const PredictionCheck &p : prediction_checks(cfg, built, r))
        predictions.push_back(Json{{"name", p.prediction.name},
                                   {"quantity", quantity_name(p.quantity)},
                                   {"predicted", p.prediction.value},
                                   {"numeric", p.numeric},
                                   {"ratio", p.ratio},
                                   {"conditions", conditions_json(p.prediction.conditions)}});
    j["predictions"] = predictions;
    j["validity"] = validity_json(r.validity);
    return j;
}

} // namespace

std::vector<PredictionCheck> prediction_checks(const ExperimentConfig &cfg, const BuiltStroke &built,
                                               const StrokeResult &result) {
    std::vector<PredictionCheck> out;
    auto add = [&](Prediction p, Quantity q, double numeric) {
        const double predicted = p.value;
        out.push_back({std::move(p), q, numeric, numeric / predicted});
    };
    if (built.rectangle) {
        const RectangleStroke &rect = *built.rectangle;
        add(predict_large_stroke_displacement(cfg.swimmer, rect), Quantity::Displacement, result.displacement);
        add(predict_rectangle_energy(cfg.swimmer, rect), Quantity::Energy, result.energy);
        add(predict_drag_large_stroke(cfg.swimmer, rect), Quantity::Drag, result.drag);
    } else if (const auto *loop = std::get_if<SmallLoopSpec>(&*cfg.stroke)) {
        add(predict_small_stroke_displacement(cfg.swimmer, loop->center, loop->d_log_v, loop->d_ell),
            Quantity::Displacement, result.displacement);
        add(predict_drag_small_stroke(cfg.swimmer, radius_of_volume(loop->center.v), loop->d_log_v), Quantity::Drag,
            result.drag);
    }
    return out;
}

SimulateOutput run_simulate(const ExperimentConfig &cfg) {
    const BuiltStroke built = build_stroke(cfg);
    const StrokeResult r = integrate(cfg.swimmer, built.stroke, integration_options(cfg, cfg.outputs.samples));

    Json summary;
    summary["toolkit"] = toolkit_json();
    summary["command"] = "simulate";
    summary["fidelity"] = to_string(r.fidelity);
    const Json result = result_json(cfg, built, r);
    for (const auto &item : result.items())
        summary[item.key()] = item.value();
    summary["config"] = to_json(cfg);
    return {summary, trajectory_csv(r.samples)};
}

namespace {

struct SweepRow {
    std::vector<double> params;
    double displacement = std::numeric_limits<double>::quiet_NaN();
    double energy = std::numeric_limits<double>::quiet_NaN();
    double drag = std::numeric_limits<double>::quiet_NaN();
    double ratio[3] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN()};
    std::string error;
};

std::string optional_number(double x) { return std::isnan(x) ? std::string() : format_number(x); }

SweepRow sweep_point(const Json &base, const SweepSpec &sweep, std::size_t index, const CommandOptions &options) {
    SweepRow row;
    std::size_t rest = index;
    row.params.resize(sweep.grid.size());
    for (std::size_t k = sweep.grid.size(); k-- > 0;) {
        const std::size_t n = sweep.grid[k].values.size();
        row.params[k] = sweep.grid[k].values[rest % n];
        rest /= n;
    }
    try {
        Json j = base;
        j.erase("sweep");
        for (std::size_t k = 0; k < sweep.grid.size(); ++k)
            set_numeric_field(j, sweep.grid[k].field, row.params[k]);
        ExperimentConfig cfg = parse_config(j);
        apply_overrides(cfg, options);
        const BuiltStroke built = build_stroke(cfg);
        const StrokeResult r = integrate(cfg.swimmer, built.stroke, integration_options(cfg, 0));
        row.displacement = r.displacement;
        row.energy = r.energy;
        row.drag = r.drag;
        for (const PredictionCheck &p : prediction_checks(cfg, built, r))
            row.ratio[static_cast<int>(p.quantity)] = p.ratio;
    } catch (const std::exception &e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::string run_sweep(const Json &base, const CommandOptions &options) {
    const ExperimentConfig parsed = parse_config(base);
    if (!parsed.sweep)
        throw ConfigError("sweep", "required field is missing");
    const SweepSpec &sweep = *parsed.sweep;
    for (std::size_t k = 0; k < sweep.grid.size(); ++k)
        if (sweep.grid[k].field.rfind("sweep", 0) == 0)
            throw ConfigError("sweep.grid[" + std::to_string(k) + "].field", "cannot sweep the sweep section");

    double total = sweep.grid.empty() ? 0.0 : 1.0;
    for (const SweepAxis &a : sweep.grid)
        total *= static_cast<double>(a.values.size());
    if (total > static_cast<double>(sweep.max_points))
        throw ConfigError("sweep.max_points",
                          fmt::format("grid has {:.0f} points, exceeding the cap of {}", total, sweep.max_points));
    const auto points = static_cast<std::size_t>(total);

    std::vector<SweepRow> rows(points);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points; i = next++)
            rows[i] = sweep_point(base, sweep, i, options);
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, points));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }

    std::vector<std::string> header{"index"};
    for (const SweepAxis &a : sweep.grid)
        header.push_back(a.field);
    for (const char *h : {"displacement", "energy", "drag", "ratio_displacement", "ratio_energy", "ratio_drag", "error"})
        header.push_back(h);
    CsvWriter csv(header);
    for (std::size_t i = 0; i < points; ++i) {
        const SweepRow &r = rows[i];
        std::vector<std::string> fields{std::to_string(i)};
        for (double p : r.params)
            fields.push_back(format_number(p));
        for (double x : {r.displacement, r.energy, r.drag, r.ratio[0], r.ratio[1], r.ratio[2]})
            fields.push_back(optional_number(x));
        fields.push_back(r.error);
        csv.row(fields);
    }
    return csv.str();
}

Json run_optimize(const ExperimentConfig &cfg) {
    if (!cfg.stroke || !std::holds_alternative<RectangleSpec>(*cfg.stroke))
        throw UnsupportedOperation("optimize: only rectangle strokes have an optimal leg split");
    const auto &spec = std::get<RectangleSpec>(*cfg.stroke);
    if (spec.volume_legs != VolumeLegProfile::ConstantShapeRate)
        throw UnsupportedOperation("optimize: requires volume_rate = \"shape\"");

    const BuiltStroke configured = build_stroke(cfg);
    const double tau = configured.rectangle->period();
    RectangleStroke rect = *configured.rectangle;

    const RectangleLegCoefficients c = rectangle_leg_coefficients(cfg.swimmer, rect);
    const LegSplit split = optimal_leg_split(c.ell_leg, c.v_leg, tau);
    const IntegrationOptions opts = integration_options(cfg, 0);

    auto energy_at = [&](double T_ell) {
        RectangleStroke r = rect;
        r.T_ell = T_ell;
        r.T_v = 0.5 * tau - T_ell;
        return integrate(cfg.swimmer, build_rectangle(cfg.swimmer, r), opts).energy;
    };
    std::uintmax_t iterations = 200;
    const auto numeric = boost::math::tools::brent_find_minima(energy_at, 1e-9 * tau, (0.5 - 1e-9) * tau,
                                                               std::numeric_limits<double>::digits / 2, iterations);
    const double rule_vs_numeric = std::abs(split.T_ell - numeric.first) / numeric.first;

    RectangleStroke best = rect;
    best.T_ell = split.T_ell;
    best.T_v = split.T_v;
    RectangleStroke equal = rect;
    equal.T_ell = equal.T_v = 0.25 * tau;
    const BuiltStroke best_built{build_rectangle(cfg.swimmer, best), best};
    const StrokeResult optimal = integrate(cfg.swimmer, best_built.stroke, opts);
    const StrokeResult equal_split = integrate(cfg.swimmer, build_rectangle(cfg.swimmer, equal), opts);

    Json j;
    j["toolkit"] = toolkit_json();
    j["command"] = "optimize";
    j["fidelity"] = to_string(cfg.swimmer.fidelity);
    j["period"] = tau;
    j["coefficients"] = Json{{"ell_leg", c.ell_leg}, {"v_leg", c.v_leg}};
    j["optimal"] = Json{{"T_ell", split.T_ell},
                        {"T_v", split.T_v},
                        {"ell_time_fraction", 2.0 * split.T_ell / tau},
                        {"energy", optimal.energy},
                        {"displacement", optimal.displacement},
                        {"drag", optimal.drag}};
    j["equal_split"] = Json{{"T_ell", equal.T_ell},
                            {"T_v", equal.T_v},
                            {"energy", equal_split.energy},
                            {"drag", equal_split.drag}};
    j["optimal_not_worse"] = optimal.energy <= equal_split.energy * (1.0 + 1e-12);
    j["sqrt_rule_check"] = Json{{"T_ell_rule", split.T_ell},
                                {"T_ell_numeric", numeric.first},
                                {"energy_numeric", numeric.second},
                                {"relative_difference", rule_vs_numeric},
                                {"tolerance", 1e-3},
                                {"passed", rule_vs_numeric <= 1e-3}};
    const Json result = result_json(cfg, best_built, optimal);
    for (const auto &item : result.items())
        if (item.key() == "predictions" || item.key() == "validity")
            j[item.key()] = item.value();
    j["config"] = to_json(cfg);
    return j;
}

std::string run_flowfield(const ExperimentConfig &cfg) {
    if (!cfg.flowfield)
        throw ConfigError("flowfield", "required field is missing");
    const FlowfieldSpec &f = *cfg.flowfield;
    cfg.swimmer.validate();

    struct Source {
        Vec3 center;
        double a;
        Vec3 force;
        double v_dot;
    };
    std::vector<Source> sources;
    if (const auto *single = std::get_if<SingleSourceSpec>(&f.source)) {
        sources.push_back({Vec3::Zero(), single->a, single->force, single->v_dot});
    } else {
        const auto &pair = std::get<PairSourceSpec>(f.source);
        const SphereState st = sphere_state(cfg.swimmer, pair.state);
        const double f1 = rod_force(cfg.swimmer, pair.state, pair.rate.ell_dot);
        const Vec3 axis = Vec3::UnitX();
        sources.push_back({-0.5 * pair.state.ell * axis, st.a1, f1 * axis, pair.rate.v_dot});
        sources.push_back({0.5 * pair.state.ell * axis, st.a2, -f1 * axis, -pair.rate.v_dot});
    }

    auto coordinate = [&](int axis, std::size_t i) {
        const std::size_t n = f.resolution[static_cast<std::size_t>(axis)];
        if (n == 1)
            return f.min[axis];
        return f.min[axis] + (f.max[axis] - f.min[axis]) * static_cast<double>(i) / static_cast<double>(n - 1);
    };

    CsvWriter csv({"x", "y", "z", "ux", "uy", "uz", "masked"});
    const std::string nan = format_number(std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < f.resolution[0]; ++i)
        for (std::size_t k = 0; k < f.resolution[1]; ++k)
            for (std::size_t m = 0; m < f.resolution[2]; ++m) {
                const Vec3 x(coordinate(0, i), coordinate(1, k), coordinate(2, m));
                bool masked = false;
                for (const Source &s : sources)
                    masked = masked || (x - s.center).norm() < s.a;
                std::vector<std::string> row{format_number(x[0]), format_number(x[1]), format_number(x[2])};
                if (masked) {
                    row.insert(row.end(), {nan, nan, nan, "1"});
                } else {
                    Vec3 u = Vec3::Zero();
                    for (const Source &s : sources)
                        u += flow_field(cfg.swimmer, s.a, s.force, s.v_dot, x - s.center).velocity;
                    row.insert(row.end(), {format_number(u[0]), format_number(u[1]), format_number(u[2]), "0"});
                }
                csv.row(row);
            }
    return csv.str();
}

int guarded(const std::function<int()> &body, std::ostream &err) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "error: config: " << e.what() << "\n";
        return exit_config;
    } catch (const ConstructionError &e) {
        err << "error: construction: " << e.what() << "\n";
        return exit_config;
    } catch (const UnsupportedOperation &e) {
        err << "error: unsupported: " << e.what() << "\n";
        return exit_config;
    } catch (const ModelValidityError &e) {
        err << "error: validity: " << e.what() << "\n";
        return exit_validity;
    } catch (const IntegrationAccuracyError &e) {
        err << "error: accuracy: " << e.what() << "\n";
        return exit_accuracy;
    } catch (const DomainError &e) {
        err << "error: domain: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

namespace {

ExperimentConfig load_with_overrides(const CommandOptions &options) {
    if (options.config.empty())
        throw ConfigError("--config", "a config file is required");
    ExperimentConfig cfg = load_config(options.config);
    apply_overrides(cfg, options);
    return cfg;
}

} // namespace

int cmd_simulate(const CommandOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(
        [&] {
            const ExperimentConfig cfg = load_with_overrides(options);
            const SimulateOutput result = run_simulate(cfg);
            const std::string summary = dump_json(result.summary);
            write_file(options.out / cfg.outputs.summary, summary);
            write_file(options.out / cfg.outputs.trajectory, result.trajectory_csv);
            out << summary;
            return static_cast<int>(exit_success);
        },
        err);
}

int cmd_sweep(const CommandOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(
        [&] {
            if (options.config.empty())
                throw ConfigError("--config", "a config file is required");
            const Json base = load_json(options.config);
            const std::string csv = run_sweep(base, options);
            const ExperimentConfig cfg = parse_config(base);
            const std::filesystem::path path = options.out / cfg.sweep->output;
            write_file(path, csv);
            out << "wrote " << path.string() << "\n";
            return static_cast<int>(exit_success);
        },
        err);
}

int cmd_optimize(const CommandOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(
        [&] {
            const ExperimentConfig cfg = load_with_overrides(options);
            const std::string summary = dump_json(run_optimize(cfg));
            write_file(options.out / cfg.outputs.summary, summary);
            out << summary;
            return static_cast<int>(exit_success);
        },
        err);
}

int cmd_validate(const CommandOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(
        [&] {
            const std::vector<CriterionResult> results = run_all_criteria();
            Json report;
            report["toolkit"] = toolkit_json();
            report["command"] = "validate";
            Json criteria = Json::array();
            bool all = true;
            for (const CriterionResult &r : results) {
                Json m = Json::object();
                for (const NamedValue &v : r.measurements)
                    m[v.name] = v.value;
                criteria.push_back(Json{{"id", r.id},
                                        {"name", r.name},
                                        {"passed", r.passed},
                                        {"detail", r.detail},
                                        {"measurements", m},
                                        {"runtime_seconds", r.runtime_seconds},
                                        {"runtime_limit_seconds", r.runtime_limit_seconds}});
                all = all && r.passed;
                out << fmt::format("[{}] {:2d} {}: {}\n", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail);
            }
            report["criteria"] = criteria;
            report["all_passed"] = all;
            write_file(options.out / "validation.json", dump_json(report));
            return static_cast<int>(all ? exit_success : exit_criterion);
        },
        err);
}

int cmd_flowfield(const CommandOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(
        [&] {
            const ExperimentConfig cfg = load_with_overrides(options);
            const std::string csv = run_flowfield(cfg);
            const std::filesystem::path path = options.out / cfg.flowfield->output;
            write_file(path, csv);
            out << "wrote " << path.string() << "\n";
            return static_cast<int>(exit_success);
        },
        err);
}

} // namespace pmpy::cli
