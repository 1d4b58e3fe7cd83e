#include "pmpy/cli/validation.hpp"

#include "pmpy/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace pmpy::cli {

namespace {

using Clock = std::chrono::steady_clock;

/// Accumulates sub-checks of one criterion.
class Checker {
  public:
    explicit Checker(CriterionResult &r) : r_(r) {}

    void measure(const std::string &name, double value) { r_.measurements.push_back({name, value}); }

    void expect(bool ok, const std::string &what) {
        if (!ok)
            failures_.push_back(what);
    }

    void finish(const std::string &summary) {
        r_.passed = failures_.empty();
        if (failures_.empty()) {
            r_.detail = summary;
            return;
        }
        r_.detail = summary + "; failed:";
        for (const std::string &f : failures_)
            r_.detail += " " + f + ";";
        r_.detail.pop_back();
    }

  private:
    CriterionResult &r_;
    std::vector<std::string> failures_;
};

CriterionResult timed(int id, const std::string &name, double limit, const std::function<void(CriterionResult &)> &body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.runtime_limit_seconds = limit;
    const auto start = Clock::now();
    try {
        body(r);
    } catch (const std::exception &e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.runtime_seconds > limit) {
        r.passed = false;
        r.detail += fmt::format("; runtime {:.3f} s exceeds {:.1f} s", r.runtime_seconds, limit);
    }
    return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

std::string tag(double x) { return fmt::format("{:g}", x); }

SwimmerConfig swimmer_with_radii(double a_s, double a_L) {
    return SwimmerConfig::nondimensional(volume_of_radius(a_s) + volume_of_radius(a_L));
}

struct RectangleCase {
    SwimmerConfig cfg;
    RectangleStroke rect;
};

RectangleCase optimal_rectangle(const LargeStrokePoint &p, double tau) {
    const double a_L = 1.0;
    const double a_s = p.radius_ratio * a_L;
    RectangleCase c;
    c.cfg = swimmer_with_radii(a_s, a_L);
    c.rect = make_rectangle(c.cfg, p.short_over_large * a_L, p.long_over_large * a_L, volume_of_radius(a_s), 1.0, 1.0);
    const LegSplit split = optimal_leg_split(c.cfg, c.rect, tau);
    c.rect.T_ell = split.T_ell;
    c.rect.T_v = split.T_v;
    return c;
}

IntegrationOptions tight(double rel_tol) {
    IntegrationOptions o;
    o.quadrature.rel_tol = rel_tol;
    return o;
}

} // namespace

const std::vector<LargeStrokePoint> &large_stroke_sequence() {
    static const std::vector<LargeStrokePoint> seq{
        {1.0 / 4.0, 5.0, 50.0},   {1.0 / 8.0, 5.0, 100.0},   {1.0 / 16.0, 5.0, 250.0},
        {1.0 / 32.0, 5.0, 1000.0}, {1.0 / 64.0, 5.0, 2500.0},
    };
    return seq;
}

CriterionResult check_algebraic_identities() {
    return timed(1, "algebraic identities", 1.0, [](CriterionResult &r) {
        Checker c(r);
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };

        double worst_rate = 0.0;
        double worst_power = 0.0;
        double worst_equal = 0.0;
        for (int i = 0; i < 1000; ++i) {
            SwimmerConfig cfg;
            cfg.mu = log_uniform(0.1, 10.0);
            cfg.v0 = log_uniform(0.1, 10.0);
            const double v = cfg.v0 * (0.02 + 0.96 * unit(rng));
            const double a1 = radius_of_volume(v);
            const double a2 = radius_of_volume(cfg.v0 - v);
            const ControlPoint p{(a1 + a2) * log_uniform(1.5, 100.0), v};
            const ControlVelocity w{(2.0 * unit(rng) - 1.0) * a1, (2.0 * unit(rng) - 1.0) * cfg.v0};

            const double f2 = -rod_force(cfg, p, w.ell_dot);
            const SphereVelocities u = sphere_velocities(cfg, p, f2, w.v_dot);
            const double scale = std::abs(f2) / (2.0 * pi * cfg.mu) * (1.0 / (3.0 * a1) + 1.0 / (3.0 * a2) + 1.0 / p.ell) +
                                 std::abs(w.v_dot) / (2.0 * pi * p.ell * p.ell);
            worst_rate = std::max(worst_rate, std::abs(displacement_rate(cfg, p, w) - 0.5 * (u.u1 + u.u2)) / scale);

            const double metric_term = dissipation_metric(cfg, p).v_v * w.v_dot * w.v_dot;
            const double bladders = dilation_power(cfg, v, w.v_dot) + dilation_power(cfg, cfg.v0 - v, w.v_dot);
            worst_power = std::max(worst_power, rel(bladders, metric_term));

            const ControlPoint equal{p.ell, 0.5 * cfg.v0};
            const double equal_term = dissipation_metric(cfg, equal).v_v * w.v_dot * w.v_dot;
            worst_equal = std::max(worst_equal, rel(2.0 * dilation_power(cfg, equal.v, w.v_dot), equal_term));
        }
        c.measure("max_rel_displacement_rate", worst_rate);
        c.measure("max_rel_dilation_power", worst_power);
        c.measure("max_rel_equal_bladder_dilation", worst_equal);
        c.expect(worst_rate <= 1e-12, "displacement rate identity");
        c.expect(worst_power <= 1e-12, "dilation power identity");
        c.expect(worst_equal <= 1e-12, "equal-bladder dilation identity");
        c.finish(fmt::format("1000 states; worst relative errors {:.2e}, {:.2e}, {:.2e} (tol 1e-12)", worst_rate,
                             worst_power, worst_equal));
    });
}

CriterionResult check_flow_field() {
    return timed(2, "flow field", 5.0, [](CriterionResult &r) {
        Checker c(r);
        SwimmerConfig cfg;
        cfg.mu = 0.7;
        const double a = 1.3;
        const Vec3 f(0.4, -1.1, 0.7);
        const double v_dot = 2.3;

        auto direction = [](double theta, double phi) {
            return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
        };
        constexpr int n_phi = 128;
        double worst_flux = 0.0;
        for (double radius : {a, 2.0 * a, 10.0 * a}) {
            double flux = 0.0;
            for (int k = 0; k < n_phi; ++k) {
                const double phi = 2.0 * pi * k / n_phi;
                flux += boost::math::quadrature::gauss<double, 64>::integrate(
                    [&](double theta) {
                        const Vec3 n = direction(theta, phi);
                        return flow_field(cfg, a, f, v_dot, radius * n).velocity.dot(n) * radius * radius *
                               std::sin(theta);
                    },
                    0.0, pi);
            }
            flux *= 2.0 * pi / n_phi;
            worst_flux = std::max(worst_flux, rel(flux, v_dot));
        }

        std::mt19937_64 rng(7);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto random_direction = [&] {
            Vec3 n(normal(rng), normal(rng), normal(rng));
            return Vec3(n / n.norm());
        };
        double worst_surface = 0.0;
        double worst_div = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Vec3 n = random_direction();
            const Vec3 expected = f / (6.0 * pi * cfg.mu * a) + v_dot / (4.0 * pi * a * a) * n;
            const Vec3 got = flow_field(cfg, a, f, v_dot, a * n).velocity;
            worst_surface = std::max(worst_surface, (got - expected).norm() / expected.norm());

            const Vec3 x = a * (2.0 + 18.0 * unit(rng)) * random_direction();
            const double h = 1e-4 * x.norm();
            double div = 0.0;
            for (int d = 0; d < 3; ++d) {
                Vec3 e = Vec3::Zero();
                e[d] = h;
                div += (flow_field(cfg, a, f, v_dot, x + e).velocity[d] - flow_field(cfg, a, f, v_dot, x - e).velocity[d]) /
                       (2.0 * h);
            }
            const double scale = flow_field(cfg, a, f, v_dot, x).velocity.norm() / x.norm();
            worst_div = std::max(worst_div, std::abs(div) / scale);
        }
        c.measure("max_rel_flux_error", worst_flux);
        c.measure("max_rel_surface_velocity_error", worst_surface);
        c.measure("max_rel_divergence", worst_div);
        c.expect(worst_flux <= 1e-8, "mass flux");
        c.expect(worst_surface <= 1e-12, "surface velocity");
        c.expect(worst_div <= 1e-5, "divergence");
        c.finish(fmt::format("flux {:.2e} (1e-8), surface {:.2e} (1e-12), divergence {:.2e} (1e-5)", worst_flux,
                             worst_surface, worst_div));
    });
}

CriterionResult check_small_stroke_curvature(double coefficient) {
    return timed(3, "small-stroke curvature", 10.0, [coefficient](CriterionResult &r) {
        Checker c(r);
        const SwimmerConfig cfg = SwimmerConfig::nondimensional(2.0 * volume_of_radius(1.0));
        const double d_log_v = 0.1;
        const std::vector<double> eps{0.05, 0.025, 0.0125};
        std::vector<double> dev;
        for (double e : eps) {
            const ControlPoint center{1.0 / e, 0.5 * cfg.v0};
            const double d_ell = 0.1 * center.ell;
            const Stroke loop = build_small_loop(cfg, center, d_log_v, d_ell, 1.0);
            const double ratio = integrate(cfg, loop, tight(1e-12)).displacement / (d_log_v * d_ell);
            dev.push_back(ratio / coefficient - 1.0);
            c.measure("ratio_eps_" + tag(e), ratio);
            c.measure("relative_deviation_eps_" + tag(e), dev.back());
        }
        const double halving = (dev[0] - dev[1]) / (dev[1] - dev[2]);
        c.measure("successive_difference_ratio", halving);
        c.expect(std::abs(dev[0]) <= 0.02, "within 2% at eps = 0.05");
        c.expect(std::abs(dev[1]) <= std::abs(dev[0]) && std::abs(dev[2]) <= std::abs(dev[1]),
                 "deviation non-increasing under eps-halving");
        c.expect(halving >= 6.0 && halving <= 10.0, "cubic shrinkage of the eps-dependent part");
        c.finish(fmt::format("ratio/coefficient - 1 = {:.3e} at eps = 0.05; successive-difference ratio {:.2f} "
                             "(cubic: 8)",
                             dev[0], halving));
    });
}

CriterionResult check_large_stroke_displacement() {
    return timed(4, "large-stroke displacement", 10.0, [](CriterionResult &r) {
        Checker c(r);
        const double a_s = 1.0;
        const double a_L = 4.0;
        const SwimmerConfig cfg = swimmer_with_radii(a_s, a_L);
        const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
        std::vector<double> dev;
        double worst_closed = 0.0;
        for (double e : eps) {
            const double ell_s = a_L / e;
            const RectangleStroke rect = make_rectangle(cfg, ell_s, 10.0 * ell_s, volume_of_radius(a_s), 1.0, 1.0);
            const double X = integrate(cfg, build_rectangle(cfg, rect), tight(1e-12)).displacement;
            dev.push_back(std::abs(X / predict_large_stroke_displacement(cfg, rect).value - 1.0));
            worst_closed = std::max(worst_closed, rel(X, rectangle_displacement_closed_form(cfg, rect)));
            c.measure("deviation_eps_" + tag(e), dev.back());
        }
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const double e3 = eps[i] * eps[i] * eps[i];
            num += dev[i] * e3;
            den += e3 * e3;
        }
        const double fit = num / den;
        c.measure("fitted_c", fit);
        for (std::size_t i = 0; i < eps.size(); ++i)
            c.expect(dev[i] <= 1.05 * fit * std::pow(eps[i], 3), "deviation bound at eps = " + tag(eps[i]));
        c.measure("max_rel_closed_form_error", worst_closed);
        c.expect(worst_closed <= 1e-9, "closed form");
        c.finish(fmt::format("fitted c = {:.4f}; worst closed-form mismatch {:.2e} (1e-9)", fit, worst_closed));
    });
}

CriterionResult check_energy_asymptotics() {
    return timed(5, "rectangle energy asymptotics", 5.0, [](CriterionResult &r) {
        Checker c(r);
        double previous = std::numeric_limits<double>::infinity();
        double last = 0.0;
        double worst_numeric = 0.0;
        for (const LargeStrokePoint &p : large_stroke_sequence()) {
            const RectangleCase rc = optimal_rectangle(p, 1.0);
            const double closed = rectangle_energy_closed_form(rc.cfg, rc.rect).total;
            const double ratio = closed / predict_rectangle_energy(rc.cfg, rc.rect).value;
            const double numeric = integrate(rc.cfg, build_rectangle(rc.cfg, rc.rect)).energy;
            worst_numeric = std::max(worst_numeric, rel(numeric, closed));
            c.measure("ratio_r_" + tag(p.radius_ratio), ratio);
            c.expect(std::abs(ratio - 1.0) < previous, "approach at a_s/a_L = " + tag(p.radius_ratio));
            previous = std::abs(ratio - 1.0);
            last = ratio;
        }
        c.measure("max_rel_numeric_vs_closed_form", worst_numeric);
        c.expect(std::abs(last - 1.0) <= 0.1, "final point within 10%");
        c.expect(worst_numeric <= 1e-8, "integrated energy matches closed form");
        c.finish(fmt::format("final ratio {:.4f}", last));
    });
}

CriterionResult check_large_stroke_drag() {
    return timed(6, "large-stroke drag", 30.0, [](CriterionResult &r) {
        Checker c(r);
        double previous = std::numeric_limits<double>::infinity();
        double last = 0.0;
        for (const LargeStrokePoint &p : large_stroke_sequence()) {
            const RectangleCase rc = optimal_rectangle(p, 1.0);
            const StrokeResult res = integrate(rc.cfg, build_rectangle(rc.cfg, rc.rect));
            const double ratio = res.drag / predict_drag_large_stroke(rc.cfg, rc.rect).value;
            c.measure("drag_over_4as_r_" + tag(p.radius_ratio), ratio);
            c.expect(std::abs(ratio - 1.0) < previous, "monotone at a_s/a_L = " + tag(p.radius_ratio));
            previous = std::abs(ratio - 1.0);
            last = ratio;
        }
        c.expect(std::abs(last - 1.0) <= 0.1, "final point within 10%");

        const double a_L = 1.0;
        const SwimmerConfig cfg = swimmer_with_radii(a_L / 4.0, a_L);
        const RectangleStroke rect =
            make_rectangle(cfg, 5.0 * a_L, 50.0 * a_L, volume_of_radius(a_L / 4.0), 1.0, 1.0);
        const double fraction = volume_shuttle_fraction(rect);
        const double predicted = predict_drag_large_stroke(cfg, rect).value;
        c.measure("shuttle_fraction_quarter_radius", fraction);
        c.measure("predicted_drag_quarter_radius", predicted);
        c.expect(std::abs(fraction - 63.0 / 64.0) <= 1e-15, "63/64 volume fraction");
        c.expect(std::abs(predicted - a_L) <= 1e-14 * a_L, "predicted drag equals a_L");
        c.finish(fmt::format("final drag/(4 a_s) = {:.4f}; shuttle fraction {:.17g}", last, fraction));
    });
}

CriterionResult check_small_stroke_drag() {
    return timed(7, "small-stroke drag", 10.0, [](CriterionResult &r) {
        Checker c(r);
        const double a = 1.0;
        const SwimmerConfig cfg = SwimmerConfig::nondimensional(2.0 * volume_of_radius(a));
        const double eps = 0.05;
        const double d_log_v = 0.1;
        const ControlPoint center{a / eps, 0.5 * cfg.v0};
        const Stroke loop = build_small_loop(cfg, center, d_log_v, d_log_v * center.ell, 1.0);
        const double value = integrate(cfg, loop).drag * d_log_v * d_log_v / a;
        const double predicted = predict_drag_small_stroke(cfg, a, d_log_v).value * d_log_v * d_log_v / a;
        const StrokeResult optimal = integrate(cfg, optimize_timing(cfg, loop, 1.0));
        c.measure("drag_times_dlogv2_over_a", value);
        c.measure("predicted", predicted);
        c.measure("ratio", value / predicted);
        c.measure("optimal_timing_value", optimal.drag * d_log_v * d_log_v / a);
        c.expect(std::abs(value / predicted - 1.0) <= 0.05, "within 5% of 72");
        c.finish(fmt::format("delta (d log v)^2 / a = {:.3f} with ell-legs taking half the period (target 72); "
                             "optimally timed loop gives {:.3f}",
                             value, optimal.drag * d_log_v * d_log_v / a));
    });
}

CriterionResult check_optimal_timing() {
    return timed(8, "optimal timing", 5.0, [](CriterionResult &r) {
        Checker c(r);
        const double tau = 1.0;
        double worst = 0.0;
        for (double ratio : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double c_ell = 1.0;
            const double c_v = ratio;
            const LegSplit split = optimal_leg_split(c_ell, c_v, tau);
            auto energy = [&](double T) { return 2.0 * c_ell / T + 2.0 * c_v / (0.5 * tau - T); };
            std::uintmax_t iterations = 500;
            const auto best = boost::math::tools::brent_find_minima(energy, 1e-12, 0.5 * tau - 1e-12,
                                                                    std::numeric_limits<double>::digits / 2, iterations);
            const double d = rel(split.T_ell, best.first);
            worst = std::max(worst, d);
            c.measure("rel_diff_c_ratio_" + tag(ratio), d);
            c.expect(d <= 1e-3, "split at C_v/C_ell = " + tag(ratio));
            c.expect(energy(split.T_ell) <= best.second * (1.0 + 1e-12), "energy at C_v/C_ell = " + tag(ratio));
        }
        c.finish(fmt::format("worst relative difference to numeric minimizer {:.2e} (1e-3)", worst));
    });
}

CriterionResult check_geometric_phase() {
    return timed(9, "geometric-phase properties", 10.0, [](CriterionResult &r) {
        Checker c(r);
        const IntegrationOptions opts = tight(1e-12);

        SwimmerConfig rect_cfg = swimmer_with_radii(0.5, 1.0);
        const RectangleStroke rect = make_rectangle(rect_cfg, 4.0, 12.0, volume_of_radius(0.5), 0.7, 0.3);

        SwimmerConfig poly_cfg = SwimmerConfig::nondimensional(1.0);
        poly_cfg.fidelity = Fidelity::Refined;
        const Stroke polygon = build_polyline(poly_cfg,
                                              sample_closed_curve(
                                                  [](double t) {
                                                      const double th = 2.0 * pi * t;
                                                      return ControlPoint{6.0 + 1.5 * std::cos(th) + 0.4 * std::sin(2.0 * th),
                                                                          0.4 + 0.15 * std::sin(th)};
                                                  },
                                                  24),
                                              2.0, SpeedProfile::ConstantControlSpeed);

        SwimmerConfig loop_cfg = SwimmerConfig::nondimensional(1.0);
        const Stroke ellipse =
            build_small_loop(loop_cfg, {5.0, 0.3}, 0.4, 1.2, 1.5, LoopShape::Ellipse, SpeedProfile::ConstantControlSpeed);

        struct Case {
            std::string name;
            SwimmerConfig cfg;
            Stroke stroke;
            bool relabel;
        };
        const std::vector<Case> cases{{"rectangle", rect_cfg, build_rectangle(rect_cfg, rect), true},
                                      {"polyline", poly_cfg, polygon, true},
                                      {"ellipse", loop_cfg, ellipse, false}};

        double worst_reparam = 0.0;
        double worst_reverse = 0.0;
        double worst_relabel = 0.0;
        double worst_period = 0.0;
        double worst_mu = 0.0;
        for (const Case &k : cases) {
            const StrokeResult base = integrate(k.cfg, k.stroke, opts);
            const double X = base.displacement;

            std::vector<double> durations;
            for (std::size_t i = 0; i < k.stroke.size(); ++i)
                durations.push_back(0.3 + 0.9 * static_cast<double>(i + 1));
            for (const Stroke &s : {reparametrize(k.stroke, 3.7 * k.stroke.period()), with_durations(k.stroke, durations),
                                    optimize_timing(k.cfg, k.stroke, 2.0)})
                worst_reparam = std::max(worst_reparam, rel(integrate(k.cfg, s, opts).displacement, X));

            worst_reverse = std::max(worst_reverse, rel(-integrate(k.cfg, reverse(k.stroke), opts).displacement, X));
            if (k.relabel)
                worst_relabel = std::max(
                    worst_relabel, rel(-integrate(k.cfg, relabel_bladders(k.stroke, k.cfg.v0), opts).displacement, X));

            worst_period = std::max(
                worst_period, rel(integrate(k.cfg, reparametrize(k.stroke, 2.5 * k.stroke.period()), opts).drag, base.drag));
            for (double mu : {0.37, 12.0}) {
                SwimmerConfig other = k.cfg;
                other.mu = mu;
                worst_mu = std::max(worst_mu, rel(integrate(other, k.stroke, opts).drag, base.drag));
            }
        }
        c.measure("max_rel_reparametrization", worst_reparam);
        c.measure("max_rel_reversal", worst_reverse);
        c.measure("max_rel_relabeling", worst_relabel);
        c.measure("max_rel_drag_period_rescaling", worst_period);
        c.measure("max_rel_drag_viscosity", worst_mu);
        c.expect(worst_reparam <= 1e-10, "reparametrization invariance");
        c.expect(worst_reverse <= 1e-10, "reversal antisymmetry");
        c.expect(worst_relabel <= 1e-10, "relabeling negation");
        c.expect(worst_period <= 1e-10, "drag under period rescaling");
        c.expect(worst_mu <= 1e-12, "drag independent of viscosity");
        c.finish(fmt::format("worst relative deviations: reparam {:.1e}, reverse {:.1e}, relabel {:.1e}, "
                             "period {:.1e}, mu {:.1e}",
                             worst_reparam, worst_reverse, worst_relabel, worst_period, worst_mu));
    });
}

CriterionResult check_comparators() {
    return timed(10, "comparators", 5.0, [](CriterionResult &r) {
        Checker c(r);
        double worst_three = 0.0;
        for (const auto &[eps, dl2, dl1] : std::vector<std::array<double, 3>>{{0.1, 0.2, 0.3}, {0.05, 0.1, 2.0}})
            worst_three = std::max(worst_three, rel(three_sphere_small_stroke(eps, dl2, dl1), 0.7 * eps * (dl2 * dl1)));
        c.measure("three_sphere_rel_error", worst_three);
        c.expect(worst_three <= 1e-15, "three-sphere coefficient");

        const double a = 2.5;
        const std::vector<NamedValue> refs = reference_drags(a);
        const std::vector<NamedValue> expected{{"dragged-sphere", a}, {"stone-samuel-bound", 4.0 * a / 3.0},
                                               {"flagellar-models", 100.0 * a}};
        bool refs_ok = refs.size() == expected.size();
        for (std::size_t i = 0; refs_ok && i < refs.size(); ++i)
            refs_ok = refs[i].name == expected[i].name && rel(refs[i].value, expected[i].value) <= 1e-15;
        c.expect(refs_ok, "reference drags");

        bool beats = true;
        for (double ratio : {0.33, 0.25, 0.1, 1.0 / 64.0}) {
            const SwimmerConfig cfg = swimmer_with_radii(ratio, 1.0);
            const RectangleStroke rect = make_rectangle(cfg, 5.0, 50.0, volume_of_radius(ratio), 1.0, 1.0);
            beats = beats && predict_drag_large_stroke(cfg, rect).value < 4.0 / 3.0;
        }
        c.expect(beats, "prediction beats (4/3) a_L for a_s < a_L/3");

        // Sanity band over a grid of reasonable rectangles (Leading model).
        double best = 0.0;
        double best_over_short = 0.0;
        for (double ratio : {1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 8.0, 1.0 / 16.0, 1.0 / 64.0})
            for (double gap : {1.05, 1.5, 2.0, 3.0, 5.0})
                for (double span : {1.5, 2.0, 3.0, 5.0, 10.0, 20.0}) {
                    const SwimmerConfig cfg = swimmer_with_radii(ratio, 1.0);
                    const double mid = 2.0 * radius_of_volume(0.5 * cfg.v0);
                    const double ell_s = gap * std::max(1.0 + ratio, mid);
                    RectangleStroke rect;
                    try {
                        rect = make_rectangle(cfg, ell_s, span * ell_s, volume_of_radius(ratio), 1.0, 1.0);
                    } catch (const ConstructionError &) {
                        continue;
                    }
                    const double X = rectangle_displacement_closed_form(cfg, rect);
                    if (X / rect.ell_L > best) {
                        best = X / rect.ell_L;
                        best_over_short = X / rect.ell_s;
                    }
                }
        c.measure("max_displacement_over_ell_L", best);
        c.measure("displacement_over_ell_s_at_max", best_over_short);
        c.expect(best >= 1.0 && best <= 1.5, "displacement of 1 to 1.5 body lengths");
        c.finish(fmt::format("comparators checked; best displacement per stroke {:.3f} ell_L ({:.3f} ell_s)", best,
                             best_over_short));
    });
}

std::vector<CriterionResult> run_all_criteria() {
    return {check_algebraic_identities(),       check_flow_field(),        check_small_stroke_curvature(),
            check_large_stroke_displacement(), check_energy_asymptotics(), check_large_stroke_drag(),
            check_small_stroke_drag(),          check_optimal_timing(),     check_geometric_phase(),
            check_comparators()};
}

} // namespace pmpy::cli
