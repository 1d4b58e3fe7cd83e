#include "oracles.hpp"

#include "pmpy/sim.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace pmpy;

namespace {

constexpr int cases = 40;

// Random star-shaped polygon around a random center, well inside the
// admissible region of a v0 = 1 swimmer.
std::vector<ControlPoint> random_polygon(oracle::Gen &g) {
    const double ell_c = g.uniform(4.0, 10.0);
    const double v_c = g.uniform(0.3, 0.7);
    const int n = g.integer(3, 7);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i)
        angles.push_back(g.uniform(0.0, 2.0 * oracle::pi));
    std::sort(angles.begin(), angles.end());
    std::vector<ControlPoint> pts;
    for (double th : angles)
        pts.push_back({ell_c + g.uniform(0.3, 1.5) * std::cos(th), v_c + g.uniform(0.03, 0.15) * std::sin(th)});
    pts.push_back(pts.front());
    return pts;
}

Stroke random_stroke(oracle::Gen &g) {
    const std::vector<ControlPoint> pts = random_polygon(g);
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        segs.push_back(Segment{LineSegment{pts[k], pts[k + 1]}, g.uniform(0.1, 2.0),
                               g.integer(0, 1) == 0 ? SpeedProfile::ConstantControlSpeed
                                                    : SpeedProfile::ConstantMetricSpeed});
    return Stroke(std::move(segs));
}

SwimmerConfig random_config(oracle::Gen &g) {
    SwimmerConfig cfg = SwimmerConfig::nondimensional(1.0);
    cfg.mu = g.log_uniform(1e-3, 1e2);
    cfg.fidelity = g.integer(0, 1) == 0 ? Fidelity::Leading : Fidelity::Refined;
    return cfg;
}

} // namespace

TEST_CASE("property: displacement is independent of timing") {
    oracle::Gen g(11);
    for (int c = 0; c < cases; ++c) {
        const SwimmerConfig cfg = random_config(g);
        const Stroke s = random_stroke(g);
        const double x = integrate(cfg, s).displacement;
        std::vector<double> d;
        for (std::size_t k = 0; k < s.size(); ++k)
            d.push_back(g.log_uniform(0.01, 10.0));
        const Stroke retimed = with_profile(with_durations(s, d), g.integer(0, 1) == 0
                                                                       ? SpeedProfile::ConstantControlSpeed
                                                                       : SpeedProfile::ConstantMetricSpeed);
        CHECK(integrate(cfg, retimed).displacement == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("property: energy scales as 1/tau, drag is invariant under tau and mu") {
    oracle::Gen g(12);
    for (int c = 0; c < cases; ++c) {
        SwimmerConfig cfg = random_config(g);
        const Stroke s = random_stroke(g);
        const StrokeResult base = integrate(cfg, s);
        CHECK(base.energy > 0.0);
        const double tau = g.log_uniform(0.01, 100.0);
        const StrokeResult scaled = integrate(cfg, reparametrize(s, tau));
        CHECK(scaled.energy * tau == doctest::Approx(base.energy * s.period()).epsilon(1e-9));
        CHECK(scaled.drag == doctest::Approx(base.drag).epsilon(1e-9));
        const double mu_factor = g.log_uniform(0.01, 100.0);
        cfg.mu *= mu_factor;
        const StrokeResult viscous = integrate(cfg, s);
        CHECK(viscous.energy == doctest::Approx(base.energy * mu_factor).epsilon(1e-9));
        CHECK(viscous.displacement == doctest::Approx(base.displacement).epsilon(1e-12));
        CHECK(viscous.drag == doctest::Approx(base.drag).epsilon(1e-9));
    }
}

TEST_CASE("property: reversing a stroke reverses the displacement") {
    oracle::Gen g(13);
    for (int c = 0; c < cases; ++c) {
        const SwimmerConfig cfg = random_config(g);
        const Stroke s = random_stroke(g);
        const StrokeResult f = integrate(cfg, s);
        const StrokeResult b = integrate(cfg, reverse(s));
        CHECK(b.displacement == doctest::Approx(-f.displacement).epsilon(1e-9));
        CHECK(b.energy == doctest::Approx(f.energy).epsilon(1e-9));
        CHECK(signed_area_log_v_ell(reverse(s)) == doctest::Approx(-signed_area_log_v_ell(s)).epsilon(1e-12));
    }
}

TEST_CASE("property: relabelling the bladders mirrors the swimmer") {
    oracle::Gen g(14);
    for (int c = 0; c < cases; ++c) {
        const SwimmerConfig cfg = random_config(g);
        const Stroke s = random_stroke(g);
        const StrokeResult f = integrate(cfg, s);
        const StrokeResult m = integrate(cfg, relabel_bladders(s, cfg.v0));
        CHECK(m.displacement == doctest::Approx(-f.displacement).epsilon(1e-9));
        CHECK(m.energy == doctest::Approx(f.energy).epsilon(1e-9));
    }
}

TEST_CASE("property: rectangles match their closed forms") {
    oracle::Gen g(15);
    for (int c = 0; c < cases; ++c) {
        const SwimmerConfig cfg = SwimmerConfig::nondimensional(g.log_uniform(0.1, 10.0));
        const double v_s = cfg.v0 * g.uniform(0.02, 0.45);
        const double a_max = radius_of_volume(cfg.v0 - v_s);
        const double ell_s = a_max * g.uniform(2.5, 10.0);
        const double ell_L = ell_s * g.uniform(1.1, 10.0);
        const RectangleStroke rect = make_rectangle(cfg, ell_s, ell_L, v_s, g.uniform(0.1, 1.0), g.uniform(0.1, 1.0));
        const StrokeResult r = integrate(cfg, build_rectangle(cfg, rect));
        CHECK(r.displacement == doctest::Approx(rectangle_displacement_closed_form(cfg, rect)).epsilon(1e-9));
        CHECK(r.energy == doctest::Approx(rectangle_energy_closed_form(cfg, rect).total).epsilon(1e-9));
        CHECK(r.displacement > 0.0);
    }
}

TEST_CASE("property: optimal timing never costs more energy") {
    oracle::Gen g(16);
    for (int c = 0; c < cases; ++c) {
        const SwimmerConfig cfg = random_config(g);
        const Stroke s = random_stroke(g);
        const StrokeResult before = integrate(cfg, s);
        const StrokeResult after = integrate(cfg, optimize_timing(cfg, s, s.period()));
        CHECK(after.energy <= before.energy * (1.0 + 1e-9));
        CHECK(after.displacement == doctest::Approx(before.displacement).epsilon(1e-9));

        // Any other split of the same period costs at least as much.
        std::vector<double> d;
        double total = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k)
            total += d.emplace_back(g.uniform(0.1, 1.0));
        for (double &t : d)
            t *= s.period() / total;
        const StrokeResult other = integrate(cfg, with_profile(with_durations(s, d), SpeedProfile::ConstantMetricSpeed));
        CHECK(after.energy <= other.energy * (1.0 + 1e-9));
    }
}

TEST_CASE("property: the flow field carries the dilation flux") {
    oracle::Gen g(17);
    const auto rule = oracle::gauss_legendre(24);
    const int n_phi = 32;
    for (int c = 0; c < cases; ++c) {
        SwimmerConfig cfg = SwimmerConfig::nondimensional(1.0);
        cfg.mu = g.log_uniform(0.1, 10.0);
        const double a = g.log_uniform(0.1, 3.0);
        const Vec3 f(g.normal(), g.normal(), g.normal());
        const double v_dot = g.normal();
        const double r = a * g.uniform(1.0, 5.0);
        double flux = 0.0;
        for (const auto &[ct, w] : rule) {
            const double st = std::sqrt(1.0 - ct * ct);
            for (int j = 0; j < n_phi; ++j) {
                const double phi = 2.0 * oracle::pi * j / n_phi;
                const Vec3 n(st * std::cos(phi), st * std::sin(phi), ct);
                const FlowSample fs = flow_field(cfg, a, f, v_dot, r * n);
                flux += w * (2.0 * oracle::pi / n_phi) * r * r * fs.velocity.dot(n);
            }
        }
        CHECK(flux == doctest::Approx(v_dot).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("property: signed area and small-loop displacement share their sign") {
    oracle::Gen g(18);
    const SwimmerConfig cfg = SwimmerConfig::nondimensional(1.0);
    for (int c = 0; c < cases; ++c) {
        const double d_log_v = g.uniform(0.02, 0.2) * (g.integer(0, 1) == 0 ? 1.0 : -1.0);
        const double d_ell = g.uniform(0.1, 1.0);
        const ControlPoint center{g.uniform(20.0, 40.0), g.uniform(0.45, 0.55)};
        const Stroke loop = build_small_loop(cfg, center, d_log_v, d_ell, 1.0,
                                             g.integer(0, 1) == 0 ? LoopShape::Rectangle : LoopShape::Ellipse);
        const double x = integrate(cfg, loop).displacement;
        CHECK(signed_area_log_v_ell(loop) == doctest::Approx(d_log_v * d_ell).epsilon(1e-10));
        CHECK(x * d_log_v > 0.0);
        CHECK(x / (d_log_v * d_ell) == doctest::Approx(1.0 / 6.0).epsilon(0.05));
    }
}
