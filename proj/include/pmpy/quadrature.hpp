#pragma once

// Adaptive Simpson quadrature with Richardson extrapolation.
//
// Each panel compares the one-panel Simpson estimate S1 against the two-panel
// estimate S2. Since the error of Simpson's rule is O(h^4), (S2 - S1) / 15
// estimates the error of S2 and S2 + (S2 - S1) / 15 is the Richardson-
// extrapolated value (Boole's rule). Panels are bisected until
// |S2 - S1| <= 15 * tol, with the tolerance divided between the halves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pmpy::quadrature {

struct Settings {
    double rel_tol = 1e-10;
    int max_depth = 40;
    int min_depth = 3;
};

struct Result {
    double value = 0.0;
    double error = 0.0; ///< accumulated |S2 - S1| / 15 over accepted panels
    bool converged = true;
    std::size_t evaluations = 0;

    Result &operator+=(const Result &o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        evaluations += o.evaluations;
        return *this;
    }
};

/// Composite Simpson rule with n (even, >= 2) subintervals.
template <class F>
double composite_simpson(F &&f, double a, double b, std::size_t n) {
    if (n < 2)
        n = 2;
    if (n % 2 == 1)
        ++n;
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double y = f(a + h * static_cast<double>(i));
        (i % 2 == 1 ? odd : even) += y;
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Absolute-tolerance adaptive Simpson on [a, b].
template <class F>
Result adaptive_simpson(F &&f, double a, double b, double abs_tol, const Settings &settings = {}) {
    struct Panel {
        double a, b, fa, fm, fb, whole, tol;
        int depth;
    };

    Result result;
    if (a == b)
        return result;
    if (b < a) {
        result = adaptive_simpson(f, b, a, abs_tol, settings);
        result.value = -result.value;
        return result;
    }

    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    result.evaluations = 3;

    std::vector<Panel> stack;
    stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), abs_tol, 0});

    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();

        const double mid = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + mid);
        const double rm = 0.5 * (mid + p.b);
        const double flm = f(lm);
        const double frm = f(rm);
        result.evaluations += 2;

        const double left = (mid - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        const double right = (p.b - mid) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        const double two = left + right;
        const double delta = two - p.whole;

        const bool accurate = std::abs(delta) <= 15.0 * p.tol;
        const bool exhausted = p.depth >= settings.max_depth || !(lm > p.a && rm < p.b);
        if ((accurate && p.depth >= settings.min_depth) || exhausted) {
            result.value += two + delta / 15.0;
            result.error += std::abs(delta) / 15.0;
            if (!accurate)
                result.converged = false;
            continue;
        }
        stack.push_back({mid, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.a, mid, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
    }
    return result;
}

/// Relative-tolerance adaptive Simpson: the absolute target is
/// rel_tol * (integral of |f|), the latter estimated on a 64-panel grid.
template <class F>
Result integrate(F &&f, double a, double b, const Settings &settings = {}) {
    if (a == b)
        return {};
    const double scale = std::abs(composite_simpson([&](double x) { return std::abs(f(x)); }, a, b, 64));
    const double abs_tol = std::max(settings.rel_tol * scale, 1e-300);
    Result r = adaptive_simpson(f, a, b, abs_tol, settings);
    r.evaluations += 65;
    return r;
}

} // namespace pmpy::quadrature
