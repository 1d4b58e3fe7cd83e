#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Root of a monotone f on [lo, hi] by bisection to the last bit.
inline double bisect(const std::function<double(double)> &f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimization of a unimodal f on [lo, hi].
inline std::pair<double, double> golden_section(const std::function<double(double)> &f, double lo, double hi,
                                                double rel_tol = 1e-12) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > rel_tol * (std::abs(c) + std::abs(d))) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

/// Central difference with one Richardson step: O(h^4).
inline double derivative(const std::function<double(double)> &f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

/// Composite trapezoid with n panels followed by two Romberg steps.
inline double romberg(const std::function<double(double)> &f, double a, double b, std::size_t n = 4096) {
    auto trap = [&](std::size_t m) {
        const double h = (b - a) / static_cast<double>(m);
        double s = 0.5 * (f(a) + f(b));
        for (std::size_t i = 1; i < m; ++i)
            s += f(a + h * static_cast<double>(i));
        return s * h;
    };
    const double t1 = trap(n / 4);
    const double t2 = trap(n / 2);
    const double t4 = trap(n);
    const double s1 = (4.0 * t2 - t1) / 3.0;
    const double s2 = (4.0 * t4 - t2) / 3.0;
    return (16.0 * s2 - s1) / 15.0;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
    std::vector<std::pair<double, double>> out;
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        out.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
    }
    return out;
}

/// Deterministic generator for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return lo * std::pow(hi / lo, uniform(0.0, 1.0)); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>()(rng_); }

  private:
    std::mt19937_64 rng_;
};

} // namespace oracle
