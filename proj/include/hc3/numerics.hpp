#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hc3 {

// Geometric grid with n >= 2 points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_grid requires 0 < lo < hi and n >= 2");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    g.front() = lo;
    g.back() = hi;
    return g;
}

// Bisection on a bracketed sign change; returns the midpoint of the final
// interval. Assumes f(lo) and f(hi) have opposite signs (or one is zero).
template <class F>
double bisect_root(F&& f, double lo, double hi, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval down to adjacent doubles
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Roots isolated by sign changes between consecutive grid points.
template <class F>
std::vector<double> scan_sign_changes(F&& f, const std::vector<double>& grid) {
    std::vector<double> roots;
    if (grid.size() < 2) return roots;
    double fprev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double fcur = f(grid[i]);
        if (fprev == 0.0)
            roots.push_back(grid[i - 1]);
        else if (fcur != 0.0 && (fprev < 0.0) != (fcur < 0.0))
            roots.push_back(bisect_root(f, grid[i - 1], grid[i]));
        fprev = fcur;
    }
    if (fprev == 0.0) roots.push_back(grid.back());
    return roots;
}

// Golden-section minimum of a unimodal function on [lo, hi].
template <class F>
double golden_section_min(F&& f, double lo, double hi, int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > 1e-14 * (std::abs(a) + std::abs(b) + 1e-300); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

template <class F>
double central_derivative(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// One parabolic-vertex refinement of a local minimum near x; a no-op when
// the three samples do not curve upward.
template <class F>
double parabolic_vertex_step(F&& f, double x, double h) {
    const double fp = f(x + h);
    const double f0 = f(x);
    const double fm = f(x - h);
    const double denom = fp - 2.0 * f0 + fm;
    if (!(denom > 0.0)) return x;
    double shift = -0.5 * h * (fp - fm) / denom;
    if (shift > h) shift = h;
    if (shift < -h) shift = -h;
    return x + shift;
}

}  // namespace hc3
