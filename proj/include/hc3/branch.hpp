#pragma once

#include <cmath>
#include <stdexcept>

#include "hc3/errors.hpp"
#include "hc3/fertile_graphs.hpp"
#include "hc3/numerics.hpp"

namespace hc3 {

inline void check_positive_x(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("branch coordinate x must be positive and finite");
}

// The positive y with x + y = 1/(x y): the constraint every asymmetric
// fixed-point pair satisfies at k = 3 in cube-root coordinates
// x = z1^(1/3), y = z2^(1/3). Written with a conjugate,
//
//   y = (sqrt(x^4 + 4x) - x^2) / (2x) = 2 / (sqrt(x^4 + 4x) + x^2),
//
// so there is no cancellation for large x.
inline double asymmetric_constraint_y(double x) {
    check_positive_x(x);
    return 2.0 / (std::sqrt(x * x * x * x + 4.0 * x) + x * x);
}

// phi_loop_k3(x) - x. Rationalizing
//
//   phi(x) = ( x^2 (x^3 - 1) + (x^3 + 1) sqrt(x^4 + 4x) ) / ( 2x (x^3 + 1) )
//
// against its linear part gives
//
//   phi(x) = x + 2 / ( (x^3+1) ( (x^3+1) sqrt(x^4+4x) + x^2 (x^3+3) ) ),
//
// where every term of the excess is positive. Second differences of phi
// must be taken on the excess alone: the linear part cancels exactly, and
// for x beyond ~6 the excess (~x^-8) would otherwise drown in the rounding
// of x itself.
inline double phi_loop_k3_excess(double x) {
    const double x3 = x * x * x;
    const double s = std::sqrt(x3 * x + 4.0 * x);
    return 2.0 / ((x3 + 1.0) * ((x3 + 1.0) * s + x * x * (x3 + 3.0)));
}

// lambda^(1/3) along the loop k = 3 asymmetric branch.
inline double phi_loop_k3(double x) {
    check_positive_x(x);
    return x + phi_loop_k3_excess(x);
}

// lambda^(1/3) along the rod k = 3 asymmetric branch:
//   t = x (x^3 + y(x)^3) / (1 + x^3).
inline double phi_rod_k3(double x) {
    check_positive_x(x);
    const double y = asymmetric_constraint_y(x);
    const double x3 = x * x * x;
    const double y3 = y * y * y;
    return x * (x3 + y3) / (1.0 + x3);
}

// General-k asymmetric-branch constraint. Dividing the two fixed-point
// equations and substituting x = z1^(1/k), y = z2^(1/k) leaves, for x != y,
//
//   x y * sum_{j=0}^{k-2} x^j y^(k-2-j) = 1.
//
// The left side increases in y, so y(x) is unique and found by bisection.
// k = 1 has an empty sum: the asymmetric branch does not exist at all.
inline double branch_constraint_y(int k, double x) {
    check_positive_x(x);
    if (k < 2) throw UnsupportedCase("no asymmetric branch for k < 2");
    if (k == 2) return 1.0 / x;
    if (k == 3) return asymmetric_constraint_y(x);
    auto s = [&](double y) {
        double sum = 0.0;
        for (int j = 0; j <= k - 2; ++j)
            sum += std::pow(x, j) * std::pow(y, k - 2 - j);
        return x * y * sum - 1.0;
    };
    double hi = 1.0;
    int guard = 0;
    while (s(hi) < 0.0 && guard++ < 2000) hi *= 2.0;
    return bisect_root(s, 0.0, hi);
}

// lambda^(1/k) along the asymmetric branch of the loop or rod system,
// obtained by solving the first fixed-point equation for the activity with
// y eliminated through the constraint.
inline double branch_map(GraphKind g, int k, double x) {
    if (g != GraphKind::Loop && g != GraphKind::Rod)
        throw UnsupportedCase("asymmetric branch exists only for loop and rod");
    if (k == 3) return g == GraphKind::Loop ? phi_loop_k3(x) : phi_rod_k3(x);
    check_positive_x(x);
    const double y = branch_constraint_y(k, x);
    const double xk = std::pow(x, k);
    const double yk = std::pow(y, k);
    return g == GraphKind::Loop ? x * (1.0 + xk + yk) / (1.0 + xk)
                                : x * (xk + yk) / (1.0 + xk);
}

}  // namespace hc3
