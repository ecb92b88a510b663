#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hc3/branch.hpp"
#include "hc3/errors.hpp"
#include "hc3/numerics.hpp"
#include "hc3/ti_solver.hpp"

namespace hc3 {

// A point of the asymmetric branch in root coordinates: x = z1^(1/k),
// y = z2^(1/k), t = lambda^(1/k).
struct BranchPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

inline BranchPoint branch_point(GraphKind g, int k, double x) {
    return BranchPoint{x, branch_constraint_y(k, x), branch_map(g, k, x)};
}

struct CriticalPoint {
    GraphKind graph = GraphKind::Loop;
    int k = 3;
    double lambda_cr = 0.0;
    double x_star = 0.0;  // branch coordinate where the asymmetric pair is born
    Field z_star;         // the unique fixed point at lambda_cr
    bool empirical = false;  // true when (graph, k) has no exact transition law
};

// Critical activity of the symmetry-breaking transition for loop/rod: the
// asymmetric branch map t(x) blows up at both ends of (0, inf), so its
// minimum is where the two asymmetric roots are born and
// lambda_cr = t(x*)^k. Golden section on log x brackets the minimum, a
// bisection on the centered-difference derivative sharpens it, and two
// parabolic-vertex steps push x* below the finite-difference noise floor.
inline CriticalPoint find_lambda_cr(GraphKind g, int k = 3) {
    if ((g != GraphKind::Loop && g != GraphKind::Rod) || k < 2)
        throw UnsupportedCase("no symmetry-breaking transition for this (graph, k)");
    auto tmap = [&](double x) { return branch_map(g, k, x); };
    auto tlog = [&](double u) { return tmap(std::exp(u)); };
    double xs = std::exp(golden_section_min(tlog, std::log(1e-3), std::log(1e3)));
    {
        auto deriv = [&](double x) {
            return central_derivative(tmap, x, 1e-7 * std::max(1.0, x));
        };
        double lo = xs * (1.0 - 1e-3);
        double hi = xs * (1.0 + 1e-3);
        int guard = 0;
        while (deriv(lo) > 0.0 && guard++ < 100) lo *= 0.98;
        guard = 0;
        while (deriv(hi) < 0.0 && guard++ < 100) hi *= 1.02;
        if (deriv(lo) < 0.0 && deriv(hi) > 0.0) xs = bisect_root(deriv, lo, hi, 100);
    }
    xs = parabolic_vertex_step(tmap, xs, 1e-4 * xs);
    xs = parabolic_vertex_step(tmap, xs, 1e-5 * xs);

    CriticalPoint cp;
    cp.graph = g;
    cp.k = k;
    cp.x_star = xs;
    cp.lambda_cr = std::pow(tmap(xs), k);
    // at criticality the asymmetric pair coincides with the symmetric root
    cp.z_star = solve_symmetric(g, ModelParams{k, cp.lambda_cr}).z;
    cp.empirical = !has_exact_count_law(g, k);
    return cp;
}

// The integer polynomial whose positivity underpins convexity of the loop
// k = 3 branch map for x^3 > 2. Exact in 64-bit arithmetic for small |x|.
inline long long convexity_alpha(long long x) {
    static constexpr std::array<long long, 27> coeff = {
        144, 96, 16, 864, 600, 104, 2160, 1584, 289,
        -33984, -25368, -6466, 38448, 29568, 7327,
        -7776, -5976, -1492, 0, 240, 79, 0, 24, 14, 0, 0, 1};
    long long acc = 0;
    for (int d = 26; d >= 0; --d) acc = acc * x + coeff[static_cast<std::size_t>(d)];
    return acc;
}

struct ConvexityReport {
    std::vector<double> violations;  // grid points with non-positive curvature
    long long alpha_at_one = 0;
    bool passed() const { return violations.empty(); }
};

inline std::vector<double> default_convexity_grid() { return log_grid(1e-3, 1e3, 2000); }

// Checks phi_loop_k3'' > 0 by second central differences (relative step
// 1e-5) at every grid point. The differences are taken on the excess part
// of phi; its linear part contributes exactly zero.
inline ConvexityReport verify_convexity_loop_k3(const std::vector<double>& grid = default_convexity_grid()) {
    ConvexityReport rep;
    rep.alpha_at_one = convexity_alpha(1);
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (!(x > 0.0) || (i > 0 && !(x > prev)))
            throw std::invalid_argument("convexity grid must be positive and increasing");
        prev = x;
        const double h = 1e-5 * x;
        const double d2 = phi_loop_k3_excess(x + h) - 2.0 * phi_loop_k3_excess(x) +
                          phi_loop_k3_excess(x - h);
        if (!(d2 > 0.0)) rep.violations.push_back(x);
    }
    return rep;
}

struct SweepRow {
    double lambda = 0.0;
    bool ok = false;  // false marks a point where the solver failed
    int count = 0;
    std::optional<double> z1_sym;
    std::optional<double> z1_low;
    std::optional<double> z1_high;
};

// Tabulates solve_all along an activity grid; failed points are marked and
// do not abort the sweep.
inline std::vector<SweepRow> sweep(GraphKind g, int k, const std::vector<double>& lambda_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(lambda_grid.size());
    double prev = 0.0;
    for (double lam : lambda_grid) {
        if (!(lam > 0.0) || !std::isfinite(lam) || !(lam > prev))
            throw std::invalid_argument("lambda grid must be positive, finite and increasing");
        prev = lam;
        SweepRow row;
        row.lambda = lam;
        try {
            const SolutionSet set = solve_all(g, ModelParams{k, lam});
            row.ok = true;
            row.count = set.count();
            for (const Solution& s : set.solutions) {
                if (s.branch == BranchTag::Symmetric) {
                    if (!row.z1_sym) row.z1_sym = s.z.z1;
                } else {
                    if (!row.z1_low || s.z.z1 < *row.z1_low) row.z1_low = s.z.z1;
                    if (!row.z1_high || s.z.z1 > *row.z1_high) row.z1_high = s.z.z1;
                }
            }
        } catch (const Error&) {
            row.ok = false;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hc3
