#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hc3/branch.hpp"
#include "hc3/errors.hpp"
#include "hc3/numerics.hpp"
#include "hc3/recursion.hpp"

namespace hc3 {

enum class BranchTag { Symmetric, Asymmetric };

inline constexpr double kResidualTarget = 1e-12;  // declare Newton converged here
inline constexpr double kResidualAccept = 1e-10;  // every reported solution is at least this good
inline constexpr double kDedupTol = 1e-6;         // max-norm distance below which two roots are one
inline constexpr double kSymmetryTol = 1e-8;
// A converged iterate also needs its Newton-step error estimate below this
// (relative) scale. At a tangency the residual alone cannot localize the
// degenerate root: iterates 1e-5 away still reach 1e-13 residuals.
inline constexpr double kLocalizationTol = 1e-7;

struct Solution {
    Field z;
    BranchTag branch = BranchTag::Symmetric;
    double residual_norm = 0.0;
    std::string note;  // "near-tangent" when a merging root pair was reported once
};

struct SolutionSet {
    GraphKind graph = GraphKind::Loop;
    ModelParams params;
    std::vector<Solution> solutions;
    // true when the count of translation-invariant measures for (graph, k)
    // has an exact law (loop/rod at k in {2,3}; key/whistle at every k);
    // otherwise the count is what multistart search found.
    bool exact_count_law = false;

    int count() const { return static_cast<int>(solutions.size()); }
};

inline bool has_exact_count_law(GraphKind g, int k) {
    if (g == GraphKind::Key || g == GraphKind::Whistle) return true;
    return k == 2 || k == 3;
}

namespace detail {

// Right-hand side of the one-variable symmetric equation z = rhs(z):
//   loop: lambda ((1+z)/(1+2z))^k,   rod: lambda ((1+z)/(2z))^k.
// Both are strictly decreasing in z, so the fixed point is unique.
inline double symmetric_rhs(GraphKind g, const ModelParams& p, double z) {
    const double ratio = g == GraphKind::Loop ? (1.0 + z) / (1.0 + 2.0 * z)
                                              : (1.0 + z) / (2.0 * z);
    return p.lambda * std::pow(ratio, p.k);
}

inline double symmetric_rhs_derivative(GraphKind g, const ModelParams& p, double z) {
    const double logd = g == GraphKind::Loop ? 1.0 / (1.0 + z) - 2.0 / (1.0 + 2.0 * z)
                                             : 1.0 / (1.0 + z) - 1.0 / z;
    return symmetric_rhs(g, p, z) * p.k * logd;
}

}  // namespace detail

// The unique solution with z1 = z2, for loop and rod. Bisection on
// [1e-12, lambda + 1]: rhs(z) - z is positive at the left end and negative
// at lambda + 1 because rhs < lambda there, so the bracket always holds.
inline Solution solve_symmetric(GraphKind gk, const ModelParams& p) {
    if (gk != GraphKind::Loop && gk != GraphKind::Rod)
        throw UnsupportedCase("the symmetric one-variable equation is defined for loop and rod");
    check_params(p);
    auto f = [&](double z) { return detail::symmetric_rhs(gk, p, z) - z; };
    const double lo = 1e-12;
    const double hi = p.lambda + 1.0;
    if (!(f(lo) > 0.0) || !(f(hi) < 0.0))
        throw BracketFailure("no sign change on [1e-12, lambda + 1]");
    double z = bisect_root(f, lo, hi);
    // scalar Newton steps push the residual to the rounding floor
    for (int i = 0; i < 4; ++i) {
        const double g = f(z);
        const double gd = detail::symmetric_rhs_derivative(gk, p, z) - 1.0;
        const double step = g / gd;
        if (!std::isfinite(step) || z - step <= 0.0) break;
        z -= step;
    }
    const FertileGraph g = fertile_graph(gk);
    Solution s;
    s.z = Field{z, z};
    s.branch = BranchTag::Symmetric;
    s.residual_norm = residual_norm(g, p, s.z);
    return s;
}

namespace detail {

// Newton direction for z - F(z) = 0; false when the linearization is
// singular or non-finite.
inline bool newton_step(const FertileGraph& g, const ModelParams& p, const Field& z, double& s1,
                        double& s2) {
    const auto r = residual(g, p, z);
    const Jacobian2 jf = jacobian(g, p, z);
    const double a11 = 1.0 - jf.j11, a12 = -jf.j12;
    const double a21 = -jf.j21, a22 = 1.0 - jf.j22;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) return false;
    s1 = (r[0] * a22 - r[1] * a12) / det;
    s2 = (a11 * r[1] - a21 * r[0]) / det;
    return std::isfinite(s1) && std::isfinite(s2);
}

}  // namespace detail

// Damped Newton iteration on z - F(z). Steps are halved until the residual
// decreases and iterates stay positive; convergence is declared at
// kResidualTarget and then driven on to the rounding floor. The converged
// point must also pass a localization certificate: its Newton-step error
// estimate stays below kLocalizationTol, which weeds out valley points near
// a degenerate root whose residual is tiny without being a root.
inline std::optional<Field> newton_polish(const FertileGraph& g, const ModelParams& p, Field z,
                                          int max_iter = 200) {
    if (!(z.z1 > 0.0) || !(z.z2 > 0.0) || !std::isfinite(z.z1) || !std::isfinite(z.z2))
        return std::nullopt;
    double cur = residual_norm(g, p, z);
    for (int it = 0; it < max_iter; ++it) {
        double s1 = 0.0, s2 = 0.0;
        if (!detail::newton_step(g, p, z, s1, s2)) break;
        bool accepted = false;
        double step = 1.0;
        for (int h = 0; h <= 40; ++h, step *= 0.5) {
            const Field trial{z.z1 - step * s1, z.z2 - step * s2};
            if (!(trial.z1 > 0.0) || !(trial.z2 > 0.0) ||
                !std::isfinite(trial.z1) || !std::isfinite(trial.z2))
                continue;
            const double t = residual_norm(g, p, trial);
            if (t < cur) {
                z = trial;
                cur = t;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // at the floor: no direction improves
    }
    if (cur > kResidualTarget) return std::nullopt;
    double s1 = 0.0, s2 = 0.0;
    if (!detail::newton_step(g, p, z, s1, s2)) return std::nullopt;
    const double scale = 1.0 + std::max(std::abs(z.z1), std::abs(z.z2));
    if (std::max(std::abs(s1), std::abs(s2)) > kLocalizationTol * scale) return std::nullopt;
    return z;
}

// All positive roots x of the degree-8 branch polynomial for loop at k = 3,
//
//   t x^8 - t^2 x^7 + 2 x^6 - 2 t^2 x^4 + 2 x^3 - t x^2 - t^2 x + 1 = 0,
//   t = lambda^(1/3),
//
// kept only where t = phi_loop_k3(x); the other factor of the underlying
// quadratic in t is negative for every x > 0 and never meets t > 0. Roots
// come from a sign-change scan plus bisection; a tangency probe catches the
// double root where the two branch solutions merge and the polynomial only
// touches zero.
inline std::vector<double> loop_k3_branch_polynomial(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    const double t = std::cbrt(lambda);
    const double t2 = t * t;
    auto octic = [&](double x) {
        double acc = t;
        acc = acc * x - t2;
        acc = acc * x + 2.0;
        acc = acc * x;
        acc = acc * x - 2.0 * t2;
        acc = acc * x + 2.0;
        acc = acc * x - t;
        acc = acc * x - t2;
        return acc * x + 1.0;
    };

    const double lo = std::min(1e-4, 0.1 / (t * t));
    const double hi = std::max(1e4, 10.0 * t);
    const auto grid = log_grid(lo, hi, 4001);
    std::vector<double> roots = scan_sign_changes(octic, grid);

    double xm = grid[0];
    double vm = octic(grid[0]);
    for (double x : grid) {
        const double v = octic(x);
        if (v < vm) {
            vm = v;
            xm = x;
        }
    }

    if (roots.size() < 2) {
        // near-tangent roots sit closer than the global grid resolves
        const auto local = log_grid(0.95 * xm, 1.05 * xm, 20001);
        for (double r : scan_sign_changes(octic, local)) roots.push_back(r);
    }
    if (roots.empty()) {
        double xt = golden_section_min(octic, 0.95 * xm, 1.05 * xm);
        xt = parabolic_vertex_step(octic, xt, 1e-4 * xt);
        xt = parabolic_vertex_step(octic, xt, 1e-6 * xt);
        const double scale = (1.0 + t + t2) * (1.0 + std::pow(xt, 8));
        if (octic(xt) <= 1e-12 * scale) roots.push_back(xt);
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double x : roots) {
        if (!out.empty() && std::abs(x - out.back()) <= 1e-9 * (1.0 + std::abs(x))) continue;
        if (std::abs(phi_loop_k3(x) - t) <= 1e-7 * (1.0 + t)) out.push_back(x);
    }
    return out;
}

namespace detail {

// Roots of phi_rod_k3(x) = lambda^(1/3), bracketed on either side of the
// branch minimum. phi_rod blows up at both ends (like x^(-1/2) at 0 and
// like x at infinity), so for t above the minimum there are exactly two.
inline std::vector<double> rod_k3_branch_roots(double lambda) {
    const double t = std::cbrt(lambda);
    auto philog = [](double u) { return phi_rod_k3(std::exp(u)); };
    const double xm = std::exp(golden_section_min(philog, std::log(0.05), std::log(20.0)));
    const double tmin = phi_rod_k3(xm);
    std::vector<double> roots;
    if (t > tmin + 1e-12 * (1.0 + t)) {
        auto f = [&](double x) { return phi_rod_k3(x) - t; };
        double lo = std::min(1e-3, 0.1 / (t * t));
        int guard = 0;
        while (f(lo) < 0.0 && guard++ < 600) lo *= 0.5;
        double hi = std::max(1e3, 10.0 * t);
        guard = 0;
        while (f(hi) < 0.0 && guard++ < 600) hi *= 2.0;
        roots.push_back(bisect_root(f, lo, xm));
        roots.push_back(bisect_root(f, xm, hi));
    } else if (t >= tmin - 1e-12 * (1.0 + t)) {
        roots.push_back(xm);  // tangent: the two branch roots coincide
    }
    return roots;
}

}  // namespace detail

// Asymmetric candidate fields for loop/rod at k = 3, built from the branch
// roots through z = (x^3, y(x)^3) and completed by the swap.
inline std::vector<Field> branch_solutions_k3(GraphKind g, const ModelParams& p) {
    if ((g != GraphKind::Loop && g != GraphKind::Rod) || p.k != 3)
        throw UnsupportedCase("closed-form branch solutions exist for loop/rod at k = 3");
    check_params(p);
    const std::vector<double> xs = g == GraphKind::Loop
                                       ? loop_k3_branch_polynomial(p.lambda)
                                       : detail::rod_k3_branch_roots(p.lambda);
    std::vector<Field> out;
    for (double x : xs) {
        const double y = asymmetric_constraint_y(x);
        const Field z{x * x * x, y * y * y};
        out.push_back(z);
        out.push_back(swapped(z));
    }
    return out;
}

namespace detail {

// Log-uniform seed box. Loop fixed points always satisfy
// lambda/(1+lambda)^k < z_i < lambda; rod fixed points satisfy
// z1 + z2 < M = lambda + (1+lambda)^k / lambda^(k-1) and z_i > lambda / M^k.
// Key and whistle have no stated box, so the loop box is widened tenfold on
// each side.
inline std::pair<double, double> seed_box(GraphKind g, const ModelParams& p) {
    const double lam = p.lambda;
    const double loop_lo = lam / std::pow(1.0 + lam, p.k);
    switch (g) {
        case GraphKind::Loop:
            return {loop_lo, lam};
        case GraphKind::Rod: {
            const double m = lam + std::pow(1.0 + lam, p.k) / std::pow(lam, p.k - 1);
            return {lam / std::pow(m, p.k), m};
        }
        default:
            return {0.1 * loop_lo, 10.0 * lam};
    }
}

// Transitive clustering at kDedupTol. Near a tangency the Newton iterates
// stall along a flat residual valley wider than the tolerance; chaining
// collapses the whole valley onto one representative instead of reporting
// its rim as several roots. Returns the earliest member index of each
// cluster, in first-seen order, with the cluster diameter.
inline std::vector<std::pair<int, double>> cluster_fields(const std::vector<Field>& fields) {
    const int n = static_cast<int>(fields.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (max_norm(fields[i], fields[j]) <= kDedupTol) {
                const int a = find(i);
                const int b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::pair<int, double>> reps;
    for (int i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        double diameter = 0.0;
        for (int a = i; a < n; ++a) {
            if (find(a) != i) continue;
            for (int b = a + 1; b < n; ++b)
                if (find(b) == i) diameter = std::max(diameter, max_norm(fields[a], fields[b]));
        }
        reps.emplace_back(i, diameter);
    }
    return reps;
}

inline std::vector<Field> dedup_fields(const std::vector<Field>& fields) {
    std::vector<Field> reps;
    for (const auto& [idx, diameter] : cluster_fields(fields))
        reps.push_back(fields[static_cast<std::size_t>(idx)]);
    return reps;
}

}  // namespace detail

// Damped Newton from a 32 x 32 log-uniform seed grid, deduplicated in seed
// order. Finds every fixed point for all four graphs and any k; for
// loop/rod at k = 3 it cross-checks the closed-form branch roots.
inline std::vector<Field> multistart_newton(GraphKind gk, const ModelParams& p) {
    check_params(p);
    const FertileGraph g = fertile_graph(gk);
    const auto [lo, hi] = detail::seed_box(gk, p);
    const auto axis = log_grid(lo, hi, 32);
    std::vector<Field> found;
    for (double s1 : axis) {
        for (double s2 : axis) {
            if (auto z = newton_polish(g, p, Field{s1, s2})) found.push_back(*z);
        }
    }
    return detail::dedup_fields(found);
}

namespace detail {

// Smallest-singular-value proxy of I - J at z, normalized by the matrix
// size. Vanishes exactly where the asymmetric branch is born, i.e. where
// the fixed point degenerates.
inline double fixed_point_regularity(const FertileGraph& g, const ModelParams& p, const Field& z) {
    const Jacobian2 jf = jacobian(g, p, z);
    const double a11 = 1.0 - jf.j11, a12 = -jf.j12;
    const double a21 = -jf.j21, a22 = 1.0 - jf.j22;
    const double det = a11 * a22 - a12 * a21;
    const double fro = std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    return std::abs(det) / (fro + 1e-300);
}

}  // namespace detail

// Every translation-invariant fixed point at (g, k, lambda): the symmetric
// branch, the k = 3 closed-form asymmetric branches where they exist, and
// multistart Newton everywhere, merged and deduplicated at kDedupTol.
//
// When the symmetric root is degenerate (the activity sits at the branch
// tangency), double arithmetic holds spurious exact fixed points out to
// about eps^(1/3) ~ 5e-6 around it, beyond the dedup tolerance. Candidates
// within the widened identification radius of a degenerate anchor are
// therefore folded into it.
inline SolutionSet solve_all(GraphKind gk, const ModelParams& p) {
    check_params(p);
    const FertileGraph g = fertile_graph(gk);
    const bool symmetric_system = gk == GraphKind::Loop || gk == GraphKind::Rod;

    struct Candidate {
        Field z;
        std::string note;
    };
    std::vector<Candidate> cands;

    if (symmetric_system) cands.push_back({solve_symmetric(gk, p).z, ""});

    if (symmetric_system && p.k == 3) {
        const std::vector<Field> branch = branch_solutions_k3(gk, p);
        // a single branch root (two fields after the swap) means tangency
        const std::string note = branch.size() == 2 ? "near-tangent" : "";
        for (const Field& z0 : branch) {
            auto z = newton_polish(g, p, z0);
            if (!z) {
                if (residual_norm(g, p, z0) <= kResidualAccept)
                    z = z0;
                else
                    throw ConvergenceFailure("closed-form branch root failed to polish");
            }
            cands.push_back({*z, note});
        }
    }

    for (const Field& z : multistart_newton(gk, p)) cands.push_back({z, ""});

    if (symmetric_system && detail::fixed_point_regularity(g, p, cands.front().z) <= 1e-6) {
        const double radius = 1e-5;  // identification limit at a tangency
        const Field anchor = cands.front().z;
        std::string& anchor_note = cands.front().note;
        std::vector<Candidate> kept;
        kept.push_back(cands.front());
        for (std::size_t i = 1; i < cands.size(); ++i) {
            const double d = max_norm(cands[i].z, anchor);
            if (d <= radius) {
                if (d > 1e-9 && anchor_note.empty()) anchor_note = "near-tangent";
            } else {
                kept.push_back(cands[i]);
            }
        }
        kept.front().note = anchor_note;
        cands = std::move(kept);
    }

    std::vector<Field> fields;
    fields.reserve(cands.size());
    for (const Candidate& c : cands) fields.push_back(c.z);

    SolutionSet set;
    set.graph = gk;
    set.params = p;
    set.exact_count_law = has_exact_count_law(gk, p.k);
    for (const auto& [idx, diameter] : detail::cluster_fields(fields)) {
        const Candidate& c = cands[static_cast<std::size_t>(idx)];
        Solution s;
        s.z = c.z;
        s.residual_norm = residual_norm(g, p, c.z);
        s.branch = std::abs(c.z.z1 - c.z.z2) <= kSymmetryTol * (1.0 + std::abs(c.z.z1))
                       ? BranchTag::Symmetric
                       : BranchTag::Asymmetric;
        s.note = c.note;
        // distinct-but-unresolvable roots were merged into this cluster
        if (s.note.empty() && diameter > 1e-9) s.note = "near-tangent";
        if (s.residual_norm <= kResidualAccept) set.solutions.push_back(s);
    }
    std::sort(set.solutions.begin(), set.solutions.end(), [](const Solution& a, const Solution& b) {
        if (a.branch != b.branch) return a.branch == BranchTag::Symmetric;
        if (a.z.z1 != b.z.z1) return a.z.z1 < b.z.z1;
        return a.z.z2 < b.z.z2;
    });
    return set;
}

// Smallest slack of the a-priori box the solution must sit in, when one is
// stated for (g, k): loop has lambda/(1+lambda)^k < z_i < lambda for all k;
// rod splits on whether the components sit below or above 1. Cases not
// covered by a stated box (rod with both components at or above 1, key,
// whistle) return nullopt and count as vacuously in bounds.
inline std::optional<double> bounds_margin(GraphKind g, const ModelParams& p, const Field& z) {
    const double lam = p.lambda;
    if (g == GraphKind::Loop) {
        const double lo = lam / std::pow(1.0 + lam, p.k);
        return std::min(std::min(z.z1 - lo, z.z2 - lo), std::min(lam - z.z1, lam - z.z2));
    }
    if (g == GraphKind::Rod) {
        const double eps = 1e-9;
        const bool b1 = z.z1 < 1.0 - eps, a1 = z.z1 > 1.0 + eps;
        const bool b2 = z.z2 < 1.0 - eps, a2 = z.z2 > 1.0 + eps;
        if (b1 && b2) {
            const double hi = std::pow(1.0 + lam, p.k) / (std::pow(2.0, p.k) * std::pow(lam, p.k - 1));
            return std::min(std::min(z.z1 - lam, z.z2 - lam), std::min(hi - z.z1, hi - z.z2));
        }
        if ((b1 && a2) || (b2 && a1)) {
            const double small = std::min(z.z1, z.z2);
            const double big = std::max(z.z1, z.z2);
            const double cap = std::pow(1.0 + lam, p.k) / std::pow(lam, p.k - 1);
            return std::min(std::min(lam - small, big - lam), cap - big);
        }
        return std::nullopt;
    }
    return std::nullopt;
}

inline bool check_bounds(GraphKind g, const ModelParams& p, const Solution& s) {
    const auto m = bounds_margin(g, p, s.z);
    return !m.has_value() || *m > 0.0;
}

}  // namespace hc3
