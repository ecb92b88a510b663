// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hc3/hc3.hpp"

using namespace hc3;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string num(double v) { return format_sig(v, 6); }

// --- criterion 1: critical activities -------------------------------------
Check criterion_critical_activities() {
    Check c;
    struct Case {
        GraphKind g;
        int k;
        double expect;
    };
    const Case cases[] = {
        {GraphKind::Loop, 3, 32.0 / 27.0},
        {GraphKind::Rod, 3, 4.0 / 27.0},
        {GraphKind::Loop, 2, 9.0 / 4.0},
        {GraphKind::Rod, 2, 1.0},
    };
    for (const Case& cs : cases) {
        const auto t0 = Clock::now();
        const CriticalPoint cp = find_lambda_cr(cs.g, cs.k);
        const double elapsed = seconds_since(t0);
        c.require(std::abs(cp.lambda_cr - cs.expect) <= 1e-9,
                  std::string(graph_name(cs.g)) + " k=" + std::to_string(cs.k) +
                      " lambda_cr off by " + num(cp.lambda_cr - cs.expect));
        c.require(elapsed <= 1.0, std::string(graph_name(cs.g)) + " took " + num(elapsed) + " s");
        if (cs.g == GraphKind::Loop && cs.k == 3)
            c.require(std::abs(cp.x_star - std::cbrt(4.0) / 2.0) <= 1e-9,
                      "x_star off by " + num(cp.x_star - std::cbrt(4.0) / 2.0));
    }
    return c;
}

// --- criterion 2: solution counts ------------------------------------------
std::vector<SolutionSet> g_criterion2_sets;  // reused by criterion 4

Check criterion_solution_counts() {
    Check c;
    const auto t0 = Clock::now();
    auto expect_count = [&](GraphKind g, int k, double lam, int want) {
        const SolutionSet s = solve_all(g, ModelParams{k, lam});
        g_criterion2_sets.push_back(s);
        c.require(s.count() == want, std::string(graph_name(g)) + " k=" + std::to_string(k) +
                                         " lambda=" + num(lam) + " gave " +
                                         std::to_string(s.count()) + " not " + std::to_string(want));
    };
    for (double lam : {0.5, 1.0, 32.0 / 27.0}) expect_count(GraphKind::Loop, 3, lam, 1);
    for (double lam : {1.3, 2.0, 5.0, 50.0}) expect_count(GraphKind::Loop, 3, lam, 3);
    for (double lam : {0.05, 4.0 / 27.0}) expect_count(GraphKind::Rod, 3, lam, 1);
    for (double lam : {0.2, 1.0, 10.0}) expect_count(GraphKind::Rod, 3, lam, 3);
    for (GraphKind g : {GraphKind::Key, GraphKind::Whistle})
        for (int k : {1, 2, 3, 4})
            for (double lam : {0.01, 0.1, 1.0, 10.0, 100.0}) expect_count(g, k, lam, 1);
    const double elapsed = seconds_since(t0);
    c.require(elapsed <= 5.0, "counts took " + num(elapsed) + " s");
    return c;
}

// --- criterion 3: the critical fixed point is (1/2, 1/2) -------------------
Check criterion_critical_fixed_point() {
    Check c;
    for (auto [g, lam] : {std::pair{GraphKind::Loop, 32.0 / 27.0},
                          std::pair{GraphKind::Rod, 4.0 / 27.0}}) {
        const SolutionSet s = solve_all(g, ModelParams{3, lam});
        c.require(s.count() == 1,
                  std::string(graph_name(g)) + " has " + std::to_string(s.count()) + " solutions");
        if (s.count() == 1) {
            c.require(std::abs(s.solutions[0].z.z1 - 0.5) <= 1e-9 &&
                          std::abs(s.solutions[0].z.z2 - 0.5) <= 1e-9,
                      std::string(graph_name(g)) + " z = (" + num(s.solutions[0].z.z1) + ", " +
                          num(s.solutions[0].z.z2) + ")");
        }
    }
    return c;
}

// --- criterion 4: every solution respects the a-priori bounds --------------
Check criterion_bounds() {
    Check c;
    for (const SolutionSet& s : g_criterion2_sets) {
        for (const Solution& sol : s.solutions) {
            c.require(check_bounds(s.graph, s.params, sol),
                      std::string(graph_name(s.graph)) + " lambda=" + num(s.params.lambda) +
                          " solution out of bounds");
            const auto m = bounds_margin(s.graph, s.params, sol.z);
            if (m)
                c.require(*m > 1e-12, std::string(graph_name(s.graph)) +
                                          " lambda=" + num(s.params.lambda) + " margin " + num(*m));
        }
    }
    return c;
}

// --- criterion 5: finite-volume consistency --------------------------------
Check criterion_consistency() {
    Check c;
    const auto t0 = Clock::now();
    for (GraphKind g : kAllGraphKinds) {
        for (int k : {1, 2}) {
            for (double lam : {0.5, 1.0, 2.0}) {
                const ModelParams p{k, lam};
                Field z;
                if (g == GraphKind::Loop || g == GraphKind::Rod) {
                    z = solve_symmetric(g, p).z;
                } else {
                    const SolutionSet s = solve_all(g, p);
                    c.require(s.count() >= 1, "no fixed point found");
                    if (s.count() < 1) continue;
                    z = s.solutions.front().z;
                }
                const std::string tag =
                    std::string(graph_name(g)) + " k=" + std::to_string(k) + " lambda=" + num(lam);
                const double d0 = consistency_defect(g, p, 2, z);
                c.require(d0 <= 1e-12, tag + " defect " + num(d0));
                const double d1 = consistency_defect(g, p, 2, Field{z.z1 + 0.05, z.z2 - 0.03});
                c.require(d1 >= 1e-5, tag + " perturbed defect " + num(d1));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    c.require(elapsed <= 30.0, "consistency took " + num(elapsed) + " s");
    return c;
}

// --- criterion 6: branch polynomial vs multistart Newton -------------------
Check criterion_branch_cross_check() {
    Check c;
    for (double lam : {1.3, 2.0, 5.0}) {
        const ModelParams p{3, lam};

        std::vector<Field> mapped;
        for (double x : loop_k3_branch_polynomial(lam)) {
            const double y = asymmetric_constraint_y(x);
            mapped.push_back(Field{x * x * x, y * y * y});
        }
        c.require(mapped.size() == 2, "lambda=" + num(lam) + " branch root count " +
                                          std::to_string(mapped.size()));

        std::vector<Field> newton_asym;
        for (const Field& z : multistart_newton(GraphKind::Loop, p))
            if (std::abs(z.z1 - z.z2) > 1e-8 * (1.0 + std::abs(z.z1))) newton_asym.push_back(z);
        c.require(newton_asym.size() == 2, "lambda=" + num(lam) + " newton asym count " +
                                               std::to_string(newton_asym.size()));

        for (const Field& a : mapped) {
            double best = 1e300;
            for (const Field& b : newton_asym) best = std::min(best, max_norm(a, b));
            c.require(best <= 1e-8, "lambda=" + num(lam) + " route mismatch " + num(best));
        }
    }
    return c;
}

// --- criterion 7: convexity -------------------------------------------------
Check criterion_convexity() {
    Check c;
    const ConvexityReport rep = verify_convexity_loop_k3();
    c.require(rep.violations.empty(),
              std::to_string(rep.violations.size()) + " curvature violations");
    c.require(rep.alpha_at_one == 496, "alpha(1) = " + std::to_string(rep.alpha_at_one));
    return c;
}

// --- criterion 8: jacobian vs central differences ---------------------------
Check criterion_jacobian() {
    Check c;
    const auto zs = log_grid(1e-3, 1e3, 10);
    for (GraphKind g : kAllGraphKinds) {
        const FertileGraph fg = fertile_graph(g);
        for (int k : {1, 2, 3}) {
            const ModelParams p{k, 2.0};
            for (double z1 : zs) {
                for (double z2 : zs) {
                    const Field z{z1, z2};
                    const Jacobian2 a = jacobian(fg, p, z);
                    const double h1 = 1e-6 * (1.0 + z1);
                    const double h2 = 1e-6 * (1.0 + z2);
                    const Field fp1 = recursion_map(fg, p, {z1 + h1, z2});
                    const Field fm1 = recursion_map(fg, p, {z1 - h1, z2});
                    const Field fp2 = recursion_map(fg, p, {z1, z2 + h2});
                    const Field fm2 = recursion_map(fg, p, {z1, z2 - h2});
                    const double fd[4] = {(fp1.z1 - fm1.z1) / (2 * h1), (fp2.z1 - fm2.z1) / (2 * h2),
                                          (fp1.z2 - fm1.z2) / (2 * h1), (fp2.z2 - fm2.z2) / (2 * h2)};
                    const double an[4] = {a.j11, a.j12, a.j21, a.j22};
                    for (int i = 0; i < 4; ++i) {
                        const double err = std::abs(an[i] - fd[i]);
                        c.require(err <= 1e-6 * (1.0 + std::abs(an[i]) + std::abs(fd[i])),
                                  std::string(graph_name(g)) + " k=" + std::to_string(k) +
                                      " entry " + std::to_string(i) + " err " + num(err));
                    }
                }
            }
        }
    }
    return c;
}

// --- criterion 9: determinism ------------------------------------------------
Check criterion_determinism() {
    Check c;
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.5 + 2.5 * i / 199.0);
    const std::string a = sweep_to_csv(sweep(GraphKind::Loop, 3, grid));
    const std::string b = sweep_to_csv(sweep(GraphKind::Loop, 3, grid));
    c.require(a == b, "two identical sweeps emitted different csv");
    c.require(a.rfind("lambda,count,z1_sym,z1_low,z1_high\n", 0) == 0, "csv header mismatch");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {"critical activities 32/27, 4/27, 9/4, 1 to 1e-9 within 1 s each", criterion_critical_activities},
        {"solution counts across the count laws within 5 s", criterion_solution_counts},
        {"unique solution at lambda_cr is (1/2, 1/2) to 1e-9", criterion_critical_fixed_point},
        {"all counted solutions inside the a-priori bounds by > 1e-12", criterion_bounds},
        {"consistency defect <= 1e-12 at fixed points, >= 1e-5 perturbed, within 30 s",
         criterion_consistency},
        {"branch polynomial and multistart Newton agree to 1e-8", criterion_branch_cross_check},
        {"branch map convex on the default grid and alpha(1) = 496", criterion_convexity},
        {"analytic jacobian matches central differences to 1e-6", criterion_jacobian},
        {"repeated 200-point sweeps emit byte-identical csv", criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Check c;
        try {
            c = criteria[i].run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(t0);
        if (c.ok) {
            std::printf("PASS criterion %zu: %s (%.2f s)\n", i + 1, criteria[i].name, elapsed);
        } else {
            std::printf("FAIL criterion %zu: %s (%.2f s) -- %s\n", i + 1, criteria[i].name, elapsed,
                        c.detail.c_str());
            ++failures;
        }
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
