#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hc3/report.hpp"

namespace hc3::cli {

// Exit statuses: 0 success, 2 usage/validation error, 3 solver or oracle
// failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

namespace detail {

inline int emit(const std::string& text, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
    if (out_path.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        err << "error: cannot open --out path '" << out_path << "'\n";
        return kExitFailure;
    }
    file << text;
    return kExitOk;
}

inline bool tree_enumerable(int k, int depth) {
    long long vertices = 1;
    long long level = 0;
    for (int m = 1; m <= depth; ++m) {
        level = m == 1 ? k + 1 : level * k;
        vertices += level;
        if (vertices > kMaxEnumVertices) return false;
    }
    return true;
}

}  // namespace detail

// Parses and dispatches one invocation. Output is deterministic: identical
// arguments produce byte-identical artifacts.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"translation-invariant Gibbs measures of three-state hard-core models on Cayley trees"};
    app.require_subcommand(1);

    std::string graph_text, lambda_text, lambda_min_text, lambda_max_text;
    std::string format = "text", out_path;
    int k = 3;
    int steps = 0;
    int depth = 2;

    auto add_common = [&](CLI::App* cmd, bool need_graph) {
        auto* g = cmd->add_option("--graph", graph_text, "constraint graph: loop, rod, key or whistle");
        if (need_graph) g->required();
        cmd->add_option("--k", k, "tree order (children per vertex)");
        cmd->add_option("--format", format, "output format");
        cmd->add_option("--out", out_path, "write the artifact to this path instead of stdout");
    };

    auto* solve = app.add_subcommand("solve", "find all translation-invariant fixed points");
    add_common(solve, true);
    solve->add_option("--lambda", lambda_text, "activity, decimal or rational p/q")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate solution counts over an activity range");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--lambda-min", lambda_min_text, "lower end of the activity range")->required();
    sweep_cmd->add_option("--lambda-max", lambda_max_text, "upper end of the activity range")->required();
    sweep_cmd->add_option("--steps", steps, "number of grid points (>= 2)")->required();

    auto* critical = app.add_subcommand("critical", "locate the critical activity");
    add_common(critical, true);

    auto* convexity = app.add_subcommand("convexity", "verify convexity of the loop k=3 branch map");
    convexity->add_option("--format", format, "output format");
    convexity->add_option("--out", out_path, "write the artifact to this path instead of stdout");

    auto* verify = app.add_subcommand("verify-consistency",
                                      "check the finite-volume consistency identity at the solved fixed point");
    add_common(verify, true);
    verify->add_option("--lambda", lambda_text, "activity, decimal or rational p/q")->required();
    verify->add_option("--depth", depth, "ball depth for the exhaustive check");

    std::vector<const char*> argv;
    argv.push_back("hc3");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    GraphKind graph = GraphKind::Loop;
    if (!graph_text.empty()) {
        const auto parsed = graph_from_name(graph_text);
        if (!parsed) {
            err << "usage error: --graph must be one of loop, rod, key, whistle\n";
            return kExitUsage;
        }
        graph = *parsed;
    }
    if (k < 1) {
        err << "usage error: --k must be >= 1\n";
        return kExitUsage;
    }

    auto parse_activity = [&](const std::string& text, const char* flag, double& value) {
        try {
            value = parse_lambda(text);
        } catch (const std::invalid_argument& e) {
            err << "usage error: " << flag << ": " << e.what() << "\n";
            return false;
        }
        return true;
    };

    try {
        if (solve->parsed()) {
            if (format != "text" && format != "json") {
                err << "usage error: --format for solve must be text or json\n";
                return kExitUsage;
            }
            double lambda = 0.0;
            if (!parse_activity(lambda_text, "--lambda", lambda)) return kExitUsage;
            const SolutionSet set = solve_all(graph, ModelParams{k, lambda});
            std::string text;
            if (format == "json") {
                text = to_json(set).dump(2) + "\n";
            } else {
                text = "graph = " + std::string(graph_name(graph)) + "\n";
                text += "k = " + std::to_string(k) + "\n";
                text += "lambda = " + format_sig(lambda) + "\n";
                text += "count = " + std::to_string(set.count()) +
                        (set.exact_count_law ? " (exact)" : " (empirical)") + "\n";
                for (const Solution& s : set.solutions) {
                    text += "z1 = " + format_sig(s.z.z1) + "  z2 = " + format_sig(s.z.z2) +
                            "  branch = " +
                            (s.branch == BranchTag::Symmetric ? "symmetric" : "asymmetric") +
                            "  residual = " + format_sig(s.residual_norm);
                    if (!s.note.empty()) text += "  note = " + s.note;
                    text += "\n";
                }
            }
            return detail::emit(text, out_path, out, err);
        }

        if (sweep_cmd->parsed()) {
            if (format != "text" && format != "csv" && format != "svg") {
                err << "usage error: --format for sweep must be text, csv or svg\n";
                return kExitUsage;
            }
            double lo = 0.0, hi = 0.0;
            if (!parse_activity(lambda_min_text, "--lambda-min", lo)) return kExitUsage;
            if (!parse_activity(lambda_max_text, "--lambda-max", hi)) return kExitUsage;
            if (!(lo < hi) || steps < 2) {
                err << "usage error: need --lambda-min < --lambda-max and --steps >= 2\n";
                return kExitUsage;
            }
            std::vector<double> grid;
            grid.reserve(static_cast<std::size_t>(steps));
            for (int i = 0; i < steps; ++i)
                grid.push_back(lo + (hi - lo) * i / (steps - 1));
            const auto rows = sweep(graph, k, grid);
            std::string text;
            if (format == "svg") {
                text = sweep_to_svg(rows, std::string(graph_name(graph)) + " k=" + std::to_string(k));
            } else {
                text = sweep_to_csv(rows);
            }
            return detail::emit(text, out_path, out, err);
        }

        if (critical->parsed()) {
            if (format != "text" && format != "json") {
                err << "usage error: --format for critical must be text or json\n";
                return kExitUsage;
            }
            const CriticalPoint cp = find_lambda_cr(graph, k);
            std::string text;
            if (format == "json") {
                text = to_json(cp).dump(2) + "\n";
            } else {
                text = "lambda_cr = " + format_sig(cp.lambda_cr) + "\n";
                text += "x_star = " + format_sig(cp.x_star) + "\n";
                text += "z_star = (" + format_sig(cp.z_star.z1) + ", " + format_sig(cp.z_star.z2) + ")\n";
                if (cp.empirical)
                    text += "warning: empirical estimate; no exact transition law for this k\n";
            }
            return detail::emit(text, out_path, out, err);
        }

        if (convexity->parsed()) {
            if (format != "text" && format != "json") {
                err << "usage error: --format for convexity must be text or json\n";
                return kExitUsage;
            }
            const ConvexityReport rep = verify_convexity_loop_k3();
            const bool pass = rep.passed() && rep.alpha_at_one == 496;
            std::string text;
            if (format == "json") {
                nlohmann::json j;
                j["violations"] = rep.violations;
                j["alpha_at_one"] = rep.alpha_at_one;
                j["pass"] = pass;
                text = j.dump(2) + "\n";
            } else {
                text = "violations = " + std::to_string(rep.violations.size()) +
                       "; alpha(1) = " + std::to_string(rep.alpha_at_one) + "; " +
                       (pass ? "PASS" : "FAIL") + "\n";
            }
            const int rc = detail::emit(text, out_path, out, err);
            return rc != kExitOk ? rc : (pass ? kExitOk : kExitFailure);
        }

        if (verify->parsed()) {
            if (format != "text" && format != "json") {
                err << "usage error: --format for verify-consistency must be text or json\n";
                return kExitUsage;
            }
            double lambda = 0.0;
            if (!parse_activity(lambda_text, "--lambda", lambda)) return kExitUsage;
            if (depth < 1 || !detail::tree_enumerable(k, depth)) {
                err << "usage error: --depth out of exhaustive range for this --k\n";
                return kExitUsage;
            }
            const ModelParams p{k, lambda};
            const SolutionSet set = solve_all(graph, p);
            if (set.solutions.empty()) throw Error("no fixed point found");
            const Field z = set.solutions.front().z;  // symmetric first when present
            const double defect = consistency_defect(graph, p, depth, z);
            const bool pass = defect <= 1e-12;
            std::string text;
            if (format == "json") {
                nlohmann::json j;
                j["graph"] = std::string(graph_name(graph));
                j["k"] = k;
                j["depth"] = depth;
                j["lambda"] = lambda;
                j["fixed_point"] = {{"z1", z.z1}, {"z2", z.z2}};
                j["defect"] = defect;
                j["pass"] = pass;
                text = j.dump(2) + "\n";
            } else {
                text = "defect = " + format_sig(defect) + "; " + (pass ? "PASS" : "FAIL") + "\n";
            }
            const int rc = detail::emit(text, out_path, out, err);
            return rc != kExitOk ? rc : (pass ? kExitOk : kExitFailure);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "usage error: no command\n";
    return kExitUsage;
}

}  // namespace hc3::cli
