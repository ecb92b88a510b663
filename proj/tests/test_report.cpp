#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hc3/report.hpp"

using namespace hc3;

TEST_CASE("format_sig") {
    CHECK(format_sig(4.0 / 27.0) == "0.148148148148");
    CHECK(format_sig(2.0) == "2");
    CHECK(format_sig(0.5) == "0.5");
    CHECK(format_sig(32.0 / 27.0) == "1.18518518519");
    CHECK(format_sig(1.0 / 3.0, 6) == "0.333333");
}

TEST_CASE("parse_lambda") {
    CHECK(parse_lambda("32/27") == 32.0 / 27.0);
    CHECK(parse_lambda("2") == 2.0);
    CHECK(parse_lambda("0.5") == 0.5);
    CHECK(parse_lambda("1e-3") == 1e-3);
    CHECK_THROWS_AS(parse_lambda("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda("-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda("0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lambda(""), std::invalid_argument);
}

TEST_CASE("csv layout and determinism") {
    std::vector<double> grid;
    for (int i = 0; i < 9; ++i) grid.push_back(1.0 + 0.05 * i);
    const std::string a = sweep_to_csv(sweep(GraphKind::Loop, 3, grid));
    const std::string b = sweep_to_csv(sweep(GraphKind::Loop, 3, grid));
    CHECK(a == b);
    CHECK(a.rfind("lambda,count,z1_sym,z1_low,z1_high\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 10);

    // below the transition the asymmetric fields are empty
    CHECK(a.find("1,1,") != std::string::npos);
    CHECK(a.find(",,\n") != std::string::npos);
}

TEST_CASE("solution sets round-trip through json") {
    for (auto [g, k, lam] : {std::tuple{GraphKind::Loop, 3, 2.0},
                             std::tuple{GraphKind::Key, 2, 100.0},
                             std::tuple{GraphKind::Whistle, 4, 10.0},
                             std::tuple{GraphKind::Rod, 3, 1.0}}) {
        const ModelParams p{k, lam};
        const SolutionSet set = solve_all(g, p);
        const auto parsed = nlohmann::json::parse(to_json(set).dump(2));
        CHECK(parsed["graph"] == std::string(graph_name(g)));
        CHECK(parsed["k"] == k);
        CHECK(parsed["count"] == set.count());
        REQUIRE(parsed["solutions"].size() == set.solutions.size());
        const FertileGraph fg = fertile_graph(g);
        for (const auto& js : parsed["solutions"]) {
            const Field z{js["z1"].get<double>(), js["z2"].get<double>()};
            CHECK(residual_norm(fg, {k, lam}, z) <= 1e-10);
            CHECK((js["branch"] == "symmetric" || js["branch"] == "asymmetric"));
            CHECK(js["residual"].get<double>() <= 1e-10);
        }
    }
}

TEST_CASE("critical point json") {
    const auto j = to_json(find_lambda_cr(GraphKind::Rod, 3));
    CHECK(j["graph"] == "rod");
    CHECK(std::abs(j["lambda_cr"].get<double>() - 4.0 / 27.0) <= 1e-9);
    CHECK(j["law"] == "exact");
}

TEST_CASE("measure json dump") {
    const FiniteTree t = FiniteTree::build(1, 1);
    const FertileGraph loop = fertile_graph(GraphKind::Loop);
    const ModelParams p{1, 1.0};
    BoundaryWeights w;
    w.w.assign(2, {1.0, 1.0, 1.0});
    const FiniteMeasure m = measure(loop, p, t, w);
    const auto j = nlohmann::json::parse(measure_to_json(m, GraphKind::Loop, p, 1).dump());
    CHECK(j["configurations"].size() == 17);
    double total = 0.0;
    for (const auto& c : j["configurations"]) {
        CHECK(c["sigma"].get<std::string>().size() == 3);
        total += c["probability"].get<double>();
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("svg output") {
    std::vector<double> grid;
    for (int i = 0; i < 30; ++i) grid.push_back(0.8 + 0.02 * i);
    const auto rows = sweep(GraphKind::Loop, 3, grid);
    const std::string a = sweep_to_svg(rows, "loop k=3");
    const std::string b = sweep_to_svg(rows, "loop k=3");
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("<polyline") != std::string::npos);
    CHECK(a.find("loop k=3") != std::string::npos);
}
