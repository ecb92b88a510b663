#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hc3/bifurcation.hpp"
#include "hc3/finite_tree.hpp"
#include "hc3/ti_solver.hpp"

namespace hc3 {

// Fixed 12-significant-digit rendering used for all human-readable numbers.
inline std::string format_sig(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Activity given as a decimal ("1.25") or an exact rational ("32/27").
inline double parse_lambda(const std::string& text) {
    double value = 0.0;
    try {
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            const std::string num = text.substr(0, slash);
            const std::string den = text.substr(slash + 1);
            std::size_t pa = 0, pb = 0;
            const double a = std::stod(num, &pa);
            const double b = std::stod(den, &pb);
            if (pa != num.size() || pb != den.size() || b == 0.0)
                throw std::invalid_argument("bad rational");
            value = a / b;
        } else {
            std::size_t pos = 0;
            value = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("bad decimal");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("lambda must be a decimal or a rational p/q");
    }
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("lambda must be positive and finite");
    return value;
}

inline nlohmann::json to_json(const SolutionSet& set) {
    nlohmann::json j;
    j["graph"] = std::string(graph_name(set.graph));
    j["k"] = set.params.k;
    j["lambda"] = set.params.lambda;
    j["count"] = set.count();
    j["count_law"] = set.exact_count_law ? "exact" : "empirical";
    j["solutions"] = nlohmann::json::array();
    for (const Solution& s : set.solutions) {
        nlohmann::json js;
        js["z1"] = s.z.z1;
        js["z2"] = s.z.z2;
        js["branch"] = s.branch == BranchTag::Symmetric ? "symmetric" : "asymmetric";
        js["residual"] = s.residual_norm;
        if (!s.note.empty()) js["note"] = s.note;
        j["solutions"].push_back(js);
    }
    return j;
}

inline nlohmann::json to_json(const CriticalPoint& cp) {
    nlohmann::json j;
    j["graph"] = std::string(graph_name(cp.graph));
    j["k"] = cp.k;
    j["lambda_cr"] = cp.lambda_cr;
    j["x_star"] = cp.x_star;
    j["z_star"] = {{"z1", cp.z_star.z1}, {"z2", cp.z_star.z2}};
    j["law"] = cp.empirical ? "empirical" : "exact";
    return j;
}

inline nlohmann::json measure_to_json(const FiniteMeasure& m, GraphKind g, const ModelParams& p,
                                      int depth) {
    nlohmann::json j;
    j["graph"] = std::string(graph_name(g));
    j["k"] = p.k;
    j["depth"] = depth;
    j["lambda"] = p.lambda;
    j["log_partition"] = m.log_partition;
    j["configurations"] = nlohmann::json::array();
    for (std::size_t i = 0; i < m.support.size(); ++i)
        j["configurations"].push_back({{"sigma", m.support[i]}, {"probability", m.probabilities[i]}});
    return j;
}

// CSV rows: lambda,count,z1_sym,z1_low,z1_high. Absent branches leave their
// field empty; a failed sweep point leaves everything after lambda empty.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lambda,count,z1_sym,z1_low,z1_high\n";
    for (const SweepRow& r : rows) {
        out += format_sig(r.lambda);
        if (!r.ok) {
            out += ",,,,\n";
            continue;
        }
        out += "," + std::to_string(r.count);
        out += ",";
        if (r.z1_sym) out += format_sig(*r.z1_sym);
        out += ",";
        if (r.z1_low) out += format_sig(*r.z1_low);
        out += ",";
        if (r.z1_high) out += format_sig(*r.z1_high);
        out += "\n";
    }
    return out;
}

namespace detail {

inline std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

// Self-contained bifurcation diagram: z1 of every solution against lambda,
// as polylines over a fixed 800 x 600 viewport with linear axes. No
// external renderer.
inline std::string sweep_to_svg(const std::vector<SweepRow>& rows, const std::string& title) {
    constexpr double width = 800.0, height = 600.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool have = false;
    for (const SweepRow& r : rows) {
        if (!r.ok) continue;
        for (const auto& v : {r.z1_sym, r.z1_low, r.z1_high}) {
            if (!v) continue;
            if (!have) {
                xmin = xmax = r.lambda;
                ymin = ymax = *v;
                have = true;
            } else {
                xmin = std::min(xmin, r.lambda);
                xmax = std::max(xmax, r.lambda);
                ymin = std::min(ymin, *v);
                ymax = std::max(ymax, *v);
            }
        }
    }
    if (!have && !rows.empty()) {
        xmin = rows.front().lambda;
        xmax = rows.back().lambda;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double lam) { return ml + (lam - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double z) { return height - mb - (z - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"14\">" << title << "</text>\n";
    svg << "<line x1=\"" << detail::svg_coord(ml) << "\" y1=\"" << detail::svg_coord(height - mb)
        << "\" x2=\"" << detail::svg_coord(width - mr) << "\" y2=\"" << detail::svg_coord(height - mb)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << detail::svg_coord(ml) << "\" y1=\"" << detail::svg_coord(mt)
        << "\" x2=\"" << detail::svg_coord(ml) << "\" y2=\"" << detail::svg_coord(height - mb)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double lam = xmin + (xmax - xmin) * i / 5.0;
        const double z = ymin + (ymax - ymin) * i / 5.0;
        svg << "<line x1=\"" << detail::svg_coord(px(lam)) << "\" y1=\""
            << detail::svg_coord(height - mb) << "\" x2=\"" << detail::svg_coord(px(lam))
            << "\" y2=\"" << detail::svg_coord(height - mb + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::svg_coord(px(lam)) << "\" y=\""
            << detail::svg_coord(height - mb + 20)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
            << format_sig(lam, 6) << "</text>\n";
        svg << "<line x1=\"" << detail::svg_coord(ml - 5) << "\" y1=\"" << detail::svg_coord(py(z))
            << "\" x2=\"" << detail::svg_coord(ml) << "\" y2=\"" << detail::svg_coord(py(z))
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::svg_coord(ml - 8) << "\" y=\""
            << detail::svg_coord(py(z) + 4)
            << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
            << format_sig(z, 6) << "</text>\n";
    }
    svg << "<text x=\"" << detail::svg_coord((ml + width - mr) / 2.0) << "\" y=\""
        << detail::svg_coord(height - 10)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">lambda</text>\n";
    svg << "<text x=\"16\" y=\"" << detail::svg_coord((mt + height - mb) / 2.0)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " << detail::svg_coord((mt + height - mb) / 2.0)
        << ")\">z1</text>\n";

    struct Series {
        const char* color;
        const char* label;
        std::optional<double> SweepRow::* field;
    };
    const Series series[] = {
        {"#1f77b4", "symmetric", &SweepRow::z1_sym},
        {"#d62728", "asymmetric low", &SweepRow::z1_low},
        {"#2ca02c", "asymmetric high", &SweepRow::z1_high},
    };
    int legend = 0;
    for (const Series& s : series) {
        std::string points;
        auto flush = [&]() {
            if (!points.empty())
                svg << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
            points.clear();
        };
        for (const SweepRow& r : rows) {
            const auto& v = r.*(s.field);
            if (!r.ok || !v) {
                flush();
                continue;
            }
            if (!points.empty()) points += " ";
            points += detail::svg_coord(px(r.lambda)) + "," + detail::svg_coord(py(*v));
        }
        flush();
        const double ly = mt + 16.0 * legend++;
        svg << "<line x1=\"" << detail::svg_coord(width - mr - 150) << "\" y1=\""
            << detail::svg_coord(ly) << "\" x2=\"" << detail::svg_coord(width - mr - 130)
            << "\" y2=\"" << detail::svg_coord(ly) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << detail::svg_coord(width - mr - 125) << "\" y=\""
            << detail::svg_coord(ly + 4) << "\" font-family=\"monospace\" font-size=\"11\">"
            << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hc3
