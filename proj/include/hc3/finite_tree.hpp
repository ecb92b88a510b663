#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hc3/errors.hpp"
#include "hc3/fertile_graphs.hpp"
#include "hc3/recursion.hpp"

namespace hc3 {

// Ball of a rooted Cayley tree: the root has k+1 children, every other
// interior vertex has k. Vertices are numbered level by level with children
// appended in parent order, so the depth-(n-1) ball is a prefix of the
// depth-n ball and a configuration restricts by truncation.
struct FiniteTree {
    int k = 1;
    int depth = 0;
    std::vector<int> parent;       // parent[0] == -1
    std::vector<int> level_start;  // size depth + 2; level m is [level_start[m], level_start[m+1])
    std::vector<int> child_start;
    std::vector<int> child_count;

    int vertex_count() const { return static_cast<int>(parent.size()); }
    int level_size(int m) const { return level_start[m + 1] - level_start[m]; }
    int boundary_begin() const { return level_start[depth]; }
    int boundary_size() const { return level_size(depth); }

    static FiniteTree build(int k, int depth) {
        if (k < 1 || depth < 0) throw std::invalid_argument("tree needs k >= 1 and depth >= 0");
        FiniteTree t;
        t.k = k;
        t.depth = depth;
        t.parent.push_back(-1);
        t.level_start = {0, 1};
        for (int m = 0; m < depth; ++m) {
            const int begin = t.level_start[m];
            const int end = t.level_start[m + 1];
            for (int v = begin; v < end; ++v) {
                const int nc = v == 0 ? k + 1 : k;
                for (int c = 0; c < nc; ++c) t.parent.push_back(v);
            }
            t.level_start.push_back(static_cast<int>(t.parent.size()));
        }
        t.child_start.assign(t.parent.size(), 0);
        t.child_count.assign(t.parent.size(), 0);
        for (int v = 1; v < t.vertex_count(); ++v) {
            if (t.child_count[t.parent[v]] == 0) t.child_start[t.parent[v]] = v;
            ++t.child_count[t.parent[v]];
        }
        return t;
    }
};

// Configurations are level-order digit strings over '0'..'2'.
inline bool is_admissible_configuration(const FertileGraph& g, const FiniteTree& t,
                                        const std::string& sigma) {
    if (static_cast<int>(sigma.size()) != t.vertex_count())
        throw std::invalid_argument("configuration length must match the vertex count");
    for (char c : sigma)
        if (c < '0' || c > '2') throw std::invalid_argument("configuration digits must be 0, 1 or 2");
    for (int v = 1; v < t.vertex_count(); ++v) {
        if (!is_admissible_pair(g, sigma[t.parent[v]] - '0', sigma[v] - '0')) return false;
    }
    return true;
}

// Number of admissible configurations by the per-subtree transfer
// recursion: processing vertices leaf-to-root,
//   cnt[v][s] = prod_{c child of v} sum_{s'} a[s][s'] cnt[c][s'].
inline std::uint64_t count_admissible(const FertileGraph& g, const FiniteTree& t) {
    const int n = t.vertex_count();
    std::vector<std::array<std::uint64_t, 3>> cnt(static_cast<std::size_t>(n), {1, 1, 1});
    for (int v = n - 1; v >= 0; --v) {
        for (int s = 0; s < kStateCount; ++s) {
            std::uint64_t prod = 1;
            for (int c = t.child_start[v]; c < t.child_start[v] + t.child_count[v]; ++c) {
                std::uint64_t sum = 0;
                for (int s2 = 0; s2 < kStateCount; ++s2)
                    if (g.a[s][s2]) sum += cnt[c][s2];
                prod *= sum;
            }
            cnt[v][s] = prod;
        }
    }
    return cnt[0][0] + cnt[0][1] + cnt[0][2];
}

// Exactly 3^|V| assignments exist; full listing is capped at 2^31 of them.
inline constexpr int kMaxEnumVertices = 19;

// Every admissible assignment, in lexicographic (level-order digit) order.
// Pruned along parent edges, so the work tracks the admissible count.
inline std::vector<std::string> enumerate_admissible(const FertileGraph& g, const FiniteTree& t) {
    const int n = t.vertex_count();
    if (n > kMaxEnumVertices)
        throw TooLarge("3^|V| exceeds the full-enumeration limit; use count_admissible");
    std::vector<std::string> out;
    std::string cfg(static_cast<std::size_t>(n), '0');
    auto assign = [&](auto&& self, int v) -> void {
        if (v == n) {
            out.push_back(cfg);
            return;
        }
        for (int s = 0; s < kStateCount; ++s) {
            if (v > 0 && !is_admissible_pair(g, cfg[t.parent[v]] - '0', s)) continue;
            cfg[static_cast<std::size_t>(v)] = static_cast<char>('0' + s);
            self(self, v + 1);
        }
    };
    assign(assign, 0);
    return out;
}

// Per-state weights for each boundary vertex.
struct BoundaryWeights {
    std::vector<std::array<double, 3>> w;  // indexed by position within the boundary level

    // The translation-invariant choice (1, z1/lambda, z2/lambda): dividing
    // by the activity undoes the normalization built into the fixed-point
    // map, which is what makes the finite measures of a fixed point agree
    // across depths.
    static BoundaryWeights translation_invariant(const FiniteTree& t, const ModelParams& p,
                                                 const Field& z) {
        check_params(p);
        BoundaryWeights bw;
        bw.w.assign(static_cast<std::size_t>(t.boundary_size()),
                    {1.0, z.z1 / p.lambda, z.z2 / p.lambda});
        return bw;
    }
};

struct FiniteMeasure {
    std::vector<std::string> support;     // admissible configurations, lexicographic
    std::vector<double> probabilities;    // same order, summing to 1
    double log_partition = 0.0;
    double partition_value = 0.0;         // may overflow to inf at large activity
};

namespace detail {

// Shared measure kernel. The public path demands positive weights and works
// in log space with a max shift, since lambda^{#occupied} spans many orders
// of magnitude even at depth 2. The signed path exists for probing boundary
// laws outside the positive cone, where the weight products are evaluated
// directly.
inline FiniteMeasure measure_impl(const FertileGraph& g, const ModelParams& p,
                                  const FiniteTree& t, const std::vector<std::array<double, 3>>& w,
                                  bool require_positive) {
    check_params(p);
    if (static_cast<int>(w.size()) != t.boundary_size())
        throw std::invalid_argument("one weight triple per boundary vertex required");
    for (const auto& triple : w)
        for (double v : triple) {
            if (!std::isfinite(v)) throw NonFiniteInput("boundary weights must be finite");
            if (require_positive && !(v > 0.0))
                throw NonFiniteInput("boundary weights must be positive");
        }

    FiniteMeasure m;
    m.support = enumerate_admissible(g, t);
    if (m.support.empty()) throw EmptySupport("no admissible configuration");

    const int n = t.vertex_count();
    const int bb = t.boundary_begin();
    const double loglam = std::log(p.lambda);

    if (require_positive) {
        std::vector<double> logw;
        logw.reserve(m.support.size());
        double shift = -1e308;
        for (const std::string& cfg : m.support) {
            int occupied = 0;
            double lw = 0.0;
            for (int v = 0; v < n; ++v) {
                if (cfg[static_cast<std::size_t>(v)] != '0') ++occupied;
                if (v >= bb)
                    lw += std::log(w[static_cast<std::size_t>(v - bb)]
                                    [static_cast<std::size_t>(cfg[static_cast<std::size_t>(v)] - '0')]);
            }
            lw += occupied * loglam;
            logw.push_back(lw);
            if (lw > shift) shift = lw;
        }
        long double total = 0.0L;
        std::vector<double> e(logw.size());
        for (std::size_t i = 0; i < logw.size(); ++i) {
            e[i] = std::exp(logw[i] - shift);
            total += e[i];
        }
        m.probabilities.resize(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            m.probabilities[i] = static_cast<double>(e[i] / total);
        m.log_partition = shift + std::log(static_cast<double>(total));
        m.partition_value = std::exp(m.log_partition);
    } else {
        long double total = 0.0L;
        std::vector<double> raw(m.support.size());
        for (std::size_t i = 0; i < m.support.size(); ++i) {
            const std::string& cfg = m.support[i];
            int occupied = 0;
            double prod = 1.0;
            for (int v = 0; v < n; ++v) {
                if (cfg[static_cast<std::size_t>(v)] != '0') ++occupied;
                if (v >= bb)
                    prod *= w[static_cast<std::size_t>(v - bb)]
                             [static_cast<std::size_t>(cfg[static_cast<std::size_t>(v)] - '0')];
            }
            raw[i] = prod * std::pow(p.lambda, occupied);
            total += raw[i];
        }
        if (!(std::abs(static_cast<double>(total)) > 0.0))
            throw Error("signed weight system has a vanishing normalizer");
        m.probabilities.resize(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i)
            m.probabilities[i] = static_cast<double>(raw[i] / total);
        m.partition_value = static_cast<double>(total);
        m.log_partition = std::log(std::abs(m.partition_value));
    }
    return m;
}

}  // namespace detail

// The finite-volume measure: the probability of an admissible configuration
// is proportional to lambda^{#occupied} times the product of its boundary
// weights, with #occupied counted over the whole ball including the
// boundary.
inline FiniteMeasure measure(const FertileGraph& g, const ModelParams& p, const FiniteTree& t,
                             const BoundaryWeights& w) {
    return detail::measure_impl(g, p, t, w.w, true);
}

// Worst-case mismatch between the depth-n measure marginalized to the
// depth-(n-1) ball and the depth-(n-1) measure itself, with both built from
// the same translation-invariant boundary law z. Vanishes (to rounding)
// exactly when z is a fixed point of the boundary-law map; n >= 2, since
// the root's k+1 children obey a different exponent than the recursion's k.
//
// z may leave the positive cone (probing perturbed laws); the weight
// products are then evaluated with signs.
inline double consistency_defect(GraphKind gk, const ModelParams& p, int n, const Field& z) {
    if (n < 1) throw std::invalid_argument("consistency needs depth n >= 1");
    check_params(p);
    if (!std::isfinite(z.z1) || !std::isfinite(z.z2))
        throw NonFiniteInput("field entries must be finite");
    const bool positive = z.z1 > 0.0 && z.z2 > 0.0;

    const FertileGraph g = fertile_graph(gk);
    const FiniteTree tn = FiniteTree::build(p.k, n);
    const FiniteTree tm = FiniteTree::build(p.k, n - 1);
    const std::vector<std::array<double, 3>> triple_n(
        static_cast<std::size_t>(tn.boundary_size()), {1.0, z.z1 / p.lambda, z.z2 / p.lambda});
    const std::vector<std::array<double, 3>> triple_m(
        static_cast<std::size_t>(tm.boundary_size()), {1.0, z.z1 / p.lambda, z.z2 / p.lambda});
    const FiniteMeasure mn = detail::measure_impl(g, p, tn, triple_n, positive);
    const FiniteMeasure mm = detail::measure_impl(g, p, tm, triple_m, positive);

    const int prefix = tm.vertex_count();
    auto key_of = [&](const std::string& cfg) {
        long long key = 0;
        for (int v = 0; v < prefix; ++v) key = key * 3 + (cfg[static_cast<std::size_t>(v)] - '0');
        return key;
    };

    std::unordered_map<long long, long double> marginal;
    for (std::size_t i = 0; i < mn.support.size(); ++i)
        marginal[key_of(mn.support[i])] += mn.probabilities[i];

    double defect = 0.0;
    for (std::size_t i = 0; i < mm.support.size(); ++i) {
        const auto it = marginal.find(key_of(mm.support[i]));
        const long double summed = it == marginal.end() ? 0.0L : it->second;
        const double d = std::abs(static_cast<double>(summed) - mm.probabilities[i]);
        if (d > defect) defect = d;
    }
    return defect;
}

}  // namespace hc3
