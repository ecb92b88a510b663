#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace hc3 {

// Vertex states of the three-state hard-core models: 0 is vacant,
// 1 and 2 are the two occupied species.
using State = int;

inline constexpr int kStateCount = 3;

// The four fertile constraint graphs on the state set {0, 1, 2}.
enum class GraphKind { Loop, Rod, Key, Whistle };

inline constexpr std::array<GraphKind, 4> kAllGraphKinds = {
    GraphKind::Loop, GraphKind::Rod, GraphKind::Key, GraphKind::Whistle};

using Adjacency = std::array<std::array<int, 3>, 3>;

// Edge sets:
//   loop    {00, 01, 02, 11, 22}
//   rod     {01, 02, 11, 22}
//   key     {00, 01, 02, 11}
//   whistle {00, 01, 12}
inline constexpr Adjacency adjacency_matrix(GraphKind kind) {
    switch (kind) {
        case GraphKind::Loop:    return {{{1, 1, 1}, {1, 1, 0}, {1, 0, 1}}};
        case GraphKind::Rod:     return {{{0, 1, 1}, {1, 1, 0}, {1, 0, 1}}};
        case GraphKind::Key:     return {{{1, 1, 1}, {1, 1, 0}, {1, 0, 0}}};
        case GraphKind::Whistle: return {{{1, 1, 0}, {1, 0, 1}, {0, 1, 0}}};
    }
    return {};
}

// A constraint graph together with its adjacency matrix. Immutable after
// construction; safe to share across threads.
struct FertileGraph {
    GraphKind kind;
    Adjacency a;
};

inline constexpr FertileGraph fertile_graph(GraphKind kind) {
    return FertileGraph{kind, adjacency_matrix(kind)};
}

// True iff {s, t} is an edge of g, i.e. states s and t may sit on the two
// ends of a tree edge.
inline constexpr bool is_admissible_pair(const FertileGraph& g, State s, State t) {
    return g.a[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] != 0;
}

inline constexpr std::string_view graph_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::Loop:    return "loop";
        case GraphKind::Rod:     return "rod";
        case GraphKind::Key:     return "key";
        case GraphKind::Whistle: return "whistle";
    }
    return "";
}

inline std::optional<GraphKind> graph_from_name(std::string_view name) {
    for (GraphKind k : kAllGraphKinds) {
        if (graph_name(k) == name) return k;
    }
    return std::nullopt;
}

}  // namespace hc3
