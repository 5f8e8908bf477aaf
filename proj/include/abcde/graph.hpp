#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace abcde {

using NodeId = std::uint32_t;

/// Unordered node pair packed as (min << 32) | max for cheap sort/hash.
using PackedEdge = std::uint64_t;

inline PackedEdge pack_edge(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline NodeId edge_u(PackedEdge e) { return static_cast<NodeId>(e >> 32); }
inline NodeId edge_v(PackedEdge e) { return static_cast<NodeId>(e & 0xffffffffULL); }
inline bool is_loop(PackedEdge e) { return edge_u(e) == edge_v(e); }

/// Edge multiset; self-loops and parallel edges allowed. A loop contributes 2
/// to its endpoint's degree.
struct MultiGraph {
    NodeId node_count = 0;
    std::vector<PackedEdge> edges;

    std::vector<std::uint64_t> degrees() const {
        std::vector<std::uint64_t> deg(node_count, 0);
        for (PackedEdge e : edges) {
            ++deg[edge_u(e)];
            ++deg[edge_v(e)];
        }
        return deg;
    }
};

/// Edge set: no loops, no duplicates.
struct SimpleGraph {
    NodeId node_count = 0;
    std::vector<PackedEdge> edges;

    bool is_simple() const {
        for (PackedEdge e : edges)
            if (is_loop(e)) return false;
        std::vector<PackedEdge> sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    }

    std::vector<std::uint64_t> degrees() const {
        std::vector<std::uint64_t> deg(node_count, 0);
        for (PackedEdge e : edges) {
            ++deg[edge_u(e)];
            ++deg[edge_v(e)];
        }
        return deg;
    }

    void sort_edges() { std::sort(edges.begin(), edges.end()); }
};

enum class GraphKernel { ConfigurationModel, ChungLu };

} // namespace abcde
