#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "abcde/errors.hpp"
#include "abcde/graph.hpp"
#include "abcde/rng.hpp"

namespace abcde {

/// Configuration model: W points in per-node buckets, one uniform pairing.
/// The permutation is drawn by Fisher-Yates and point j is matched with point
/// W/2 + j. Output degree of node i is exactly w[i], loops counting 2.
inline MultiGraph configuration_model(std::span<const std::uint64_t> w, RandomStream& rng) {
    const std::uint64_t total = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
    if (total % 2 != 0)
        throw ConfigError("generator", "configuration model needs an even degree sum, got " + std::to_string(total));

    std::vector<NodeId> points;
    points.reserve(total);
    for (std::size_t i = 0; i < w.size(); ++i)
        points.insert(points.end(), w[i], static_cast<NodeId>(i));
    fisher_yates(points, rng);

    MultiGraph g;
    g.node_count = static_cast<NodeId>(w.size());
    const std::size_t half = points.size() / 2;
    g.edges.reserve(half);
    for (std::size_t j = 0; j < half; ++j)
        g.edges.push_back(pack_edge(points[j], points[half + j]));
    return g;
}

/// Chung-Lu sampling by ball dropping: draw W/2 candidate edges with both
/// endpoints picked independently proportionally to w, drop loops, dedupe.
/// Expected degrees match w up to the loop/duplicate mass.
inline SimpleGraph chung_lu(std::span<const std::uint64_t> w, RandomStream& rng) {
    SimpleGraph g;
    g.node_count = static_cast<NodeId>(w.size());
    const std::uint64_t total = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
    if (total == 0) return g;

    const std::uint64_t max_w = *std::max_element(w.begin(), w.end());
    if (max_w * max_w > 2 * total)
        std::cerr << "warning: chung_lu: max weight " << max_w << " violates max(w)^2 <= 2W, "
                  << "pair probabilities are effectively clamped\n";

    std::vector<double> cumulative(w.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += static_cast<double>(w[i]);
        cumulative[i] = sum;
    }

    auto pick = [&](RandomStream& r) -> NodeId {
        const double u = uniform01(r) * sum;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<NodeId>(std::min<std::size_t>(it - cumulative.begin(), w.size() - 1));
    };

    const std::uint64_t candidates = total / 2;
    g.edges.reserve(candidates);
    for (std::uint64_t c = 0; c < candidates; ++c) {
        const NodeId a = pick(rng);
        const NodeId b = pick(rng);
        if (a == b) continue;
        g.edges.push_back(pack_edge(a, b));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

namespace detail {

/// Re-pair a set of dissolved edges uniformly: shuffle the endpoint list and
/// match the first half against the second half.
inline void repair_edges(std::vector<PackedEdge>& edges, std::span<const std::size_t> slots,
                         RandomStream& rng) {
    std::vector<NodeId> endpoints;
    endpoints.reserve(slots.size() * 2);
    for (std::size_t s : slots) {
        endpoints.push_back(edge_u(edges[s]));
        endpoints.push_back(edge_v(edges[s]));
    }
    fisher_yates(endpoints, rng);
    const std::size_t half = endpoints.size() / 2;
    for (std::size_t j = 0; j < slots.size(); ++j)
        edges[slots[j]] = pack_edge(endpoints[j], endpoints[half + j]);
}

/// Targeted degree-preserving 2-swaps: each defective edge (u,v) is swapped
/// with a random clean edge (x,y) into (u,x)(v,y) or (u,y)(v,x), accepted only
/// when both replacements are absent from the graph. Unlike the bulk re-pair,
/// this never increases the defect count, so it makes progress on dense
/// graphs where random re-pairing keeps colliding.
inline void swap_pass(std::vector<PackedEdge>& edges, std::span<const std::size_t> defects,
                      std::span<const std::size_t> pool, RandomStream& rng) {
    if (pool.empty()) return;
    std::unordered_map<PackedEdge, std::uint32_t> count;
    for (PackedEdge e : edges) ++count[e];
    auto present = [&](NodeId a, NodeId b) { return count.count(pack_edge(a, b)) != 0; };

    for (std::size_t i : defects) {
        const PackedEdge e = edges[i];
        if (!is_loop(e) && count[e] == 1) continue;  // fixed while handling another slot
        const NodeId u = edge_u(e), v = edge_v(e);
        for (int attempt = 0; attempt < 64; ++attempt) {
            const std::size_t j = pool[bounded(rng, pool.size())];
            const PackedEdge f = edges[j];
            const NodeId x = edge_u(f), y = edge_v(f);
            const bool flip = bernoulli(rng, 0.5);
            const NodeId c = flip ? y : x;
            const NodeId d = flip ? x : y;
            if (u == c || v == d) continue;
            const PackedEdge e1 = pack_edge(u, c), e2 = pack_edge(v, d);
            if (e1 == e2 || present(u, c) || present(v, d)) continue;
            if (--count[e] == 0) count.erase(e);
            if (--count[f] == 0) count.erase(f);
            edges[i] = e1;
            edges[j] = e2;
            ++count[e1];
            ++count[e2];
            break;
        }
    }
}

} // namespace detail

/// Degree-preserving rewiring to a simple graph. Each round dissolves the
/// defective edges (loops, all but one copy of each parallel class) together
/// with an equal number of edges drawn uniformly from the clean pool, then
/// re-pairs their endpoints uniformly. The first copy of a parallel class is
/// the survivor, keeping rounds deterministic for a fixed stream. When a round
/// fails to shrink the defect set (dense graphs, where random re-pairing
/// collides too often), later rounds switch to targeted 2-swaps for good; a
/// bulk round is then used only as a reshuffle when a swap pass itself gets
/// stuck, since on dense graphs re-pairing undoes the swaps' progress.
inline SimpleGraph rewire_to_simple(MultiGraph g, RandomStream& rng, std::size_t max_rounds = 100) {
    std::vector<PackedEdge>& edges = g.edges;
    std::size_t previous_defects = std::numeric_limits<std::size_t>::max();
    bool swap_mode = false;
    bool last_was_swap = false;
    for (std::size_t round = 0;; ++round) {
        std::sort(edges.begin(), edges.end());
        std::vector<std::size_t> defects;
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (is_loop(edges[i]) || (i > 0 && edges[i] == edges[i - 1]))
                defects.push_back(i);
            else
                pool.push_back(i);
        }
        if (defects.empty()) break;
        const std::size_t defect_count = defects.size();
        if (round >= max_rounds)
            throw ConvergenceError("generator",
                                   "rewiring did not converge after " + std::to_string(max_rounds) +
                                       " rounds, " + std::to_string(defect_count) + " defects remain",
                                   defect_count);

        const bool stalled = defect_count >= previous_defects;
        if (stalled) swap_mode = true;
        const bool use_swaps = swap_mode && !(stalled && last_was_swap);
        last_was_swap = use_swaps;
        if (use_swaps) {
            detail::swap_pass(edges, defects, pool, rng);
        } else {
            // uniform sample without replacement of min(|D|, |pool|) clean edges
            const std::size_t extra = std::min(defects.size(), pool.size());
            for (std::size_t j = 0; j < extra; ++j) {
                const std::size_t k = j + static_cast<std::size_t>(bounded(rng, pool.size() - j));
                std::swap(pool[j], pool[k]);
                defects.push_back(pool[j]);
            }
            detail::repair_edges(edges, defects, rng);
        }
        previous_defects = defect_count;
    }
    SimpleGraph out;
    out.node_count = g.node_count;
    out.edges = std::move(edges);
    return out;
}

} // namespace abcde
