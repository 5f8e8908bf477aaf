#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "abcde/errors.hpp"
#include "abcde/graph.hpp"
#include "abcde/rng.hpp"

namespace abcde {

/// CSR adjacency with sorted neighbor lists.
struct Adjacency {
    NodeId node_count = 0;
    std::vector<std::size_t> offsets;
    std::vector<NodeId> neighbors;

    static Adjacency build(const SimpleGraph& g) {
        Adjacency adj;
        adj.node_count = g.node_count;
        adj.offsets.assign(g.node_count + 1, 0);
        for (PackedEdge e : g.edges) {
            ++adj.offsets[edge_u(e) + 1];
            ++adj.offsets[edge_v(e) + 1];
        }
        for (std::size_t i = 1; i <= g.node_count; ++i) adj.offsets[i] += adj.offsets[i - 1];
        adj.neighbors.resize(adj.offsets.back());
        std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
        for (PackedEdge e : g.edges) {
            adj.neighbors[cursor[edge_u(e)]++] = edge_v(e);
            adj.neighbors[cursor[edge_v(e)]++] = edge_u(e);
        }
        for (NodeId v = 0; v < g.node_count; ++v)
            std::sort(adj.neighbors.begin() + adj.offsets[v], adj.neighbors.begin() + adj.offsets[v + 1]);
        return adj;
    }

    std::span<const NodeId> of(NodeId v) const {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
    }

    std::uint64_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
};

namespace detail {

/// Triangles each node participates in, by per-edge sorted intersection.
inline std::vector<std::uint64_t> triangles_per_node(const SimpleGraph& g, const Adjacency& adj) {
    std::vector<std::uint64_t> tri(g.node_count, 0);
    for (PackedEdge e : g.edges) {
        const NodeId u = edge_u(e), v = edge_v(e);
        auto nu = adj.of(u);
        auto nv = adj.of(v);
        auto iu = nu.begin();
        auto iv = nv.begin();
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv) {
                ++iu;
            } else if (*iv < *iu) {
                ++iv;
            } else {
                if (*iu > v) {  // count each triangle once, at its smallest edge
                    ++tri[u];
                    ++tri[v];
                    ++tri[*iu];
                }
                ++iu;
                ++iv;
            }
        }
    }
    return tri;
}

inline std::vector<std::int64_t> bfs_distances(const Adjacency& adj, NodeId source) {
    std::vector<std::int64_t> dist(adj.node_count, -1);
    std::vector<NodeId> frontier{source};
    dist[source] = 0;
    std::vector<NodeId> next;
    while (!frontier.empty()) {
        next.clear();
        for (NodeId v : frontier)
            for (NodeId w : adj.of(v))
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    return dist;
}

/// Connected components; returns labels and the label of the largest one.
inline std::pair<std::vector<std::uint32_t>, std::uint32_t> components(const Adjacency& adj) {
    std::vector<std::uint32_t> label(adj.node_count, UINT32_MAX);
    std::uint32_t count = 0;
    std::uint32_t best = 0;
    std::size_t best_size = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < adj.node_count; ++s) {
        if (label[s] != UINT32_MAX) continue;
        std::size_t size = 0;
        stack.push_back(s);
        label[s] = count;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : adj.of(v))
                if (label[w] == UINT32_MAX) {
                    label[w] = count;
                    stack.push_back(w);
                }
        }
        if (size > best_size) {
            best_size = size;
            best = count;
        }
        ++count;
    }
    return {std::move(label), best};
}

} // namespace detail

/// 3T / (number of adjacent edge pairs); 0 when there are no wedges.
inline double global_clustering(const SimpleGraph& g) {
    const Adjacency adj = Adjacency::build(g);
    const auto tri = detail::triangles_per_node(g, adj);
    std::uint64_t triangles3 = 0;  // sum of per-node counts = 3T
    std::uint64_t wedges = 0;
    for (NodeId v = 0; v < g.node_count; ++v) {
        triangles3 += tri[v];
        const std::uint64_t d = adj.degree(v);
        wedges += d * (d - 1) / 2;
    }
    if (wedges == 0) return 0.0;
    return static_cast<double>(triangles3) / static_cast<double>(wedges);
}

/// Mean local clustering; nodes of degree < 2 contribute 0.
inline double avg_local_clustering(const SimpleGraph& g) {
    if (g.node_count == 0) return 0.0;
    const Adjacency adj = Adjacency::build(g);
    const auto tri = detail::triangles_per_node(g, adj);
    double sum = 0.0;
    for (NodeId v = 0; v < g.node_count; ++v) {
        const std::uint64_t d = adj.degree(v);
        if (d < 2) continue;
        sum += static_cast<double>(tri[v]) / (static_cast<double>(d) * (d - 1) / 2.0);
    }
    return sum / g.node_count;
}

struct Centralities {
    std::vector<double> degree;
    std::vector<double> betweenness;             // raw pair counts (undirected, /2)
    std::vector<double> betweenness_normalized;  // raw / ((n-1)(n-2)/2)
    std::vector<double> closeness;
    std::vector<double> pagerank;
};

/// Degree, exact Brandes betweenness, per-component closeness, PageRank
/// (power iteration, damping 0.85, L1 tolerance 1e-10, uniform teleport).
inline Centralities centralities(const SimpleGraph& g) {
    if (g.node_count == 0) throw ConfigError("metrics", "centralities of an empty graph");
    const Adjacency adj = Adjacency::build(g);
    const NodeId n = g.node_count;
    Centralities c;

    c.degree.resize(n);
    for (NodeId v = 0; v < n; ++v)
        c.degree[v] = n > 1 ? static_cast<double>(adj.degree(v)) / (n - 1) : 0.0;

    // Brandes accumulation; BFS doubles as the closeness distance pass.
    c.betweenness.assign(n, 0.0);
    c.closeness.assign(n, 0.0);
    std::vector<std::uint64_t> dist_sum(n, 0);
    std::vector<std::uint64_t> reach(n, 0);  // size of own component, counted per source

    std::vector<NodeId> order;
    order.reserve(n);
    std::vector<std::int64_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    for (NodeId s = 0; s < n; ++s) {
        order.clear();
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        dist[s] = 0;
        sigma[s] = 1.0;
        std::queue<NodeId> q;
        q.push(s);
        while (!q.empty()) {
            const NodeId v = q.front();
            q.pop();
            order.push_back(v);
            for (NodeId w : adj.of(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : adj.of(w))
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) c.betweenness[w] += delta[w];
            dist_sum[s] += static_cast<std::uint64_t>(dist[w]);
        }
        reach[s] = order.size();
    }
    for (NodeId v = 0; v < n; ++v) c.betweenness[v] /= 2.0;  // undirected double count

    c.betweenness_normalized.resize(n);
    const double norm = n > 2 ? static_cast<double>(n - 1) * (n - 2) / 2.0 : 1.0;
    for (NodeId v = 0; v < n; ++v) c.betweenness_normalized[v] = c.betweenness[v] / norm;

    for (NodeId v = 0; v < n; ++v)
        c.closeness[v] = dist_sum[v] > 0 ? static_cast<double>(reach[v] - 1) / dist_sum[v] : 0.0;

    // PageRank with dangling mass spread uniformly.
    const double damping = 0.85;
    c.pagerank.assign(n, 1.0 / n);
    std::vector<double> fresh(n);
    for (int iter = 0; iter < 100000; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (adj.degree(v) == 0) dangling += c.pagerank[v];
        const double base = (1.0 - damping) / n + damping * dangling / n;
        std::fill(fresh.begin(), fresh.end(), base);
        for (NodeId v = 0; v < n; ++v) {
            const std::uint64_t d = adj.degree(v);
            if (d == 0) continue;
            const double share = damping * c.pagerank[v] / d;
            for (NodeId w : adj.of(v)) fresh[w] += share;
        }
        double l1 = 0.0;
        for (NodeId v = 0; v < n; ++v) l1 += std::abs(fresh[v] - c.pagerank[v]);
        c.pagerank.swap(fresh);
        if (l1 < 1e-10) break;
    }
    return c;
}

struct DegreeCorrelation {
    std::map<std::uint64_t, double> knn;  // degree -> mean neighbor degree
    double coefficient = std::numeric_limits<double>::quiet_NaN();
    double exponent = std::numeric_limits<double>::quiet_NaN();
};

/// knn(d), the Pearson coefficient over oriented edge endpoints, and the
/// log-log least-squares slope of knn. Degree-regular graphs leave the
/// coefficient and exponent as NaN (undefined, not 0).
inline DegreeCorrelation degree_correlation(const SimpleGraph& g) {
    if (g.edges.empty()) throw ConfigError("metrics", "degree correlation needs at least one edge");
    const Adjacency adj = Adjacency::build(g);

    DegreeCorrelation out;
    std::map<std::uint64_t, std::pair<double, std::uint64_t>> acc;  // degree -> (sum of mean-nbr-deg, count)
    for (NodeId v = 0; v < g.node_count; ++v) {
        const std::uint64_t d = adj.degree(v);
        if (d == 0) continue;
        double s = 0.0;
        for (NodeId w : adj.of(v)) s += static_cast<double>(adj.degree(w));
        auto& slot = acc[d];
        slot.first += s / d;
        ++slot.second;
    }
    for (const auto& [d, slot] : acc) out.knn[d] = slot.first / slot.second;

    // Pearson over both orientations of every edge.
    double sx = 0, sxx = 0, sxy = 0;
    const double m2 = 2.0 * g.edges.size();
    for (PackedEdge e : g.edges) {
        const double du = static_cast<double>(adj.degree(edge_u(e)));
        const double dv = static_cast<double>(adj.degree(edge_v(e)));
        sx += du + dv;
        sxx += du * du + dv * dv;
        sxy += 2.0 * du * dv;
    }
    const double mean = sx / m2;
    const double var = sxx / m2 - mean * mean;
    if (var > 1e-12) out.coefficient = (sxy / m2 - mean * mean) / var;

    std::vector<std::pair<double, double>> pts;
    for (const auto& [d, v] : out.knn)
        if (v > 0.0) pts.emplace_back(std::log(static_cast<double>(d)), std::log(v));
    if (pts.size() >= 2) {
        double lx = 0, ly = 0, lxx = 0, lxy = 0;
        for (auto [x, y] : pts) {
            lx += x;
            ly += y;
            lxx += x * x;
            lxy += x * y;
        }
        const double k = static_cast<double>(pts.size());
        const double denom = lxx - lx * lx / k;
        if (denom > 1e-12) out.exponent = (lxy - lx * ly / k) / denom;
    }
    return out;
}

struct CommunityMetrics {
    double intra_edge_fraction = 0.0;
    double avg_participation = 0.0;
    double modularity = 0.0;
};

inline CommunityMetrics community_metrics(const SimpleGraph& g,
                                          const std::vector<std::uint32_t>& community_of) {
    if (g.edges.empty()) throw ConfigError("metrics", "community metrics need at least one edge");
    if (community_of.size() < g.node_count)
        throw ConfigError("metrics", "membership does not cover all nodes");
    const Adjacency adj = Adjacency::build(g);
    const std::uint32_t k = *std::max_element(community_of.begin(), community_of.end()) + 1;

    std::vector<std::uint64_t> intra(k, 0), volume(k, 0);
    std::uint64_t intra_total = 0;
    for (PackedEdge e : g.edges) {
        const std::uint32_t cu = community_of[edge_u(e)], cv = community_of[edge_v(e)];
        if (cu == cv) {
            ++intra[cu];
            ++intra_total;
        }
    }
    for (NodeId v = 0; v < g.node_count; ++v) volume[community_of[v]] += adj.degree(v);

    CommunityMetrics out;
    const double m = static_cast<double>(g.edges.size());
    out.intra_edge_fraction = static_cast<double>(intra_total) / m;

    double part_sum = 0.0;
    std::uint64_t part_count = 0;
    std::vector<std::uint64_t> per_comm(k, 0);
    std::vector<std::uint32_t> touched;
    for (NodeId v = 0; v < g.node_count; ++v) {
        const std::uint64_t d = adj.degree(v);
        if (d == 0) continue;
        touched.clear();
        for (NodeId w : adj.of(v)) {
            const std::uint32_t c = community_of[w];
            if (per_comm[c]++ == 0) touched.push_back(c);
        }
        double sq = 0.0;
        for (std::uint32_t c : touched) {
            const double f = static_cast<double>(per_comm[c]) / d;
            sq += f * f;
            per_comm[c] = 0;
        }
        part_sum += 1.0 - sq;
        ++part_count;
    }
    out.avg_participation = part_count > 0 ? part_sum / part_count : 0.0;

    double q = 0.0;
    for (std::uint32_t l = 0; l < k; ++l) {
        const double frac = static_cast<double>(intra[l]) / m;
        const double vol = static_cast<double>(volume[l]) / (2.0 * m);
        q += frac - vol * vol;
    }
    out.modularity = q;
    return out;
}

/// Mean distance over connected node pairs of the largest component; exact
/// all-pairs for n <= 1000, otherwise `sample_pairs` uniform pairs.
inline double avg_shortest_path(const SimpleGraph& g, std::size_t sample_pairs, RandomStream& rng) {
    if (g.edges.empty()) throw ConfigError("metrics", "average shortest path needs edges");
    const Adjacency adj = Adjacency::build(g);
    const auto [label, giant] = detail::components(adj);
    std::vector<NodeId> comp;
    for (NodeId v = 0; v < g.node_count; ++v)
        if (label[v] == giant) comp.push_back(v);

    if (g.node_count <= 1000) {
        std::uint64_t total = 0, pairs = 0;
        for (NodeId s : comp) {
            const auto dist = detail::bfs_distances(adj, s);
            for (NodeId t : comp)
                if (t != s) {
                    total += static_cast<std::uint64_t>(dist[t]);
                    ++pairs;
                }
        }
        return pairs > 0 ? static_cast<double>(total) / pairs : 0.0;
    }

    std::uint64_t total = 0;
    for (std::size_t i = 0; i < sample_pairs; ++i) {
        const NodeId s = comp[bounded(rng, comp.size())];
        NodeId t = s;
        while (t == s) t = comp[bounded(rng, comp.size())];
        const auto dist = detail::bfs_distances(adj, s);
        total += static_cast<std::uint64_t>(dist[t]);
    }
    return static_cast<double>(total) / sample_pairs;
}

/// The ten measured properties for one graph plus planted partition.
struct MetricsReport {
    double global_clustering = 0.0;
    double avg_local_clustering = 0.0;
    std::vector<double> degree_centrality;
    std::vector<double> betweenness;
    std::vector<double> closeness;
    std::vector<double> pagerank;
    std::map<std::uint64_t, double> knn;
    double correlation_coefficient = 0.0;
    double correlation_exponent = 0.0;
    double intra_edge_fraction = 0.0;
    double avg_participation = 0.0;
    double modularity = 0.0;
    double avg_shortest_path = 0.0;
};

inline MetricsReport full_report(const SimpleGraph& g, const std::vector<std::uint32_t>& community_of,
                                 RandomStream& rng, std::size_t sample_pairs = 10000) {
    MetricsReport r;
    r.global_clustering = global_clustering(g);
    r.avg_local_clustering = avg_local_clustering(g);
    Centralities c = centralities(g);
    r.degree_centrality = std::move(c.degree);
    r.betweenness = std::move(c.betweenness);
    r.closeness = std::move(c.closeness);
    r.pagerank = std::move(c.pagerank);
    DegreeCorrelation dc = degree_correlation(g);
    r.knn = std::move(dc.knn);
    r.correlation_coefficient = dc.coefficient;
    r.correlation_exponent = dc.exponent;
    const CommunityMetrics cm = community_metrics(g, community_of);
    r.intra_edge_fraction = cm.intra_edge_fraction;
    r.avg_participation = cm.avg_participation;
    r.modularity = cm.modularity;
    r.avg_shortest_path = avg_shortest_path(g, sample_pairs, rng);
    return r;
}

namespace detail {
inline double vec_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}
} // namespace detail

/// Long CSV: one row per (graph, metric, value). Per-node centralities are
/// summarized by their mean.
inline void write_report_csv(const MetricsReport& r, const std::string& graph_name,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("metrics", "cannot open " + path + " for writing");
    out << "graph,metric,value\n";
    out.precision(12);
    auto row = [&](const char* metric, double value) {
        out << graph_name << ',' << metric << ',' << value << '\n';
    };
    row("global_clustering", r.global_clustering);
    row("avg_local_clustering", r.avg_local_clustering);
    row("degree_centrality_mean", detail::vec_mean(r.degree_centrality));
    row("betweenness_mean", detail::vec_mean(r.betweenness));
    row("closeness_mean", detail::vec_mean(r.closeness));
    row("pagerank_mean", detail::vec_mean(r.pagerank));
    row("correlation_coefficient", r.correlation_coefficient);
    row("correlation_exponent", r.correlation_exponent);
    row("intra_edge_fraction", r.intra_edge_fraction);
    row("avg_participation", r.avg_participation);
    row("modularity", r.modularity);
    row("avg_shortest_path", r.avg_shortest_path);
    if (!out) throw IoError("metrics", "write failed for " + path);
}

/// Wide CSV variant: a single row with one column per metric.
inline void write_report_csv_wide(const MetricsReport& r, const std::string& graph_name,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("metrics", "cannot open " + path + " for writing");
    out.precision(12);
    out << "graph,global_clustering,avg_local_clustering,degree_centrality_mean,betweenness_mean,"
           "closeness_mean,pagerank_mean,correlation_coefficient,correlation_exponent,"
           "intra_edge_fraction,avg_participation,modularity,avg_shortest_path\n";
    out << graph_name << ',' << r.global_clustering << ',' << r.avg_local_clustering << ','
        << detail::vec_mean(r.degree_centrality) << ',' << detail::vec_mean(r.betweenness) << ','
        << detail::vec_mean(r.closeness) << ',' << detail::vec_mean(r.pagerank) << ','
        << r.correlation_coefficient << ',' << r.correlation_exponent << ',' << r.intra_edge_fraction
        << ',' << r.avg_participation << ',' << r.modularity << ',' << r.avg_shortest_path << '\n';
}

/// Per-node arrays as TSV: node, degree, betweenness, closeness, pagerank.
inline void write_node_metrics_tsv(const MetricsReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("metrics", "cannot open " + path + " for writing");
    out.precision(12);
    out << "node\tdegree_centrality\tbetweenness\tcloseness\tpagerank\n";
    for (std::size_t i = 0; i < r.degree_centrality.size(); ++i)
        out << (i + 1) << '\t' << r.degree_centrality[i] << '\t' << r.betweenness[i] << '\t'
            << r.closeness[i] << '\t' << r.pagerank[i] << '\n';
}

} // namespace abcde
