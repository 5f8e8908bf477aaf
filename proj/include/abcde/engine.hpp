#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "abcde/assignment.hpp"
#include "abcde/errors.hpp"
#include "abcde/graph.hpp"
#include "abcde/kernels.hpp"
#include "abcde/rng.hpp"
#include "abcde/sampling.hpp"

namespace abcde {

/// Full parameterization of one generation run.
struct GenParams {
    std::uint64_t n = 0;
    PowerLawSpec degree_spec;     // gamma, delta, max degree
    PowerLawSpec community_spec;  // beta, s_min, s_max
    MixingConfig mix;
    GraphKernel kernel = GraphKernel::ConfigurationModel;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::size_t max_rewire_rounds = 100;

    void validate() const {
        if (n < 2) throw ConfigError("engine", "n must be >= 2, got " + std::to_string(n));
        if (threads < 1) throw ConfigError("engine", "threads must be >= 1");
        degree_spec.validate();
        community_spec.validate();
        mix.validate();
    }
};

/// One unit of parallel work: the background graph (task 0) or one community.
struct GenTask {
    std::int64_t task_id = 0;
    std::vector<std::uint32_t> node_set;      // global node ids; all nodes for the background
    std::vector<std::uint64_t> degree_slice;  // internal (community) or background degrees
    std::uint64_t task_seed = 0;
};

struct TaskPlan {
    std::vector<GenTask> tasks;        // indexed by task_id
    std::vector<std::size_t> queue;    // processing order, background first
};

struct BenchmarkGraph {
    SimpleGraph graph;
    Membership membership;
    DegreeSplit split;
    GenParams params;
    std::uint64_t collisions_resolved = 0;  // merge-stage defects repaired
};

/// Build the task list and the FIFO order: the background graph is queued
/// first so the first free worker starts on the largest job, the community
/// tasks follow in a master-seed-driven shuffle. Each task's seed depends
/// only on (master seed, task id).
inline TaskPlan build_tasks(const DegreeSplit& split, const Membership& membership,
                            const GenParams& params) {
    const std::size_t k = membership.community_count();
    TaskPlan plan;
    plan.tasks.resize(k + 1);

    GenTask& bg = plan.tasks[0];
    bg.task_id = 0;
    bg.node_set.resize(split.background.size());
    std::iota(bg.node_set.begin(), bg.node_set.end(), 0u);
    bg.degree_slice = split.background;
    bg.task_seed = derive_task_seed(params.seed, 0);

    for (std::size_t l = 0; l < k; ++l) {
        GenTask& t = plan.tasks[l + 1];
        t.task_id = static_cast<std::int64_t>(l + 1);
        t.node_set = membership.members[l];
        t.degree_slice.reserve(t.node_set.size());
        for (std::uint32_t v : t.node_set) t.degree_slice.push_back(split.internal[v]);
        t.task_seed = derive_task_seed(params.seed, t.task_id);
    }

    plan.queue.resize(k);
    std::iota(plan.queue.begin(), plan.queue.end(), std::size_t{1});
    RandomStream shuffle_rng = make_stream(params.seed, kQueueShuffleTaskId);
    fisher_yates(plan.queue, shuffle_rng);
    plan.queue.insert(plan.queue.begin(), 0);
    return plan;
}

/// Union the per-task simple graphs and resolve collisions: a background edge
/// that duplicates a community edge (or, after re-pairing, another background
/// edge or a loop) is defective. Each round re-pairs the defective background
/// edges together with an equal-size uniform sample of clean background
/// edges. Community graphs are never touched, so community structure and all
/// degrees are preserved.
inline SimpleGraph merge_and_resolve(const std::vector<SimpleGraph>& community_graphs,
                                     SimpleGraph background, RandomStream& rng,
                                     std::size_t max_rounds = 100,
                                     std::uint64_t* collisions_resolved = nullptr) {
    std::unordered_set<PackedEdge> community_set;
    std::size_t community_edge_count = 0;
    for (const SimpleGraph& cg : community_graphs) community_edge_count += cg.edges.size();
    community_set.reserve(community_edge_count * 2);
    for (const SimpleGraph& cg : community_graphs)
        community_set.insert(cg.edges.begin(), cg.edges.end());

    std::vector<PackedEdge>& bg = background.edges;
    std::uint64_t resolved = 0;
    for (std::size_t round = 0;; ++round) {
        std::sort(bg.begin(), bg.end());
        std::vector<std::size_t> defects;
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < bg.size(); ++i) {
            const bool bad = is_loop(bg[i]) || (i > 0 && bg[i] == bg[i - 1]) || community_set.contains(bg[i]);
            (bad ? defects : pool).push_back(i);
        }
        if (defects.empty()) break;
        if (round >= max_rounds)
            throw ConvergenceError("engine",
                                   "merge rewiring did not converge after " + std::to_string(max_rounds) +
                                       " rounds, " + std::to_string(defects.size()) + " collisions remain",
                                   defects.size());
        resolved += defects.size();
        const std::size_t extra = std::min(defects.size(), pool.size());
        for (std::size_t j = 0; j < extra; ++j) {
            const std::size_t k = j + static_cast<std::size_t>(bounded(rng, pool.size() - j));
            std::swap(pool[j], pool[k]);
            defects.push_back(pool[j]);
        }
        detail::repair_edges(bg, defects, rng);
    }
    if (collisions_resolved) *collisions_resolved = resolved;

    SimpleGraph out;
    out.node_count = background.node_count;
    out.edges.reserve(community_edge_count + bg.size());
    for (const SimpleGraph& cg : community_graphs)
        out.edges.insert(out.edges.end(), cg.edges.begin(), cg.edges.end());
    out.edges.insert(out.edges.end(), bg.begin(), bg.end());
    out.sort_edges();
    return out;
}

namespace detail {

/// Generate one task's graph with its own stream; community node ids are
/// local to the slice and mapped back to global ids afterwards.
inline SimpleGraph run_task(const GenTask& task, GraphKernel kernel, std::size_t max_rounds) {
    RandomStream rng(task.task_seed);
    SimpleGraph g;
    if (kernel == GraphKernel::ConfigurationModel) {
        g = rewire_to_simple(configuration_model(task.degree_slice, rng), rng, max_rounds);
    } else {
        g = chung_lu(task.degree_slice, rng);
    }
    if (task.task_id != 0) {
        for (PackedEdge& e : g.edges)
            e = pack_edge(task.node_set[edge_u(e)], task.node_set[edge_v(e)]);
    }
    return g;
}

} // namespace detail

/// The full pipeline: sequential assignment/split/task building, parallel
/// per-task generation (a pool of `threads` workers over the shared FIFO),
/// sequential merge and collision resolution. Output is identical for every
/// thread count given identical params and seed.
inline BenchmarkGraph generate_parallel(const GenParams& params, const DegreeSequence& degrees,
                                        const CommunitySizes& sizes) {
    params.validate();
    if (degrees.size() != params.n)
        throw ConfigError("engine", "degree sequence length " + std::to_string(degrees.size()) +
                                        " does not match n=" + std::to_string(params.n));

    BenchmarkGraph result;
    result.params = params;

    RandomStream setup_rng = make_stream(params.seed, kSetupTaskId);
    result.membership = assign_communities(degrees, sizes, params.mix, setup_rng);
    result.split = split_degrees(degrees, result.membership, params.mix, setup_rng);

    const TaskPlan plan = build_tasks(result.split, result.membership, params);

    std::vector<SimpleGraph> slots(plan.tasks.size());
    std::vector<std::exception_ptr> failures(plan.tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t qi = next.fetch_add(1, std::memory_order_relaxed);
            if (qi >= plan.queue.size()) return;
            const GenTask& task = plan.tasks[plan.queue[qi]];
            try {
                slots[task.task_id] = detail::run_task(task, params.kernel, params.max_rewire_rounds);
            } catch (...) {
                failures[task.task_id] = std::current_exception();
            }
        }
    };

    const unsigned pool_size =
        static_cast<unsigned>(std::min<std::size_t>(params.threads, plan.queue.size()));
    if (pool_size <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t id = 0; id < failures.size(); ++id) {
        if (!failures[id]) continue;
        try {
            std::rethrow_exception(failures[id]);
        } catch (const Error& e) {
            throw Error(e.module(), std::string(e.what()) + " [task " + std::to_string(id) + "]");
        }
    }

    std::vector<SimpleGraph> community_graphs(slots.begin() + 1, slots.end());
    RandomStream merge_rng = make_stream(params.seed, kMergeTaskId);
    result.graph = merge_and_resolve(community_graphs, std::move(slots[0]), merge_rng,
                                     params.max_rewire_rounds, &result.collisions_resolved);
    return result;
}

/// Edge file: "u<TAB>v", u < v, 1-based, sorted ascending by (u, v).
/// Membership file: "node<TAB>community", both 1-based, nodes ascending.
inline void write_outputs(const BenchmarkGraph& result, const std::string& edge_path,
                          const std::string& membership_path) {
    {
        std::ofstream out(edge_path);
        if (!out) throw IoError("engine", "cannot open " + edge_path + " for writing");
        std::vector<PackedEdge> edges = result.graph.edges;
        std::sort(edges.begin(), edges.end());
        std::string buf;
        buf.reserve(1 << 20);
        for (PackedEdge e : edges) {
            buf += std::to_string(edge_u(e) + 1);
            buf += '\t';
            buf += std::to_string(edge_v(e) + 1);
            buf += '\n';
            if (buf.size() > (1 << 20) - 64) {
                out << buf;
                buf.clear();
            }
        }
        out << buf;
        if (!out) throw IoError("engine", "write failed for " + edge_path);
    }
    {
        std::ofstream out(membership_path);
        if (!out) throw IoError("engine", "cannot open " + membership_path + " for writing");
        for (std::size_t i = 0; i < result.membership.community_of.size(); ++i)
            out << (i + 1) << '\t' << (result.membership.community_of[i] + 1) << '\n';
        if (!out) throw IoError("engine", "write failed for " + membership_path);
    }
}

/// Readers for the analyze workflow; formats as written by write_outputs.
inline SimpleGraph read_edge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("engine", "cannot open " + path);
    SimpleGraph g;
    std::uint64_t u, v;
    std::uint64_t max_node = 0;
    std::size_t lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%lu %lu", &u, &v) != 2 || u == 0 || v == 0)
            throw ParseError("engine", path + ": line " + std::to_string(lineno) + ": expected \"u<TAB>v\"");
        g.edges.push_back(pack_edge(static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1)));
        max_node = std::max({max_node, u, v});
    }
    g.node_count = static_cast<NodeId>(max_node);
    return g;
}

inline std::vector<std::uint32_t> read_membership_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("engine", "cannot open " + path);
    std::vector<std::uint32_t> community_of;
    std::uint64_t node, comm;
    std::size_t lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%lu %lu", &node, &comm) != 2 || node == 0 || comm == 0)
            throw ParseError("engine",
                             path + ": line " + std::to_string(lineno) + ": expected \"node<TAB>community\"");
        if (node > community_of.size()) community_of.resize(node, 0);
        community_of[node - 1] = static_cast<std::uint32_t>(comm - 1);
    }
    return community_of;
}

} // namespace abcde
