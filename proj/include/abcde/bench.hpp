#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "abcde/engine.hpp"
#include "abcde/errors.hpp"

namespace abcde {

struct BenchRecord {
    std::uint64_t n = 0;
    double xi = 0.0;
    Variant variant = Variant::Global;
    GraphKernel kernel = GraphKernel::ConfigurationModel;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::uint64_t edge_count = 0;
    double wall_seconds = 0.0;
    double ns_per_edge = 0.0;
    std::uint64_t collisions_resolved = 0;
    bool failed = false;
    std::string error;
};

/// One grid cell. Degree/community spec bounds default to the n-dependent
/// values used by the CLI when left at zero.
struct BenchCell {
    std::uint64_t n = 0;
    double gamma = 2.5;
    double beta = 1.5;
    std::uint64_t delta = 5;
    std::uint64_t max_degree = 0;  // 0 -> floor(sqrt(n))
    std::uint64_t s_min = 0;       // 0 -> ceil(0.005 n)
    std::uint64_t s_max = 0;       // 0 -> floor(0.2 n)
    double xi = 0.5;
    Variant variant = Variant::Global;
    GraphKernel kernel = GraphKernel::ConfigurationModel;
    unsigned threads = 1;

    GenParams to_params(std::uint64_t seed) const {
        GenParams p;
        p.n = n;
        p.degree_spec = {gamma, delta, max_degree ? max_degree : static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)))};
        p.community_spec = {beta, s_min ? s_min : static_cast<std::uint64_t>(std::ceil(0.005 * n)),
                            s_max ? s_max : static_cast<std::uint64_t>(0.2 * n)};
        p.mix = {xi, variant};
        p.kernel = kernel;
        p.seed = seed;
        p.threads = threads;
        return p;
    }
};

/// Time `repeats` generations per cell; sequence sampling happens outside the
/// timed section and one warm-up run per cell is discarded. Seeds vary per
/// repeat and are recorded. A failing cell is marked failed, the sweep
/// continues.
inline std::vector<BenchRecord> run_sweep(const std::vector<BenchCell>& grid, std::size_t repeats,
                                          std::uint64_t base_seed = 1,
                                          std::ostream* progress = nullptr) {
    using clock = std::chrono::steady_clock;
    std::vector<BenchRecord> records;
    records.reserve(grid.size() * repeats);
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        const BenchCell& cell = grid[ci];
        // sequences are sampled once per cell, outside the timer
        GenParams setup = cell.to_params(base_seed);
        DegreeSequence degrees;
        CommunitySizes sizes;
        try {
            setup.validate();
            RandomStream rng = make_stream(setup.seed, kSetupTaskId);
            degrees = sample_degrees(setup.n, setup.degree_spec, rng);
            sizes = sample_community_sizes(setup.n, setup.community_spec, rng);
        } catch (const Error& e) {
            BenchRecord rec;
            rec.n = cell.n;
            rec.xi = cell.xi;
            rec.variant = cell.variant;
            rec.kernel = cell.kernel;
            rec.threads = cell.threads;
            rec.failed = true;
            rec.error = e.what();
            records.push_back(rec);
            continue;
        }

        for (std::size_t rep = 0; rep <= repeats; ++rep) {
            const bool warmup = rep == 0;
            const std::uint64_t seed = base_seed + 1000 * ci + rep;
            BenchRecord rec;
            rec.n = cell.n;
            rec.xi = cell.xi;
            rec.variant = cell.variant;
            rec.kernel = cell.kernel;
            rec.threads = cell.threads;
            rec.seed = seed;
            try {
                const GenParams params = cell.to_params(seed);
                const auto t0 = clock::now();
                const BenchmarkGraph result = generate_parallel(params, degrees, sizes);
                const auto t1 = clock::now();
                rec.edge_count = result.graph.edges.size();
                rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                rec.ns_per_edge = rec.edge_count > 0 ? rec.wall_seconds * 1e9 / rec.edge_count : 0.0;
                rec.collisions_resolved = result.collisions_resolved;
            } catch (const Error& e) {
                rec.failed = true;
                rec.error = e.what();
            }
            if (!warmup) {
                records.push_back(rec);
                if (progress)
                    *progress << "bench: n=" << rec.n << " xi=" << rec.xi << " threads=" << rec.threads
                              << " rep=" << rep << " wall=" << rec.wall_seconds << "s\n";
            }
        }
    }
    return records;
}

inline void emit_csv(const std::vector<BenchRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("bench", "cannot open " + path + " for writing");
    out.precision(12);
    out << "n,xi,variant,kernel,threads,seed,edges,wall_seconds,ns_per_edge,collisions\n";
    for (const BenchRecord& r : records) {
        out << r.n << ',' << r.xi << ',' << variant_name(r.variant) << ','
            << (r.kernel == GraphKernel::ConfigurationModel ? "cm" : "cl") << ',' << r.threads << ','
            << r.seed << ',' << r.edge_count << ',' << r.wall_seconds << ',' << r.ns_per_edge << ','
            << r.collisions_resolved << '\n';
        out.flush();  // partial sweeps stay usable
    }
    if (!out) throw IoError("bench", "write failed for " + path);
}

/// Grid file: one cell per line, whitespace-separated key=value pairs,
/// '#' starts a comment. Keys: n, xi, gamma, beta, delta, max_degree, s_min,
/// s_max, variant, kernel, threads.
inline std::vector<BenchCell> parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("bench", "cannot open " + path);
    std::vector<BenchCell> grid;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string token;
        BenchCell cell;
        bool any = false;
        while (ls >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos)
                throw ParseError("bench", path + ": line " + std::to_string(lineno) +
                                              ": expected key=value, got \"" + token + "\"");
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            try {
                if (key == "n") cell.n = std::stoull(value);
                else if (key == "xi") cell.xi = std::stod(value);
                else if (key == "gamma") cell.gamma = std::stod(value);
                else if (key == "beta") cell.beta = std::stod(value);
                else if (key == "delta") cell.delta = std::stoull(value);
                else if (key == "max_degree") cell.max_degree = std::stoull(value);
                else if (key == "s_min") cell.s_min = std::stoull(value);
                else if (key == "s_max") cell.s_max = std::stoull(value);
                else if (key == "threads") cell.threads = static_cast<unsigned>(std::stoul(value));
                else if (key == "variant") cell.variant = value == "local" ? Variant::Local : Variant::Global;
                else if (key == "kernel") cell.kernel = value == "cl" ? GraphKernel::ChungLu : GraphKernel::ConfigurationModel;
                else
                    throw ParseError("bench", path + ": line " + std::to_string(lineno) +
                                                  ": unknown key \"" + key + "\"");
            } catch (const std::invalid_argument&) {
                throw ParseError("bench", path + ": line " + std::to_string(lineno) +
                                              ": bad value for \"" + key + "\"");
            }
            any = true;
        }
        if (!any) continue;
        if (cell.n == 0)
            throw ParseError("bench", path + ": line " + std::to_string(lineno) + ": cell is missing n");
        grid.push_back(cell);
    }
    return grid;
}

} // namespace abcde
