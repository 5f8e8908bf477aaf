// Command-line front end: degrees, comms, generate, analyze, bench.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "abcde/abcde.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct GenerateFlags {
    std::uint64_t n = 0;
    double gamma = 2.5;
    std::uint64_t delta = 5;
    std::uint64_t max_degree = 0;  // 0 -> floor(sqrt(n))
    double beta = 1.5;
    std::uint64_t s_min = 0;       // 0 -> ceil(0.005 n)
    std::uint64_t s_max = 0;       // 0 -> floor(0.2 n)
    double xi = 0.5;
    std::string variant = "global";
    std::string kernel = "cm";
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::size_t max_rewire_rounds = 100;
    std::string degrees_file;
    std::string sizes_file;
    std::string out_edges;
    std::string out_membership;
    std::string config_file;
};

/// Apply key=value lines from a config file to the generate flags. Keys match
/// the long option names without the leading dashes; flags given on the
/// command line win over the file.
void apply_config_file(CLI::App* cmd, GenerateFlags& gen) {
    std::ifstream in(gen.config_file);
    if (!in) throw abcde::IoError("cli", "cannot open config file " + gen.config_file);

    auto set_u64 = [](std::uint64_t& slot) {
        return [&slot](const std::string& v) { slot = std::stoull(v); };
    };
    auto set_f64 = [](double& slot) {
        return [&slot](const std::string& v) { slot = std::stod(v); };
    };
    auto set_str = [](std::string& slot) {
        return [&slot](const std::string& v) { slot = v; };
    };
    const std::map<std::string, std::function<void(const std::string&)>> setters{
        {"n", set_u64(gen.n)},
        {"gamma", set_f64(gen.gamma)},
        {"delta", set_u64(gen.delta)},
        {"max-degree", set_u64(gen.max_degree)},
        {"beta", set_f64(gen.beta)},
        {"s-min", set_u64(gen.s_min)},
        {"s-max", set_u64(gen.s_max)},
        {"xi", set_f64(gen.xi)},
        {"variant", set_str(gen.variant)},
        {"kernel", set_str(gen.kernel)},
        {"seed", set_u64(gen.seed)},
        {"threads", [&gen](const std::string& v) { gen.threads = static_cast<unsigned>(std::stoul(v)); }},
        {"max-rewire-rounds", [&gen](const std::string& v) { gen.max_rewire_rounds = std::stoull(v); }},
        {"degrees-file", set_str(gen.degrees_file)},
        {"sizes-file", set_str(gen.sizes_file)},
        {"out-edges", set_str(gen.out_edges)},
        {"out-membership", set_str(gen.out_membership)},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw abcde::ParseError("cli", "config line " + std::to_string(line_no) +
                                               " is not key=value: " + line);
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const std::size_t a = s.find_first_not_of(" \t\r");
            const std::size_t b = s.find_last_not_of(" \t\r");
            s = a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        const auto it = setters.find(key);
        if (it == setters.end())
            throw abcde::ParseError("cli", "unknown config key '" + key + "' on line " +
                                               std::to_string(line_no));
        if (cmd->count("--" + key) > 0) continue;  // command line wins
        try {
            it->second(value);
        } catch (const std::exception&) {
            throw abcde::ParseError("cli", "bad value '" + value + "' for config key '" + key + "'");
        }
    }
}

abcde::GenParams to_params(const GenerateFlags& f) {
    abcde::GenParams p;
    p.n = f.n;
    p.degree_spec = {f.gamma, f.delta,
                     f.max_degree ? f.max_degree
                                  : static_cast<std::uint64_t>(std::sqrt(static_cast<double>(f.n)))};
    p.community_spec = {f.beta,
                        f.s_min ? f.s_min : static_cast<std::uint64_t>(std::ceil(0.005 * f.n)),
                        f.s_max ? f.s_max : static_cast<std::uint64_t>(0.2 * f.n)};
    p.mix.xi = f.xi;
    p.mix.variant = f.variant == "local" ? abcde::Variant::Local : abcde::Variant::Global;
    p.kernel = f.kernel == "cl" ? abcde::GraphKernel::ChungLu : abcde::GraphKernel::ConfigurationModel;
    p.seed = f.seed;
    p.threads = f.threads;
    p.max_rewire_rounds = f.max_rewire_rounds;
    return p;
}

void print_version() {
    std::cout << "abcde " << kVersion << "\n"
              << "defaults: gamma=2.5 delta=5 max-degree=floor(sqrt(n)) beta=1.5"
                 " s-min=ceil(0.005n) s-max=floor(0.2n) xi=0.5 variant=global kernel=cm"
                 " seed=42 threads=1\n"
              << "determinism: identical parameters and seed give byte-identical outputs for any"
                 " thread count, within a single version of this program\n";
}

void write_sequence(const std::vector<std::uint64_t>& values, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw abcde::IoError("cli", "cannot open " + path + " for writing");
    for (std::uint64_t v : values) out << v << '\n';
    if (!out) throw abcde::IoError("cli", "write failed for " + path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABCD benchmark graph generator (multi-threaded)"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", []() {
        print_version();
        return std::string{};
    });

    // degrees
    std::uint64_t seq_n = 0, seq_seed = 42;
    double seq_gamma = 2.5, seq_beta = 1.5;
    std::uint64_t seq_delta = 5, seq_max_degree = 0, seq_s_min = 0, seq_s_max = 0;
    std::string seq_out;

    auto* degrees_cmd = app.add_subcommand("degrees", "Sample a power-law degree sequence");
    degrees_cmd->add_option("--n", seq_n, "Number of nodes")->required();
    degrees_cmd->add_option("--gamma", seq_gamma, "Degree power-law exponent");
    degrees_cmd->add_option("--delta", seq_delta, "Minimum degree");
    degrees_cmd->add_option("--max-degree", seq_max_degree, "Maximum degree (default floor(sqrt(n)))");
    degrees_cmd->add_option("--seed", seq_seed, "Random seed");
    degrees_cmd->add_option("--out", seq_out, "Output file, one degree per line")->required();

    auto* comms_cmd = app.add_subcommand("comms", "Sample power-law community sizes");
    comms_cmd->add_option("--n", seq_n, "Number of nodes")->required();
    comms_cmd->add_option("--beta", seq_beta, "Community-size power-law exponent");
    comms_cmd->add_option("--s-min", seq_s_min, "Minimum community size (default ceil(0.005n))");
    comms_cmd->add_option("--s-max", seq_s_max, "Maximum community size (default floor(0.2n))");
    comms_cmd->add_option("--seed", seq_seed, "Random seed");
    comms_cmd->add_option("--out", seq_out, "Output file, one size per line")->required();

    // generate
    GenerateFlags gen;
    auto* gen_cmd = app.add_subcommand("generate", "Generate a benchmark graph");
    gen_cmd->add_option("--config", gen.config_file, "Config file of key=value lines; flags override");
    gen_cmd->add_option("--n", gen.n, "Number of nodes");
    gen_cmd->add_option("--gamma", gen.gamma, "Degree power-law exponent");
    gen_cmd->add_option("--delta", gen.delta, "Minimum degree");
    gen_cmd->add_option("--max-degree", gen.max_degree, "Maximum degree (default floor(sqrt(n)))");
    gen_cmd->add_option("--beta", gen.beta, "Community-size power-law exponent");
    gen_cmd->add_option("--s-min", gen.s_min, "Minimum community size (default ceil(0.005n))");
    gen_cmd->add_option("--s-max", gen.s_max, "Maximum community size (default floor(0.2n))");
    gen_cmd->add_option("--xi", gen.xi, "Mixing parameter")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--variant", gen.variant, "Mixing variant")
        ->check(CLI::IsMember({"global", "local"}));
    gen_cmd->add_option("--kernel", gen.kernel, "Graph kernel")->check(CLI::IsMember({"cm", "cl"}));
    gen_cmd->add_option("--seed", gen.seed, "Master random seed");
    gen_cmd->add_option("--threads", gen.threads, "Worker threads")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--max-rewire-rounds", gen.max_rewire_rounds, "Rewiring round budget");
    gen_cmd->add_option("--degrees-file", gen.degrees_file, "Pre-generated degrees (overrides sampling)");
    gen_cmd->add_option("--sizes-file", gen.sizes_file, "Pre-generated community sizes (overrides sampling)");
    gen_cmd->add_option("--out-edges", gen.out_edges, "Edge list output path");
    gen_cmd->add_option("--out-membership", gen.out_membership, "Membership output path");

    // analyze
    std::string an_edges, an_membership, an_out, an_wide_out, an_nodes_out, an_name = "graph";
    std::size_t an_sample_pairs = 10000;
    std::uint64_t an_seed = 42;
    auto* an_cmd = app.add_subcommand("analyze", "Compute the property report for a graph + partition");
    an_cmd->add_option("--edges", an_edges, "Edge list file")->required();
    an_cmd->add_option("--membership", an_membership, "Membership file")->required();
    an_cmd->add_option("--out", an_out, "Long-format CSV output")->required();
    an_cmd->add_option("--wide-out", an_wide_out, "Wide-format CSV output");
    an_cmd->add_option("--nodes-out", an_nodes_out, "Per-node metrics TSV output");
    an_cmd->add_option("--name", an_name, "Graph name used in the CSV");
    an_cmd->add_option("--sample-pairs", an_sample_pairs, "Pairs sampled for avg shortest path");
    an_cmd->add_option("--seed", an_seed, "Seed for path sampling");

    // bench
    std::string bench_grid, bench_out;
    std::size_t bench_repeats = 5;
    std::uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Run the timing sweep");
    bench_cmd->add_option("--bench-grid", bench_grid, "Grid definition file, one cell per line")
        ->required();
    bench_cmd->add_option("--repeats", bench_repeats, "Timed repeats per cell (plus one warm-up)");
    bench_cmd->add_option("--seed", bench_seed, "Base seed; repeats vary it and record the value");
    bench_cmd->add_option("--out", bench_out, "CSV output path")->required();

    auto* version_cmd = app.add_subcommand("version", "Print version, defaults, determinism scope");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion&) {
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (degrees_cmd->parsed()) {
            abcde::PowerLawSpec spec{seq_gamma, seq_delta,
                                     seq_max_degree ? seq_max_degree
                                                    : static_cast<std::uint64_t>(std::sqrt(static_cast<double>(seq_n)))};
            abcde::RandomStream rng = abcde::make_stream(seq_seed, abcde::kSetupTaskId);
            write_sequence(abcde::sample_degrees(seq_n, spec, rng).values(), seq_out);
        } else if (comms_cmd->parsed()) {
            abcde::PowerLawSpec spec{seq_beta,
                                     seq_s_min ? seq_s_min : static_cast<std::uint64_t>(std::ceil(0.005 * seq_n)),
                                     seq_s_max ? seq_s_max : static_cast<std::uint64_t>(0.2 * seq_n)};
            abcde::RandomStream rng = abcde::make_stream(seq_seed, abcde::kSetupTaskId);
            write_sequence(abcde::sample_community_sizes(seq_n, spec, rng).values(), seq_out);
        } else if (gen_cmd->parsed()) {
            if (!gen.config_file.empty()) apply_config_file(gen_cmd, gen);
            if (gen.n == 0) throw abcde::ConfigError("cli", "--n is required (flag or config file)");
            if (gen.out_edges.empty())
                throw abcde::ConfigError("cli", "--out-edges is required (flag or config file)");
            if (gen.out_membership.empty())
                throw abcde::ConfigError("cli", "--out-membership is required (flag or config file)");
            const abcde::GenParams params = to_params(gen);
            params.validate();
            abcde::RandomStream rng = abcde::make_stream(params.seed, abcde::kSetupTaskId);
            const abcde::DegreeSequence degrees =
                !gen.degrees_file.empty() ? abcde::read_degree_file(gen.degrees_file)
                                          : abcde::sample_degrees(params.n, params.degree_spec, rng);
            const abcde::CommunitySizes sizes =
                !gen.sizes_file.empty() ? abcde::read_community_size_file(gen.sizes_file, params.n)
                                        : abcde::sample_community_sizes(params.n, params.community_spec, rng);
            const abcde::BenchmarkGraph result = abcde::generate_parallel(params, degrees, sizes);
            abcde::write_outputs(result, gen.out_edges, gen.out_membership);
            std::cout << "generated n=" << params.n << " edges=" << result.graph.edges.size()
                      << " communities=" << result.membership.community_count()
                      << " collisions_resolved=" << result.collisions_resolved << "\n";
        } else if (an_cmd->parsed()) {
            const abcde::SimpleGraph g = abcde::read_edge_file(an_edges);
            const std::vector<std::uint32_t> membership = abcde::read_membership_file(an_membership);
            if (membership.size() < g.node_count)
                throw abcde::ConfigError("cli", "membership file covers fewer nodes than the edge file");
            abcde::RandomStream rng = abcde::make_stream(an_seed, abcde::kSetupTaskId);
            const abcde::MetricsReport report = abcde::full_report(g, membership, rng, an_sample_pairs);
            abcde::write_report_csv(report, an_name, an_out);
            if (!an_wide_out.empty()) abcde::write_report_csv_wide(report, an_name, an_wide_out);
            if (!an_nodes_out.empty()) abcde::write_node_metrics_tsv(report, an_nodes_out);
            std::cout << "report written to " << an_out << "\n";
        } else if (bench_cmd->parsed()) {
            const auto grid = abcde::parse_grid_file(bench_grid);
            const auto records = abcde::run_sweep(grid, bench_repeats, bench_seed, &std::cerr);
            abcde::emit_csv(records, bench_out);
            std::cout << "bench records written to " << bench_out << "\n";
        } else if (version_cmd->parsed()) {
            print_version();
        } else {
            std::cout << app.help();
        }
    } catch (const abcde::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const abcde::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const abcde::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error:cli: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
