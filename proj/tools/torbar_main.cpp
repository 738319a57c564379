// torbar: decides generic minimal rigidity of periodic body-bar frameworks
// on the fixed 3-torus two independent ways (sparsity counts vs. generic
// rank), and generates/reduces such frameworks via gain-modified pinches.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "torbar/torbar.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDisagreement = 3;
constexpr int kExitInternal = 4;

using torbar::json;

struct CommonFlags {
    std::uint64_t prime = torbar::kMersenne61;
    int trials = 3;
    std::uint64_t seed = 0;
    bool exact = false;
    std::size_t brute_cap = torbar::kBruteCapDefault;
    std::size_t connected_cap = torbar::kConnectedCapDefault;
    std::string engine = "auto";
};

void add_rank_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--prime", f.prime, "rank oracle prime modulus (default 2^61-1)");
    cmd->add_option("--trials", f.trials, "position samples per rank query");
    cmd->add_option("--seed", f.seed, "PRNG seed")->envname("TORBAR_SEED");
    cmd->add_flag("--exact", f.exact, "integer positions + fraction-free elimination");
}

void add_sparsity_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--brute-cap", f.brute_cap, "edge cap for the full subset sweep");
    cmd->add_option("--connected-cap", f.connected_cap, "edge cap for the connected-subset sweep");
    cmd->add_option("--engine", f.engine, "sparsity engine: auto|brute|connected|matroid")
        ->check(CLI::IsMember({"auto", "brute", "connected", "matroid"}));
}

torbar::RankConfig rank_config(const CommonFlags& f) {
    torbar::RankConfig cfg;
    cfg.prime = f.prime;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    cfg.exact = f.exact;
    return cfg;
}

json params_json(const CommonFlags& f) {
    json p;
    p["prime"] = f.prime;
    p["trials"] = f.trials;
    p["seed"] = f.seed;
    p["exact"] = f.exact;
    p["engine"] = f.engine;
    p["brute_cap"] = f.brute_cap;
    p["connected_cap"] = f.connected_cap;
    return p;
}

json input_json(const std::string& path, const std::string& bytes) {
    json j;
    j["path"] = path;
    j["digest"] = "fnv1a64:" + torbar::fnv1a64_hex(bytes);
    return j;
}

json sparsity_json(const torbar::SparsityVerdict& v) {
    json j;
    j["engine"] = torbar::to_string(v.engine);
    j["tight"] = v.tight;
    j["sparse"] = v.sparse;
    j["checked_subsets"] = v.checked_subsets;
    if (v.witness) {
        j["witness"] = v.witness->ids();
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

json rigidity_json(const torbar::RigidityVerdict& v) {
    json j;
    j["rank"] = v.rank;
    j["rows"] = v.rows;
    j["cols"] = v.cols;
    j["dof"] = v.dof;
    j["minimally_rigid"] = v.minimally_rigid;
    j["prime"] = v.prime;
    j["trials"] = v.trials;
    j["seed"] = v.seed;
    j["exact"] = v.exact;
    return j;
}

torbar::SparsityVerdict run_sparsity(const torbar::BodyBarOrbitGraph& g, const CommonFlags& f) {
    const torbar::SparsityCaps caps{f.brute_cap, f.connected_cap};
    if (f.engine == "brute") return torbar::check_sparsity_bruteforce(g, f.brute_cap);
    if (f.engine == "connected") return torbar::check_sparsity_connected(g, f.connected_cap);
    if (f.engine == "matroid") return torbar::check_sparsity_matroid(g, rank_config(f));
    return torbar::check_sparsity_auto(g, caps, rank_config(f));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const std::string& path, const CommonFlags& flags) {
    const std::string bytes = torbar::read_file(path);
    const torbar::BodyBarOrbitGraph g = torbar::parse_graph(torbar::parse_json_text(bytes, path));

    json report;
    report["command"] = "check";
    report["input"] = input_json(path, bytes);
    report["params"] = params_json(flags);

    const auto t0 = std::chrono::steady_clock::now();
    const torbar::SparsityVerdict comb = run_sparsity(g, flags);
    const double comb_ms = ms_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    torbar::RigidityVerdict lin = torbar::generic_rank(torbar::induce_bar_joint(g), rank_config(flags));
    const double lin_ms = ms_since(t1);

    const bool comb_ok = comb.tight && comb.sparse;
    bool lin_ok = lin.minimally_rigid;
    bool adjudicated = false;
    if (comb_ok != lin_ok && !flags.exact) {
        // Field-mode disagreement: settle it with the exact-rank route before
        // declaring a cross-verdict failure.
        torbar::RankConfig exact_cfg = rank_config(flags);
        exact_cfg.exact = true;
        lin = torbar::generic_rank(torbar::induce_bar_joint(g), exact_cfg);
        lin_ok = lin.minimally_rigid;
        adjudicated = true;
    }

    report["combinatorial"] = sparsity_json(comb);
    report["linear"] = rigidity_json(lin);
    report["exact_adjudicated"] = adjudicated;
    report["agreement"] = comb_ok == lin_ok;
    report["minimally_rigid"] = comb_ok && lin_ok;

    int exit_code = kExitDisagreement;
    if (comb_ok == lin_ok) exit_code = comb_ok ? kExitOk : kExitNegative;
    report["exit_code"] = exit_code;
    json timing;
    timing["combinatorial_ms"] = comb_ms;
    timing["linear_ms"] = lin_ms;
    report["timing"] = timing;
    std::cout << report.dump(2) << "\n";
    return exit_code;
}

int cmd_rank(const std::string& path, const CommonFlags& flags) {
    const std::string bytes = torbar::read_file(path);
    const torbar::BodyBarOrbitGraph g = torbar::parse_graph(torbar::parse_json_text(bytes, path));
    const auto t0 = std::chrono::steady_clock::now();
    const torbar::RigidityVerdict v =
        torbar::generic_rank(torbar::induce_bar_joint(g), rank_config(flags));
    json report;
    report["command"] = "rank";
    report["input"] = input_json(path, bytes);
    report["params"] = params_json(flags);
    report["linear"] = rigidity_json(v);
    json timing;
    timing["linear_ms"] = ms_since(t0);
    report["timing"] = timing;
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_induce(const std::string& path) {
    const torbar::BodyBarOrbitGraph g = torbar::load_graph_file(path);
    const torbar::InducedFramework f = torbar::induce_bar_joint(g);
    std::cout << torbar::serialize_bar_joint(f.graph).dump(2) << "\n";
    return kExitOk;
}

int cmd_matrix(const std::string& path, std::uint64_t positions_seed, const CommonFlags& flags,
               const std::string& format) {
    if (format != "csv") throw torbar::ConfigError("unsupported matrix format: " + format);
    const torbar::BodyBarOrbitGraph g = torbar::load_graph_file(path);
    const torbar::InducedFramework f = torbar::induce_bar_joint(g);
    const torbar::PrimeField field(flags.prime);
    const torbar::FieldPositions pos = torbar::sample_positions(f.graph, field, positions_seed);
    const torbar::FieldMatrix m = torbar::assemble_matrix(f.graph, pos, field);
    std::cout << torbar::matrix_csv(m, f.graph);
    return kExitOk;
}

int cmd_generate(int bodies, std::uint64_t seed) {
    const torbar::BodyBarOrbitGraph g = torbar::random_tight_graph(bodies, seed);
    std::cout << torbar::serialize_graph(g).dump(2) << "\n";
    return kExitOk;
}

int cmd_reduce(const std::string& path, const CommonFlags& flags) {
    const torbar::BodyBarOrbitGraph g = torbar::load_graph_file(path);
    torbar::ReduceConfig cfg;
    cfg.caps = {flags.brute_cap, flags.connected_cap};
    cfg.rank = rank_config(flags);
    const torbar::ReductionTrace trace = torbar::reduce_to_seed(g, cfg);
    std::cout << torbar::trace_to_json(trace).dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(int corpus_size, int max_bodies, const CommonFlags& flags) {
    torbar::HarnessOptions opt;
    opt.corpus_size = corpus_size;
    opt.max_bodies = max_bodies;
    opt.seed = flags.seed == 0 ? 1 : flags.seed;
    opt.caps = {flags.brute_cap, flags.connected_cap};
    opt.rank = rank_config(flags);
    opt.progress = &std::cerr;
    const torbar::HarnessReport report = torbar::run_harness(opt);

    json j;
    j["command"] = "verify";
    j["params"] = params_json(flags);
    j["corpus_size"] = corpus_size;
    j["max_bodies"] = max_bodies;
    json props = json::array();
    for (const torbar::PropertyResult& p : report.properties) {
        json jp;
        jp["name"] = p.name;
        jp["pass"] = p.pass;
        jp["cases"] = p.cases;
        if (!p.detail.empty()) jp["detail"] = p.detail;
        props.push_back(std::move(jp));
    }
    j["properties"] = std::move(props);
    j["exit3_count"] = report.exit3_count;
    j["all_pass"] = report.all_pass;
    std::cout << j.dump(2) << "\n";
    return report.all_pass ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic body-bar rigidity on the fixed 3-torus"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string path;
    std::uint64_t positions_seed = 0;
    std::string format = "csv";
    int bodies = 2;
    int corpus_size = 50;
    int max_bodies = 4;

    CLI::App* check = app.add_subcommand("check", "combinatorial + linear rigidity verdicts");
    check->add_option("file", path, "graph document")->required();
    add_rank_flags(check, flags);
    add_sparsity_flags(check, flags);

    CLI::App* rank = app.add_subcommand("rank", "generic rank of the periodic rigidity matrix");
    rank->add_option("file", path, "graph document")->required();
    add_rank_flags(rank, flags);

    CLI::App* induce = app.add_subcommand("induce", "emit the induced bar-joint orbit graph");
    induce->add_option("file", path, "graph document")->required();

    CLI::App* matrix = app.add_subcommand("matrix", "dump an assembled rigidity matrix");
    matrix->add_option("file", path, "graph document")->required();
    matrix->add_option("--positions-seed", positions_seed, "seed for the sampled positions")
        ->envname("TORBAR_SEED");
    matrix->add_option("--prime", flags.prime, "field modulus");
    matrix->add_option("--format", format, "output format (csv)");

    CLI::App* generate = app.add_subcommand("generate", "sample a tight sparse graph");
    generate->add_option("--bodies", bodies, "number of bodies")->required();
    generate->add_option("--seed", flags.seed, "PRNG seed")->envname("TORBAR_SEED");

    CLI::App* reduce = app.add_subcommand("reduce", "reduce to the one-body seed; emit the trace");
    reduce->add_option("file", path, "graph document")->required();
    add_rank_flags(reduce, flags);
    reduce->add_option("--brute-cap", flags.brute_cap, "edge cap for the full subset sweep");
    reduce->add_option("--connected-cap", flags.connected_cap, "edge cap for the connected sweep");

    CLI::App* verify = app.add_subcommand("verify", "run the cross-validation harness");
    verify->add_option("--corpus-size", corpus_size, "graphs per property");
    verify->add_option("--max-bodies", max_bodies, "body cap for sampled graphs");
    add_rank_flags(verify, flags);
    add_sparsity_flags(verify, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (check->parsed()) return cmd_check(path, flags);
        if (rank->parsed()) return cmd_rank(path, flags);
        if (induce->parsed()) return cmd_induce(path);
        if (matrix->parsed()) return cmd_matrix(path, positions_seed, flags, format);
        if (generate->parsed()) return cmd_generate(bodies, flags.seed);
        if (reduce->parsed()) return cmd_reduce(path, flags);
        if (verify->parsed()) return cmd_verify(corpus_size, max_bodies, flags);
    } catch (const torbar::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const torbar::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const torbar::NotTightError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNegative;
    } catch (const torbar::NotSparseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNegative;
    } catch (const torbar::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const std::string& v : e.violations()) std::cerr << "  - " << v << "\n";
        return kExitBadInput;
    } catch (const torbar::ExhaustedSearchError& e) {
        std::cerr << "internal error: " << e.what() << "\n" << e.instance_dump() << "\n";
        return kExitInternal;
    } catch (const torbar::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
