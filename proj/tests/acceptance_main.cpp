// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its runtime budget; exceeding it fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "torbar/torbar.hpp"

using namespace torbar;

namespace {

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

BodyBarOrbitGraph example1() {
    BodyBarOrbitGraph g;
    g.add_body("B1");
    g.add_body("B2");
    for (int i = 0; i < 6; ++i) g.add_edge("B1", "B2", {});
    g.add_edge("B1", "B2", {1, 0, 0});
    g.add_edge("B1", "B2", {1, 0, 0});
    g.add_edge("B1", "B2", {0, 1, 0});
    return g;
}

BodyBarOrbitGraph example1_bad() {
    BodyBarOrbitGraph g;
    g.add_body("B1");
    g.add_body("B2");
    for (int i = 0; i < 6; ++i) g.add_edge("B1", "B2", {});
    g.add_edge("B1", "B2", {1, 0, 0});
    g.add_edge("B1", "B2", {2, 0, 0});
    g.add_edge("B1", "B2", {3, 0, 0});
    return g;
}

BodyBarOrbitGraph p3(GainVector a, GainVector b, GainVector c) {
    BodyBarOrbitGraph g;
    g.add_body("B0");
    g.add_edge("B0", "B0", a);
    g.add_edge("B0", "B0", b);
    g.add_edge("B0", "B0", c);
    return g;
}

bool expect(bool cond, const std::string& what, std::string& detail) {
    if (!cond && detail.empty()) detail = what;
    return cond;
}

// Criterion 1: the nine-edge two-body instance is tight, sparse, and its
// induced framework (18 vertices, 51 edges) has generic rank 51.
bool criterion1(std::string& detail) {
    const auto g = example1();
    bool ok = expect(is_tight(g), "not tight", detail);
    const auto sv = check_sparsity_bruteforce(g);
    ok &= expect(sv.sparse, "not sparse", detail);
    const auto f = induce_bar_joint(g);
    ok &= expect(f.graph.vertex_count() == 18, "induced vertex count != 18", detail);
    ok &= expect(f.graph.edge_count() == 51, "induced edge count != 51", detail);
    RankConfig cfg;  // prime 2^61-1, 3 trials
    const auto rv = generic_rank(f, cfg);
    ok &= expect(rv.rank == 51, "rank != 51", detail);
    ok &= expect(rv.minimally_rigid, "not minimally rigid", detail);
    return ok;
}

// Criterion 2: collinear gains fail sparsity with the full nine-edge witness
// and the generic rank stays at most 50.
bool criterion2(std::string& detail) {
    const auto g = example1_bad();
    const auto sv = check_sparsity_bruteforce(g);
    bool ok = expect(!sv.sparse, "unexpectedly sparse", detail);
    ok &= expect(sv.witness.has_value() && sv.witness->size() == 9,
                 "witness is not the full nine-edge set", detail);
    ok &= expect(sv.witness && gain_space_rank(*sv.witness) == 1, "witness gain rank != 1", detail);
    const auto rv = generic_rank(induce_bar_joint(g));
    ok &= expect(rv.rank <= 50, "rank exceeds 50", detail);
    ok &= expect(!rv.minimally_rigid, "unexpectedly rigid", detail);
    return ok;
}

// Criterion 3: the loop bound. Gain rank 3 gives a minimally rigid one-body
// framework (rank 15 on 6 vertices); gain rank <= 1 fails sparsity and the
// rank drops to at most 14.
bool criterion3(std::string& detail) {
    bool ok = true;
    {
        const auto g = p3({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
        ok &= expect(check_sparsity_bruteforce(g).sparse, "rank-3 loops not sparse", detail);
        const auto f = induce_bar_joint(g);
        ok &= expect(f.graph.vertex_count() == 6, "induced vertex count != 6", detail);
        const auto rv = generic_rank(f);
        ok &= expect(rv.rank == 15 && rv.minimally_rigid, "rank-3 loops not rank 15", detail);
    }
    for (const auto& g : {p3({1, 0, 0}, {2, 0, 0}, {3, 0, 0}), p3({}, {}, {})}) {
        ok &= expect(gain_space_rank(g) <= 1, "loop gain rank not <= 1", detail);
        ok &= expect(!check_sparsity_bruteforce(g).sparse, "low-rank loops passed sparsity", detail);
        const auto rv = generic_rank(induce_bar_joint(g));
        ok &= expect(rv.rank <= 14, "low-rank loops exceed rank 14", detail);
    }
    return ok;
}

// Criterion 4: over >= 500 random graphs (<= 3 bodies, <= 12 edges, mixed
// gains), counting verdict (tight and sparse) iff full generic rank, at 3
// independent rank seeds; zero disagreements.
bool criterion4(std::string& detail) {
    SplitMix64 rng(20260810);
    int disagreements = 0;
    for (int i = 0; i < 500; ++i) {
        const auto g = random_mixed_graph(rng, 3, 12);
        const auto sv = check_sparsity_bruteforce(g);
        const bool counts = sv.tight && sv.sparse;
        const auto f = induce_bar_joint(g);
        for (int s = 0; s < 3; ++s) {
            RankConfig cfg;
            cfg.trials = 1;
            cfg.seed = derive_seed(91, static_cast<std::uint64_t>(3 * i + s));
            if (generic_rank(f, cfg).minimally_rigid != counts) ++disagreements;
        }
    }
    return expect(disagreements == 0,
                  "verdicts disagreed " + std::to_string(disagreements) + " times", detail);
}

// Criterion 5: 200 generator outputs (2..6 bodies) pass the paired check,
// reduce in exactly |V|-1 steps, and their traces replay exactly.
bool criterion5(std::string& detail) {
    for (int i = 0; i < 200; ++i) {
        const int bodies = 2 + i % 5;
        const auto g = random_tight_graph(bodies, derive_seed(92, static_cast<std::uint64_t>(i)));
        RankConfig cfg;
        cfg.seed = derive_seed(93, static_cast<std::uint64_t>(i));
        if (!is_tight(g) || !graph_is_sparse(g, {}, cfg)) {
            return expect(false, "generator output failed counts at item " + std::to_string(i),
                          detail);
        }
        if (!generic_rank(induce_bar_joint(g), cfg).minimally_rigid) {
            return expect(false, "generator output failed the rank check at item " + std::to_string(i),
                          detail);
        }
        ReduceConfig rcfg;
        rcfg.rank = cfg;
        rcfg.verify_input = false;
        const auto trace = reduce_to_seed(g, rcfg);
        if (trace.steps.size() != g.body_count() - 1) {
            return expect(false, "trace length mismatch at item " + std::to_string(i), detail);
        }
        if (!replay_trace(trace).same_labeled_graph(g)) {
            return expect(false, "replay mismatch at item " + std::to_string(i), detail);
        }
    }
    return true;
}

// Criterion 6: brute-force and connected-subset engines agree on 200 random
// graphs with at most 10 edges.
bool criterion6(std::string& detail) {
    SplitMix64 rng(20260811);
    for (int i = 0; i < 200; ++i) {
        const auto g = random_mixed_graph(rng, 4, 10);
        const auto a = check_sparsity_bruteforce(g);
        const auto b = check_sparsity_connected(g);
        if (a.sparse != b.sparse || a.tight != b.tight) {
            return expect(false, "engines disagree at item " + std::to_string(i), detail);
        }
    }
    return true;
}

// Criterion 7: the three translation vectors lie exactly in the kernel of
// every matrix assembled over the corpus.
bool criterion7(std::string& detail) {
    const PrimeField field(kMersenne61);
    SplitMix64 rng(20260812);
    std::vector<BodyBarOrbitGraph> corpus;
    corpus.push_back(example1());
    corpus.push_back(example1_bad());
    corpus.push_back(p3({1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
    corpus.push_back(p3({1, 0, 0}, {2, 0, 0}, {3, 0, 0}));
    for (int i = 0; i < 150; ++i) corpus.push_back(random_mixed_graph(rng, 4, 12));
    for (int i = 0; i < 20; ++i) {
        corpus.push_back(random_tight_graph(2 + i % 4, derive_seed(94, static_cast<std::uint64_t>(i))));
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto f = induce_bar_joint(corpus[i]);
        const auto pos = sample_positions(f.graph, field, derive_seed(95, i));
        if (!translations_in_kernel(assemble_matrix(f.graph, pos, field))) {
            return expect(false, "kernel violation at corpus item " + std::to_string(i), detail);
        }
    }
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"nine-edge two-body reproduction (tight, sparse, rank 51)", 1.0, criterion1},
        {"collinear negative control (witness + rank <= 50)", 1.0, criterion2},
        {"loop bound (rank-3 rigid at 15, rank<=1 fails at <=14)", 1.0, criterion3},
        {"counting <=> generic rank on 500 random graphs, 3 seeds", 300.0, criterion4},
        {"200 generator outputs: check, reduce |V|-1 steps, exact replay", 300.0, criterion5},
        {"brute vs connected agreement on 200 graphs", 120.0, criterion6},
        {"translation kernel holds on every assembled corpus matrix", 300.0, criterion7},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over budget: ") +
                      std::to_string(secs) + "s > " + std::to_string(c.budget_seconds) + "s";
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %zu: %s  [%.2f s]%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                    c.name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
