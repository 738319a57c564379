#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "torbar/constructions.hpp"
#include "torbar/cycle_space.hpp"
#include "torbar/graph.hpp"
#include "torbar/rigidity.hpp"
#include "torbar/rng.hpp"
#include "torbar/sparsity.hpp"

namespace torbar {

// Random mixed corpus item: valid and invalid gain assignments on purpose.
// Gain styles per edge: zero, signed axis unit, uniform small box, or a
// multiple of (1,0,0) (collinear families keep the gain rank low).
inline BodyBarOrbitGraph random_mixed_graph(SplitMix64& rng, int max_bodies, int max_edges) {
    const int nb = static_cast<int>(rng.range(1, max_bodies));
    const int ne = static_cast<int>(rng.range(1, max_edges));
    BodyBarOrbitGraph g;
    for (int b = 0; b < nb; ++b) g.add_body("B" + std::to_string(b));
    for (int i = 0; i < ne; ++i) {
        const BodyIndex u = static_cast<BodyIndex>(rng.below(static_cast<std::uint64_t>(nb)));
        const BodyIndex v = static_cast<BodyIndex>(rng.below(static_cast<std::uint64_t>(nb)));
        GainVector m;
        switch (rng.below(4)) {
            case 0: break;  // zero gain
            case 1: {
                const int axis = static_cast<int>(rng.below(3));
                m.c[static_cast<std::size_t>(axis)] = rng.below(2) ? 1 : -1;
                break;
            }
            case 2:
                m = GainVector{rng.range(-2, 2), rng.range(-2, 2), rng.range(-2, 2)};
                break;
            default:
                m = GainVector{rng.range(1, 3), 0, 0};
                break;
        }
        g.add_edge(u, v, m);
    }
    return g;
}

struct PropertyResult {
    std::string name;
    bool pass = true;
    std::uint64_t cases = 0;
    std::string detail;  // first failure, or empty
};

struct HarnessReport {
    std::vector<PropertyResult> properties;
    int exit3_count = 0;  // combinatorial-vs-linear disagreements observed
    bool all_pass = true;
};

struct HarnessOptions {
    int corpus_size = 50;
    int max_bodies = 4;
    std::uint64_t seed = 1;
    SparsityCaps caps{};
    RankConfig rank{};
    std::ostream* progress = nullptr;
};

namespace detail {

inline void harness_note(const HarnessOptions& opt, const PropertyResult& r) {
    if (opt.progress) {
        (*opt.progress) << (r.pass ? "[ok]   " : "[FAIL] ") << r.name << " (" << r.cases
                        << " cases)" << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
    }
}

inline void harness_fail(PropertyResult& r, const std::string& detail) {
    if (r.pass) {
        r.pass = false;
        r.detail = detail;
    }
}

// Rebuilds with a permutation of the edge ids (and a rotation of the body
// insertion order); the gain rank must not notice.
inline BodyBarOrbitGraph relabeled_copy(const BodyBarOrbitGraph& g, SplitMix64& rng,
                                        std::vector<std::pair<EdgeId, EdgeId>>& id_map_out) {
    std::vector<EdgeId> ids;
    for (const OrientedEdge& e : g.edges()) ids.push_back(e.id);
    std::vector<EdgeId> shuffled = ids;
    for (std::size_t i = 0; i + 1 < shuffled.size(); ++i) {
        const std::size_t k = i + rng.below(shuffled.size() - i);
        std::swap(shuffled[i], shuffled[k]);
    }
    BodyBarOrbitGraph out(g.gain_cap());
    const std::size_t start = g.body_count() ? rng.below(g.body_count()) : 0;
    for (std::size_t i = 0; i < g.body_count(); ++i) {
        out.add_body(g.body_name(static_cast<BodyIndex>((start + i) % g.body_count())));
    }
    id_map_out.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const OrientedEdge& e = g.edge(ids[i]);
        out.add_edge(g.body_name(e.tail), g.body_name(e.head), e.gain, shuffled[i]);
        id_map_out.emplace_back(ids[i], shuffled[i]);
    }
    return out;
}

inline EdgeSubset random_subset(const BodyBarOrbitGraph& g, SplitMix64& rng) {
    std::vector<EdgeId> ids;
    for (const OrientedEdge& e : g.edges()) {
        if (rng.below(2)) ids.push_back(e.id);
    }
    if (ids.empty()) ids.push_back(g.edges()[rng.below(g.edge_count())].id);
    return EdgeSubset(g, std::move(ids));
}

}  // namespace detail

// Gain-rank invariance under edge-id relabeling (10 relabelings per graph).
inline PropertyResult prop_gain_rank_relabel(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "gain-rank-relabel-invariance";
    SplitMix64 rng(derive_seed(opt.seed, 11));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 6, 20);
        const int want = gain_space_rank(g);
        for (int t = 0; t < 10; ++t) {
            std::vector<std::pair<EdgeId, EdgeId>> map;
            const BodyBarOrbitGraph g2 = detail::relabeled_copy(g, rng, map);
            ++r.cases;
            if (gain_space_rank(g2) != want) {
                detail::harness_fail(r, "relabeling changed the gain rank on item " + std::to_string(i));
            }
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Y subset of Y' implies rank(Y) <= rank(Y').
inline PropertyResult prop_gain_rank_monotone(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "gain-rank-monotonicity";
    SplitMix64 rng(derive_seed(opt.seed, 12));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 6, 20);
        const EdgeSubset big = detail::random_subset(g, rng);
        std::vector<EdgeId> small_ids;
        for (EdgeId id : big.ids()) {
            if (rng.below(2)) small_ids.push_back(id);
        }
        if (small_ids.empty()) small_ids.push_back(big.ids()[0]);
        ++r.cases;
        if (gain_space_rank(EdgeSubset(g, small_ids)) > gain_space_rank(big)) {
            detail::harness_fail(r, "subset rank exceeded superset rank on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Reversing stored orientations never changes any subset's gain rank.
inline PropertyResult prop_gain_rank_reversal(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "gain-rank-reversal-invariance";
    SplitMix64 rng(derive_seed(opt.seed, 13));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 6, 20);
        BodyBarOrbitGraph g2 = g;
        for (const OrientedEdge& e : g.edges()) {
            if (rng.below(2)) g2.reverse_edge(e.id);
        }
        const EdgeSubset y = detail::random_subset(g, rng);
        ++r.cases;
        if (gain_space_rank(y) != gain_space_rank(EdgeSubset(g2, y.ids()))) {
            detail::harness_fail(r, "reversal changed a subset's gain rank on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Generators of Y = concatenation of the generators of its components.
inline PropertyResult prop_generator_additivity(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "generator-component-additivity";
    SplitMix64 rng(derive_seed(opt.seed, 14));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 6, 20);
        const EdgeSubset y = detail::random_subset(g, rng);
        std::vector<GainVector> concat;
        for (const EdgeSubset& comp : connected_components(y)) {
            for (const GainVector& m : cycle_gain_generators(comp)) concat.push_back(m);
        }
        ++r.cases;
        if (concat != cycle_gain_generators(y)) {
            detail::harness_fail(r, "component generators differ on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Sparsity oracle equivalence on small graphs: the enumerated verdict, the
// matroid rank verdict, and the minimal-rigidity verdict (with tightness)
// must all line up, at three independent rank seeds.
inline PropertyResult prop_oracle_equivalence(const HarnessOptions& opt, int& exit3_count) {
    PropertyResult r;
    r.name = "sparsity-oracle-equivalence";
    SplitMix64 rng(derive_seed(opt.seed, 15));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 3, 12);
        const SparsityVerdict brute = check_sparsity_bruteforce(g, opt.caps.brute_cap);
        ++r.cases;
        for (int s = 0; s < 3; ++s) {
            RankConfig cfg = opt.rank;
            cfg.seed = derive_seed(opt.seed, 1000 + static_cast<std::uint64_t>(3 * i + s));
            cfg.trials = 1;
            const bool indep = independence_matroid(g, EdgeSubset::full(g), cfg);
            if (indep != brute.sparse) {
                ++exit3_count;
                detail::harness_fail(r, "matroid oracle disagreed with enumeration on item " +
                                            std::to_string(i));
            }
            const RigidityVerdict lin = generic_rank(induce_bar_joint(g), cfg);
            if (lin.minimally_rigid != (brute.tight && brute.sparse)) {
                ++exit3_count;
                detail::harness_fail(r, "rank verdict disagreed with counts on item " + std::to_string(i));
            }
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Brute-force and connected-only enumeration agree on both booleans.
inline PropertyResult prop_pruning_agreement(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "pruning-agreement";
    SplitMix64 rng(derive_seed(opt.seed, 16));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 4, 10);
        const SparsityVerdict a = check_sparsity_bruteforce(g, opt.caps.brute_cap);
        const SparsityVerdict b = check_sparsity_connected(g, opt.caps.connected_cap);
        ++r.cases;
        if (a.sparse != b.sparse || a.tight != b.tight) {
            detail::harness_fail(r, "engines disagreed on item " + std::to_string(i));
        }
        if (!a.sparse && a.witness && deficiency(*a.witness) >= 0) {
            detail::harness_fail(r, "brute witness is not a violation on item " + std::to_string(i));
        }
        if (!b.sparse && b.witness && deficiency(*b.witness) >= 0) {
            detail::harness_fail(r, "connected witness is not a violation on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Tight + sparse forces gain rank >= 2 on the full edge set.
inline PropertyResult prop_tight_gain_rank(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "tight-sparse-gain-rank";
    SplitMix64 rng(derive_seed(opt.seed, 17));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const int bodies = 1 + static_cast<int>(rng.below(3));
        const BodyBarOrbitGraph g =
            random_tight_graph(bodies, derive_seed(opt.seed, 2000 + static_cast<std::uint64_t>(i)));
        ++r.cases;
        if (gain_space_rank(g) < 2) {
            detail::harness_fail(r, "tight sparse graph with gain rank < 2 on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Deleting any edge of a sparse graph leaves a sparse graph.
inline PropertyResult prop_downward_closure(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "sparsity-downward-closure";
    SplitMix64 rng(derive_seed(opt.seed, 18));
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 3, 10);
        if (!check_sparsity_bruteforce(g, opt.caps.brute_cap).sparse) continue;
        for (const OrientedEdge& e : g.edges()) {
            BodyBarOrbitGraph g2 = g;
            g2.remove_edge(e.id);
            if (g2.edge_count() == 0) continue;
            ++r.cases;
            if (!check_sparsity_bruteforce(g2, opt.caps.brute_cap).sparse) {
                detail::harness_fail(r, "edge deletion broke sparsity on item " + std::to_string(i));
            }
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// The three translation vectors annihilate every assembled matrix.
inline PropertyResult prop_translation_kernel(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "translation-kernel";
    SplitMix64 rng(derive_seed(opt.seed, 19));
    const PrimeField field(opt.rank.prime);
    for (int i = 0; i < opt.corpus_size; ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 4, 14);
        const InducedFramework f = induce_bar_joint(g);
        const FieldPositions pos =
            sample_positions(f.graph, field, derive_seed(opt.seed, 3000 + static_cast<std::uint64_t>(i)));
        ++r.cases;
        if (!translations_in_kernel(assemble_matrix(f.graph, pos, field))) {
            detail::harness_fail(r, "translation vector escaped the kernel on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Removing one bar from a minimally rigid instance drops the rank exactly 1.
inline PropertyResult prop_rank_monotonicity(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "rank-drop-on-bar-removal";
    SplitMix64 rng(derive_seed(opt.seed, 20));
    for (int i = 0; i < std::max(1, opt.corpus_size / 5); ++i) {
        const int bodies = 2 + static_cast<int>(rng.below(2));
        const BodyBarOrbitGraph g =
            random_tight_graph(bodies, derive_seed(opt.seed, 4000 + static_cast<std::uint64_t>(i)));
        RankConfig cfg = opt.rank;
        cfg.seed = derive_seed(opt.seed, 4100 + static_cast<std::uint64_t>(i));
        InducedFramework f = induce_bar_joint(g);
        const RigidityVerdict before = generic_rank(f, cfg);
        if (!before.minimally_rigid) {
            detail::harness_fail(r, "generator output not minimally rigid on item " + std::to_string(i));
            continue;
        }
        // Drop one bar row from the same framework.
        const EdgeId victim = g.edges()[rng.below(g.edge_count())].id;
        f.graph.remove_edge(f.bar_of_hedge.at(victim));
        const RigidityVerdict after = generic_rank(f, cfg);
        ++r.cases;
        if (after.rank != before.rank - 1) {
            detail::harness_fail(r, "bar removal did not drop the rank by 1 on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Identical (graph, prime, trials, seed) inputs give identical verdicts.
inline PropertyResult prop_seed_determinism(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "seed-determinism";
    SplitMix64 rng(derive_seed(opt.seed, 21));
    for (int i = 0; i < std::max(1, opt.corpus_size / 5); ++i) {
        const BodyBarOrbitGraph g = random_mixed_graph(rng, 3, 10);
        RankConfig cfg = opt.rank;
        cfg.seed = derive_seed(opt.seed, 5000 + static_cast<std::uint64_t>(i));
        const RigidityVerdict a = generic_rank(induce_bar_joint(g), cfg);
        const RigidityVerdict b = generic_rank(induce_bar_joint(g), cfg);
        ++r.cases;
        if (a.rank != b.rank || a.minimally_rigid != b.minimally_rigid || a.dof != b.dof) {
            detail::harness_fail(r, "verdicts differ across identical runs on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// A valid pinch preserves tight+sparse and full generic rank.
inline PropertyResult prop_pinch_preserves(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "pinch-preserves-verdicts";
    SplitMix64 rng(derive_seed(opt.seed, 22));
    for (int i = 0; i < std::max(1, opt.corpus_size / 2); ++i) {
        const int bodies = 1 + static_cast<int>(rng.below(3));
        const std::uint64_t gseed = derive_seed(opt.seed, 6000 + static_cast<std::uint64_t>(i));
        const BodyBarOrbitGraph g = random_tight_graph(bodies, gseed);
        // One more sampled pinch on top.
        const BodyBarOrbitGraph g2 = random_tight_graph(bodies + 1, gseed);
        RankConfig cfg = opt.rank;
        cfg.seed = derive_seed(opt.seed, 6100 + static_cast<std::uint64_t>(i));
        ++r.cases;
        if (!is_tight(g2) || !graph_is_sparse(g2, opt.caps, cfg)) {
            detail::harness_fail(r, "pinch broke the counts on item " + std::to_string(i));
            continue;
        }
        if (!generic_rank(induce_bar_joint(g2), cfg).minimally_rigid) {
            detail::harness_fail(r, "pinch broke full rank on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// Generator outputs reduce to the seed in |V| - 1 steps and replay exactly.
inline PropertyResult prop_reduction_roundtrip(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "reduction-roundtrip";
    SplitMix64 rng(derive_seed(opt.seed, 23));
    for (int i = 0; i < std::max(1, opt.corpus_size / 5); ++i) {
        const int bodies = 2 + static_cast<int>(rng.below(3));
        const BodyBarOrbitGraph g =
            random_tight_graph(bodies, derive_seed(opt.seed, 7000 + static_cast<std::uint64_t>(i)));
        ReduceConfig cfg;
        cfg.caps = opt.caps;
        cfg.rank = opt.rank;
        const ReductionTrace trace = reduce_to_seed(g, cfg);
        ++r.cases;
        if (trace.steps.size() != g.body_count() - 1) {
            detail::harness_fail(r, "trace length is not |V|-1 on item " + std::to_string(i));
            continue;
        }
        if (!replay_trace(trace).same_labeled_graph(g)) {
            detail::harness_fail(r, "replay did not reproduce the graph on item " + std::to_string(i));
        }
    }
    detail::harness_note(opt, r);
    return r;
}

// admissible(H, e, f) ignores stored orientations of e and f.
inline PropertyResult prop_admissible_orientation(const HarnessOptions& opt) {
    PropertyResult r;
    r.name = "admissible-orientation-invariance";
    SplitMix64 rng(derive_seed(opt.seed, 24));
    AdmissibleConfig acfg;
    acfg.caps = opt.caps;
    acfg.rank = opt.rank;
    for (int i = 0; i < std::max(1, opt.corpus_size / 5); ++i) {
        const BodyBarOrbitGraph g =
            random_tight_graph(2 + static_cast<int>(rng.below(2)),
                               derive_seed(opt.seed, 8000 + static_cast<std::uint64_t>(i)));
        // Any adjacent non-loop pair will do.
        std::vector<std::pair<EdgeId, EdgeId>> pairs;
        for (const OrientedEdge& e : g.edges()) {
            for (const OrientedEdge& f : g.edges()) {
                if (e.id >= f.id || e.is_loop() || f.is_loop()) continue;
                const bool adjacent = e.tail == f.tail || e.tail == f.head || e.head == f.tail ||
                                      e.head == f.head;
                if (adjacent) pairs.emplace_back(e.id, f.id);
            }
        }
        if (pairs.empty()) continue;
        const auto [eid, fid] = pairs[rng.below(pairs.size())];
        const bool want = admissible(g, eid, fid, acfg);
        for (int mask = 1; mask < 4; ++mask) {
            BodyBarOrbitGraph g2 = g;
            if (mask & 1) g2.reverse_edge(eid);
            if (mask & 2) g2.reverse_edge(fid);
            ++r.cases;
            if (admissible(g2, eid, fid, acfg) != want) {
                detail::harness_fail(r, "reorientation changed admissibility on item " + std::to_string(i));
            }
        }
    }
    detail::harness_note(opt, r);
    return r;
}

inline HarnessReport run_harness(const HarnessOptions& opt) {
    HarnessReport report;
    report.properties.push_back(prop_gain_rank_relabel(opt));
    report.properties.push_back(prop_gain_rank_monotone(opt));
    report.properties.push_back(prop_gain_rank_reversal(opt));
    report.properties.push_back(prop_generator_additivity(opt));
    report.properties.push_back(prop_oracle_equivalence(opt, report.exit3_count));
    report.properties.push_back(prop_pruning_agreement(opt));
    report.properties.push_back(prop_tight_gain_rank(opt));
    report.properties.push_back(prop_downward_closure(opt));
    report.properties.push_back(prop_translation_kernel(opt));
    report.properties.push_back(prop_rank_monotonicity(opt));
    report.properties.push_back(prop_seed_determinism(opt));
    report.properties.push_back(prop_pinch_preserves(opt));
    report.properties.push_back(prop_reduction_roundtrip(opt));
    report.properties.push_back(prop_admissible_orientation(opt));
    for (const PropertyResult& p : report.properties) report.all_pass = report.all_pass && p.pass;
    return report;
}

}  // namespace torbar
