#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "torbar/cycle_space.hpp"
#include "torbar/errors.hpp"
#include "torbar/graph.hpp"
#include "torbar/induced.hpp"
#include "torbar/rigidity.hpp"
#include "torbar/rng.hpp"
#include "torbar/sparsity.hpp"

namespace torbar {

namespace detail {

inline std::string debug_dump(const BodyBarOrbitGraph& g) {
    std::string out = "bodies:";
    for (const std::string& name : g.body_names()) out += " " + name;
    out += "; edges:";
    for (const OrientedEdge& e : g.edges()) {
        out += " " + std::to_string(e.id) + ":" + g.body_name(e.tail) + "->" + g.body_name(e.head) +
               to_string(e.gain);
    }
    return out;
}

}  // namespace detail

struct PinchSpec;

namespace detail {

// A pinched edge normalized so its anchor endpoint comes first.
struct PinchedView {
    BodyIndex anchor;
    BodyIndex other;
    GainVector gain;  // from anchor to other
};

template <class Pinched>
PinchedView pinched_view(const BodyBarOrbitGraph& h, const Pinched& p) {
    const OrientedEdge& e = h.edge(p.edge_id);
    if (!p.anchor || *p.anchor == h.body_name(e.tail)) return {e.tail, e.head, e.gain};
    if (*p.anchor == h.body_name(e.head)) return {e.head, e.tail, -e.gain};
    throw DomainError("pinch anchor \"" + *p.anchor + "\" is not an endpoint of edge " +
                      std::to_string(p.edge_id));
}

}  // namespace detail

// Gain-modified edge pinch: adds one body z, splits j existing edges through
// z, links z to other bodies with 6-n plain edges, and puts n-j loops on z.
// The split halves of a pinched edge {u, v; m} are {u, z; first_half} and
// {z, v; m - first_half}, where u is the anchor body (stored tail when the
// anchor is unset; an explicit anchor keeps replay exact even if the edge
// was re-created with flipped orientation). Optional ids/name pin the
// created elements for exact trace replay; unset fields are completed
// deterministically.
struct PinchSpec {
    int n = 0;
    int j = 0;

    struct Pinched {
        EdgeId edge_id = 0;
        GainVector first_half;
        std::optional<std::string> anchor;  // endpoint body that receives half 1
        std::optional<EdgeId> half1_id;
        std::optional<EdgeId> half2_id;
    };
    struct Loop {
        GainVector gain;
        std::optional<EdgeId> id;
    };
    struct NewEdge {
        std::string target;
        GainVector gain;  // oriented out of z
        std::optional<EdgeId> id;
    };

    std::vector<Pinched> pinched;    // size j
    std::vector<Loop> loops;         // size n - j
    std::vector<NewEdge> new_edges;  // size 6 - n
    std::optional<std::string> new_body;
};

struct PinchValidation {
    bool ok = true;
    std::vector<std::string> violations;
};

inline PinchValidation validate_pinch(const BodyBarOrbitGraph& h, const PinchSpec& spec) {
    PinchValidation out;
    auto fail = [&](std::string msg) {
        out.ok = false;
        out.violations.push_back(std::move(msg));
    };

    if (spec.j != static_cast<int>(spec.pinched.size())) fail("j does not match pinched list size");
    if (spec.n - spec.j != static_cast<int>(spec.loops.size())) fail("loop list size must be n - j");
    if (6 - spec.n != static_cast<int>(spec.new_edges.size())) fail("new edge list size must be 6 - n");
    if (!(0 <= spec.j && spec.j <= spec.n && spec.n <= 5)) fail("need 0 <= j <= n <= 5");
    if (spec.n - spec.j > 3) fail("at most 3 loops (n - j <= 3)");
    if (!out.ok) return out;

    std::set<EdgeId> pinch_ids;
    for (const auto& p : spec.pinched) {
        if (!h.has_edge(p.edge_id)) {
            fail("pinched edge id not in graph: " + std::to_string(p.edge_id));
            continue;
        }
        if (!pinch_ids.insert(p.edge_id).second) {
            fail("pinched edge id repeated: " + std::to_string(p.edge_id));
        }
        if (p.anchor) {
            const OrientedEdge& e = h.edge(p.edge_id);
            if (*p.anchor != h.body_name(e.tail) && *p.anchor != h.body_name(e.head)) {
                fail("pinch anchor \"" + *p.anchor + "\" is not an endpoint of edge " +
                     std::to_string(p.edge_id));
            }
        }
    }
    for (const auto& ne : spec.new_edges) {
        if (!h.has_body(ne.target)) fail("new edge target not in graph: " + ne.target);
    }
    if (spec.new_body && h.has_body(*spec.new_body)) {
        fail("new body name already in use: " + *spec.new_body);
    }
    if (!out.ok) return out;

    const std::int64_t cap = h.gain_cap();
    auto check_cap = [&](const GainVector& m, const char* what) {
        for (std::int64_t v : m.c) {
            if (v > cap || v < -cap) fail(std::string(what) + " gain exceeds cap: " + to_string(m));
        }
    };
    for (const auto& p : spec.pinched) {
        check_cap(p.first_half, "pinched first-half");
        check_cap(detail::pinched_view(h, p).gain - p.first_half, "pinched second-half");
    }
    for (const auto& l : spec.loops) check_cap(l.gain, "loop");
    for (const auto& ne : spec.new_edges) check_cap(ne.gain, "new edge");
    if (!out.ok) return out;

    // Explicit ids must not collide with surviving edges or each other.
    std::set<EdgeId> used;
    for (const OrientedEdge& e : h.edges()) {
        if (!pinch_ids.count(e.id)) used.insert(e.id);
    }
    auto claim = [&](const std::optional<EdgeId>& id, const char* what) {
        if (!id) return;
        if (*id < 0) fail(std::string(what) + " id must be non-negative");
        if (!used.insert(*id).second) fail(std::string(what) + " id collides: " + std::to_string(*id));
    };
    for (const auto& p : spec.pinched) {
        claim(p.half1_id, "half");
        claim(p.half2_id, "half");
    }
    for (const auto& l : spec.loops) claim(l.id, "loop");
    for (const auto& ne : spec.new_edges) claim(ne.id, "new edge");
    if (!out.ok) return out;

    // Local sparsity: every subset of the created edges (both halves of each
    // pinched edge included) must satisfy the count.
    std::string z = spec.new_body.value_or("z");
    std::set<std::string> touched;
    for (const auto& p : spec.pinched) {
        const OrientedEdge& e = h.edge(p.edge_id);
        touched.insert(h.body_name(e.tail));
        touched.insert(h.body_name(e.head));
    }
    for (const auto& ne : spec.new_edges) touched.insert(ne.target);
    while (touched.count(z)) z += "_";

    BodyBarOrbitGraph local(cap);
    local.add_body(z);
    for (const std::string& name : touched) local.add_body(name);
    for (const auto& p : spec.pinched) {
        const detail::PinchedView view = detail::pinched_view(h, p);
        local.add_edge(h.body_name(view.anchor), z, p.first_half);
        local.add_edge(z, h.body_name(view.other), view.gain - p.first_half);
    }
    for (const auto& ne : spec.new_edges) local.add_edge(z, ne.target, ne.gain);
    for (const auto& l : spec.loops) local.add_edge(z, z, l.gain);

    const SparsityVerdict local_verdict = check_sparsity_bruteforce(local, local.edge_count());
    if (!local_verdict.sparse) {
        std::string ids = "{";
        for (EdgeId id : local_verdict.witness->ids()) {
            if (ids.size() > 1) ids += ",";
            ids += std::to_string(id);
        }
        ids += "}";
        fail("new edges violate the sparsity count on local edge subset " + ids);
    }
    return out;
}

// Fills in the deterministic defaults: a fresh body name "B<k>" and new edge
// ids counted up from the next free id, in the order
// (half1, half2) per pinched edge, then new edges, then loops.
inline PinchSpec complete_pinch_spec(const BodyBarOrbitGraph& h, PinchSpec spec) {
    if (!spec.new_body) {
        int k = 0;
        while (h.has_body("B" + std::to_string(k))) ++k;
        spec.new_body = "B" + std::to_string(k);
    }
    std::set<EdgeId> used;
    std::set<EdgeId> removed;
    for (const auto& p : spec.pinched) removed.insert(p.edge_id);
    for (const OrientedEdge& e : h.edges()) {
        if (!removed.count(e.id)) used.insert(e.id);
    }
    auto note = [&](const std::optional<EdgeId>& id) {
        if (id) used.insert(*id);
    };
    for (const auto& p : spec.pinched) {
        note(p.half1_id);
        note(p.half2_id);
    }
    for (const auto& ne : spec.new_edges) note(ne.id);
    for (const auto& l : spec.loops) note(l.id);

    EdgeId next = h.next_edge_id();
    auto fresh = [&]() {
        while (used.count(next)) ++next;
        used.insert(next);
        return next;
    };
    for (auto& p : spec.pinched) {
        if (!p.half1_id) p.half1_id = fresh();
        if (!p.half2_id) p.half2_id = fresh();
    }
    for (auto& ne : spec.new_edges) {
        if (!ne.id) ne.id = fresh();
    }
    for (auto& l : spec.loops) {
        if (!l.id) l.id = fresh();
    }
    return spec;
}

// Applies a validated pinch: one extra body, exactly six more edges.
inline BodyBarOrbitGraph apply_pinch(const BodyBarOrbitGraph& h, const PinchSpec& raw) {
    const PinchValidation check = validate_pinch(h, raw);
    if (!check.ok) throw ValidationError("pinch spec failed validation", check.violations);
    const PinchSpec spec = complete_pinch_spec(h, raw);

    BodyBarOrbitGraph g = h;
    for (const auto& p : spec.pinched) g.remove_edge(p.edge_id);
    const BodyIndex z = g.add_body(*spec.new_body);
    for (const auto& p : spec.pinched) {
        const detail::PinchedView view = detail::pinched_view(h, p);
        g.add_edge(view.anchor, z, p.first_half, p.half1_id);
        g.add_edge(z, view.other, view.gain - p.first_half, p.half2_id);
    }
    for (const auto& ne : spec.new_edges) g.add_edge(z, g.body_index(ne.target), ne.gain, ne.id);
    for (const auto& l : spec.loops) g.add_edge(z, z, l.gain, l.id);
    return g;
}

// ---------------------------------------------------------------------------
// Bar-joint level moves.

struct VertexAdditionSpec {
    struct Target {
        std::string vertex;
        GainVector gain;  // oriented out of the new vertex
    };
    std::array<Target, 3> edges;
    std::optional<std::string> new_vertex;
};

struct EdgeSplitSpec {
    struct Target {
        std::string vertex;
        GainVector gain;  // oriented out of the new vertex
    };
    std::array<Target, 2> extra_edges;
    std::optional<std::string> new_vertex;
};

namespace detail {

inline std::string fresh_vertex_name(const BarJointOrbitGraph& g,
                                     const std::optional<std::string>& wanted) {
    if (wanted) return *wanted;
    int k = 0;
    while (true) {
        std::string name = "v" + std::to_string(k);
        bool used = false;
        for (const std::string& n : g.vertex_names()) {
            if (n == name) {
                used = true;
                break;
            }
        }
        if (!used) return name;
        ++k;
    }
}

// Gain restrictions for edges added at a single new vertex:
//  (i) two added edges to the same target need distinct gains;
// (ii) three or more to the same target additionally need a gain space of
//      dimension >= 2 on that parallel class.
inline void check_new_vertex_gains(const std::vector<std::pair<VertexIndex, GainVector>>& added,
                                   const BarJointOrbitGraph& g) {
    std::vector<std::string> violations;
    std::map<VertexIndex, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < added.size(); ++i) groups[added[i].first].push_back(i);
    for (const auto& [target, members] : groups) {
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                if (added[members[a]].second == added[members[b]].second) {
                    violations.push_back("edges " + std::to_string(members[a]) + " and " +
                                         std::to_string(members[b]) + " to vertex " +
                                         g.vertex_name(target) + " repeat gain " +
                                         to_string(added[members[a]].second));
                }
            }
        }
        if (members.size() >= 3) {
            std::vector<std::array<std::int64_t, 3>> diffs;
            for (std::size_t a = 1; a < members.size(); ++a) {
                diffs.push_back((added[members[a]].second - added[members[0]].second).c);
            }
            if (lattice_rank(diffs) < 2) {
                std::string trip;
                for (std::size_t i : members) trip += (trip.empty() ? "" : ",") + std::to_string(i);
                violations.push_back("edges {" + trip + "} to vertex " + g.vertex_name(target) +
                                     " span a gain space of dimension < 2");
            }
        }
    }
    if (!violations.empty()) {
        throw ValidationError("new-vertex gain restrictions violated", violations);
    }
}

}  // namespace detail

// Adds one vertex with three edges into the graph; rejects gain assignments
// that force degenerate geometry.
inline BarJointOrbitGraph vertex_addition(const BarJointOrbitGraph& g,
                                          const VertexAdditionSpec& spec) {
    std::vector<std::pair<VertexIndex, GainVector>> added;
    for (const auto& t : spec.edges) added.emplace_back(g.vertex_index(t.vertex), t.gain);
    detail::check_new_vertex_gains(added, g);

    BarJointOrbitGraph out = g;
    const VertexIndex v0 = out.add_vertex(detail::fresh_vertex_name(g, spec.new_vertex));
    for (const auto& [target, gain] : added) out.add_edge(v0, target, gain);
    return out;
}

// Replaces edge e = {v1, v2; m} by a new vertex v0 with the four edges
// {v1, v0; 0}, {v0, v2; m} and two further edges given by the spec.
inline BarJointOrbitGraph edge_split(const BarJointOrbitGraph& g, EdgeId e,
                                     const EdgeSplitSpec& spec) {
    const OrientedEdge split = g.edge(e);
    std::vector<std::pair<VertexIndex, GainVector>> added;
    added.emplace_back(split.tail, GainVector{});
    added.emplace_back(split.head, split.gain);
    for (const auto& t : spec.extra_edges) added.emplace_back(g.vertex_index(t.vertex), t.gain);
    detail::check_new_vertex_gains(added, g);

    BarJointOrbitGraph out = g;
    out.remove_edge(e);
    const VertexIndex v0 = out.add_vertex(detail::fresh_vertex_name(g, spec.new_vertex));
    out.add_edge(split.tail, v0, GainVector{});
    out.add_edge(v0, split.head, split.gain);
    for (const auto& t : spec.extra_edges) out.add_edge(v0, out.vertex_index(t.vertex), t.gain);
    return out;
}

// ---------------------------------------------------------------------------
// Splitting off and the reducer.

struct SplitOffResult {
    BodyBarOrbitGraph graph;
    EdgeId split_edge_id = 0;
};

// Replaces e = {u, v; m_e} and f = {u, w; m_f} (both oriented out of the
// pivot u) by the single edge h = {v, w; m_f - m_e}.
inline SplitOffResult split_off_at(const BodyBarOrbitGraph& g, BodyIndex pivot, EdgeId e_id,
                                   EdgeId f_id, std::optional<EdgeId> new_id = std::nullopt) {
    if (e_id == f_id) throw DomainError("cannot split an edge off against itself");
    const OrientedEdge& e = g.edge(e_id);
    const OrientedEdge& f = g.edge(f_id);
    if (e.is_loop() || f.is_loop()) throw DomainError("loops cannot be split off");
    if (e.tail != pivot && e.head != pivot) throw DomainError("edge not incident to pivot body");
    if (f.tail != pivot && f.head != pivot) throw DomainError("edge not incident to pivot body");

    const BodyIndex v = e.tail == pivot ? e.head : e.tail;
    const BodyIndex w = f.tail == pivot ? f.head : f.tail;
    const GainVector me = e.tail == pivot ? e.gain : -e.gain;
    const GainVector mf = f.tail == pivot ? f.gain : -f.gain;

    SplitOffResult out{g, 0};
    out.graph.remove_edge(e_id);
    out.graph.remove_edge(f_id);
    out.split_edge_id = out.graph.add_edge(v, w, mf - me, new_id);
    return out;
}

// Pivot selection for the public form: the shared endpoint, or for a parallel
// pair the name-least endpoint (independent of stored orientations).
inline BodyIndex split_pivot(const BodyBarOrbitGraph& g, EdgeId e_id, EdgeId f_id) {
    if (e_id == f_id) throw DomainError("cannot split an edge off against itself");
    const OrientedEdge& e = g.edge(e_id);
    const OrientedEdge& f = g.edge(f_id);
    if (e.is_loop() || f.is_loop()) throw DomainError("loops cannot be split off");
    std::vector<BodyIndex> common;
    for (BodyIndex b : {e.tail, e.head}) {
        if (b == f.tail || b == f.head) common.push_back(b);
    }
    std::sort(common.begin(), common.end());
    common.erase(std::unique(common.begin(), common.end()), common.end());
    if (common.empty()) throw DomainError("edges are not adjacent");
    if (common.size() == 1) return common[0];
    return g.body_name(common[0]) <= g.body_name(common[1]) ? common[0] : common[1];
}

inline BodyBarOrbitGraph split_off(const BodyBarOrbitGraph& g, EdgeId e_id, EdgeId f_id) {
    return split_off_at(g, split_pivot(g, e_id, f_id), e_id, f_id).graph;
}

struct AdmissibleConfig {
    SparsityCaps caps{};
    RankConfig rank{};
};

// A pair is admissible when the graph after splitting it off still satisfies
// the sparsity count on every subset.
inline bool admissible(const BodyBarOrbitGraph& g, EdgeId e_id, EdgeId f_id,
                       const AdmissibleConfig& cfg = {}) {
    const BodyBarOrbitGraph after = split_off(g, e_id, f_id);
    return graph_is_sparse(after, cfg.caps, cfg.rank);
}

struct ReduceConfig {
    SparsityCaps caps{};
    RankConfig rank{};
    // Admissibility probes run in the inner search loop, so they get cheaper
    // settings: a single rank sample (full rank certifies independence
    // one-sidedly, a miss only redirects the backtracking) and a lower
    // enumeration threshold with the matroid oracle above it.
    RankConfig admissible_rank{kMersenne61, 1, 0, false};
    SparsityCaps admissible_caps{18, 18};
    std::uint64_t search_node_cap = 1'000'000;
    bool verify_input = true;
};

struct ReduceStep {
    BodyBarOrbitGraph graph;
    PinchSpec spec;  // inverse pinch: applying it to `graph` restores the input
    std::string removed_body;
};

// One reduction step: picks the body s of least degree (at most 11 on tight
// sparse graphs), splits off j = deg(s) - 6 - loops(s) admissible pairs at s
// by backtracking over pair choices in edge-id order, deletes s, and returns
// the reduced graph together with the pinch that undoes the step.
inline ReduceStep reduce_step(const BodyBarOrbitGraph& h, const ReduceConfig& cfg = {}) {
    if (h.body_count() < 2) throw DomainError("reduce_step needs at least two bodies");
    if (cfg.verify_input) {
        if (!is_tight(h)) throw NotTightError("input is not tight: |E| != 6|V| - 3");
        if (!graph_is_sparse(h, cfg.caps, cfg.rank)) {
            throw NotSparseError("input violates the sparsity count");
        }
    }

    BodyIndex s = 0;
    for (BodyIndex b = 1; b < h.body_count(); ++b) {
        const int db = h.degree(b), ds = h.degree(s);
        if (db < ds || (db == ds && h.body_name(b) < h.body_name(s))) s = b;
    }
    const int deg = h.degree(s);
    const int loops = h.loop_count(s);
    const int n = deg - 6;
    const int j = n - loops;
    if (deg < 6 || deg > 11 || loops > 3 || j < 0) {
        throw ExhaustedSearchError(
            "selected body " + h.body_name(s) + " has degree " + std::to_string(deg) + " with " +
                std::to_string(loops) + " loops, outside the guaranteed bounds (bug)",
            detail::debug_dump(h));
    }

    std::vector<EdgeId> nonloops;
    for (EdgeId id : h.edges_at(s)) {
        if (!h.edge(id).is_loop()) nonloops.push_back(id);
    }

    struct SplitRec {
        EdgeId e_id, f_id;
        GainVector e_out;     // gain of e oriented out of s
        std::string e_other;  // endpoint of e away from s: half 1 re-attaches there
        EdgeId h_id;
    };
    std::vector<SplitRec> chosen;
    BodyBarOrbitGraph final_with_s;
    bool found = false;
    std::uint64_t nodes = 0;

    std::function<bool(const BodyBarOrbitGraph&, const std::vector<EdgeId>&)> dfs =
        [&](const BodyBarOrbitGraph& g, const std::vector<EdgeId>& remaining) -> bool {
        if (static_cast<int>(chosen.size()) == j) {
            final_with_s = g;
            found = true;
            return true;
        }
        for (std::size_t ai = 0; ai < remaining.size(); ++ai) {
            for (std::size_t bi = ai + 1; bi < remaining.size(); ++bi) {
                if (++nodes > cfg.search_node_cap) {
                    throw ExhaustedSearchError("split search exceeded the node cap (bug)",
                                               detail::debug_dump(h));
                }
                SplitOffResult split = split_off_at(g, s, remaining[ai], remaining[bi]);
                if (!graph_is_sparse(split.graph, cfg.admissible_caps, cfg.admissible_rank)) continue;
                const OrientedEdge& e = g.edge(remaining[ai]);
                chosen.push_back({remaining[ai], remaining[bi], e.tail == s ? e.gain : -e.gain,
                                  g.body_name(e.tail == s ? e.head : e.tail), split.split_edge_id});
                std::vector<EdgeId> rest;
                rest.reserve(remaining.size() - 2);
                for (std::size_t k = 0; k < remaining.size(); ++k) {
                    if (k != ai && k != bi) rest.push_back(remaining[k]);
                }
                if (dfs(split.graph, rest)) return true;
                chosen.pop_back();
            }
        }
        return false;
    };

    if (!dfs(h, nonloops) || !found) {
        throw ExhaustedSearchError("no admissible split sequence at body " + h.body_name(s) +
                                       " (the theory forbids this; instance attached)",
                                   detail::debug_dump(h));
    }

    ReduceStep out;
    out.removed_body = h.body_name(s);
    out.spec.n = n;
    out.spec.j = j;
    out.spec.new_body = out.removed_body;
    for (const SplitRec& rec : chosen) {
        out.spec.pinched.push_back({rec.h_id, -rec.e_out, rec.e_other, rec.e_id, rec.f_id});
    }
    for (EdgeId id : final_with_s.edges_at(s)) {
        const OrientedEdge& e = final_with_s.edge(id);
        if (e.is_loop()) {
            out.spec.loops.push_back({e.gain, e.id});
        } else {
            const BodyIndex other = e.tail == s ? e.head : e.tail;
            out.spec.new_edges.push_back(
                {final_with_s.body_name(other), e.tail == s ? e.gain : -e.gain, e.id});
        }
    }
    out.graph = final_with_s.without_body(s);

    const PinchValidation inverse_ok = validate_pinch(out.graph, out.spec);
    if (!inverse_ok.ok) {
        throw ExhaustedSearchError("inverse pinch failed validation (bug)", detail::debug_dump(h));
    }
    return out;
}

struct ReductionTrace {
    struct Step {
        PinchSpec spec;
        std::string removed_body;
    };
    std::vector<Step> steps;  // in reduction order: steps[0] undoes the last pinch
    BodyBarOrbitGraph terminal;
};

// Reduces a tight sparse graph body by body down to a single body carrying
// three loops whose gain space has rank at least 2.
inline ReductionTrace reduce_to_seed(const BodyBarOrbitGraph& h, const ReduceConfig& cfg = {}) {
    if (cfg.verify_input) {
        if (!is_tight(h)) throw NotTightError("input is not tight: |E| != 6|V| - 3");
        if (!graph_is_sparse(h, cfg.caps, cfg.rank)) {
            throw NotSparseError("input violates the sparsity count");
        }
    }
    ReduceConfig inner = cfg;
    inner.verify_input = false;

    ReductionTrace trace;
    BodyBarOrbitGraph g = h;
    while (g.body_count() > 1) {
        ReduceStep step = reduce_step(g, inner);
        trace.steps.push_back({std::move(step.spec), std::move(step.removed_body)});
        g = std::move(step.graph);
    }
    bool loops_only = g.edge_count() == 3;
    for (const OrientedEdge& e : g.edges()) loops_only = loops_only && e.is_loop();
    if (!loops_only || gain_space_rank(g) < 2) {
        throw ExhaustedSearchError("terminal graph is not a three-loop seed of gain rank >= 2 (bug)",
                                   detail::debug_dump(g));
    }
    trace.terminal = std::move(g);
    return trace;
}

// Replays a trace forward: applying the recorded pinches to the terminal
// graph in reverse order reproduces the reduced graph exactly.
inline BodyBarOrbitGraph replay_trace(const ReductionTrace& trace) {
    BodyBarOrbitGraph g = trace.terminal;
    for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
        g = apply_pinch(g, it->spec);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Random generation.

struct GeneratorConfig {
    std::int64_t gain_min = -2;
    std::int64_t gain_max = 2;
    int retry_budget = 10000;  // rejection attempts per pinch
};

// Grows a tight sparse graph from the one-body seed (three loops with gains
// (1,0,0), (0,1,0), (0,0,1)) by uniformly sampled valid pinches.
inline BodyBarOrbitGraph random_tight_graph(int n_bodies, std::uint64_t seed,
                                            const GeneratorConfig& cfg = {}) {
    if (n_bodies < 1) throw DomainError("need at least one body");
    BodyBarOrbitGraph g;
    g.add_body("B0");
    g.add_edge("B0", "B0", GainVector{1, 0, 0});
    g.add_edge("B0", "B0", GainVector{0, 1, 0});
    g.add_edge("B0", "B0", GainVector{0, 0, 1});

    SplitMix64 rng(seed);
    auto random_gain = [&]() {
        return GainVector{rng.range(cfg.gain_min, cfg.gain_max), rng.range(cfg.gain_min, cfg.gain_max),
                          rng.range(cfg.gain_min, cfg.gain_max)};
    };

    for (int body = 1; body < n_bodies; ++body) {
        bool placed = false;
        for (int attempt = 0; attempt < cfg.retry_budget && !placed; ++attempt) {
            const int n = static_cast<int>(rng.range(0, 5));
            const int jmin = std::max(0, n - 3);
            const int jmax = std::min<int>(n, static_cast<int>(g.edge_count()));
            if (jmin > jmax) continue;
            const int j = static_cast<int>(rng.range(jmin, jmax));

            PinchSpec spec;
            spec.n = n;
            spec.j = j;
            spec.new_body = "B" + std::to_string(body);

            std::vector<EdgeId> pool;
            for (const OrientedEdge& e : g.edges()) pool.push_back(e.id);
            for (int k = 0; k < j; ++k) {
                const std::size_t pick =
                    static_cast<std::size_t>(k) + rng.below(pool.size() - static_cast<std::size_t>(k));
                std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
                spec.pinched.push_back({pool[static_cast<std::size_t>(k)], random_gain(), {}, {}, {}});
            }
            for (int k = 0; k < n - j; ++k) spec.loops.push_back({random_gain(), {}});
            for (int k = 0; k < 6 - n; ++k) {
                const std::string target = g.body_names()[rng.below(g.body_count())];
                spec.new_edges.push_back({target, random_gain(), {}});
            }

            if (!validate_pinch(g, spec).ok) continue;
            g = apply_pinch(g, spec);
            placed = true;
        }
        if (!placed) {
            throw Error("pinch sampling exhausted after " + std::to_string(cfg.retry_budget) +
                        " attempts while adding body " + std::to_string(body));
        }
    }
    return g;
}

}  // namespace torbar
