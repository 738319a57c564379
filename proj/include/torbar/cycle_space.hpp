#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "torbar/errors.hpp"
#include "torbar/graph.hpp"
#include "torbar/lattice.hpp"

namespace torbar {

namespace detail {

// Groups subset edges into connected components of the gain-forgetting
// multigraph on V(Y). Returns lists of indices into `edges`, each ascending,
// components ordered by their smallest member.
inline std::vector<std::vector<std::size_t>> component_indices(
    const BodyBarOrbitGraph& g, const std::vector<EdgeId>& ids) {
    std::map<BodyIndex, int> root_of;  // body -> union-find slot
    std::vector<int> parent;
    auto slot = [&](BodyIndex b) {
        const auto it = root_of.find(b);
        if (it != root_of.end()) return it->second;
        const int s = static_cast<int>(parent.size());
        parent.push_back(s);
        root_of.emplace(b, s);
        return s;
    };
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<std::pair<int, int>> ends(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const OrientedEdge& e = g.edge(ids[i]);
        ends[i] = {slot(e.tail), slot(e.head)};
    }
    for (const auto& [a, b] : ends) {
        const int ra = find(a), rb = find(b);
        if (ra != rb) parent[rb] = ra;
    }

    std::map<int, std::vector<std::size_t>> by_root;  // keyed by first-seen order below
    std::vector<int> order;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int r = find(ends[i].first);
        if (!by_root.count(r)) order.push_back(r);
        by_root[r].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    out.reserve(order.size());
    for (int r : order) out.push_back(std::move(by_root[r]));
    return out;
}

}  // namespace detail

// Partition of Y into edge sets of connected components; loops belong to
// their body's component. Components ordered by smallest edge id.
inline std::vector<EdgeSubset> connected_components(const EdgeSubset& y) {
    if (y.empty()) throw EmptySubsetError();
    const auto comps = detail::component_indices(y.graph(), y.ids());
    std::vector<EdgeSubset> out;
    out.reserve(comps.size());
    for (const auto& comp : comps) {
        std::vector<EdgeId> ids;
        ids.reserve(comp.size());
        for (std::size_t i : comp) ids.push_back(y.ids()[i]);
        out.emplace_back(y.graph(), std::move(ids));
    }
    return out;
}

// Net gains of the fundamental cycles of Y with respect to a deterministic
// spanning forest: per component, BFS from the name-least body, incident
// edges scanned in id order. Every non-tree edge (loops included) yields
//     gain(e) - (tree-path gain from tail(e) to head(e)).
// The list generates the same sublattice of Z^3 as the net gains of all
// cycles of Y.
inline std::vector<GainVector> cycle_gain_generators(const EdgeSubset& y) {
    if (y.empty()) throw EmptySubsetError();
    const BodyBarOrbitGraph& g = y.graph();
    const auto comps = detail::component_indices(g, y.ids());

    std::vector<GainVector> gens;
    for (const auto& comp : comps) {
        // Incidence lists in edge-id order (comp is ascending already).
        std::map<BodyIndex, std::vector<std::size_t>> at;
        for (std::size_t i : comp) {
            const OrientedEdge& e = g.edge(y.ids()[i]);
            at[e.tail].push_back(i);
            if (e.head != e.tail) at[e.head].push_back(i);
        }
        BodyIndex root = at.begin()->first;
        for (const auto& [b, _] : at) {
            if (g.body_name(b) < g.body_name(root)) root = b;
        }

        std::map<BodyIndex, GainVector> potential;  // tree-path gain from root
        std::map<std::size_t, bool> in_tree;
        potential[root] = GainVector{};
        std::deque<BodyIndex> queue{root};
        while (!queue.empty()) {
            const BodyIndex u = queue.front();
            queue.pop_front();
            for (std::size_t i : at[u]) {
                const OrientedEdge& e = g.edge(y.ids()[i]);
                if (e.is_loop()) continue;
                const BodyIndex v = (e.tail == u) ? e.head : e.tail;
                if (potential.count(v)) continue;
                const GainVector step = (e.tail == u) ? e.gain : -e.gain;
                potential[v] = potential[u] + step;
                in_tree[i] = true;
                queue.push_back(v);
            }
        }

        for (std::size_t i : comp) {
            if (in_tree.count(i)) continue;
            const OrientedEdge& e = g.edge(y.ids()[i]);
            gens.push_back(e.gain - (potential.at(e.head) - potential.at(e.tail)));
        }
    }
    return gens;
}

// Rank of the sublattice of Z^3 generated by the cycle gains of Y; equals the
// rational rank of the generator matrix. Independent of spanning-tree choice.
inline int gain_space_rank(const EdgeSubset& y) {
    const auto gens = cycle_gain_generators(y);
    std::vector<std::array<std::int64_t, 3>> rows;
    rows.reserve(gens.size());
    for (const GainVector& m : gens) rows.push_back(m.c);
    return lattice_rank(rows);
}

// Gain-space rank of the full edge set. Empty edge sets have rank 0.
inline int gain_space_rank(const BodyBarOrbitGraph& g) {
    if (g.edge_count() == 0) return 0;
    return gain_space_rank(EdgeSubset::full(g));
}

}  // namespace torbar
