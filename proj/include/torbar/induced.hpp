#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torbar/errors.hpp"
#include "torbar/graph.hpp"

namespace torbar {

using VertexIndex = std::uint32_t;

// Bar-joint periodic orbit graph. Loops are rejected (their rigidity-matrix
// rows vanish identically); parallel edges with equal gain are rejected on
// checked insertion because they coincide in the derived graph.
class BarJointOrbitGraph {
public:
    VertexIndex add_vertex(const std::string& name) {
        if (name.empty()) throw DomainError("vertex name must be non-empty");
        if (vertex_index_.count(name)) throw DomainError("duplicate vertex name: " + name);
        const VertexIndex idx = static_cast<VertexIndex>(vertex_names_.size());
        vertex_names_.push_back(name);
        vertex_index_.emplace(name, idx);
        return idx;
    }

    EdgeId add_edge(VertexIndex tail, VertexIndex head, const GainVector& gain,
                    std::optional<EdgeId> id = std::nullopt, bool check_parallel = true) {
        require_vertex(tail);
        require_vertex(head);
        if (tail == head) throw DomainError("bar-joint orbit graphs do not allow loops");
        if (check_parallel) {
            for (const OrientedEdge& e : edges_) {
                const bool same_fwd = e.tail == tail && e.head == head && e.gain == gain;
                const bool same_rev = e.tail == head && e.head == tail && e.gain == -gain;
                if (same_fwd || same_rev) {
                    throw DomainError("parallel edge with equal gain: " + to_string(gain));
                }
            }
        }
        const EdgeId eid = id ? *id : (edges_.empty() ? 0 : edges_.back().id + 1);
        const auto pos = std::lower_bound(edges_.begin(), edges_.end(), eid,
                                          [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos != edges_.end() && pos->id == eid) {
            throw DomainError("duplicate edge id: " + std::to_string(eid));
        }
        edges_.insert(pos, OrientedEdge{eid, tail, head, gain});
        return eid;
    }

    std::size_t vertex_count() const { return vertex_names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& vertex_names() const { return vertex_names_; }

    const std::string& vertex_name(VertexIndex v) const {
        require_vertex(v);
        return vertex_names_[v];
    }

    VertexIndex vertex_index(const std::string& name) const {
        const auto it = vertex_index_.find(name);
        if (it == vertex_index_.end()) throw DomainError("no such vertex: " + name);
        return it->second;
    }

    const std::vector<OrientedEdge>& edges() const { return edges_; }

    bool has_edge(EdgeId id) const {
        const auto pos = std::lower_bound(edges_.begin(), edges_.end(), id,
                                          [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        return pos != edges_.end() && pos->id == id;
    }

    const OrientedEdge& edge(EdgeId id) const {
        const auto pos = std::lower_bound(edges_.begin(), edges_.end(), id,
                                          [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos == edges_.end() || pos->id != id) {
            throw DomainError("no such edge id: " + std::to_string(id));
        }
        return *pos;
    }

    void remove_edge(EdgeId id) {
        const auto pos = std::lower_bound(edges_.begin(), edges_.end(), id,
                                          [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos == edges_.end() || pos->id != id) {
            throw DomainError("no such edge id: " + std::to_string(id));
        }
        edges_.erase(pos);
    }

private:
    void require_vertex(VertexIndex v) const {
        if (v >= vertex_names_.size()) throw DomainError("vertex index out of range");
    }

    std::vector<std::string> vertex_names_;
    std::map<std::string, VertexIndex> vertex_index_;
    std::vector<OrientedEdge> edges_;  // sorted by id
};

// Bar-joint expansion of a body-bar orbit graph, with the bookkeeping that
// ties induced vertices and bars back to their bodies and original edges.
struct InducedFramework {
    BarJointOrbitGraph graph;
    std::vector<BodyIndex> body_of_vertex;     // vertex index -> body index
    std::vector<EdgeId> body_edge_ids;         // internal (gain-zero) edges
    std::map<EdgeId, EdgeId> bar_of_hedge;     // body-bar edge id -> bar edge id
};

// Replaces each body by a generically isostatic bar-joint graph and each
// body-bar edge by a bar carrying the original gain.
//
// A body incident to k edge endpoints (non-loops contribute one endpoint,
// loops two) gets n = max(3, k) vertices: a triangle, then each further
// vertex attached to the three previous ones (3n - 6 internal edges, all
// gain zero). Every endpoint attaches at its own vertex, so distinct bars
// never share an attachment and a loop's two ends are distinct vertices of
// the same body.
inline InducedFramework induce_bar_joint(const BodyBarOrbitGraph& h) {
    InducedFramework out;

    const std::size_t nb = h.body_count();
    std::vector<int> endpoints(nb, 0);
    for (const OrientedEdge& e : h.edges()) {
        endpoints[e.tail] += 1;
        endpoints[e.head] += 1;  // loops land here twice
    }

    std::vector<std::vector<VertexIndex>> verts_of_body(nb);
    for (BodyIndex b = 0; b < nb; ++b) {
        const int n = std::max(3, endpoints[b]);
        auto& verts = verts_of_body[b];
        for (int i = 0; i < n; ++i) {
            const VertexIndex v = out.graph.add_vertex(h.body_name(b) + ":" + std::to_string(i));
            out.body_of_vertex.push_back(b);
            verts.push_back(v);
        }
        for (int i = 1; i < n; ++i) {
            for (int k = std::max(0, i - 3); k < i; ++k) {
                const EdgeId id = out.graph.add_edge(verts[k], verts[i], GainVector{});
                out.body_edge_ids.push_back(id);
            }
        }
    }

    // Attachment slots are consumed in edge-id order, tail before head.
    std::vector<int> next_slot(nb, 0);
    for (const OrientedEdge& e : h.edges()) {
        const VertexIndex vt = verts_of_body[e.tail][next_slot[e.tail]++];
        const VertexIndex vh = verts_of_body[e.head][next_slot[e.head]++];
        // Duplicates of internal edges can arise (a zero-gain loop on a body
        // with two attachment slots); they are genuinely dependent rows, so
        // the parallel check is skipped here.
        const EdgeId id = out.graph.add_edge(vt, vh, e.gain, std::nullopt, /*check_parallel=*/false);
        out.bar_of_hedge.emplace(e.id, id);
    }
    return out;
}

}  // namespace torbar
