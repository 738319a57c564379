#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torbar/errors.hpp"
#include "torbar/gain.hpp"

namespace torbar {

using BodyIndex = std::uint32_t;
using EdgeId = std::int64_t;

// Directed storage of an undirected gained edge; {u, v; m} and {v, u; -m}
// denote the same edge. All algorithms honor that identification.
struct OrientedEdge {
    EdgeId id = 0;
    BodyIndex tail = 0;
    BodyIndex head = 0;
    GainVector gain;

    bool is_loop() const { return tail == head; }
};

// Comparison form of an edge: endpoint names ordered, gain sign normalized.
struct CanonicalEdge {
    std::string u;
    std::string v;
    GainVector gain;

    friend bool operator==(const CanonicalEdge&, const CanonicalEdge&) = default;
    friend auto operator<=>(const CanonicalEdge&, const CanonicalEdge&) = default;
};

// Multigraph with loops: bodies as vertices, edges labeled by lattice gains.
// Instances are plain values; library operations never mutate their inputs.
class BodyBarOrbitGraph {
public:
    BodyBarOrbitGraph() = default;
    explicit BodyBarOrbitGraph(std::int64_t gain_cap) : gain_cap_(gain_cap) {
        if (gain_cap <= 0) throw ConfigError("gain cap must be positive");
    }

    BodyIndex add_body(const std::string& name) {
        if (name.empty()) throw DomainError("body name must be non-empty");
        if (body_index_.count(name)) throw DomainError("duplicate body name: " + name);
        const BodyIndex idx = static_cast<BodyIndex>(body_names_.size());
        body_names_.push_back(name);
        body_index_.emplace(name, idx);
        return idx;
    }

    EdgeId add_edge(BodyIndex tail, BodyIndex head, const GainVector& gain,
                    std::optional<EdgeId> id = std::nullopt) {
        require_body(tail);
        require_body(head);
        check_gain(gain);
        const EdgeId eid = id ? *id : next_edge_id();
        if (eid < 0) throw DomainError("edge id must be non-negative");
        const auto pos = std::lower_bound(edges_.begin(), edges_.end(), eid,
                                          [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos != edges_.end() && pos->id == eid) {
            throw DomainError("duplicate edge id: " + std::to_string(eid));
        }
        edges_.insert(pos, OrientedEdge{eid, tail, head, gain});
        return eid;
    }

    EdgeId add_edge(const std::string& tail, const std::string& head, const GainVector& gain,
                    std::optional<EdgeId> id = std::nullopt) {
        return add_edge(body_index(tail), body_index(head), gain, id);
    }

    void remove_edge(EdgeId id) {
        const auto pos = find_edge(id);
        if (pos == edges_.end()) throw DomainError("no such edge id: " + std::to_string(id));
        edges_.erase(pos);
    }

    // Flips the stored orientation: swaps endpoints and negates the gain.
    void reverse_edge(EdgeId id) {
        const auto pos = find_edge(id);
        if (pos == edges_.end()) throw DomainError("no such edge id: " + std::to_string(id));
        std::swap(pos->tail, pos->head);
        pos->gain = -pos->gain;
    }

    // Copy without one body and everything incident to it. Remaining bodies
    // keep their names and relative order; edges keep ids and orientations.
    BodyBarOrbitGraph without_body(BodyIndex b) const {
        require_body(b);
        BodyBarOrbitGraph out(gain_cap_);
        std::vector<BodyIndex> remap(body_names_.size());
        for (BodyIndex i = 0; i < body_names_.size(); ++i) {
            if (i == b) continue;
            remap[i] = out.add_body(body_names_[i]);
        }
        for (const OrientedEdge& e : edges_) {
            if (e.tail == b || e.head == b) continue;
            out.add_edge(remap[e.tail], remap[e.head], e.gain, e.id);
        }
        return out;
    }

    std::size_t body_count() const { return body_names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& body_names() const { return body_names_; }

    const std::string& body_name(BodyIndex b) const {
        require_body(b);
        return body_names_[b];
    }

    bool has_body(const std::string& name) const { return body_index_.count(name) != 0; }

    BodyIndex body_index(const std::string& name) const {
        const auto it = body_index_.find(name);
        if (it == body_index_.end()) throw DomainError("no such body: " + name);
        return it->second;
    }

    // Ascending id.
    const std::vector<OrientedEdge>& edges() const { return edges_; }

    bool has_edge(EdgeId id) const { return find_edge(id) != edges_.end(); }

    const OrientedEdge& edge(EdgeId id) const {
        const auto pos = find_edge(id);
        if (pos == edges_.end()) throw DomainError("no such edge id: " + std::to_string(id));
        return *pos;
    }

    EdgeId next_edge_id() const { return edges_.empty() ? 0 : edges_.back().id + 1; }

    std::int64_t gain_cap() const { return gain_cap_; }

    // Loops count twice.
    int degree(BodyIndex b) const {
        require_body(b);
        int d = 0;
        for (const OrientedEdge& e : edges_) {
            if (e.tail == b) ++d;
            if (e.head == b) ++d;
        }
        return d;
    }

    int loop_count(BodyIndex b) const {
        require_body(b);
        int n = 0;
        for (const OrientedEdge& e : edges_) {
            if (e.is_loop() && e.tail == b) ++n;
        }
        return n;
    }

    // Incident edge ids in ascending order; loops included once.
    std::vector<EdgeId> edges_at(BodyIndex b) const {
        require_body(b);
        std::vector<EdgeId> out;
        for (const OrientedEdge& e : edges_) {
            if (e.tail == b || e.head == b) out.push_back(e.id);
        }
        return out;
    }

    CanonicalEdge canonical(const OrientedEdge& e) const {
        const std::string& tn = body_names_[e.tail];
        const std::string& hn = body_names_[e.head];
        if (e.is_loop()) return {tn, hn, canonical_loop_gain(e.gain)};
        if (tn <= hn) return {tn, hn, e.gain};
        return {hn, tn, -e.gain};
    }

    // Same labeled graph: identical body name set and, per edge id, the same
    // canonical edge. Storage order and orientations are ignored.
    bool same_labeled_graph(const BodyBarOrbitGraph& other) const {
        if (body_count() != other.body_count() || edge_count() != other.edge_count()) return false;
        std::vector<std::string> a = body_names_, b = other.body_names_;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const OrientedEdge& e = edges_[i];
            const OrientedEdge& f = other.edges_[i];
            if (e.id != f.id) return false;
            if (canonical(e) != other.canonical(f)) return false;
        }
        return true;
    }

private:
    void require_body(BodyIndex b) const {
        if (b >= body_names_.size()) throw DomainError("body index out of range");
    }

    void check_gain(const GainVector& m) const {
        for (std::int64_t v : m.c) {
            if (v > gain_cap_ || v < -gain_cap_) {
                throw DomainError("gain component exceeds cap: " + to_string(m));
            }
        }
    }

    std::vector<OrientedEdge>::iterator find_edge(EdgeId id) {
        auto pos = std::lower_bound(edges_.begin(), edges_.end(), id,
                                    [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos != edges_.end() && pos->id == id) return pos;
        return edges_.end();
    }

    std::vector<OrientedEdge>::const_iterator find_edge(EdgeId id) const {
        auto pos = std::lower_bound(edges_.begin(), edges_.end(), id,
                                    [](const OrientedEdge& e, EdgeId v) { return e.id < v; });
        if (pos != edges_.end() && pos->id == id) return pos;
        return edges_.end();
    }

    std::vector<std::string> body_names_;
    std::map<std::string, BodyIndex> body_index_;
    std::vector<OrientedEdge> edges_;  // sorted by id
    std::int64_t gain_cap_ = kDefaultGainCap;
};

// A subset Y of the edges of a fixed graph. Holds a reference; the graph must
// outlive the subset. Ids are stored sorted and deduplicated.
class EdgeSubset {
public:
    EdgeSubset(const BodyBarOrbitGraph& g, std::vector<EdgeId> ids) : graph_(&g), ids_(std::move(ids)) {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
        for (EdgeId id : ids_) {
            if (!g.has_edge(id)) {
                throw DomainError("edge id not in graph: " + std::to_string(id));
            }
        }
    }

    static EdgeSubset full(const BodyBarOrbitGraph& g) {
        std::vector<EdgeId> ids;
        ids.reserve(g.edge_count());
        for (const OrientedEdge& e : g.edges()) ids.push_back(e.id);
        return EdgeSubset(g, std::move(ids));
    }

    const BodyBarOrbitGraph& graph() const { return *graph_; }
    const std::vector<EdgeId>& ids() const { return ids_; }
    bool empty() const { return ids_.empty(); }
    std::size_t size() const { return ids_.size(); }
    bool contains(EdgeId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

    // V(Y): bodies touched by the subset, ascending index.
    std::vector<BodyIndex> touched_bodies() const {
        std::vector<BodyIndex> out;
        for (EdgeId id : ids_) {
            const OrientedEdge& e = graph_->edge(id);
            out.push_back(e.tail);
            out.push_back(e.head);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    friend bool operator==(const EdgeSubset& a, const EdgeSubset& b) {
        return a.graph_ == b.graph_ && a.ids_ == b.ids_;
    }

private:
    const BodyBarOrbitGraph* graph_;
    std::vector<EdgeId> ids_;
};

}  // namespace torbar
