#pragma once

// Shared builders and independent oracles for the test suite. The oracles
// re-derive expected values along a different code path than the library
// (naive per-subset counting, Hermite-form lattice comparison).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torbar/torbar.hpp"

namespace testsupport {

using torbar::BodyBarOrbitGraph;
using torbar::EdgeId;
using torbar::EdgeSubset;
using torbar::GainVector;

struct EdgeInit {
    std::string u, v;
    GainVector gain;
};

inline BodyBarOrbitGraph make_graph(const std::vector<std::string>& bodies,
                                    const std::vector<EdgeInit>& edges) {
    BodyBarOrbitGraph g;
    for (const auto& b : bodies) g.add_body(b);
    for (const auto& e : edges) g.add_edge(e.u, e.v, e.gain);
    return g;
}

// Two bodies, nine edges: gains (1,0,0), (1,0,0), (0,1,0) and six zeros.
inline BodyBarOrbitGraph example1() {
    std::vector<EdgeInit> edges(6, {"B1", "B2", {}});
    edges.push_back({"B1", "B2", {1, 0, 0}});
    edges.push_back({"B1", "B2", {1, 0, 0}});
    edges.push_back({"B1", "B2", {0, 1, 0}});
    return make_graph({"B1", "B2"}, edges);
}

// Same shape with collinear gains (1,0,0), (2,0,0), (3,0,0): not sparse.
inline BodyBarOrbitGraph example1_bad_gains() {
    std::vector<EdgeInit> edges(6, {"B1", "B2", {}});
    edges.push_back({"B1", "B2", {1, 0, 0}});
    edges.push_back({"B1", "B2", {2, 0, 0}});
    edges.push_back({"B1", "B2", {3, 0, 0}});
    return make_graph({"B1", "B2"}, edges);
}

// One body with three loops.
inline BodyBarOrbitGraph p3(const GainVector& a, const GainVector& b, const GainVector& c) {
    return make_graph({"B0"}, {{"B0", "B0", a}, {"B0", "B0", b}, {"B0", "B0", c}});
}

// ---------------------------------------------------------------------------
// Oracles.

using Row3 = std::array<std::int64_t, 3>;

// Hermite normal form basis of the sublattice of Z^3 generated by the rows.
// Two generator lists span the same lattice iff their forms are equal.
inline std::vector<Row3> lattice_canonical_form(std::vector<Row3> rows) {
    std::size_t fixed = 0;
    for (int col = 0; col < 3; ++col) {
        for (;;) {
            std::size_t piv = rows.size();
            for (std::size_t i = fixed; i < rows.size(); ++i) {
                if (rows[i][static_cast<std::size_t>(col)] != 0 &&
                    (piv == rows.size() ||
                     std::abs(rows[i][static_cast<std::size_t>(col)]) <
                         std::abs(rows[piv][static_cast<std::size_t>(col)]))) {
                    piv = i;
                }
            }
            if (piv == rows.size()) break;  // column exhausted
            bool others = false;
            for (std::size_t i = fixed; i < rows.size(); ++i) {
                if (i == piv || rows[i][static_cast<std::size_t>(col)] == 0) continue;
                const std::int64_t q = rows[i][static_cast<std::size_t>(col)] /
                                       rows[piv][static_cast<std::size_t>(col)];
                for (std::size_t k = 0; k < 3; ++k) rows[i][k] -= q * rows[piv][k];
                if (rows[i][static_cast<std::size_t>(col)] != 0) others = true;
            }
            if (!others) {
                std::swap(rows[piv], rows[fixed]);
                ++fixed;
                break;
            }
        }
    }
    rows.resize(fixed);
    for (auto& r : rows) {
        int lead = 0;
        while (lead < 3 && r[static_cast<std::size_t>(lead)] == 0) ++lead;
        if (lead < 3 && r[static_cast<std::size_t>(lead)] < 0) {
            for (auto& v : r) v = -v;
        }
    }
    // Reduce entries above each pivot into [0, pivot).
    for (std::size_t i = rows.size(); i-- > 0;) {
        int lead = 0;
        while (lead < 3 && rows[i][static_cast<std::size_t>(lead)] == 0) ++lead;
        if (lead == 3) continue;
        const std::int64_t piv = rows[i][static_cast<std::size_t>(lead)];
        for (std::size_t j = 0; j < i; ++j) {
            const std::int64_t v = rows[j][static_cast<std::size_t>(lead)];
            std::int64_t f = v / piv;
            if (v % piv < 0) f -= 1;
            if (f != 0) {
                for (std::size_t k = 0; k < 3; ++k) rows[j][k] -= f * rows[i][k];
            }
        }
    }
    return rows;
}

inline bool same_lattice(const std::vector<GainVector>& a, const std::vector<GainVector>& b) {
    std::vector<Row3> ra, rb;
    for (const auto& m : a) ra.push_back(m.c);
    for (const auto& m : b) rb.push_back(m.c);
    return lattice_canonical_form(ra) == lattice_canonical_form(rb);
}

// Naive sparsity oracle: literally evaluates the count on every non-empty
// subset through the public per-subset API. Usable up to ~14 edges.
struct NaiveSparsity {
    bool sparse = true;
    std::optional<std::vector<EdgeId>> witness;  // smallest bitmask violator
};

inline NaiveSparsity naive_sparsity(const BodyBarOrbitGraph& g) {
    NaiveSparsity out;
    std::vector<EdgeId> ids;
    for (const auto& e : g.edges()) ids.push_back(e.id);
    const std::size_t n = ids.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        std::vector<EdgeId> sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t(1) << i)) sub.push_back(ids[i]);
        }
        if (torbar::deficiency(EdgeSubset(g, sub)) < 0) {
            out.sparse = false;
            out.witness = sub;
            return out;
        }
    }
    return out;
}

}  // namespace testsupport
