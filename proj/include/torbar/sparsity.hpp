#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "torbar/cycle_space.hpp"
#include "torbar/errors.hpp"
#include "torbar/graph.hpp"
#include "torbar/lattice.hpp"
#include "torbar/rigidity.hpp"

namespace torbar {

inline constexpr std::size_t kBruteCapDefault = 22;
inline constexpr std::size_t kConnectedCapDefault = 26;

struct SparsityCaps {
    std::size_t brute_cap = kBruteCapDefault;
    std::size_t connected_cap = kConnectedCapDefault;
};

// Extra edge allowance earned by gain-space rank g: sum_{i=1}^{g} (3 - i).
inline int bonus(int gain_rank) {
    switch (gain_rank) {
        case 0: return 0;
        case 1: return 2;
        case 2: return 3;
        case 3: return 3;
        default: throw DomainError("gain rank must be in 0..3, got " + std::to_string(gain_rank));
    }
}

// b(Y) = 6|V(Y)| - 6 + bonus(|gain space of Y|) - |Y|. Negative means Y is
// overcounted (dependent); zero means saturated.
inline std::int64_t deficiency(const EdgeSubset& y) {
    if (y.empty()) throw EmptySubsetError();
    const std::int64_t v = static_cast<std::int64_t>(y.touched_bodies().size());
    return 6 * v - 6 + bonus(gain_space_rank(y)) - static_cast<std::int64_t>(y.size());
}

// |E(H)| = 6|V(H)| - 3.
inline bool is_tight(const BodyBarOrbitGraph& h) {
    if (h.body_count() == 0) throw DomainError("graph has no bodies");
    return static_cast<std::int64_t>(h.edge_count()) ==
           6 * static_cast<std::int64_t>(h.body_count()) - 3;
}

enum class SparsityEngine { kBruteForce, kConnected, kMatroid };

inline const char* to_string(SparsityEngine e) {
    switch (e) {
        case SparsityEngine::kBruteForce: return "bruteforce";
        case SparsityEngine::kConnected: return "connected";
        case SparsityEngine::kMatroid: return "matroid";
    }
    return "?";
}

struct SparsityVerdict {
    bool tight = false;
    bool sparse = false;
    std::optional<EdgeSubset> witness;  // a violating subset, present iff !sparse
    std::uint64_t checked_subsets = 0;
    SparsityEngine engine = SparsityEngine::kBruteForce;
};

namespace detail {

// Flat view of a graph's edges for subset enumeration: bodies remapped to
// compact slots so that V(Y) is a popcount over a 64-bit mask.
struct SubsetScan {
    std::vector<EdgeId> ids;                       // ascending
    std::vector<std::pair<int, int>> ends;         // compact endpoints
    std::vector<GainVector> gains;
    std::vector<std::uint64_t> body_bit;           // per edge: endpoint bits
    int slots = 0;

    explicit SubsetScan(const BodyBarOrbitGraph& g) {
        std::vector<int> slot_of(g.body_count(), -1);
        auto slot = [&](BodyIndex b) {
            if (slot_of[b] < 0) slot_of[b] = slots++;
            return slot_of[b];
        };
        for (const OrientedEdge& e : g.edges()) {
            ids.push_back(e.id);
            const int a = slot(e.tail), b = slot(e.head);
            ends.emplace_back(a, b);
            gains.push_back(e.gain);
            body_bit.push_back((std::uint64_t(1) << a) | (std::uint64_t(1) << b));
        }
    }
};

// Gain-space rank of one edge subset via union-find with gain potentials:
// every edge closing a cycle contributes the cycle's net gain, and those
// discrepancies generate the same sublattice as all cycle gains.
class GainRankScratch {
public:
    explicit GainRankScratch(int slots)
        : parent_(slots), pot_(slots), used_(slots, false) {}

    template <class EdgeIndexRange>
    int rank(const SubsetScan& scan, const EdgeIndexRange& edge_indices) {
        touched_.clear();
        gens_.clear();
        for (std::size_t i : edge_indices) {
            const auto [a, b] = scan.ends[i];
            activate(a);
            activate(b);
            const auto [ra, pa] = find(a);
            const auto [rb, pb] = find(b);
            const GainVector m = scan.gains[i];
            if (ra != rb) {
                parent_[rb] = ra;
                pot_[rb] = pa + m - pb;  // keeps potentials consistent across the merge
            } else {
                const GainVector gen = m - (pb - pa);
                if (!gen.is_zero()) gens_.push_back(gen.c);
            }
        }
        for (int s : touched_) used_[s] = false;
        if (gens_.empty()) return 0;
        return lattice_rank(gens_);
    }

private:
    void activate(int s) {
        if (used_[s]) return;
        used_[s] = true;
        parent_[s] = s;
        pot_[s] = GainVector{};
        touched_.push_back(s);
    }

    // Root of s and the accumulated gain potential from s to the root.
    std::pair<int, GainVector> find(int s) {
        GainVector acc{};
        int x = s;
        while (parent_[x] != x) {
            acc = acc + pot_[x];
            x = parent_[x];
        }
        // Path compression.
        int y = s;
        GainVector rem = acc;
        while (parent_[y] != x) {
            const int next = parent_[y];
            const GainVector step = pot_[y];
            parent_[y] = x;
            pot_[y] = rem;
            rem = rem - step;
            y = next;
        }
        return {x, acc};
    }

    std::vector<int> parent_;
    std::vector<GainVector> pot_;
    std::vector<bool> used_;
    std::vector<int> touched_;
    std::vector<std::array<std::int64_t, 3>> gens_;
};

// Bit positions of a mask, ascending.
inline void mask_positions(std::uint64_t mask, std::vector<std::size_t>& out) {
    out.clear();
    while (mask) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
}

// Decides one subset. Uses 0 <= bonus <= 3 to skip the gain-rank computation
// outside the band where it can matter; identical to evaluating the count on
// every subset. Returns true on violation.
inline bool subset_violates(const SubsetScan& scan, GainRankScratch& scratch, std::uint64_t mask,
                            std::uint64_t body_mask, std::vector<std::size_t>& pos_buf) {
    const std::int64_t sz = std::popcount(mask);
    const std::int64_t nv = std::popcount(body_mask);
    if (sz <= 6 * nv - 6) return false;   // bound holds even with bonus 0
    if (sz > 6 * nv - 3) return true;     // bound fails even with bonus 3
    mask_positions(mask, pos_buf);
    const int g = scratch.rank(scan, pos_buf);
    return 6 * nv - 6 + bonus(g) - sz < 0;
}

}  // namespace detail

// Full enumeration of the 2^|E| - 1 non-empty subsets in ascending bitmask
// order (bit k = k-th smallest edge id); the first violator is the witness.
inline SparsityVerdict check_sparsity_bruteforce(const BodyBarOrbitGraph& h,
                                                 std::size_t cap = kBruteCapDefault) {
    const std::size_t ne = h.edge_count();
    if (ne > cap) {
        throw CapExceededError("brute-force sparsity check limited to " + std::to_string(cap) +
                               " edges, got " + std::to_string(ne));
    }
    if (cap > 30) throw CapExceededError("brute-force cap cannot exceed 30");

    SparsityVerdict v;
    v.engine = SparsityEngine::kBruteForce;
    v.tight = is_tight(h);

    const detail::SubsetScan scan(h);
    detail::GainRankScratch scratch(scan.slots);
    std::vector<std::size_t> pos_buf;
    const std::uint64_t full = ne == 0 ? 0 : ((std::uint64_t(1) << ne) - 1);
    for (std::uint64_t mask = 1; mask <= full && full != 0; ++mask) {
        std::uint64_t bm = 0;
        for (std::uint64_t m = mask; m;) {
            const int i = std::countr_zero(m);
            bm |= scan.body_bit[static_cast<std::size_t>(i)];
            m &= m - 1;
        }
        ++v.checked_subsets;
        if (detail::subset_violates(scan, scratch, mask, bm, pos_buf)) {
            std::vector<EdgeId> ids;
            detail::mask_positions(mask, pos_buf);
            for (std::size_t i : pos_buf) ids.push_back(scan.ids[i]);
            v.sparse = false;
            v.witness.emplace(h, std::move(ids));
            return v;
        }
    }
    v.sparse = true;
    return v;
}

// Enumerates only connected edge subsets (grown by body adjacency). Sound
// because a violating subset always has a violating connected component:
// summing per-component deficiencies shows b(Y) >= sum_c b(c) for >= 2
// components. Witnesses may differ from the brute-force engine.
inline SparsityVerdict check_sparsity_connected(const BodyBarOrbitGraph& h,
                                                std::size_t cap = kConnectedCapDefault) {
    const std::size_t ne = h.edge_count();
    if (ne > cap) {
        throw CapExceededError("connected-subset sparsity check limited to " + std::to_string(cap) +
                               " edges, got " + std::to_string(ne));
    }
    if (cap > 62) throw CapExceededError("connected-subset cap cannot exceed 62");

    SparsityVerdict v;
    v.engine = SparsityEngine::kConnected;
    v.tight = is_tight(h);
    v.sparse = true;

    const detail::SubsetScan scan(h);
    detail::GainRankScratch scratch(scan.slots);
    std::vector<std::size_t> pos_buf;

    std::vector<std::uint64_t> adj(ne, 0);
    for (std::size_t i = 0; i < ne; ++i) {
        for (std::size_t k = 0; k < ne; ++k) {
            if (k != i && (scan.body_bit[i] & scan.body_bit[k])) adj[i] |= std::uint64_t(1) << k;
        }
    }

    std::uint64_t witness_mask = 0;
    auto visit = [&](std::uint64_t mask, std::uint64_t bm) {
        ++v.checked_subsets;
        if (detail::subset_violates(scan, scratch, mask, bm, pos_buf)) {
            witness_mask = mask;
            return true;
        }
        return false;
    };

    // Each connected subset is generated exactly once, rooted at its smallest
    // edge: candidates are only ever edges above the root, and an edge seen
    // at some level never re-enters deeper extensions.
    auto grow = [&](auto&& self, std::uint64_t s, std::uint64_t bm, std::uint64_t seen,
                    std::uint64_t ext, std::uint64_t above_root) -> bool {
        while (ext) {
            const std::uint64_t fbit = ext & (~ext + 1);
            ext ^= fbit;
            const std::size_t f = static_cast<std::size_t>(std::countr_zero(fbit));
            const std::uint64_t s2 = s | fbit;
            const std::uint64_t bm2 = bm | scan.body_bit[f];
            if (visit(s2, bm2)) return true;
            const std::uint64_t fresh = adj[f] & above_root & ~seen;
            if (self(self, s2, bm2, seen | fresh, ext | fresh, above_root)) return true;
        }
        return false;
    };

    for (std::size_t root = 0; root < ne && v.sparse; ++root) {
        const std::uint64_t rbit = std::uint64_t(1) << root;
        if (visit(rbit, scan.body_bit[root])) {
            v.sparse = false;
            break;
        }
        const std::uint64_t above_root = (root + 1 >= 64) ? 0 : ~((rbit << 1) - 1);
        const std::uint64_t ext = adj[root] & above_root;
        if (grow(grow, rbit, scan.body_bit[root], rbit | ext, ext, above_root)) {
            v.sparse = false;
            break;
        }
    }

    if (!v.sparse) {
        std::vector<EdgeId> ids;
        detail::mask_positions(witness_mask, pos_buf);
        for (std::size_t i : pos_buf) ids.push_back(scan.ids[i]);
        if (ids.empty()) ids.push_back(scan.ids[0]);  // violation found at a root visit
        v.witness.emplace(h, std::move(ids));
    }
    return v;
}

// Independence in the generic rigidity matroid, decided by the rank oracle.
// Within the enumeration caps this agrees with "every subset of Y has
// deficiency >= 0".
inline bool independence_matroid(const BodyBarOrbitGraph& h, const EdgeSubset& y,
                                 const RankConfig& cfg = {}) {
    return edge_row_independence(h, y, cfg);
}

// Rank-oracle sparsity verdict for graphs above the enumeration caps. When
// the edge set is dependent and a witness is requested, a circuit (minimal
// dependent set) is extracted by greedy deletion.
inline SparsityVerdict check_sparsity_matroid(const BodyBarOrbitGraph& h, const RankConfig& cfg = {},
                                              bool want_witness = true) {
    SparsityVerdict v;
    v.engine = SparsityEngine::kMatroid;
    v.tight = is_tight(h);
    if (h.edge_count() == 0) {
        v.sparse = true;
        return v;
    }
    const EdgeSubset full = EdgeSubset::full(h);
    v.checked_subsets = 1;
    v.sparse = independence_matroid(h, full, cfg);
    if (!v.sparse && want_witness) {
        std::vector<EdgeId> circuit = full.ids();
        for (EdgeId id : full.ids()) {
            if (circuit.size() == 1) break;
            std::vector<EdgeId> trial;
            trial.reserve(circuit.size() - 1);
            for (EdgeId k : circuit) {
                if (k != id) trial.push_back(k);
            }
            ++v.checked_subsets;
            if (!independence_matroid(h, EdgeSubset(h, trial), cfg)) circuit = std::move(trial);
        }
        v.witness.emplace(h, std::move(circuit));
    }
    return v;
}

// Engine selection by size: full enumeration within the brute cap, connected
// enumeration within the connected cap, rank oracle above.
inline SparsityVerdict check_sparsity_auto(const BodyBarOrbitGraph& h,
                                           const SparsityCaps& caps = {},
                                           const RankConfig& rank_cfg = {},
                                           bool want_witness = true) {
    const std::size_t ne = h.edge_count();
    if (ne <= caps.brute_cap) return check_sparsity_bruteforce(h, caps.brute_cap);
    if (ne <= caps.connected_cap) return check_sparsity_connected(h, caps.connected_cap);
    return check_sparsity_matroid(h, rank_cfg, want_witness);
}

inline bool graph_is_sparse(const BodyBarOrbitGraph& h, const SparsityCaps& caps = {},
                            const RankConfig& rank_cfg = {}) {
    return check_sparsity_auto(h, caps, rank_cfg, /*want_witness=*/false).sparse;
}

}  // namespace torbar
