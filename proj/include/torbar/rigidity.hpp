#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torbar/errors.hpp"
#include "torbar/graph.hpp"
#include "torbar/induced.hpp"
#include "torbar/prime_field.hpp"
#include "torbar/rng.hpp"

namespace torbar {

struct RankConfig {
    std::uint64_t prime = kMersenne61;
    int trials = 3;
    std::uint64_t seed = 0;
    bool exact = false;  // integer positions in [0, 2^32), fraction-free rank
};

struct RigidityVerdict {
    std::size_t rank = 0;
    std::int64_t dof = 0;  // kernel dimension minus the 3 trivial translations
    bool minimally_rigid = false;
    int trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t prime = 0;
    bool exact = false;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

using FieldPositions = std::vector<std::array<std::uint64_t, 3>>;
using IntPositions = std::vector<std::array<std::int64_t, 3>>;

// |E| x 3|V| matrix over F_p; the row of edge {v_i, v_j; m} carries
// p_i - (p_j + m) in v_i's column block and its negation in v_j's block.
struct FieldMatrix {
    std::uint64_t prime = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> a;  // row-major
    std::vector<EdgeId> row_edge_ids;

    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> a;  // row-major
    std::vector<EdgeId> row_edge_ids;
};

inline FieldPositions sample_positions(const BarJointOrbitGraph& g, const PrimeField& field,
                                       std::uint64_t seed) {
    SplitMix64 rng(seed);
    FieldPositions p(g.vertex_count());
    for (auto& v : p) {
        for (int k = 0; k < 3; ++k) v[k] = field.sample(rng);
    }
    return p;
}

inline IntPositions sample_int_positions(const BarJointOrbitGraph& g, std::uint64_t seed) {
    SplitMix64 rng(seed);
    IntPositions p(g.vertex_count());
    for (auto& v : p) {
        for (int k = 0; k < 3; ++k) v[k] = static_cast<std::int64_t>(rng.next() >> 32);
    }
    return p;
}

namespace detail {

inline void fill_field_row(std::uint64_t* row, const OrientedEdge& e, const FieldPositions& pos,
                           const PrimeField& F) {
    for (int k = 0; k < 3; ++k) {
        const std::uint64_t shifted = F.add(pos[e.head][k], F.from_int(e.gain[k]));
        const std::uint64_t d = F.sub(pos[e.tail][k], shifted);
        row[3 * e.tail + k] = F.add(row[3 * e.tail + k], d);
        row[3 * e.head + k] = F.sub(row[3 * e.head + k], d);
    }
}

}  // namespace detail

// Rows in the order of `edge_ids`.
inline FieldMatrix assemble_matrix_rows(const BarJointOrbitGraph& g,
                                        std::span<const EdgeId> edge_ids,
                                        const FieldPositions& positions, const PrimeField& field) {
    if (positions.size() != g.vertex_count()) {
        throw DomainError("positions must assign 3 scalars to every vertex");
    }
    FieldMatrix m;
    m.prime = field.prime();
    m.rows = edge_ids.size();
    m.cols = 3 * g.vertex_count();
    m.a.assign(m.rows * m.cols, 0);
    m.row_edge_ids.assign(edge_ids.begin(), edge_ids.end());
    for (std::size_t r = 0; r < edge_ids.size(); ++r) {
        detail::fill_field_row(m.a.data() + r * m.cols, g.edge(edge_ids[r]), positions, field);
    }
    return m;
}

// One row per edge, ascending edge id.
inline FieldMatrix assemble_matrix(const BarJointOrbitGraph& g, const FieldPositions& positions,
                                   const PrimeField& field) {
    std::vector<EdgeId> ids;
    ids.reserve(g.edge_count());
    for (const OrientedEdge& e : g.edges()) ids.push_back(e.id);
    return assemble_matrix_rows(g, ids, positions, field);
}

inline IntMatrix assemble_matrix_exact(const BarJointOrbitGraph& g, const IntPositions& positions) {
    if (positions.size() != g.vertex_count()) {
        throw DomainError("positions must assign 3 scalars to every vertex");
    }
    IntMatrix m;
    m.rows = g.edge_count();
    m.cols = 3 * g.vertex_count();
    m.a.assign(m.rows * m.cols, 0);
    std::size_t r = 0;
    for (const OrientedEdge& e : g.edges()) {
        m.row_edge_ids.push_back(e.id);
        for (int k = 0; k < 3; ++k) {
            const std::int64_t d = positions[e.tail][k] - (positions[e.head][k] + e.gain[k]);
            m.a[r * m.cols + 3 * e.tail + k] += d;
            m.a[r * m.cols + 3 * e.head + k] -= d;
        }
        ++r;
    }
    return m;
}

// Gaussian elimination over F_p; consumes its argument.
inline std::size_t field_rank(FieldMatrix m) {
    const PrimeField F(m.prime);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pivot = m.rows;
        for (std::size_t i = r; i < m.rows; ++i) {
            if (m.a[i * m.cols + c] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot == m.rows) continue;
        if (pivot != r) {
            for (std::size_t cc = c; cc < m.cols; ++cc) {
                std::swap(m.a[pivot * m.cols + cc], m.a[r * m.cols + cc]);
            }
        }
        const std::uint64_t inv = F.inv(m.a[r * m.cols + c]);
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            const std::uint64_t lead = m.a[i * m.cols + c];
            if (lead == 0) continue;
            const std::uint64_t factor = F.mul(lead, inv);
            m.a[i * m.cols + c] = 0;
            for (std::size_t cc = c + 1; cc < m.cols; ++cc) {
                m.a[i * m.cols + cc] =
                    F.sub(m.a[i * m.cols + cc], F.mul(factor, m.a[r * m.cols + cc]));
            }
        }
        ++r;
    }
    return r;
}

// Fraction-free rank of an integer matrix; exact for any input.
inline std::size_t exact_rank(const IntMatrix& in) {
    using boost::multiprecision::cpp_int;
    std::vector<cpp_int> a(in.a.begin(), in.a.end());
    const std::size_t rows = in.rows, cols = in.cols;
    std::size_t r = 0;
    cpp_int prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a[i * cols + c] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        if (pivot != r) {
            for (std::size_t cc = 0; cc < cols; ++cc) std::swap(a[pivot * cols + cc], a[r * cols + cc]);
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t cc = c + 1; cc < cols; ++cc) {
                a[i * cols + cc] = (a[r * cols + c] * a[i * cols + cc] - a[i * cols + c] * a[r * cols + cc]) / prev;
            }
            a[i * cols + c] = 0;
        }
        prev = a[r * cols + c];
        ++r;
    }
    return r;
}

// The three vectors assigning one unit coordinate to every vertex must lie in
// the kernel of every assembled matrix; checked exactly in the field.
inline bool translations_in_kernel(const FieldMatrix& m) {
    const PrimeField F(m.prime);
    for (int k = 0; k < 3; ++k) {
        for (std::size_t r = 0; r < m.rows; ++r) {
            std::uint64_t sum = 0;
            for (std::size_t c = k; c < m.cols; c += 3) sum = F.add(sum, m.a[r * m.cols + c]);
            if (sum != 0) return false;
        }
    }
    return true;
}

namespace detail {

// Max rank over `trials` random position samples of the rows `edge_ids`.
inline std::size_t sampled_rank(const BarJointOrbitGraph& g, std::span<const EdgeId> edge_ids,
                                const RankConfig& cfg) {
    const std::size_t nv = g.vertex_count();
    const std::size_t upper =
        std::min(edge_ids.size(), nv > 0 ? 3 * nv - 3 : 0);  // translations always in the kernel
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    std::size_t best = 0;
    if (cfg.exact) {
        for (int t = 0; t < cfg.trials && best < upper; ++t) {
            const IntPositions pos = sample_int_positions(g, derive_seed(cfg.seed, t));
            IntMatrix full = assemble_matrix_exact(g, pos);
            // Row selection for the exact path.
            IntMatrix sel;
            sel.cols = full.cols;
            sel.rows = edge_ids.size();
            sel.a.reserve(sel.rows * sel.cols);
            for (EdgeId id : edge_ids) {
                const auto it = std::find(full.row_edge_ids.begin(), full.row_edge_ids.end(), id);
                const std::size_t r = static_cast<std::size_t>(it - full.row_edge_ids.begin());
                sel.a.insert(sel.a.end(), full.a.begin() + r * full.cols,
                             full.a.begin() + (r + 1) * full.cols);
            }
            best = std::max(best, exact_rank(sel));
        }
        return best;
    }
    const PrimeField field(cfg.prime);
    for (int t = 0; t < cfg.trials && best < upper; ++t) {
        const FieldPositions pos = sample_positions(g, field, derive_seed(cfg.seed, t));
        best = std::max(best, field_rank(assemble_matrix_rows(g, edge_ids, pos, field)));
    }
    return best;
}

}  // namespace detail

// Generic rank of the periodic rigidity matrix, estimated as the maximum
// rank over `trials` position samples drawn uniformly from the field. The
// estimate is exact except with probability at most (rows/prime)^trials.
inline RigidityVerdict generic_rank(const BarJointOrbitGraph& g, const RankConfig& cfg = {}) {
    std::vector<EdgeId> ids;
    ids.reserve(g.edge_count());
    for (const OrientedEdge& e : g.edges()) ids.push_back(e.id);

    RigidityVerdict v;
    v.rows = ids.size();
    v.cols = 3 * g.vertex_count();
    v.rank = detail::sampled_rank(g, ids, cfg);
    const std::int64_t kernel = static_cast<std::int64_t>(v.cols) - static_cast<std::int64_t>(v.rank);
    v.dof = g.vertex_count() > 0 ? kernel - 3 : 0;
    const std::size_t target = g.vertex_count() > 0 ? 3 * g.vertex_count() - 3 : 0;
    v.minimally_rigid = g.vertex_count() > 0 && v.rank == target && v.rows == target;
    v.trials = cfg.trials;
    v.seed = cfg.seed;
    v.prime = cfg.prime;
    v.exact = cfg.exact;
    return v;
}

inline RigidityVerdict generic_rank(const InducedFramework& f, const RankConfig& cfg = {}) {
    return generic_rank(f.graph, cfg);
}

// 3|V| - rank: dimension of the space of infinitesimal motions. At least 3.
inline int motion_space_dim(const InducedFramework& f, const RankConfig& cfg = {}) {
    const RigidityVerdict v = generic_rank(f, cfg);
    return static_cast<int>(v.cols - v.rank);
}

// Y is generically independent iff the rows of all internal (body) edges
// together with Y's bars have full rank. Internal rows alone are always
// independent (each body is a generically isostatic framework).
inline bool edge_row_independence(const BodyBarOrbitGraph& h, const EdgeSubset& y,
                                  const RankConfig& cfg = {}) {
    if (y.empty()) throw EmptySubsetError();
    if (&y.graph() != &h) throw DomainError("edge subset refers to a different graph");
    const InducedFramework f = induce_bar_joint(h);
    std::vector<EdgeId> rows = f.body_edge_ids;
    for (EdgeId id : y.ids()) rows.push_back(f.bar_of_hedge.at(id));
    return detail::sampled_rank(f.graph, rows, cfg) == rows.size();
}

}  // namespace torbar
