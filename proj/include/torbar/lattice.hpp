#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace torbar {

namespace detail {

// Fraction-free (Bareiss) elimination on an N x 3 integer matrix. Pivots are
// the first nonzero entries in column order; divisions are exact.
template <class Int>
int lattice_rank_impl(std::vector<std::array<Int, 3>> m) {
    int rank = 0;
    Int prev = 1;
    const int n = static_cast<int>(m.size());
    for (int col = 0; col < 3 && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r) {
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < n; ++r) {
            for (int c = col + 1; c < 3; ++c) {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Rank over Q of an integer generator matrix with 3 columns, which equals the
// rank of the sublattice of Z^3 the rows generate. Entries below 2^40 stay in
// 128-bit arithmetic (3x3 minors are bounded by 6*max^3 < 2^123); anything
// larger goes through arbitrary precision.
inline int lattice_rank(std::span<const std::array<std::int64_t, 3>> rows) {
    std::int64_t max_abs = 0;
    for (const auto& r : rows) {
        for (std::int64_t v : r) {
            const std::int64_t a = v < 0 ? -v : v;
            if (a > max_abs) max_abs = a;
        }
    }
    if (max_abs < (std::int64_t(1) << 40)) {
        std::vector<std::array<__int128, 3>> m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (int k = 0; k < 3; ++k) m[i][k] = rows[i][k];
        }
        return detail::lattice_rank_impl(std::move(m));
    }
    std::vector<std::array<boost::multiprecision::cpp_int, 3>> m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int k = 0; k < 3; ++k) m[i][k] = rows[i][k];
    }
    return detail::lattice_rank_impl(std::move(m));
}

inline int lattice_rank(const std::vector<std::array<std::int64_t, 3>>& rows) {
    return lattice_rank(std::span<const std::array<std::int64_t, 3>>(rows));
}

}  // namespace torbar
