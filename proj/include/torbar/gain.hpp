#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace torbar {

// Per-component bound on gains. Keeps every exact computation in the library
// far away from 128-bit overflow.
inline constexpr std::int64_t kDefaultGainCap = 1'000'000;

// Lattice translation attached to an edge: unit-cell counts along each axis.
struct GainVector {
    std::array<std::int64_t, 3> c{0, 0, 0};

    constexpr GainVector() = default;
    constexpr GainVector(std::int64_t c0, std::int64_t c1, std::int64_t c2) : c{c0, c1, c2} {}

    constexpr std::int64_t operator[](std::size_t i) const { return c[i]; }
    constexpr bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }

    friend constexpr GainVector operator+(const GainVector& a, const GainVector& b) {
        return {a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]};
    }
    friend constexpr GainVector operator-(const GainVector& a, const GainVector& b) {
        return {a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]};
    }
    friend constexpr GainVector operator-(const GainVector& a) {
        return {-a.c[0], -a.c[1], -a.c[2]};
    }

    friend constexpr bool operator==(const GainVector&, const GainVector&) = default;
    friend constexpr auto operator<=>(const GainVector&, const GainVector&) = default;
};

// Sign convention for storing/comparing loop gains: first nonzero component
// nonnegative (a loop with gain m is the same loop with gain -m).
constexpr GainVector canonical_loop_gain(const GainVector& m) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (m.c[i] > 0) return m;
        if (m.c[i] < 0) return -m;
    }
    return m;
}

inline std::string to_string(const GainVector& m) {
    return "(" + std::to_string(m.c[0]) + "," + std::to_string(m.c[1]) + "," +
           std::to_string(m.c[2]) + ")";
}

}  // namespace torbar
