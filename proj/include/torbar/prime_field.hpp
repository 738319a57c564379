#pragma once

#include <cstdint>

#include "torbar/errors.hpp"
#include "torbar/rng.hpp"

namespace torbar {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t(1) << 61) - 1;

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// F_p arithmetic for odd primes below 2^62, with a fast reduction path for
// the default modulus 2^61 - 1.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p) : p_(p), mersenne61_(p == kMersenne61) {
        if (p >= (std::uint64_t(1) << 62)) throw ConfigError("prime must be below 2^62");
        if (!is_prime_u64(p)) throw ConfigError("modulus is not prime: " + std::to_string(p));
        if (p == 2) throw ConfigError("prime must be odd");
    }

    std::uint64_t prime() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        const std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + p_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
        if (mersenne61_) {
            std::uint64_t lo = static_cast<std::uint64_t>(t & kMersenne61);
            std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
            std::uint64_t s = lo + hi;
            s = (s & kMersenne61) + (s >> 61);
            return s >= p_ ? s - p_ : s;
        }
        return static_cast<std::uint64_t>(t % p_);
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        a %= p_;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw DomainError("division by zero in prime field");
        return pow(a, p_ - 2);
    }

    std::uint64_t from_int(std::int64_t v) const {
        const std::int64_t r = v % static_cast<std::int64_t>(p_);
        return r < 0 ? static_cast<std::uint64_t>(r + static_cast<std::int64_t>(p_))
                     : static_cast<std::uint64_t>(r);
    }

    // Uniform in [0, p), rejection on raw 64-bit draws.
    std::uint64_t sample(SplitMix64& rng) const {
        const std::uint64_t threshold = (0 - p_) % p_;
        for (;;) {
            const std::uint64_t r = rng.next();
            if (r >= threshold) return r % p_;
        }
    }

private:
    std::uint64_t p_;
    bool mersenne61_;
};

}  // namespace torbar
