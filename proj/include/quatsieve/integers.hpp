#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace quatsieve {

using Int = mpz_class;

inline int sign_of(const Int& v) { return mpz_sgn(v.get_mpz_t()); }

inline Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt_floor: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Int cbrt_floor(const Int& n) {
    if (n < 0) throw std::domain_error("cbrt_floor: negative argument");
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
    return r;
}

inline Int pow_ui(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int powmod(const Int& base, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

// exact p-adic valuation; n must be nonzero
inline unsigned valuation_int(const Int& n, const Int& p) {
    if (n == 0) throw std::domain_error("valuation_int: zero argument");
    Int rest;
    return static_cast<unsigned>(
        mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

inline unsigned ord2(const Int& n) { return valuation_int(n, 2); }

// Kronecker symbol (a/n), standard completion of the Jacobi symbol:
// (a/0) = 1 iff a = +-1, (a/2) by the mod-8 rule, multiplicative in n.
inline int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
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

inline bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
    // n odd >= 3
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    a %= n;
    if (a == 0) return true;
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // this witness set is a proved deterministic test for the full 64-bit range
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin_u64(n, a)) return false;
    return true;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) { std::uint64_t t = a % b; a = b; b = t; }
    return a;
}

// Brent's cycle variant of the rho method, deterministic parameter sweep.
// q hitting 0 marks an exhausted cycle; the stepwise replay then either finds
// the factor or moves on to the next polynomial.
inline std::uint64_t pollard_brent_u64(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    if (n % 3 == 0) return 3;
    for (std::uint64_t c = 1;; ++c) {
        auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        std::uint64_t x = 2, y = 2, ys = 2, q = 1, d = 1, r = 1;
        const std::uint64_t m = 128;
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            for (std::uint64_t k = 0; k < r && d == 1; k += m) {
                ys = y;
                std::uint64_t lim = std::min<std::uint64_t>(m, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
            }
            r <<= 1;
        } while (d == 1);
        if (d == n) {
            do {
                ys = step(ys);
                d = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

inline void factor_u64_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n < 2) return;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (n % p == 0) { out.push_back(p); n /= p; }
    }
    if (n == 1) return;
    if (is_prime_u64(n)) { out.push_back(n); return; }
    std::uint64_t d = pollard_brent_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

} // namespace detail

// Deterministic primality: fixed-witness strong test below 2^64,
// trial division above (inputs are desk-scale).
inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t()) || mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        std::uint64_t v = 0;
        mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
        return detail::is_prime_u64(v);
    }
    if (mpz_even_p(n.get_mpz_t())) return false;
    Int lim = isqrt_floor(n);
    for (Int d = 3; d <= lim; d += 2)
        if (n % d == 0) return false;
    return true;
}

struct Factorization {
    // (prime, exponent), primes strictly increasing
    std::vector<std::pair<Int, unsigned>> entries;

    Int value() const {
        Int v = 1;
        for (const auto& [p, e] : entries) v *= pow_ui(p, e);
        return v;
    }
    bool operator==(const Factorization& o) const { return entries == o.entries; }
};

inline std::pair<int, Factorization> factorize(const Int& n) {
    if (n == 0) throw std::invalid_argument("factorize: zero input");
    int sign = n < 0 ? -1 : 1;
    Int a = abs(n);
    std::vector<std::uint64_t> small;
    Factorization fac;
    if (mpz_sizeinbase(a.get_mpz_t(), 2) <= 64) {
        std::uint64_t v = 0;
        mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, a.get_mpz_t());
        detail::factor_u64_into(v, small);
        std::sort(small.begin(), small.end());
        for (std::size_t i = 0; i < small.size();) {
            std::size_t j = i;
            while (j < small.size() && small[j] == small[i]) ++j;
            Int p;
            mpz_import(p.get_mpz_t(), 1, -1, sizeof(std::uint64_t), 0, 0, &small[i]);
            fac.entries.emplace_back(p, static_cast<unsigned>(j - i));
            i = j;
        }
        return {sign, fac};
    }
    // big path: strip small primes, then trial-divide the rest
    Int p = 2;
    while (a > 1 && p * p <= a) {
        if (a % p == 0) {
            unsigned e = 0;
            while (a % p == 0) { a /= p; ++e; }
            fac.entries.emplace_back(p, e);
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    if (a > 1) fac.entries.emplace_back(a, 1);
    return {sign, fac};
}

// least nonnegative square root r with r^2 = a (mod p), 0 <= r <= (p-1)/2;
// empty when a is a non-residue. p must be an odd prime.
inline std::optional<Int> sqrt_mod(const Int& a_in, const Int& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()))
        throw std::invalid_argument("sqrt_mod: modulus must be an odd prime");
    Int a = mod_pos(a_in, p);
    if (a == 0) return Int(0);
    if (kronecker(a, p) == -1) return std::nullopt;
    Int r;
    if (mod_pos(p, 4) == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks with the least non-residue as generator
        Int q = p - 1;
        unsigned s = 0;
        while (mpz_even_p(q.get_mpz_t())) { q /= 2; ++s; }
        Int z = 2;
        while (kronecker(z, p) != -1) ++z;
        Int c = powmod(z, q, p);
        Int t = powmod(a, q, p);
        r = powmod(a, (q + 1) / 2, p);
        unsigned m = s;
        while (t != 1) {
            Int t2 = t;
            unsigned i = 0;
            while (t2 != 1) { t2 = t2 * t2 % p; ++i; }
            Int b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b % p;
            r = r * b % p;
            c = b * b % p;
            t = t * c % p;
            m = i;
        }
    }
    Int alt = p - r;
    if (alt < r) r = alt;
    return r;
}

// n = s^2 * f with f square-free; returns (s, f). n >= 1.
inline std::pair<Int, Int> squarefree_decompose(const Int& n) {
    if (n < 1) throw std::invalid_argument("squarefree_decompose: input must be positive");
    auto [sign, fac] = factorize(n);
    (void)sign;
    Int s = 1, f = 1;
    for (const auto& [p, e] : fac.entries) {
        s *= pow_ui(p, e / 2);
        if (e % 2) f *= p;
    }
    return {s, f};
}

inline bool is_squarefree(const Int& n) {
    if (n == 0) return false;
    return squarefree_decompose(abs(n)).first == 1;
}

inline Int squarefree_part(const Int& n) {
    if (n < 1) throw std::invalid_argument("squarefree_part: input must be positive");
    return squarefree_decompose(n).second;
}

// ascending primes in [lo, hi]
inline std::vector<Int> primes_in_range(const Int& lo, const Int& hi) {
    std::vector<Int> out;
    Int p = lo > 2 ? Int(lo - 1) : Int(1);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    while (p <= hi) {
        out.push_back(p);
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    return out;
}

} // namespace quatsieve
