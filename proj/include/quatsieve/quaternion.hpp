#pragma once

#include "quatsieve/quad_field.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace quatsieve {

// Reduced discriminant data of a quaternion algebra over F: the square-free
// set of finite primes where the algebra is division.
struct QuatDisc {
    FieldDesc field;
    std::vector<PrimeIdealF> primes; // canonical order, duplicate-free

    Int norm() const {
        Int n = 1;
        for (const auto& pr : primes) n *= pr.q();
        return n;
    }
    bool contains(const PrimeIdealF& pr) const {
        return std::binary_search(primes.begin(), primes.end(), pr);
    }
    bool operator==(const QuatDisc& o) const {
        return field == o.field && primes == o.primes;
    }
    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (i) s += ", ";
            s += primes[i].str();
        }
        return s + "}";
    }
};

inline int hilbert_symbol_at_infinity(const FieldDesc& F, const AlgInt& a,
                                      const AlgInt& b, int embedding) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("hilbert_symbol: zero argument");
    return (sign_at(F, a, embedding) < 0 && sign_at(F, b, embedding) < 0) ? -1 : 1;
}

namespace detail {

inline int eps4(const Int& u) { return mod_pos(u, 4) == 1 ? 0 : 1; }
inline int omega8(const Int& u) {
    Int r = mod_pos(u, 8);
    return (r == 1 || r == 7) ? 0 : 1;
}

// classical exponent formula for (a, b)_2 over Q_2, exact integer inputs
inline int hilbert2_formula_rational(const Int& a, const Int& b) {
    unsigned va = valuation_int(a, 2), vb = valuation_int(b, 2);
    Int ua = a / pow_ui(2, va), ub = b / pow_ui(2, vb);
    int e = eps4(ua) * eps4(ub) + int(va % 2) * omega8(ub) + int(vb % 2) * omega8(ua);
    return e % 2 ? -1 : 1;
}

// Newton lift of the stored root of x^2 - x - c to a root mod 2^k
// (split dyadic place, so the derivative 2r - 1 is a unit)
inline Int lift_omega_root_2adic(const FieldDesc& F, const Int& root, unsigned k) {
    Int mod = pow_ui(2, k);
    Int c = F.omega_c();
    Int r = root;
    for (unsigned i = 0; i < k + 2; ++i) {
        Int f = r * r - r - c;
        Int df = mod_pos(2 * r - 1, mod);
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("lift_omega_root_2adic: derivative not invertible");
        r = mod_pos(r - f * inv, mod);
        if (mod_pos(r * r - r - c, mod) == 0) break;
    }
    if (mod_pos(r * r - r - c, mod) != 0)
        throw std::logic_error("lift_omega_root_2adic: no convergence");
    return r;
}

// image of a in the completion at a split dyadic place, mod 2^k
inline Int embed_split_dyadic(const FieldDesc& F, const AlgInt& a,
                              const PrimeIdealF& pr, unsigned k) {
    Int r = lift_omega_root_2adic(F, pr.root, k);
    return mod_pos(a.x + a.y * r, pow_ui(2, k));
}

// ---- finite solubility search for dyadic symbols -------------------------
//
// (a,b) = +1 iff a x^2 + b y^2 = z^2 has a primitive local solution, which a
// search modulo pr^N with N = 2 v(4ab) + 3 detects (Hensel-sufficient
// precision).  Each chart fixes one variable to 1, so found solutions are
// automatically primitive.

struct DyadicRing {
    unsigned m = 0;      // coordinates run mod 2^m
    bool quad = false;   // degree-2 ring (Z/2^m)[w]/(w^2 - t w - c)
    std::uint64_t mask = 0, t = 0, c = 0;

    using Elt = std::pair<std::uint64_t, std::uint64_t>;

    Elt reduce(const AlgInt& a) const {
        Int mod = pow_ui(2, m);
        return {mod_pos(a.x, mod).get_ui(), quad ? mod_pos(a.y, mod).get_ui() : 0};
    }
    Elt mul(const Elt& A, const Elt& B) const {
        if (!quad) return {(A.first * B.first) & mask, 0};
        std::uint64_t yy = A.second * B.second;
        return {(A.first * B.first + c * yy) & mask,
                (A.first * B.second + A.second * B.first + t * yy) & mask};
    }
    Elt add(const Elt& A, const Elt& B) const {
        return {(A.first + B.first) & mask, (A.second + B.second) & mask};
    }
    Elt neg(const Elt& A) const {
        return {(~A.first + 1) & mask, (~A.second + 1) & mask};
    }
    std::size_t key(const Elt& A) const {
        return quad ? (A.first | (A.second << m)) : A.first;
    }
    std::size_t size() const { return std::size_t(1) << (quad ? 2 * m : m); }
    Elt element(std::size_t i) const {
        return quad ? Elt{i & mask, i >> m} : Elt{i, 0};
    }
    // inverse of a unit: conj(a) * N(a)^-1 (quad) or Newton inverse (plain)
    Elt inv_unit(const Elt& A) const {
        auto inv_odd = [&](std::uint64_t v) {
            std::uint64_t x = 1;
            for (int i = 0; i < 7; ++i) x = (x * (2 - v * x)) & mask;
            return x & mask;
        };
        if (!quad) return {inv_odd(A.first), 0};
        Elt cj{(A.first + t * A.second) & mask, (~A.second + 1) & mask};
        std::uint64_t n = (A.first * A.first + t * A.first * A.second -
                           c * A.second * A.second) &
                          mask;
        std::uint64_t ninv = inv_odd(n);
        return {(cj.first * ninv) & mask, (cj.second * ninv) & mask};
    }
};

inline int dyadic_solubility_symbol(const FieldDesc& F, AlgInt a, AlgInt b,
                                    const PrimeIdealF& pr) {
    const unsigned e = pr.kind == IdealKind::ramified ? 2 : 1; // v_pr(2)
    auto strip_squares = [&](AlgInt v, unsigned& vout) {
        unsigned t = valuation(F, v, pr);
        while (t >= 2) {
            v = divide_once(F, divide_once(F, v, pr), pr);
            t -= 2;
        }
        vout = t;
        return v;
    };
    unsigned va = 0, vb = 0;
    a = strip_squares(a, va);
    b = strip_squares(b, vb);
    if (va == 1 && vb == 1) {
        // (a, b) = (a, -ab); the product has even valuation
        b = strip_squares(-mul(F, a, b), vb);
    }
    if (va == 1) {
        std::swap(a, b);
        std::swap(va, vb);
    }
    const unsigned N = 2 * (2 * e + vb) + 3;
    const unsigned m = pr.kind == IdealKind::ramified ? (N + 1) / 2 : N;

    DyadicRing ring;
    ring.m = m;
    ring.mask = (std::uint64_t(1) << m) - 1;
    ring.quad = F.degree == 2 && pr.kind != IdealKind::split;
    if (ring.quad) {
        ring.t = mod_pos(F.omega_tr(), pow_ui(2, m)).get_ui();
        ring.c = mod_pos(F.omega_c(), pow_ui(2, m)).get_ui();
    }

    DyadicRing::Elt A, B;
    if (F.degree == 2 && pr.kind == IdealKind::split) {
        unsigned k = m + 2;
        A = {embed_split_dyadic(F, a, pr, k).get_ui() & ring.mask, 0};
        B = {embed_split_dyadic(F, b, pr, k).get_ui() & ring.mask, 0};
    } else {
        A = ring.reduce(a);
        B = ring.reduce(b);
    }

    std::vector<bool> squares(ring.size(), false);
    for (std::size_t i = 0; i < ring.size(); ++i) {
        auto z = ring.element(i);
        squares[ring.key(ring.mul(z, z))] = true;
    }
    auto Ainv = ring.inv_unit(A);
    DyadicRing::Elt one{1, 0};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        auto v = ring.element(i);
        auto v2 = ring.mul(v, v);
        // x = 1:  a + b v^2 square;  y = 1:  a v^2 + b square
        if (squares[ring.key(ring.add(A, ring.mul(B, v2)))]) return 1;
        if (squares[ring.key(ring.add(ring.mul(A, v2), B))]) return 1;
        // z = 1:  x^2 = (1 - b v^2) / a
        if (squares[ring.key(ring.mul(ring.add(one, ring.neg(ring.mul(B, v2))), Ainv))])
            return 1;
    }
    return -1;
}

} // namespace detail

inline int hilbert_symbol(const FieldDesc& F, const AlgInt& a, const AlgInt& b,
                          const PrimeIdealF& pr);

namespace detail {

// product of the symbols of (a, b) over every odd finite place and every real
// place; with a single dyadic place this determines the dyadic symbol
inline int hilbert_product_away_from_two(const FieldDesc& F, const AlgInt& a,
                                         const AlgInt& b) {
    int s = 1;
    Int support = norm(F, a) * norm(F, b);
    auto [sg, fac] = factorize(support);
    (void)sg;
    for (const auto& [p, e] : fac.entries) {
        if (p == 2) continue;
        for (const auto& pr : decompose_prime(F, p)) s *= hilbert_symbol(F, a, b, pr);
    }
    for (int emb = 0; emb < F.degree; ++emb)
        s *= hilbert_symbol_at_infinity(F, a, b, emb);
    return s;
}

inline int hilbert_dyadic(const FieldDesc& F, const AlgInt& a, const AlgInt& b,
                          const PrimeIdealF& pr) {
    if (F.degree == 1)
        return hilbert2_formula_rational(a.x, b.x);
    if (pr.kind == IdealKind::split) {
        unsigned va = valuation(F, a, pr), vb = valuation(F, b, pr);
        unsigned k = va + vb + 6;
        Int ia = embed_split_dyadic(F, a, pr, k);
        Int ib = embed_split_dyadic(F, b, pr, k);
        Int ua = ia / pow_ui(2, va), ub = ib / pow_ui(2, vb);
        int e = eps4(ua) * eps4(ub) + int(va % 2) * omega8(ub) + int(vb % 2) * omega8(ua);
        return e % 2 ? -1 : 1;
    }
    // single dyadic place: solubility search, cross-checked against the
    // product of all other local symbols
    int s = dyadic_solubility_symbol(F, a, b, pr);
    int s2 = hilbert_product_away_from_two(F, a, b);
    if (s != s2)
        throw std::logic_error("hilbert_symbol: dyadic value fails reciprocity cross-check");
    return s;
}

} // namespace detail

// Hilbert symbol (a, b) at a finite place of F.  Odd places use the tame
// formula; dyadic places use the exponent formula over Q_2 (degree 1 and
// split) or a finite solubility search (inert and ramified).
inline int hilbert_symbol(const FieldDesc& F, const AlgInt& a, const AlgInt& b,
                          const PrimeIdealF& pr) {
    if (a.is_zero() || b.is_zero())
        throw std::invalid_argument("hilbert_symbol: zero argument");
    if (pr.p == 2) return detail::hilbert_dyadic(F, a, b, pr);
    unsigned va = valuation(F, a, pr), vb = valuation(F, b, pr);
    int s = 1;
    if ((va % 2) && (vb % 2)) s *= residue_symbol(F, AlgInt(-1), pr);
    if (vb % 2) s *= residue_symbol(F, unit_part(F, a, pr, va), pr);
    if (va % 2) s *= residue_symbol(F, unit_part(F, b, pr, vb), pr);
    return s;
}

// Reduced discriminant of the algebra (-d, m / F): the set of finite primes
// with local symbol -1.  Candidate places sit over the rational primes
// dividing 2 * d * N(m); the result must have even size (reciprocity).
inline QuatDisc quat_discriminant(const Int& d, const AlgInt& m, const FieldDesc& F) {
    if (d < 1 || !is_squarefree(d))
        throw std::invalid_argument("quat_discriminant: d must be positive and square-free");
    if (!is_totally_positive(F, m))
        throw std::invalid_argument("quat_discriminant: m must be totally positive");
    AlgInt a(-d);
    QuatDisc out;
    out.field = F;
    auto [sg, fac] = factorize(2 * d * norm(F, m));
    (void)sg;
    for (const auto& [p, e] : fac.entries)
        for (const auto& pr : decompose_prime(F, p))
            if (hilbert_symbol(F, a, m, pr) == -1) out.primes.push_back(pr);
    std::sort(out.primes.begin(), out.primes.end());
    if (out.primes.size() % 2 != 0)
        throw std::logic_error("quat_discriminant: odd ramification count (reciprocity)");
    return out;
}

// product of the primes above ell whose local degree over Q_ell is odd
inline IdealFactorization odd_local_degree_part(const FieldDesc& F, const Int& ell) {
    IdealFactorization out;
    if (F.degree == 1) {
        out.entries.emplace_back(PrimeIdealF{ell, IdealKind::split, 0}, 1);
        return out;
    }
    for (const auto& pr : decompose_prime(F, ell))
        if (pr.kind == IdealKind::split) out.entries.emplace_back(pr, 1);
    return out;
}

// does pr split in the quadratic extension F(zeta_n) of F?
// For pr above n the extension may ramify; treating that case as non-split
// only enlarges downstream lcm bounds, never shrinks them.
inline bool splits_in_cyclotomic_ext(const FieldDesc& F, const PrimeIdealF& pr,
                                     const Int& n) {
    (void)F;
    if (mod_pos(n, pr.p) == 0) return false;
    return mod_pos(pr.q() - 1, n) == 0;
}

// level-shape check over Q: the discriminant product equals m or m*N for a
// single prime N not dividing m
inline bool check_level_shape(const QuatDisc& disc, const Int& m) {
    if (disc.field.degree != 1)
        throw std::invalid_argument("check_level_shape: rational base field only");
    if (m < 1) throw std::invalid_argument("check_level_shape: m must be positive");
    Int P = disc.norm();
    if (P == m) return true;
    if (P % m != 0) return false;
    Int N = P / m;
    return is_prime(N) && m % N != 0;
}

} // namespace quatsieve
