#pragma once

#include "quatsieve/integers.hpp"

#include <array>
#include <string>
#include <tuple>
#include <vector>

namespace quatsieve {

// Base field F: the rationals or a real quadratic field Q(sqrt(D)) with D > 1
// square-free.  Integral basis {1, omega}, omega = (1+sqrt(D))/2 when
// D = 1 (mod 4) and omega = sqrt(D) otherwise.
struct FieldDesc {
    int degree = 1;
    Int D = 0; // meaningful iff degree == 2

    static FieldDesc rationals() { return FieldDesc{}; }
    static FieldDesc real_quadratic(const Int& d) {
        if (d <= 1 || !is_squarefree(d))
            throw std::invalid_argument("real_quadratic: D must be square-free and > 1");
        FieldDesc f;
        f.degree = 2;
        f.D = d;
        return f;
    }

    bool is_rational() const { return degree == 1; }
    bool omega_is_half() const { return degree == 2 && mod_pos(D, 4) == 1; }
    Int disc() const {
        if (degree == 1) return 1;
        return omega_is_half() ? D : Int(4 * D);
    }
    // minimal polynomial of omega: x^2 - omega_tr()*x - omega_c()
    Int omega_tr() const { return omega_is_half() ? 1 : 0; }
    Int omega_c() const { return omega_is_half() ? Int((D - 1) / 4) : D; }

    bool operator==(const FieldDesc& o) const {
        return degree == o.degree && (degree == 1 || D == o.D);
    }
    bool operator!=(const FieldDesc& o) const { return !(*this == o); }

    std::string str() const {
        if (degree == 1) return "Q";
        return "Q(sqrt(" + D.get_str() + "))";
    }
};

// Integral element x + y*omega of R_F in integral-basis coordinates.
// y stays 0 for degree-1 fields.
struct AlgInt {
    Int x = 0, y = 0;

    AlgInt() = default;
    AlgInt(Int xx) : x(std::move(xx)) {}
    AlgInt(Int xx, Int yy) : x(std::move(xx)), y(std::move(yy)) {}

    bool is_zero() const { return x == 0 && y == 0; }
    bool is_rational() const { return y == 0; }
    bool operator==(const AlgInt& o) const { return x == o.x && y == o.y; }
    bool operator!=(const AlgInt& o) const { return !(*this == o); }

    AlgInt operator+(const AlgInt& o) const { return {x + o.x, y + o.y}; }
    AlgInt operator-(const AlgInt& o) const { return {x - o.x, y - o.y}; }
    AlgInt operator-() const { return {-x, -y}; }
    AlgInt operator*(const Int& k) const { return {x * k, y * k}; }

    std::string str() const {
        if (y == 0) return x.get_str();
        return x.get_str() + (y > 0 ? "+" : "") + y.get_str() + "w";
    }
};

// sign of A + B*sqrt(D), decided exactly (D > 1 square-free)
inline int sign_quad(const Int& A, const Int& B, const Int& D) {
    int sa = sign_of(A), sb = sign_of(B);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Int lhs = A * A, rhs = B * B * D;
    if (lhs == rhs) return 0; // unreachable: sqrt(D) irrational
    return lhs > rhs ? sa : sb;
}

inline AlgInt mul(const FieldDesc& F, const AlgInt& a, const AlgInt& b) {
    if (F.degree == 1) return AlgInt(a.x * b.x, a.y * b.y); // y terms stay 0
    // omega^2 = t*omega + c
    Int t = F.omega_tr(), c = F.omega_c();
    Int yy = a.y * b.y;
    return AlgInt(a.x * b.x + c * yy, a.x * b.y + a.y * b.x + t * yy);
}

inline AlgInt conj(const FieldDesc& F, const AlgInt& a) {
    if (F.degree == 1) return a;
    return AlgInt(a.x + F.omega_tr() * a.y, -a.y);
}

inline Int trace(const FieldDesc& F, const AlgInt& a) {
    if (F.degree == 1) return 2 * a.x;
    return 2 * a.x + F.omega_tr() * a.y;
}

inline Int norm(const FieldDesc& F, const AlgInt& a) {
    if (F.degree == 1) return a.x;
    return a.x * a.x + F.omega_tr() * a.x * a.y - F.omega_c() * a.y * a.y;
}

// coordinates (A, B) with tau(a) = (A +- B*sqrt(D)) / 2 at the two embeddings
inline std::pair<Int, Int> half_coords(const FieldDesc& F, const AlgInt& a) {
    if (F.omega_is_half()) return {2 * a.x + a.y, a.y};
    return {2 * a.x, 2 * a.y};
}

// embedding 0 sends sqrt(D) to +sqrt(D), embedding 1 to -sqrt(D)
inline int sign_at(const FieldDesc& F, const AlgInt& a, int embedding) {
    if (F.degree == 1) return sign_of(a.x);
    auto [A, B] = half_coords(F, a);
    return sign_quad(A, embedding == 0 ? B : Int(-B), F.D);
}

inline bool is_totally_positive(const FieldDesc& F, const AlgInt& a) {
    if (F.degree == 1) return a.x > 0;
    return sign_at(F, a, 0) > 0 && sign_at(F, a, 1) > 0;
}

enum class IdealKind { split = 0, inert = 1, ramified = 2 };

inline const char* kind_name(IdealKind k) {
    switch (k) {
        case IdealKind::split: return "split";
        case IdealKind::inert: return "inert";
        default: return "ramified";
    }
}

// Prime ideal of R_F above the rational prime p.  Split primes are
// distinguished by the residue of omega modulo the ideal; the canonical
// order takes the smaller root first.
struct PrimeIdealF {
    Int p;
    IdealKind kind = IdealKind::split;
    Int root = 0; // residue of omega mod the ideal; meaningful iff split (degree 2)

    int f() const { return kind == IdealKind::inert ? 2 : 1; }
    Int q() const { return kind == IdealKind::inert ? Int(p * p) : p; }

    std::tuple<const Int&, int, const Int&> key() const {
        return {p, static_cast<int>(kind), root};
    }
    bool operator==(const PrimeIdealF& o) const { return key() == o.key(); }
    bool operator!=(const PrimeIdealF& o) const { return !(*this == o); }
    bool operator<(const PrimeIdealF& o) const { return key() < o.key(); }

    std::string str() const {
        if (kind == IdealKind::split) {
            return "(" + p.get_str() + ",w-" + root.get_str() + ")";
        }
        return "(" + p.get_str() + "," + kind_name(kind) + ")";
    }
};

struct IdealFactorization {
    std::vector<std::pair<PrimeIdealF, unsigned>> entries; // canonical order

    bool contains(const PrimeIdealF& pr) const {
        for (const auto& [q, e] : entries)
            if (q == pr) return true;
        return false;
    }
};

inline std::vector<PrimeIdealF> decompose_prime(const FieldDesc& F, const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("decompose_prime: p must be prime");
    if (F.degree == 1) return {PrimeIdealF{p, IdealKind::split, 0}};
    int k = kronecker(F.disc(), p);
    if (k == 0) return {PrimeIdealF{p, IdealKind::ramified, 0}};
    if (k == -1) return {PrimeIdealF{p, IdealKind::inert, 0}};
    // split: the two roots of the minimal polynomial of omega mod p
    Int r1, r2;
    if (p == 2) {
        // disc odd, omega = (1+sqrt(D))/2, x^2 - x - c = x(x+1) mod 2
        r1 = 0;
        r2 = 1;
    } else {
        Int s = *sqrt_mod(F.D, p);
        if (F.omega_is_half()) {
            Int inv2 = (p + 1) / 2;
            r1 = mod_pos((1 + s) * inv2, p);
            r2 = mod_pos((1 - s) * inv2, p);
        } else {
            r1 = s;
            r2 = mod_pos(-s, p);
        }
    }
    if (r2 < r1) std::swap(r1, r2);
    return {PrimeIdealF{p, IdealKind::split, r1}, PrimeIdealF{p, IdealKind::split, r2}};
}

// residue of omega in the degree-1 residue field of pr (split or ramified)
inline Int omega_residue(const FieldDesc& F, const PrimeIdealF& pr) {
    if (pr.kind == IdealKind::split) return pr.root;
    // ramified: the double root of the minimal polynomial mod p
    if (pr.p == 2) return mod_pos(F.D, 2);
    if (F.omega_is_half()) return (pr.p + 1) / 2; // 2r = 1 mod p
    return 0;                                     // p | D
}

inline Int residue_in_fp(const FieldDesc& F, const AlgInt& a, const PrimeIdealF& pr) {
    if (F.degree == 1) return mod_pos(a.x, pr.p);
    return mod_pos(a.x + a.y * omega_residue(F, pr), pr.p);
}

inline unsigned valuation(const FieldDesc& F, const AlgInt& a, const PrimeIdealF& pr) {
    if (a.is_zero()) throw std::domain_error("valuation: zero element");
    const Int& p = pr.p;
    if (F.degree == 1) return valuation_int(a.x, p);
    switch (pr.kind) {
        case IdealKind::inert: {
            unsigned gx = a.x == 0 ? ~0u : valuation_int(a.x, p);
            unsigned gy = a.y == 0 ? ~0u : valuation_int(a.y, p);
            return std::min(gx, gy);
        }
        case IdealKind::ramified:
            return valuation_int(norm(F, a), p);
        case IdealKind::split: {
            unsigned gx = a.x == 0 ? ~0u : valuation_int(a.x, p);
            unsigned gy = a.y == 0 ? ~0u : valuation_int(a.y, p);
            unsigned g = std::min(gx, gy);
            Int pk = pow_ui(p, g);
            AlgInt b(a.x / pk, a.y / pk);
            if (residue_in_fp(F, b, pr) != 0) return g;
            return g + valuation_int(norm(F, b), p);
        }
    }
    return 0;
}

// local uniformizer at a ramified prime, as an element of R_F
inline AlgInt ramified_uniformizer(const FieldDesc& F, const PrimeIdealF& pr) {
    if (F.omega_is_half()) return AlgInt(-1, 2); // 2*omega - 1 = sqrt(D)
    if (pr.p == 2 && mod_pos(F.D, 2) == 1) return AlgInt(1, 1); // 1 + sqrt(D)
    return AlgInt(0, 1);                                        // sqrt(D)
}

// returns b in R_F with v_pr(b) = v_pr(a) - 1 (other valuations immaterial)
inline AlgInt divide_once(const FieldDesc& F, const AlgInt& a, const PrimeIdealF& pr) {
    const Int& p = pr.p;
    auto exact_div = [&](const AlgInt& v) {
        if (v.x % p != 0 || v.y % p != 0)
            throw std::logic_error("divide_once: inexact division");
        return AlgInt(v.x / p, v.y / p);
    };
    if (F.degree == 1 || pr.kind == IdealKind::inert) return exact_div(a);
    if (pr.kind == IdealKind::ramified)
        return exact_div(mul(F, a, ramified_uniformizer(F, pr)));
    // split: multiply by (omega - r') where r' is the conjugate root
    Int rp = mod_pos(F.omega_tr() - pr.root, p);
    return exact_div(mul(F, a, AlgInt(-rp, 1)));
}

inline AlgInt unit_part(const FieldDesc& F, const AlgInt& a, const PrimeIdealF& pr,
                        unsigned val) {
    AlgInt b = a;
    for (unsigned i = 0; i < val; ++i) b = divide_once(F, b, pr);
    return b;
}

inline IdealFactorization factor_element(const FieldDesc& F, const AlgInt& a) {
    if (a.is_zero()) throw std::domain_error("factor_element: zero element");
    IdealFactorization out;
    Int N = norm(F, a);
    auto [sgn, fac] = factorize(N);
    (void)sgn;
    Int check = 1;
    for (const auto& [p, e] : fac.entries) {
        for (const auto& pr : decompose_prime(F, p)) {
            unsigned v = valuation(F, a, pr);
            if (v > 0) {
                out.entries.emplace_back(pr, v);
                for (unsigned i = 0; i < v; ++i) check *= pr.q();
            }
        }
    }
    if (check != abs(N))
        throw std::logic_error("factor_element: norm product mismatch");
    return out;
}

namespace detail {

// arithmetic in F_{p^2} = F_p[w] / (w^2 - t*w - c)
struct Fp2 {
    Int p, t, c;
    using Elt = std::pair<Int, Int>;

    Elt mul(const Elt& a, const Elt& b) const {
        Int yy = a.second * b.second;
        return {mod_pos(a.first * b.first + c * yy, p),
                mod_pos(a.first * b.second + a.second * b.first + t * yy, p)};
    }
    Elt pow(Elt a, Int e) const {
        Elt r{1, 0};
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            e /= 2;
        }
        return r;
    }
};

} // namespace detail

// quadratic residue symbol of a in the residue field of pr (p odd):
// 0 when pr | a, else the value of a^((q-1)/2) read as +-1.
inline int residue_symbol(const FieldDesc& F, const AlgInt& a, const PrimeIdealF& pr) {
    if (pr.p == 2)
        throw std::invalid_argument("residue_symbol: even place");
    if (a.is_zero() || valuation(F, a, pr) > 0) return 0;
    if (pr.kind != IdealKind::inert)
        return kronecker(residue_in_fp(F, a, pr), pr.p);
    detail::Fp2 fq{pr.p, mod_pos(F.omega_tr(), pr.p), mod_pos(F.omega_c(), pr.p)};
    auto r = fq.pow({mod_pos(a.x, pr.p), mod_pos(a.y, pr.p)}, (pr.p * pr.p - 1) / 2);
    if (r.second != 0 || (r.first != 1 && r.first != pr.p - 1))
        throw std::logic_error("residue_symbol: exponentiation left the prime field");
    return r.first == 1 ? 1 : -1;
}

// all a in R_F with tau(a)^2 <= bound_sq at every real embedding
inline std::vector<AlgInt> enumerate_bounded(const FieldDesc& F, const Int& bound_sq) {
    if (bound_sq < 0) throw std::invalid_argument("enumerate_bounded: negative bound");
    std::vector<AlgInt> out;
    if (F.degree == 1) {
        Int X = isqrt_floor(bound_sq);
        for (Int x = -X; x <= X; ++x) out.emplace_back(x);
        return out;
    }
    const Int T4 = 4 * bound_sq;
    const Int t = F.omega_tr();
    const Int bfac = F.omega_is_half() ? 1 : 2;
    // |B|*sqrt(D) <= 2*sqrt(T) and |A| <= 2*sqrt(T) for tau = (A +- B sqrt D)/2
    Int ymax = isqrt_floor(T4 / (F.D * bfac * bfac)) + 1;
    Int Amax = isqrt_floor(T4) + 1;
    for (Int y = -ymax; y <= ymax; ++y) {
        Int xlo, xhi;
        mpz_cdiv_q(xlo.get_mpz_t(), Int(-Amax - t * y).get_mpz_t(), Int(2).get_mpz_t());
        mpz_fdiv_q(xhi.get_mpz_t(), Int(Amax - t * y).get_mpz_t(), Int(2).get_mpz_t());
        for (Int x = xlo; x <= xhi; ++x) {
            AlgInt a(x, y);
            auto [A, B] = half_coords(F, a);
            // both embeddings at once: S >= |2AB| sqrt(D) with S = 4T - A^2 - B^2 D
            Int S = T4 - A * A - B * B * F.D;
            if (S < 0) continue;
            if (S * S < 4 * A * A * B * B * F.D) continue;
            out.push_back(std::move(a));
        }
    }
    return out;
}

// does sqrt(n) lie in F?  (n a nonzero rational integer)
inline bool contains_sqrt(const FieldDesc& F, const Int& n) {
    if (n == 0) throw std::invalid_argument("contains_sqrt: zero input");
    if (n < 0) return false;
    Int f = squarefree_part(n);
    return f == 1 || (F.degree == 2 && f == F.D);
}

// is a = b^2 for some b in the field F (not necessarily integral)?
inline bool is_square_in_F(const FieldDesc& F, const AlgInt& a) {
    if (a.is_zero()) return true;
    if (F.degree == 1) return a.x > 0 && is_perfect_square(a.x);
    auto [X, Y] = half_coords(F, a); // a = (X + Y sqrt D) / 2
    if (Y == 0) {
        Int v = X / 2;
        if (v < 0) return false;
        if (is_perfect_square(v)) return true;
        return v % F.D == 0 && is_perfect_square(v / F.D);
    }
    Int N = norm(F, a);
    if (N < 0 || !is_perfect_square(N)) return false;
    Int n = isqrt_floor(N);
    // b = (U + V sqrt D)/2 with U*V = Y and U^2 = X +- 2n
    for (int s : {1, -1}) {
        Int W = X + s * 2 * n;
        if (W > 0 && is_perfect_square(W)) return true;
    }
    return false;
}

// fundamental Pell solution for Z[sqrt(D)] via the continued fraction of sqrt(D);
// returns (x, y, norm_sign) with x^2 - D y^2 = norm_sign
inline std::tuple<Int, Int, int> pell_fundamental(const Int& D) {
    Int s = isqrt_floor(D);
    Int P = 0, Q = 1, a = s;
    Int h_prev = 1, h_cur = a, k_prev = 0, k_cur = 1;
    for (unsigned n = 1;; ++n) {
        P = a * Q - P;
        Q = (D - P * P) / Q;
        if (Q == 1 && n >= 1) {
            // the convergent just before the period closes
            return {h_cur, k_cur, n % 2 == 0 ? 1 : -1};
        }
        a = (s + P) / Q;
        Int h = a * h_cur + h_prev, k = a * k_cur + k_prev;
        h_prev = h_cur;
        h_cur = h;
        k_prev = k_cur;
        k_cur = k;
        if (n > 100000) throw std::logic_error("pell_fundamental: period overflow");
    }
}

// fundamental unit of R_F, normalized > 1 at the embedding sending sqrt(D)
// to +sqrt(D); the identity for degree 1
inline AlgInt fundamental_unit(const FieldDesc& F) {
    if (F.degree == 1) return AlgInt(1);
    auto [x1, y1, eps] = pell_fundamental(F.D);
    if (!F.omega_is_half()) return AlgInt(x1, y1);
    if (mod_pos(F.D, 8) == 5) {
        // the maximal order may contain a cube root (a + b sqrt D)/2 of the
        // Pell unit, with a^2 - D b^2 = 4*eps
        Int target = 2 * x1;
        Int ac = cbrt_floor(target);
        for (Int da = -1; da <= 2; ++da) {
            Int aa = ac + da;
            if (aa < 1) continue;
            if (aa * aa * aa - 3 * eps * aa != target) continue;
            Int bsq_num = aa * aa - 4 * eps;
            if (bsq_num % F.D != 0) continue;
            Int bsq = bsq_num / F.D;
            if (!is_perfect_square(bsq)) continue;
            Int b = isqrt_floor(bsq);
            return AlgInt((aa - b) / 2, b);
        }
    }
    return AlgInt(x1 - y1, 2 * y1);
}

// is |N(alpha)| = p solvable in R_F?  Search box derived from the fundamental
// unit: some associate of a solution has both embeddings at most sqrt(p*u).
// The box grows with the regulator; fields whose unit pushes it past any
// desk-scale budget are rejected rather than searched forever.
inline bool norm_represents_prime(const FieldDesc& F, const Int& p, const AlgInt& unit) {
    auto [Au, Bu] = half_coords(F, unit);
    Int U = (Au + Bu * (isqrt_floor(F.D) + 1)) / 2 + 1; // integer bound for tau0(unit)
    if (isqrt_floor(4 * p * U / F.D) > Int(1) << 27)
        throw std::runtime_error(
            "norm_represents_prime: unit-derived search box exceeds desk scale for D=" +
            F.D.get_str());
    if (F.omega_is_half()) {
        Int ymax = isqrt_floor(4 * p * U / F.D) + 1;
        for (Int y = 1; y <= ymax; ++y) {
            for (int s : {1, -1}) {
                Int T = F.D * y * y + s * 4 * p;
                if (T < 0 || !is_perfect_square(T)) continue;
                Int t0 = isqrt_floor(T);
                if (mod_pos(t0 - y, 2) == 0) return true;
            }
        }
    } else {
        Int ymax = isqrt_floor(p * U / F.D) + 1;
        for (Int y = 1; y <= ymax; ++y) {
            for (int s : {1, -1}) {
                Int T = F.D * y * y + s * p;
                if (T >= 0 && is_perfect_square(T)) return true;
            }
        }
    }
    return false;
}

inline bool ideal_is_principal(const FieldDesc& F, const PrimeIdealF& pr) {
    if (F.degree == 1) return true;
    if (pr.kind == IdealKind::inert) return true; // generated by p itself
    return norm_represents_prime(F, pr.p, fundamental_unit(F));
}

// h(F) = 1 iff every prime ideal of norm below the Minkowski bound
// sqrt(disc)/2 is principal
inline bool class_number_is_one(const FieldDesc& F) {
    if (F.degree == 1) return true;
    Int disc = F.disc();
    AlgInt u = fundamental_unit(F);
    for (Int p = 2; 4 * p * p <= disc; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
        if (kronecker(disc, p) == -1) continue; // inert: norm p^2 exceeds the bound
        if (!norm_represents_prime(F, p, u)) return false;
    }
    return true;
}

} // namespace quatsieve
