#pragma once

#include "quatsieve/quaternion.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace quatsieve {

// ---------------------------------------------------------------------------
// exceptional prime sets
// ---------------------------------------------------------------------------

enum class NsetVariant { full = 0, reduced = 1 };

inline const char* variant_name(NsetVariant v) {
    return v == NsetVariant::full ? "full" : "reduced";
}

// The exceptional set for (F, ell): every prime above ell together with every
// prime divisor of a nonzero value a^2 - s*ell (s = 0..4) and, in the full
// variant, a^4 - 4 a^2 ell + ell^2, as a runs over the integral elements with
// tau(a)^2 <= 4 ell at every embedding.  Zero values are skipped.
struct ExceptionalSet {
    Int ell;
    FieldDesc field;
    NsetVariant variant = NsetVariant::full;
    std::vector<PrimeIdealF> members; // canonical order

    bool contains(const PrimeIdealF& pr) const {
        return std::binary_search(members.begin(), members.end(), pr);
    }
    bool contains_rational(const Int& p) const {
        for (const auto& m : members)
            if (m.p == p) return true;
        return false;
    }
};

inline ExceptionalSet compute_exceptional_set(const FieldDesc& F, const Int& ell,
                                              NsetVariant variant) {
    if (!is_prime(ell))
        throw std::invalid_argument("compute_exceptional_set: ell must be prime");
    std::set<PrimeIdealF> members;
    for (const auto& pr : decompose_prime(F, ell)) members.insert(pr);
    std::set<std::pair<Int, Int>> seen;
    auto absorb = [&](const AlgInt& v) {
        if (v.is_zero()) return;
        if (!seen.insert({v.x, v.y}).second) return;
        for (const auto& [pr, e] : factor_element(F, v).entries) members.insert(pr);
    };
    for (const auto& a : enumerate_bounded(F, 4 * ell)) {
        AlgInt a2 = mul(F, a, a);
        for (int s = 0; s <= 4; ++s) absorb(a2 - AlgInt(s * ell));
        if (variant == NsetVariant::full) {
            AlgInt a4 = mul(F, a2, a2);
            absorb(a4 - a2 * (4 * ell) + AlgInt(ell * ell));
        }
    }
    ExceptionalSet out;
    out.ell = ell;
    out.field = F;
    out.variant = variant;
    out.members.assign(members.begin(), members.end());
    return out;
}

// write-once concurrent cache keyed by (field, ell, variant)
class ExceptionalSetCache {
  public:
    const ExceptionalSet& get(const FieldDesc& F, const Int& ell, NsetVariant variant) {
        Key k{F.degree, F.degree == 2 ? F.D : Int(0), ell, static_cast<int>(variant)};
        {
            std::shared_lock lock(mu_);
            auto it = map_.find(k);
            if (it != map_.end()) return *it->second;
        }
        auto computed = std::make_unique<ExceptionalSet>(
            compute_exceptional_set(F, ell, variant));
        std::unique_lock lock(mu_);
        auto [it, inserted] = map_.try_emplace(k, std::move(computed));
        return *it->second; // first writer wins
    }

  private:
    using Key = std::tuple<int, Int, Int, int>;
    std::map<Key, std::unique_ptr<ExceptionalSet>> map_;
    std::shared_mutex mu_;
};

inline ExceptionalSetCache& global_nset_cache() {
    static ExceptionalSetCache cache;
    return cache;
}

// ---------------------------------------------------------------------------
// unit-order bound attached to a discriminant
// ---------------------------------------------------------------------------

// lcm of 2 and the orders n >= 3 whose real cyclotomic field lies in F and
// whose cyclotomic quadratic extension avoids splitting at the mandatory part
// of the discriminant, for every rational prime under it
inline Int compute_kappa_bound(const QuatDisc& B) {
    const FieldDesc& F = B.field;
    if (F.degree > 2)
        throw std::invalid_argument("compute_kappa_bound: degree <= 2 only");
    std::vector<Int> candidates{3, 4, 6};
    if (F.degree == 2) {
        if (F.D == 5) { candidates.push_back(5); candidates.push_back(10); }
        if (F.D == 2) candidates.push_back(8);
        if (F.D == 3) candidates.push_back(12);
    }
    std::set<Int> ells;
    for (const auto& pr : B.primes) ells.insert(pr.p);
    Int kappa = 2;
    for (const Int& n : candidates) {
        bool ok = true;
        for (const Int& ell : ells) {
            IdealFactorization al = odd_local_degree_part(F, ell);
            for (const auto& pr : B.primes) {
                if (al.contains(pr)) continue;
                if (splits_in_cyclotomic_ext(F, pr, n)) { ok = false; break; }
            }
            if (!ok) break;
        }
        if (ok) {
            Int l;
            mpz_lcm(l.get_mpz_t(), kappa.get_mpz_t(), n.get_mpz_t());
            kappa = l;
        }
    }
    return kappa;
}

// If ord_2(2*kappa) <= ord_2(q + 1) at n0, the imaginary quadratic field is
// pinned to Q(sqrt(-N)) for the prime N under n0.
inline std::optional<Int> forced_field_prime(const PrimeIdealF& n0, const Int& kappa) {
    if (ord2(2 * kappa) <= ord2(n0.q() + 1)) return n0.p;
    return std::nullopt;
}

// discriminant of Q(sqrt(-d)) for square-free d >= 1
inline Int quadratic_field_disc(const Int& d) {
    return mod_pos(-d, 4) == 1 ? Int(-d) : Int(-4 * d);
}

// ---------------------------------------------------------------------------
// triplets and verdicts
// ---------------------------------------------------------------------------

// candidate endomorphism data: discriminant set, square-free totally positive
// m (E = F(sqrt m)), and d >= 1 square-free (K = Q(sqrt -d))
struct ModularTriplet {
    FieldDesc field;
    QuatDisc disc;
    AlgInt m;
    Int d = 1;
    bool assume_locally_maximal = true;
};

enum class VerdictStatus { Excluded, NoObstructionFound, NotApplicable };

inline const char* status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Excluded: return "Excluded";
        case VerdictStatus::NoObstructionFound: return "NoObstructionFound";
        default: return "NotApplicable";
    }
}

struct Witness {
    std::string criterion;
    std::optional<Int> ell;
    std::optional<PrimeIdealF> prime_ideal;
    std::string reason;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::NoObstructionFound;
    std::optional<Witness> witness;   // present iff Excluded
    std::optional<Int> bound;         // present iff NoObstructionFound via a search
    std::optional<std::string> unmet; // present iff NotApplicable

    bool excluded() const { return status == VerdictStatus::Excluded; }
    bool not_applicable() const { return status == VerdictStatus::NotApplicable; }

    static Verdict pass() { return Verdict{}; }
    static Verdict no_obstruction(Int b) {
        Verdict v;
        v.bound = std::move(b);
        return v;
    }
    static Verdict na(std::string what) {
        Verdict v;
        v.status = VerdictStatus::NotApplicable;
        v.unmet = std::move(what);
        return v;
    }
    static Verdict fail(Witness w) {
        Verdict v;
        v.status = VerdictStatus::Excluded;
        v.witness = std::move(w);
        return v;
    }
};

// schema-level and arithmetic validation; returns pointered messages
inline std::vector<std::string> validate_triplet(const ModularTriplet& t) {
    std::vector<std::string> errs;
    const FieldDesc& F = t.field;
    if (F.degree != 1 && F.degree != 2) {
        errs.push_back("/field/degree: must be 1 or 2");
        return errs;
    }
    if (F.degree == 2 && (F.D <= 1 || !is_squarefree(F.D)))
        errs.push_back("/field/D: must be square-free and > 1");
    if (F.degree == 1 && t.m.y != 0)
        errs.push_back("/m/y: must be 0 over the rationals");
    if (t.disc.field != F) errs.push_back("/disc: field mismatch");
    if (t.disc.primes.empty())
        errs.push_back("/disc: must be nonempty (division algebra)");
    for (std::size_t i = 0; i < t.disc.primes.size(); ++i) {
        const auto& pr = t.disc.primes[i];
        std::string at = "/disc/" + std::to_string(i);
        if (!is_prime(pr.p)) {
            errs.push_back(at + "/p: not prime");
            continue;
        }
        if (F.degree == 1) {
            if (pr.kind != IdealKind::split || pr.root != 0)
                errs.push_back(at + ": degree-1 primes use kind \"split\", no root");
            continue;
        }
        int k = kronecker(F.disc(), pr.p);
        IdealKind want = k == 1    ? IdealKind::split
                         : k == -1 ? IdealKind::inert
                                   : IdealKind::ramified;
        if (pr.kind != want) {
            errs.push_back(at + "/kind: inconsistent with the field at p=" + pr.p.get_str());
            continue;
        }
        if (pr.kind == IdealKind::split) {
            if (pr.root < 0 || pr.root >= pr.p) {
                errs.push_back(at + "/root: out of range");
            } else {
                Int v = mod_pos(pr.root * pr.root - F.omega_tr() * pr.root - F.omega_c(),
                                pr.p);
                if (v != 0) errs.push_back(at + "/root: not a root of the minimal polynomial");
            }
        }
        if (i > 0 && !(t.disc.primes[i - 1] < pr))
            errs.push_back(at + ": primes must be strictly increasing (canonical order)");
    }
    if (t.m.is_zero()) {
        errs.push_back("/m: must be nonzero");
        return errs;
    }
    if (!is_totally_positive(F, t.m)) errs.push_back("/m: must be totally positive");
    // square-free as an element: no rational prime square divides m, and no
    // principal prime-ideal square divides (m)
    Int g = F.degree == 1 ? Int(abs(t.m.x)) : Int(gcd(t.m.x, t.m.y));
    if (g > 1) {
        auto [sg, fac] = factorize(g);
        (void)sg;
        for (const auto& [p, e] : fac.entries)
            if (e >= 2) errs.push_back("/m: divisible by " + p.get_str() + "^2");
    }
    if (F.degree == 2 && errs.empty()) {
        for (const auto& [pr, e] : factor_element(F, t.m).entries)
            if (e >= 2 && ideal_is_principal(F, pr))
                errs.push_back("/m: square of the principal prime " + pr.str() +
                               " divides (m)");
    }
    if (t.d < 1 || !is_squarefree(t.d))
        errs.push_back("/d: must be a positive square-free integer");
    return errs;
}

inline AlgInt double_elt(const AlgInt& m) { return AlgInt(2 * m.x, 2 * m.y); }

inline bool divides_two_m(const FieldDesc& F, const AlgInt& m, const PrimeIdealF& pr) {
    return valuation(F, double_elt(m), pr) > 0;
}

// ---------------------------------------------------------------------------
// individual criteria
// ---------------------------------------------------------------------------

// (m) = m0^2 * mm with mm | disc; if h(F) = 1 the square part must be trivial
inline Verdict check_condition_i(const ModularTriplet& t) {
    const FieldDesc& F = t.field;
    auto fac = factor_element(F, t.m);
    for (const auto& [pr, e] : fac.entries) {
        if (e % 2 == 1 && !t.disc.contains(pr)) {
            return Verdict::fail({"condition_i", std::nullopt, pr,
                                  "odd-exponent prime " + pr.str() +
                                      " of (m) does not divide the discriminant"});
        }
    }
    if (class_number_is_one(F)) {
        for (const auto& [pr, e] : fac.entries)
            if (e >= 2)
                return Verdict::fail({"condition_i", std::nullopt, pr,
                                      "class number one but (m) carries the square of " +
                                          pr.str()});
    }
    return Verdict::pass();
}

// every discriminant prime away from 2m lies over a rational prime = 3 mod 4
inline Verdict check_condition_ii(const ModularTriplet& t) {
    if (!t.assume_locally_maximal) return Verdict::na("locally_maximal_assumption");
    for (const auto& pr : t.disc.primes) {
        if (divides_two_m(t.field, t.m, pr)) continue;
        if (mod_pos(pr.p, 4) == 1)
            return Verdict::fail({"condition_ii", std::nullopt, pr,
                                  "prime " + pr.p.get_str() + " under " + pr.str() +
                                      " is 1 mod 4"});
    }
    return Verdict::pass();
}

// every discriminant prime away from 2m lies over a prime dividing d
inline Verdict check_condition_ad(const ModularTriplet& t) {
    for (const auto& pr : t.disc.primes) {
        if (divides_two_m(t.field, t.m, pr)) continue;
        if (t.d % pr.p != 0)
            return Verdict::fail({"condition_ad", std::nullopt, pr,
                                  pr.p.get_str() + " does not divide d = " + t.d.get_str()});
    }
    return Verdict::pass();
}

// optional level-shape criterion over Q: disc product must be m or m*N
inline Verdict check_level_shape_criterion(const ModularTriplet& t) {
    if (t.field.degree != 1) return Verdict::na("SY_rational_base_only");
    if (!check_level_shape(t.disc, t.m.x))
        return Verdict::fail({"SY", std::nullopt, std::nullopt,
                              "discriminant product " + t.disc.norm().get_str() +
                                  " is neither m nor m*N for a prime N, m = " +
                                  t.m.x.get_str()});
    return Verdict::pass();
}

// K must be unramified away from N(disc) * disc(F), provided (m) is a
// square-free ideal with m = 3 or an embedding > 4, and some discriminant
// prime away from 2m has odd residue degree
inline Verdict check_field_ramification(const ModularTriplet& t) {
    const FieldDesc& F = t.field;
    for (const auto& [pr, e] : factor_element(F, t.m).entries)
        if (e > 1) return Verdict::na("prop_unr_hypotheses");
    bool size_ok = t.m == AlgInt(3);
    for (int emb = 0; emb < F.degree && !size_ok; ++emb)
        size_ok = sign_at(F, t.m - AlgInt(4), emb) > 0;
    if (!size_ok) return Verdict::na("prop_unr_hypotheses");
    bool have_odd_degree = false;
    for (const auto& pr : t.disc.primes)
        if (!divides_two_m(F, t.m, pr) && pr.f() == 1) have_odd_degree = true;
    if (!have_odd_degree) return Verdict::na("prop_unr_hypotheses");

    Int allowed = t.disc.norm() * abs(F.disc());
    auto [sg, fac] = factorize(quadratic_field_disc(t.d));
    (void)sg;
    for (const auto& [p, e] : fac.entries) {
        if (allowed % p != 0)
            return Verdict::fail({"prop_unr", std::nullopt, std::nullopt,
                                  "K ramifies at " + p.get_str() + " which does not divide " +
                                      allowed.get_str()});
    }
    return Verdict::pass();
}

// The per-(n0, ell) trace criterion: either n0 lies in the exceptional set or
// one of the residue-symbol alternatives holds over the whole discriminant.
// Dyadic discriminant primes have no quadratic residue symbol and are skipped,
// which can only weaken the criterion (never excludes more).
inline Verdict check_trace_obstruction(const ModularTriplet& t, const PrimeIdealF& n0,
                                       const Int& ell, bool use_reduced) {
    const FieldDesc& F = t.field;
    if (!t.assume_locally_maximal) return Verdict::na("locally_maximal_assumption");
    if (!t.disc.contains(n0)) return Verdict::na("n0_not_in_disc");
    if (divides_two_m(F, t.m, n0)) return Verdict::na("n0_divides_2m");
    if (F.degree == 2 && (F.D == 2 || F.D == 3 || F.D == 5))
        return Verdict::na("real_cyclotomic_subfield");
    if (kronecker(quadratic_field_disc(t.d), ell) == -1)
        return Verdict::na("ell_inert_in_K");

    const ExceptionalSet& ns = global_nset_cache().get(
        F, ell, use_reduced ? NsetVariant::reduced : NsetVariant::full);
    if (ns.contains(n0)) return Verdict::pass();

    auto symbols_never_one = [&](const AlgInt& arg, bool skip_ell, bool skip_seven) {
        for (const auto& pr : t.disc.primes) {
            if (pr.p == 2) continue;
            if (skip_ell && pr.p == ell) continue;
            if (skip_seven && pr.p == 7) continue;
            if (residue_symbol(F, arg, pr) == 1) return false;
        }
        return true;
    };
    if (symbols_never_one(AlgInt(-ell), false, false)) return Verdict::pass();
    if (contains_sqrt(F, 2 * ell) && symbols_never_one(AlgInt(-1), true, false))
        return Verdict::pass();
    if ((contains_sqrt(F, ell) || contains_sqrt(F, 3 * ell)) &&
        symbols_never_one(AlgInt(-3), true, false))
        return Verdict::pass();
    if (!use_reduced && F.degree == 2 && F.D == 3) {
        // trace values ell*(2 +- sqrt 3); the paired symbol argument is
        // 49*(-1 -+ 4 sqrt(3)/7) = -49 -+ 28 sqrt(3)  (square factor dropped)
        for (int s : {1, -1}) {
            if (!is_square_in_F(F, AlgInt(2 * ell, s * ell))) continue;
            if (symbols_never_one(AlgInt(-49, -s * 28), true, true))
                return Verdict::pass();
        }
    }
    return Verdict::fail({"trace_obstruction", ell, n0,
                          n0.str() + " lies outside the exceptional set for ell = " +
                              ell.get_str() + " and every residue-symbol alternative fails"});
}

// ---------------------------------------------------------------------------
// candidate enumeration and composite procedures
// ---------------------------------------------------------------------------

inline std::vector<Int> enumerate_candidate_fields(const FieldDesc& F,
                                                   const QuatDisc& disc, const AlgInt& m,
                                                   const Int& d_bound) {
    std::vector<Int> out;
    Int kappa = compute_kappa_bound(disc);
    std::vector<PrimeIdealF> eligible;
    for (const auto& pr : disc.primes)
        if (!divides_two_m(F, m, pr)) eligible.push_back(pr);
    for (Int d = 1; d <= d_bound; ++d) {
        if (!is_squarefree(d)) continue;
        if (!(quat_discriminant(d, m, F) == disc)) continue;
        ModularTriplet t{F, disc, m, d, true};
        if (check_condition_ad(t).excluded()) continue;
        if (check_field_ramification(t).excluded()) continue;
        bool forced_out = false;
        for (const auto& pr : eligible) {
            auto N = forced_field_prime(pr, kappa);
            if (N && *N != d) { forced_out = true; break; }
        }
        if (forced_out) continue;
        out.push_back(d);
    }
    return out;
}

// Pair criterion over Q for odd primes M != N, discriminant {M, N} and
// subfield Q(sqrt M): gates, then the auxiliary-prime scans for the two
// admissible K branches.
inline Verdict check_modular_pair(const Int& M, const Int& N, const Int& ell_bound) {
    if (M == N || mod_pos(M, 2) == 0 || mod_pos(N, 2) == 0 || !is_prime(M) || !is_prime(N))
        throw std::invalid_argument("check_modular_pair: M, N must be distinct odd primes");
    if (mod_pos(N, 4) != 3)
        return Verdict::fail({"Sh_gate_Nmod4", std::nullopt, std::nullopt,
                              "N = " + N.get_str() + " is not 3 mod 4"});
    if (kronecker(-N, M) != -1)
        return Verdict::fail({"Sh_gate_symbol", std::nullopt, std::nullopt,
                              "(-N/M) != -1 for M = " + M.get_str() + ", N = " + N.get_str()});
    auto& cache = global_nset_cache();
    const FieldDesc Q = FieldDesc::rationals();
    auto refutes_dN = [&](const Int& ell) {
        return kronecker(ell, N) == 1 &&
               !cache.get(Q, ell, NsetVariant::full).contains_rational(N) &&
               kronecker(-ell, M) == 1;
    };
    if (mod_pos(M, 4) == 3) {
        for (const Int& ell : primes_in_range(3, ell_bound)) {
            if (refutes_dN(ell))
                return Verdict::fail({"Sh_i", ell, std::nullopt,
                                      "(" + ell.get_str() + "/N) = 1, N outside the exceptional set, (-" +
                                          ell.get_str() + "/M) = +1"});
        }
        return Verdict::no_obstruction(ell_bound);
    }
    // M = 1 mod 4: both K branches (d = N and d = MN) must be refuted
    std::optional<Int> ell_dN;
    for (const Int& ell : primes_in_range(2, ell_bound)) {
        if (refutes_dN(ell)) { ell_dN = ell; break; }
    }
    bool dMN_refuted = false;
    std::optional<Int> ell_dMN;
    if (mod_pos(N, 8) != 3) {
        dMN_refuted = true;
    } else {
        for (const Int& ell : primes_in_range(3, ell_bound)) {
            if (kronecker(-M * N, ell) == 1 &&
                !cache.get(Q, ell, NsetVariant::full).contains_rational(N)) {
                dMN_refuted = true;
                ell_dMN = ell;
                break;
            }
        }
    }
    if (ell_dN && dMN_refuted) {
        std::string why = "d=N refuted by ell = " + ell_dN->get_str() + "; d=MN refuted by " +
                          (ell_dMN ? "ell = " + ell_dMN->get_str() : std::string("N != 3 mod 8"));
        return Verdict::fail({"Sh_ii", *ell_dN, std::nullopt, why});
    }
    return Verdict::no_obstruction(ell_bound);
}

struct RunOptions {
    Int ell_bound = 100;
    bool enable_level_shape = false; // the optional SY criterion over Q
};

// Runs all criteria in a fixed order and returns the first exclusion.
// Reduced exceptional sets are switched on at a prime n0 once the forced-field
// rule pins K to the matching d and 4 | kappa.
inline Verdict run_all(const ModularTriplet& t, const RunOptions& opts = {}) {
    bool any_applicable = false;
    auto note = [&](const Verdict& v) {
        if (!v.not_applicable()) any_applicable = true;
        return v.excluded();
    };
    {
        Verdict v = check_condition_i(t);
        if (note(v)) return v;
    }
    {
        Verdict v = check_condition_ii(t);
        if (note(v)) return v;
    }
    {
        Verdict v = check_condition_ad(t);
        if (note(v)) return v;
    }
    if (opts.enable_level_shape) {
        Verdict v = check_level_shape_criterion(t);
        if (note(v)) return v;
    }
    {
        Verdict v = check_field_ramification(t);
        if (note(v)) return v;
    }
    std::vector<PrimeIdealF> eligible;
    for (const auto& pr : t.disc.primes)
        if (!divides_two_m(t.field, t.m, pr)) eligible.push_back(pr);

    Int kappa = compute_kappa_bound(t.disc);
    std::map<PrimeIdealF, bool> use_reduced;
    if (t.assume_locally_maximal) {
        for (const auto& pr : eligible) {
            auto N = forced_field_prime(pr, kappa);
            if (!N) {
                use_reduced[pr] = false;
                continue;
            }
            any_applicable = true;
            if (*N != t.d)
                return Verdict::fail({"forced_K", std::nullopt, pr,
                                      "K is pinned to Q(sqrt(-" + N->get_str() +
                                          ")) but d = " + t.d.get_str()});
            use_reduced[pr] = mod_pos(kappa, 4) == 0;
        }
    }
    Int discK = quadratic_field_disc(t.d);
    for (const Int& ell : primes_in_range(2, opts.ell_bound)) {
        if (kronecker(discK, ell) == -1) continue;
        for (const auto& pr : eligible) {
            Verdict v = check_trace_obstruction(t, pr, ell, use_reduced[pr]);
            if (note(v)) return v;
        }
    }
    return any_applicable ? Verdict::no_obstruction(opts.ell_bound)
                          : Verdict::na("no criterion applicable");
}

} // namespace quatsieve
