#include "quatsieve/quad_field.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace quatsieve;

namespace {
const FieldDesc Q = FieldDesc::rationals();
const FieldDesc F5 = FieldDesc::real_quadratic(5);
const FieldDesc F2 = FieldDesc::real_quadratic(2);
const FieldDesc F3 = FieldDesc::real_quadratic(3);
const FieldDesc F13 = FieldDesc::real_quadratic(13);
} // namespace

TEST(FieldDesc, Basics) {
    EXPECT_EQ(Q.disc(), 1);
    EXPECT_EQ(F5.disc(), 5);
    EXPECT_EQ(F2.disc(), 8);
    EXPECT_EQ(F3.disc(), 12);
    EXPECT_TRUE(F5.omega_is_half());
    EXPECT_FALSE(F2.omega_is_half());
    EXPECT_THROW(FieldDesc::real_quadratic(12), std::invalid_argument);
    EXPECT_THROW(FieldDesc::real_quadratic(1), std::invalid_argument);
}

TEST(AlgIntArith, NormTraceConj) {
    // m = 8 + 9w in Q(sqrt 5), norm 55, trace 25
    AlgInt m(8, 9);
    EXPECT_EQ(norm(F5, m), 55);
    EXPECT_EQ(trace(F5, m), 25);
    AlgInt mc = conj(F5, m);
    EXPECT_EQ(mul(F5, m, mc), AlgInt(55));
    EXPECT_EQ(m + mc, AlgInt(25, 0));
    // sqrt(2) in Q(sqrt 2)
    AlgInt r2(0, 1);
    EXPECT_EQ(norm(F2, r2), -2);
    EXPECT_EQ(mul(F2, r2, r2), AlgInt(2));
}

TEST(DecomposePrime, Examples) {
    auto split11 = decompose_prime(F5, 11);
    ASSERT_EQ(split11.size(), 2u);
    EXPECT_EQ(split11[0].kind, IdealKind::split);
    EXPECT_EQ(split11[0].root, 4);
    EXPECT_EQ(split11[1].root, 8);

    auto inert2 = decompose_prime(F5, 2);
    ASSERT_EQ(inert2.size(), 1u);
    EXPECT_EQ(inert2[0].kind, IdealKind::inert);
    EXPECT_EQ(inert2[0].q(), 4);

    auto ram5 = decompose_prime(F5, 5);
    ASSERT_EQ(ram5.size(), 1u);
    EXPECT_EQ(ram5[0].kind, IdealKind::ramified);

    auto rational = decompose_prime(Q, 7);
    ASSERT_EQ(rational.size(), 1u);
    EXPECT_EQ(rational[0].f(), 1);

    EXPECT_THROW(decompose_prime(F5, 10), std::invalid_argument);
}

TEST(DecomposePrime, KindMatchesKroneckerOfDisc) {
    for (const auto& F : {F2, F3, F5, F13, FieldDesc::real_quadratic(17)}) {
        for (long p = 2; p < 10000; ++p) {
            if (!is_prime(Int(p))) continue;
            int k = kronecker(F.disc(), p);
            auto dec = decompose_prime(F, p);
            if (k == 1) {
                ASSERT_EQ(dec.size(), 2u);
                for (const auto& pr : dec) {
                    ASSERT_EQ(pr.kind, IdealKind::split);
                    // stored root must satisfy the minimal polynomial
                    Int v = mod_pos(pr.root * pr.root - F.omega_tr() * pr.root - F.omega_c(), p);
                    ASSERT_EQ(v, 0);
                }
                ASSERT_LT(dec[0].root, dec[1].root);
            } else if (k == -1) {
                ASSERT_EQ(dec.size(), 1u);
                ASSERT_EQ(dec[0].kind, IdealKind::inert);
                ASSERT_EQ(dec[0].q(), Int(p) * p);
            } else {
                ASSERT_EQ(dec.size(), 1u);
                ASSERT_EQ(dec[0].kind, IdealKind::ramified);
            }
        }
    }
}

TEST(Valuation, Examples) {
    auto p3 = decompose_prime(Q, 3)[0];
    EXPECT_EQ(valuation(Q, AlgInt(6), p3), 1u);

    // 4 + sqrt(5) = 3 + 2w has norm 11; it lies in the root-4 conjugate
    auto s11 = decompose_prime(F5, 11);
    AlgInt a(3, 2);
    EXPECT_EQ(valuation(F5, a, s11[0]), 1u);
    EXPECT_EQ(valuation(F5, a, s11[1]), 0u);

    // sqrt(5) = 2w - 1
    auto r5 = decompose_prime(F5, 5)[0];
    EXPECT_EQ(valuation(F5, AlgInt(-1, 2), r5), 1u);
    EXPECT_THROW(valuation(F5, AlgInt(0), r5), std::domain_error);
}

TEST(FactorElement, Examples) {
    auto f6 = factor_element(Q, AlgInt(6));
    ASSERT_EQ(f6.entries.size(), 2u);
    EXPECT_EQ(f6.entries[0].first.p, 2);
    EXPECT_EQ(f6.entries[1].first.p, 3);

    // m = 8 + 9w: one ramified prime over 5, one split prime over 11
    auto fm = factor_element(F5, AlgInt(8, 9));
    ASSERT_EQ(fm.entries.size(), 2u);
    EXPECT_EQ(fm.entries[0].first.kind, IdealKind::ramified);
    EXPECT_EQ(fm.entries[0].first.p, 5);
    EXPECT_EQ(fm.entries[0].second, 1u);
    EXPECT_EQ(fm.entries[1].first.p, 11);
    EXPECT_EQ(fm.entries[1].second, 1u);

    auto fs = factor_element(F5, AlgInt(-1, 2));
    ASSERT_EQ(fs.entries.size(), 1u);
    EXPECT_EQ(fs.entries[0].first.kind, IdealKind::ramified);
}

TEST(FactorElement, NormProductInvariant) {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long> dist(-60, 60);
    for (const auto& F : {F2, F3, F5, F13}) {
        for (int i = 0; i < 300; ++i) {
            AlgInt a(dist(rng), dist(rng));
            if (a.is_zero()) continue;
            Int prod = 1;
            for (const auto& [pr, e] : factor_element(F, a).entries)
                for (unsigned k = 0; k < e; ++k) prod *= pr.q();
            ASSERT_EQ(prod, abs(norm(F, a))) << a.str();
        }
    }
}

TEST(ResidueSymbol, Examples) {
    auto i3 = decompose_prime(F5, 3)[0];
    ASSERT_EQ(i3.kind, IdealKind::inert);
    EXPECT_EQ(residue_symbol(F5, AlgInt(-1), i3), 1); // (q-1)/2 = 4 even

    auto p7 = decompose_prime(Q, 7)[0];
    // -3 = 4 = 2^2 mod 7, a square
    EXPECT_EQ(residue_symbol(Q, AlgInt(-3), p7), 1);
    EXPECT_EQ(residue_symbol(Q, AlgInt(-3), decompose_prime(Q, 5)[0]), -1);
    EXPECT_EQ(residue_symbol(Q, AlgInt(-1), p7), -1);
    EXPECT_EQ(residue_symbol(Q, AlgInt(14), p7), 0);

    auto p2 = decompose_prime(Q, 2)[0];
    EXPECT_THROW(residue_symbol(Q, AlgInt(1), p2), std::invalid_argument);
}

TEST(ResidueSymbol, BruteForceOracleSmallFields) {
    // squares in the residue field, enumerated independently, q <= 169
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<long> dist(-50, 50);
    for (const auto& F : {F2, F3, F5, F13}) {
        for (long p : {3L, 5L, 7L, 11L, 13L}) {
            for (const auto& pr : decompose_prime(F, p)) {
                if (pr.q() > 169) continue;
                for (int i = 0; i < 120; ++i) {
                    AlgInt a(dist(rng), dist(rng));
                    if (a.is_zero()) continue;
                    int got = residue_symbol(F, a, pr);
                    int want = testing_oracles::residue_symbol_brute(F, a, pr);
                    ASSERT_EQ(got, want)
                        << F.str() << " " << pr.str() << " " << a.str();
                }
            }
        }
    }
}

TEST(ResidueSymbol, QuarticBulletArguments) {
    // the arguments -49 -+ 28 sqrt(3) used by the quartic-trace alternative
    for (long p : {5L, 7L, 11L, 13L, 23L}) {
        for (const auto& pr : decompose_prime(F3, p)) {
            for (long s : {28L, -28L}) {
                AlgInt arg(-49, s);
                EXPECT_EQ(residue_symbol(F3, arg, pr),
                          testing_oracles::residue_symbol_brute(F3, arg, pr))
                    << p << " " << s;
            }
        }
    }
}

TEST(TotallyPositive, Examples) {
    EXPECT_FALSE(is_totally_positive(F5, AlgInt(1, 8))); // 5 + 4 sqrt5 conj < 0
    EXPECT_TRUE(is_totally_positive(F5, AlgInt(8, 9)));
    EXPECT_TRUE(is_totally_positive(Q, AlgInt(1)));
    EXPECT_TRUE(is_totally_positive(F2, AlgInt(1)));
    EXPECT_FALSE(is_totally_positive(F2, AlgInt(0, 1))); // sqrt 2 has a negative conjugate
    EXPECT_FALSE(is_totally_positive(Q, AlgInt(0)));
}

TEST(EnumerateBounded, RationalExamples) {
    auto e2 = enumerate_bounded(Q, 8); // |a| <= 2 sqrt 2
    std::set<Int> got;
    for (const auto& a : e2) got.insert(a.x);
    EXPECT_EQ(got, (std::set<Int>{-2, -1, 0, 1, 2}));

    auto e3 = enumerate_bounded(Q, 12);
    EXPECT_EQ(e3.size(), 7u); // {0,±1,±2,±3}

    auto exact = enumerate_bounded(Q, 16); // boundary |a| = 4 included
    EXPECT_EQ(exact.size(), 9u);
}

TEST(EnumerateBounded, QuadraticCountAndOracle) {
    // frozen by the box-scan oracle: 15 elements of Q(sqrt 5) with both
    // embeddings squaring to at most 8
    auto got = enumerate_bounded(F5, 8);
    EXPECT_EQ(got.size(), 15u);
    for (const auto& F : {F2, F3, F5, F13}) {
        for (long ell : {2L, 3L, 5L, 7L, 11L}) {
            auto prod = enumerate_bounded(F, 4 * Int(ell));
            auto oracle = testing_oracles::enumerate_bounded_boxscan(F, 4 * Int(ell));
            std::set<std::pair<Int, Int>> sp, so;
            for (const auto& a : prod) sp.insert({a.x, a.y});
            for (const auto& a : oracle) so.insert({a.x, a.y});
            ASSERT_EQ(sp, so) << F.str() << " ell=" << ell;
        }
    }
}

TEST(ContainsSqrt, Examples) {
    EXPECT_TRUE(contains_sqrt(F5, 20));
    EXPECT_FALSE(contains_sqrt(F3, 6));
    EXPECT_TRUE(contains_sqrt(Q, 16));
    EXPECT_FALSE(contains_sqrt(Q, 8));
    EXPECT_FALSE(contains_sqrt(F5, -5));
    EXPECT_TRUE(contains_sqrt(F2, 18));
}

TEST(IsSquareInField, Examples) {
    EXPECT_TRUE(is_square_in_F(F3, AlgInt(4, 2))); // 4 + 2 sqrt3 = (1 + sqrt3)^2
    EXPECT_FALSE(is_square_in_F(F3, AlgInt(4, 1)));
    EXPECT_TRUE(is_square_in_F(F5, AlgInt(5)));  // (sqrt 5)^2
    EXPECT_FALSE(is_square_in_F(F5, AlgInt(-1, 0)));
    EXPECT_TRUE(is_square_in_F(Q, AlgInt(49)));
    EXPECT_FALSE(is_square_in_F(Q, AlgInt(-4)));
    // w = (1+sqrt5)/2 is the square of no field element: norm -1 < 0
    EXPECT_FALSE(is_square_in_F(F5, AlgInt(0, 1)));
}

TEST(IsSquareInField, SquaresRoundTrip) {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<long> dist(-12, 12);
    for (const auto& F : {F2, F3, F5, F13}) {
        for (int i = 0; i < 400; ++i) {
            AlgInt b(dist(rng), dist(rng));
            ASSERT_TRUE(is_square_in_F(F, mul(F, b, b))) << F.str() << " " << b.str();
        }
    }
}

TEST(IsSquareInField, ClaimedSquaresAreLocalSquares) {
    // a field square has residue symbol != -1 at every odd prime of even
    // valuation; catches false positives
    std::mt19937_64 rng(6001);
    std::uniform_int_distribution<long> dist(-40, 40);
    for (const auto& F : {F2, F3, F5, F13}) {
        for (int i = 0; i < 600; ++i) {
            AlgInt a(dist(rng), dist(rng));
            if (a.is_zero() || !is_square_in_F(F, a)) continue;
            for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L}) {
                for (const auto& pr : decompose_prime(F, p)) {
                    if (valuation(F, a, pr) % 2 != 0) continue;
                    AlgInt u = unit_part(F, a, pr, valuation(F, a, pr));
                    ASSERT_NE(residue_symbol(F, u, pr), -1)
                        << F.str() << " " << a.str() << " " << pr.str();
                }
            }
        }
    }
}

TEST(FundamentalUnit, KnownValues) {
    EXPECT_EQ(fundamental_unit(F5), AlgInt(0, 1)); // w = (1+sqrt5)/2
    EXPECT_EQ(fundamental_unit(F2), AlgInt(1, 1)); // 1 + sqrt2
    EXPECT_EQ(fundamental_unit(F3), AlgInt(2, 1)); // 2 + sqrt3
    EXPECT_EQ(fundamental_unit(F13), AlgInt(1, 1)); // (3+sqrt13)/2
    EXPECT_EQ(fundamental_unit(FieldDesc::real_quadratic(21)), AlgInt(2, 1));
    EXPECT_EQ(fundamental_unit(FieldDesc::real_quadratic(10)), AlgInt(3, 1));
}

TEST(FundamentalUnit, MinimalityScan) {
    // |N(u)| = 1, u > 1 at the positive embedding, and no unit lies strictly
    // between 1 and u (scan over the y-coordinate)
    for (long D = 2; D <= 100; ++D) {
        if (!is_squarefree(Int(D))) continue;
        FieldDesc F = FieldDesc::real_quadratic(D);
        AlgInt u = fundamental_unit(F);
        ASSERT_EQ(abs(norm(F, u)), 1) << D;
        ASSERT_GT(sign_at(F, u - AlgInt(1), 0), 0) << D;
        // any smaller unit would give a Pell-type solution with smaller y
        auto [A, B] = half_coords(F, u);
        ASSERT_GT(B, 0) << D;
        for (Int b = 1; b < B; ++b) {
            for (int s : {4, -4}) {
                Int T = Int(D) * b * b + s;
                if (T < 0 || !is_perfect_square(T)) continue;
                Int a = isqrt_floor(T);
                // (a + b sqrtD)/2 integral? needs a = b mod 2 and, when
                // D != 1 mod 4, both even
                bool integral = F.omega_is_half() ? mod_pos(a - b, 2) == 0
                                                  : (mod_pos(a, 2) == 0 && mod_pos(b, 2) == 0);
                ASSERT_FALSE(integral && a > 0)
                    << "smaller unit exists for D=" << D << " b=" << b;
            }
        }
    }
}

TEST(ClassNumberOne, KnownValues) {
    EXPECT_TRUE(class_number_is_one(Q));
    EXPECT_TRUE(class_number_is_one(F2));
    EXPECT_TRUE(class_number_is_one(F3));
    EXPECT_TRUE(class_number_is_one(F5));
    EXPECT_TRUE(class_number_is_one(F13));
    EXPECT_FALSE(class_number_is_one(FieldDesc::real_quadratic(10)));
    EXPECT_FALSE(class_number_is_one(FieldDesc::real_quadratic(15)));
    EXPECT_FALSE(class_number_is_one(FieldDesc::real_quadratic(79)));
    EXPECT_FALSE(class_number_is_one(FieldDesc::real_quadratic(82)));
    EXPECT_TRUE(class_number_is_one(FieldDesc::real_quadratic(94)));
}
