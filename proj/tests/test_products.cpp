#include <gtest/gtest.h>

#include "qvanish/products.hpp"
#include "qvanish/series.hpp"

using namespace qvanish;

namespace {

// Oracle: the factor as an explicit product of binomials, multiplied with the generic Cauchy product.
LaurentSeries factor_by_binomials(const PochhammerFactor& f, Exponent order) {
    LaurentSeries acc = LaurentSeries::one(order);
    for (Exponent e = f.offset; e < order; e += f.modulus) {
        LaurentSeries b = LaurentSeries::one(order);
        b[e] = -f.sign;
        acc = mul(acc, b);
    }
    return acc;
}

ProductSpec jtp_product(Exponent M, Exponent a) {
    ProductSpec s;
    s.numerator = {PochhammerFactor(1, a, M), PochhammerFactor(1, M - a, M), PochhammerFactor(1, M, M)};
    return s;
}

}  // namespace

TEST(ExpandFactor, EulerPrefix) {
    const auto s = expand_factor(PochhammerFactor(1, 1, 1), 6);
    EXPECT_EQ(s, LaurentSeries::polynomial(0, {1, -1, -1, 0, 0, 1}, 6));
    EXPECT_EQ(s, factor_by_binomials(PochhammerFactor(1, 1, 1), 6));
}

TEST(ExpandFactor, NegatedArgument) {
    // (-q;q^2)_inf = (1+q)(1+q^3)... -> 1 + q + q^3 + q^4 below q^5
    const auto s = expand_factor(PochhammerFactor(-1, 1, 2), 5);
    EXPECT_EQ(s, LaurentSeries::polynomial(0, {1, 1, 0, 1, 1}, 5));
    EXPECT_EQ(s, factor_by_binomials(PochhammerFactor(-1, 1, 2), 5));
}

TEST(ExpandFactor, OrderOneIsOne) {
    EXPECT_EQ(expand_factor(PochhammerFactor(1, 3, 4), 1), LaurentSeries::one(1));
    EXPECT_EQ(expand_factor(PochhammerFactor(-1, 1, 1), 1), LaurentSeries::one(1));
}

TEST(ExpandFactor, OffsetAboveModulusIsLegal) {
    const PochhammerFactor f(1, 9, 4);
    EXPECT_EQ(expand_factor(f, 40), factor_by_binomials(f, 40));
}

TEST(ExpandFactor, RejectsBadFactors) {
    EXPECT_THROW(PochhammerFactor(1, 0, 4), InvalidParams);
    EXPECT_THROW(PochhammerFactor(1, 2, 0), InvalidParams);
    EXPECT_THROW(PochhammerFactor(2, 2, 4), InvalidParams);
}

TEST(ExpandFactor, MultiplicativeProperty) {
    for (Exponent M = 1; M <= 6; ++M) {
        for (Exponent a = 1; a <= 7; ++a) {
            const PochhammerFactor f(1, a, M), g(-1, M + 1 - (a % M), M + 1);
            ProductSpec both;
            both.numerator = {f, g};
            EXPECT_EQ(expand_product(both, 80), mul(expand_factor(f, 80), expand_factor(g, 80)));
            EXPECT_EQ(expand_factor(f, 80), factor_by_binomials(f, 80));
        }
    }
}

TEST(ExpandProduct, FixtureF) {
    ProductSpec F;
    F.numerator = {PochhammerFactor(1, 3, 8), PochhammerFactor(1, 5, 8)};
    F.denominator = {PochhammerFactor(1, 1, 8), PochhammerFactor(1, 7, 8)};
    const auto s = expand_product(F, 40);
    EXPECT_EQ(coeff_at(s, 3), 0);
    EXPECT_EQ(coeff_at(s, 7), 0);
    EXPECT_EQ(to_string(F), "(q^3,q^5;q^8)_inf / (q,q^7;q^8)_inf");
}

TEST(ExpandProduct, CancellingSpecIsOne) {
    ProductSpec s;
    s.numerator = {PochhammerFactor(1, 2, 5), PochhammerFactor(-1, 1, 3)};
    s.denominator = s.numerator;
    EXPECT_EQ(expand_product(s, 60), LaurentSeries::one(60));
}

TEST(ExpandProduct, Mk30ThirdClass) {
    ProductSpec s;
    s.numerator = {PochhammerFactor(1, 2, 30), PochhammerFactor(1, 28, 30)};
    s.denominator = {PochhammerFactor(1, 1, 30), PochhammerFactor(1, 29, 30)};
    const auto e = expand_product(s, 20);
    EXPECT_EQ(coeff_at(e, 2), 0);
    EXPECT_EQ(coeff_at(e, 5), 0);
    EXPECT_EQ(coeff_at(e, 8), 0);
}

TEST(ExpandProduct, PrefactorShiftsWindow) {
    ProductSpec s;
    s.prefactor_sign = -1;
    s.prefactor_exponent = -2;
    s.numerator = {PochhammerFactor(1, 1, 1)};
    const auto e = expand_product(s, 4);
    EXPECT_EQ(e.valuation(), -2);
    EXPECT_EQ(e.order(), 4);
    EXPECT_EQ(e, monomial_mul(expand_factor(PochhammerFactor(1, 1, 1), 6), -1, -2));
    EXPECT_THROW(expand_product(ProductSpec{1, 5, {}, {}}, 3), InvalidParams);
}

TEST(ExpandProduct, DenominatorMatchesInversion) {
    ProductSpec num, den;
    num.numerator = {PochhammerFactor(1, 3, 7), PochhammerFactor(-1, 2, 5)};
    den.numerator = {PochhammerFactor(1, 1, 4), PochhammerFactor(-1, 6, 9)};
    ProductSpec quotient = num;
    quotient.denominator = den.numerator;
    EXPECT_EQ(expand_product(quotient, 150), mul(expand_product(num, 150), invert(expand_product(den, 150))));
}

TEST(JtpTheta, PentagonalNumbers) {
    // (q,q^2,q^3;q^3)_inf = (q;q)_inf
    EXPECT_EQ(jtp_theta(3, 1, 200), expand_factor(PochhammerFactor(1, 1, 1), 200));
    EXPECT_EQ(to_string(jtp_theta(3, 1, 15), 20), "1 - q - q^2 + q^5 + q^7 - q^12 + O(q^15)");
}

TEST(JtpTheta, ZeroOffsetVanishes) {
    // a = 0 puts (1;q)_inf = 0 on the product side; the theta terms cancel in pairs.
    EXPECT_TRUE(jtp_theta(1, 0, 15).is_zero());
    EXPECT_TRUE(jtp_theta(7, 0, 100).is_zero());
}

TEST(JtpTheta, MatchesProduct) {
    EXPECT_EQ(jtp_theta(5, 2, 40), expand_product(jtp_product(5, 2), 40));
    for (Exponent M = 2; M <= 12; ++M) {
        for (Exponent a = 1; a < M; ++a) EXPECT_EQ(jtp_theta(M, a, 200), expand_product(jtp_product(M, a), 200));
    }
}

TEST(JtpTheta, EmptyWindow) {
    const auto s = jtp_theta(5, 2, 0);
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(s.order(), 0);
}

TEST(JtpTheta, NegativeOffsetIsShifted) {
    // a -> a - M multiplies by -q^{a-M}: (q^{a-M};q^M) picks up 1 - q^{a-M} = -q^{a-M}(1 - q^{M-a}).
    for (Exponent a = 1; a < 9; ++a) {
        const auto lhs = jtp_theta(9, a - 9, 150);
        const auto rhs = monomial_mul(jtp_theta(9, a, 200), -1, a - 9);
        EXPECT_EQ(lhs.valuation(), a - 9);
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(LambertSeries, VanishesOnProgression) {
    const BilateralSpecialization p{2, 15, 1, 1};
    const auto d = lambert_series(p, 100);
    for (Exponent e = 0; e < 100; e += 15) EXPECT_EQ(coeff_at(d, e), 0) << e;
    EXPECT_TRUE(lambert_series(p, 0).empty());
}

TEST(LambertSeries, ZeroClassForAllSmallTuples) {
    for (Exponent m = 2; m <= 6; ++m) {
        for (Exponent k = 2; k <= 6; ++k) {
            for (Exponent s = 0; s < k; ++s) {
                for (Exponent t = 1; t < m; ++t) {
                    const Exponent r = s * m + t;
                    if (std::gcd(r, k) != 1) continue;
                    const auto d = lambert_series({m, k, t, r}, 300);
                    for (Exponent e = 0; e < 300; ++e) {
                        if ((e + r * s) % k == 0) {
                            EXPECT_EQ(d[e], 0) << m << k << s << t << " at " << e;
                        }
                    }
                }
            }
        }
    }
}

TEST(LambertSeries, SplitConsistency) {
    // -q^{-tk} * lambert * (q^tk,q^{mk-tk};q^mk) / (q^mk,q^mk;q^mk) = numerator/denominator quotient.
    for (const BilateralSpecialization p : {BilateralSpecialization{2, 15, 1, 1}, BilateralSpecialization{3, 3, 1, 7},
                                            BilateralSpecialization{4, 5, 3, 2}}) {
        const Exponent mk = p.mk(), tk = p.tk();
        ProductSpec norm;
        norm.numerator = {PochhammerFactor(1, tk, mk), PochhammerFactor(1, mk - tk, mk)};
        norm.denominator = {PochhammerFactor(1, mk, mk), PochhammerFactor(1, mk, mk)};
        const auto lhs = mul(psi_series_side(p, 400), expand_product(norm, 400));
        const auto sn = shifted_numerator(mk, p.r - tk);
        ProductSpec quotient{sn.sign, sn.exponent, sn.factors,
                             {PochhammerFactor(1, p.r, mk), PochhammerFactor(1, mk - p.r, mk)}};
        EXPECT_EQ(lhs, expand_product(quotient, 400));
    }
}

TEST(Psi1Specialization, Examples) {
    const auto a = verify_1psi1({2, 15, 1, 1}, 300);
    EXPECT_TRUE(a.holds);
    EXPECT_EQ(a.window_low, -15);
    EXPECT_EQ(a.window_high, 300);
    EXPECT_TRUE(verify_1psi1({3, 3, 1, 4}, 200).holds);
}

TEST(Psi1Specialization, PerturbedProductSideFails) {
    const BilateralSpecialization p{2, 15, 1, 1};
    auto spec = psi_product_side(p);
    spec.denominator.pop_back();
    const auto c = verify_1psi1(p, 300, spec);
    EXPECT_FALSE(c.holds);
    ASSERT_TRUE(c.discrepancy_exponent.has_value());
    EXPECT_LT(*c.discrepancy_exponent, 300);
    EXPECT_NE(c.lhs_coefficient, c.rhs_coefficient);
}

TEST(Psi1Specialization, SmallGrid) {
    for (Exponent m = 2; m <= 5; ++m) {
        for (Exponent k = 2; k <= 5; ++k) {
            for (Exponent t = 1; t < m; ++t) {
                for (Exponent r = 1; r < m * k; ++r) {
                    if (r == t * k) continue;
                    EXPECT_TRUE(verify_1psi1({m, k, t, r}, 200).holds) << m << ' ' << k << ' ' << t << ' ' << r;
                }
            }
        }
    }
}

TEST(Psi1Specialization, RejectsDegenerate) {
    EXPECT_THROW(verify_1psi1({2, 3, 1, 3}, 50), Degenerate);
    EXPECT_THROW(verify_1psi1({2, 3, 2, 1}, 50), InvalidParams);
    EXPECT_THROW(verify_1psi1({2, 3, 1, 6}, 50), InvalidParams);
}

TEST(Cancellation, Examples) {
    EXPECT_TRUE(cancellation_check({2, 15, 1, 1}, 0, 400).holds);
    EXPECT_TRUE(cancellation_check({3, 3, 1, 7}, 2, 300).holds);
}

TEST(Cancellation, MismatchedRFails) {
    const auto c = cancellation_check({3, 3, 1, 5}, 1, 300);
    EXPECT_FALSE(c.holds);
    EXPECT_TRUE(c.discrepancy_exponent.has_value());
}

TEST(Cancellation, RejectsBadS) {
    EXPECT_THROW(cancellation_check({3, 3, 1, 4}, 3, 100), InvalidParams);
    EXPECT_THROW(cancellation_check({3, 3, 1, 4}, -1, 100), InvalidParams);
}
