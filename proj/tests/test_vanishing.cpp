#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "qvanish/vanishing.hpp"

using namespace qvanish;

namespace {

bool observed(const VanishingReport& rep, const ResidueClass& c) {
    return std::find(rep.observed_zero_classes.begin(), rep.observed_zero_classes.end(), c) !=
           rep.observed_zero_classes.end();
}

// The unnormalized numerator (q^{r-tk}, q^{mk-(r-tk)}; q^{mk})_inf of a McLaughlin
// product with r < tk, expanded with 1 - q^{r-tk} kept as a Laurent binomial.
LaurentSeries raw_quotient(const McLaughlinParams& p, Exponent order) {
    const Exponent mk = p.mk(), d = p.r() - p.tk();
    // Exponents start at d < 0, so binomials up to q^{order-d} still matter.
    const Exponent reach = order - d;
    LaurentSeries s(d, order);
    s[0] = 1;
    s[d] = -1;
    for (Exponent e = d + mk; e < reach; e += mk) s = multiply_by_binomial(std::move(s), 1, e);
    for (Exponent e = mk - d; e < reach; e += mk) s = multiply_by_binomial(std::move(s), 1, e);
    const int ds = p.sign == Sign::plus ? 1 : -1;
    for (Exponent e = p.r(); e < reach; e += mk) s = divide_by_binomial(std::move(s), ds, e);
    for (Exponent e = mk - p.r(); e < reach; e += mk) s = divide_by_binomial(std::move(s), ds, e);
    return s;
}

}  // namespace

TEST(BuildSpec, Mk30ThirdClass) {
    const auto spec = build_spec(McLaughlinParams{10, 3, 0, 1});
    EXPECT_EQ(spec.prefactor_sign, -1);
    EXPECT_EQ(spec.prefactor_exponent, -2);
    EXPECT_EQ(spec.numerator, (std::vector<PochhammerFactor>{{1, 28, 30}, {1, 2, 30}}));
    EXPECT_EQ(spec.denominator, (std::vector<PochhammerFactor>{{1, 1, 30}, {1, 29, 30}}));
    EXPECT_EQ(to_string(spec), "-q^-2 (q^28,q^2;q^30)_inf / (q,q^29;q^30)_inf");
}

TEST(BuildSpec, KEqualsMThree) {
    const auto spec = build_spec(McLaughlinParams{3, 3, 1, 1});
    EXPECT_EQ(spec.prefactor_sign, 1);
    EXPECT_EQ(spec.prefactor_exponent, 0);
    EXPECT_EQ(spec.numerator, (std::vector<PochhammerFactor>{{1, 1, 9}, {1, 8, 9}}));
    EXPECT_EQ(spec.denominator, (std::vector<PochhammerFactor>{{1, 4, 9}, {1, 5, 9}}));
}

TEST(BuildSpec, AndrewsBressoudF) {
    const auto spec = build_spec(AndrewsBressoudParams{4, 3});
    EXPECT_EQ(spec.numerator, (std::vector<PochhammerFactor>{{1, 3, 8}, {1, 5, 8}}));
    EXPECT_EQ(spec.denominator, (std::vector<PochhammerFactor>{{1, 1, 8}, {1, 7, 8}}));
}

TEST(BuildSpec, MinusFamilyNegatesDenominator) {
    const auto spec = build_spec(McLaughlinParams{3, 3, 2, 1, Sign::minus});
    EXPECT_EQ(to_string(spec), "(q^4,q^5;q^9)_inf / (-q^7,-q^2;q^9)_inf");
    const auto ag = build_spec(AlladiGordonParams{2, 5, 3, Sign::minus});
    for (const auto& f : ag.denominator) EXPECT_EQ(f.sign, -1);
}

TEST(BuildSpec, InvalidParams) {
    EXPECT_THROW(build_spec(AndrewsBressoudParams{4, 2}), InvalidParams);   // gcd
    EXPECT_THROW(build_spec(AndrewsBressoudParams{5, 3}), InvalidParams);   // parity
    EXPECT_THROW(build_spec(McLaughlinParams{2, 3, 1, 1}), InvalidParams);  // r = 3
    EXPECT_THROW(build_spec(McLaughlinParams{3, 4, 0, 1, Sign::minus}), InvalidParams);
    EXPECT_THROW(build_spec(McLaughlinParams{3, 3, 3, 1}), InvalidParams);
    EXPECT_THROW(build_spec(McLaughlinParams{3, 3, 0, 3}), InvalidParams);
    EXPECT_THROW(build_spec(AlladiGordonParams{3, 3, 1}), InvalidParams);  // m < k
    EXPECT_THROW(build_spec(AlladiGordonParams{2, 3, 2}), InvalidParams);  // gcd(s, mk)
}

TEST(ZeroClass, Examples) {
    EXPECT_EQ(zero_class(AndrewsBressoudParams{4, 3}), ResidueClass(4, 3));
    EXPECT_EQ(zero_class(McLaughlinParams{2, 15, 0, 1}), ResidueClass(15, 14));
    EXPECT_EQ(zero_class(McLaughlinParams{3, 3, 2, 1}), ResidueClass(3, 1));
}

TEST(ZeroClass, FixtureClasses) {
    EXPECT_EQ(zero_class(AndrewsBressoudParams{4, 1}), ResidueClass(4, 2));
    EXPECT_EQ(zero_class(AndrewsBressoudParams{6, 5}), ResidueClass(6, 5));
    EXPECT_EQ(zero_class(AndrewsBressoudParams{6, 1}), ResidueClass(6, 3));
}

TEST(ZeroClass, AlladiGordonDerivedValues) {
    // The mk = 30, k = 15 product (q^14,q^16;q^30)/(q,q^29;q^30): s = 1, r* = 14, r' = 1.
    const AlladiGordonParams p{2, 15, 1};
    EXPECT_EQ(p.r_star(), 14);
    EXPECT_EQ(p.r(), 14);
    EXPECT_EQ(p.r_prime(), 1);
    EXPECT_EQ(zero_class(p), ResidueClass(15, 14));
    // r* = 4 * 7 = 28 > mk = 10: r = 8, r' = 3.
    const AlladiGordonParams q{2, 5, 7};
    EXPECT_EQ(q.r(), 8);
    EXPECT_EQ(q.r_prime(), 3);
    EXPECT_EQ(zero_class(q), ResidueClass(5, 4));
}

TEST(ZeroClass, RPrimeNeverReducesToZero) {
    for (Exponent m = 2; m <= 10; ++m) {
        for (Exponent k = m + 1; k <= 12; ++k) {
            for (Exponent s = 1; s < m * k; ++s) {
                const AlladiGordonParams p{m, k, s};
                EXPECT_GE(p.r_prime(), 1);
                EXPECT_LT(p.r_prime(), k);
            }
        }
    }
}

TEST(VerifyVanishing, AndrewsBressoudG) {
    const auto rep = verify_vanishing(AndrewsBressoudParams{6, 5}, 1000);
    EXPECT_TRUE(rep.verified());
    EXPECT_EQ(rep.predicted, ResidueClass(6, 5));
    EXPECT_TRUE(observed(rep, rep.predicted));
}

TEST(VerifyVanishing, MinusK3S2) {
    const auto rep = verify_vanishing(McLaughlinParams{3, 3, 2, 1, Sign::minus}, 500);
    EXPECT_TRUE(rep.verified());
    EXPECT_EQ(rep.predicted, ResidueClass(3, 1));
}

TEST(VerifyVanishing, RejectsInvalid) {
    EXPECT_THROW(verify_vanishing(McLaughlinParams{2, 3, 1, 1}, 100), InvalidParams);
    EXPECT_THROW(verify_vanishing(AndrewsBressoudParams{4, 3}, 0), InvalidParams);
}

TEST(VerifyVanishing, NegativeControlListsThreeSmallest) {
    // F(q) has nonzero coefficients off its zero class; check it against the wrong class
    // by pairing the F product with the zero class of 1/F.
    const auto rep = verify_vanishing(AndrewsBressoudParams{4, 3}, 200);
    ASSERT_TRUE(rep.verified());
    const auto swapped = verify_vanishing(AndrewsBressoudParams{4, 1}, 200);
    ASSERT_TRUE(swapped.verified());
    // The 1/F expansion in F's class is not zero.
    const auto series = expand_product(build_spec(AndrewsBressoudParams{4, 1}), 200);
    std::size_t nonzero = 0;
    for (Exponent e = 3; e < 200; e += 4) nonzero += !series[e].is_zero();
    EXPECT_GT(nonzero, 3u);
}

TEST(VerifyVanishing, ObservedClassNeedsEnoughSamples) {
    // Order 20 with k = 15 gives at most two samples per class.
    const auto rep = verify_vanishing(McLaughlinParams{2, 15, 0, 1}, 20);
    EXPECT_TRUE(rep.verified());
    EXPECT_TRUE(rep.observed_zero_classes.empty());
}

TEST(VerifyVanishing, JsonShape) {
    const auto j = to_json(verify_vanishing(McLaughlinParams{2, 15, 0, 1}, 300));
    EXPECT_EQ(j["family"], "mcl-plus");
    EXPECT_EQ(j["r"], 1);
    EXPECT_EQ(j["zero_class"]["mod"], 15);
    EXPECT_EQ(j["zero_class"]["res"], 14);
    EXPECT_TRUE(j["violations"].empty());
    EXPECT_EQ(j["observed_zero_classes"].size(), 1u);
    EXPECT_EQ(j.dump(), to_json(verify_vanishing(McLaughlinParams{2, 15, 0, 1}, 300)).dump());
}

TEST(Scan, PlusGrid) {
    const auto res = scan(ScanFamily::mcl_plus, {2, 6}, {2, 6}, 500);
    EXPECT_FALSE(res.reports.empty());
    EXPECT_EQ(res.violated(), 0u);
    for (const auto& s : res.skipped) EXPECT_EQ(s.reason, "gcd(r,k) != 1");
}

TEST(Scan, AndrewsBressoudGrid) {
    const auto res = scan(ScanFamily::ab, {2, 12}, {}, 500);
    EXPECT_EQ(res.violated(), 0u);
    std::size_t expected = 0;
    for (Exponent k = 2; k <= 12; ++k) {
        for (Exponent r = 1; r < k; ++r) expected += std::gcd(r, k) == 1 && (r + k) % 2 == 1;
    }
    EXPECT_EQ(res.reports.size(), expected);
}

TEST(Scan, EmptyGrid) {
    const auto res = scan(ScanFamily::mcl_plus, {5, 2}, {2, 4}, 100);
    EXPECT_TRUE(res.reports.empty());
    EXPECT_TRUE(res.skipped.empty());
}

TEST(Scan, MinusSkipsEvenK) {
    const auto res = scan(ScanFamily::mcl_minus, {2, 4}, {2, 3}, 300);
    EXPECT_EQ(res.violated(), 0u);
    for (const auto& r : res.reports) EXPECT_EQ(class_modulus(r.params) % 2, 1);
    EXPECT_TRUE(std::any_of(res.skipped.begin(), res.skipped.end(),
                            [](const ScanSkip& s) { return s.reason == "k must be odd for the minus family"; }));
}

TEST(Scan, OrderingIndependentOfThreads) {
    const auto a = scan(ScanFamily::ag_plus, {3, 6}, {2, 3}, 200, 1);
    const auto b = scan(ScanFamily::ag_plus, {3, 6}, {2, 3}, 200, 4);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        EXPECT_EQ(to_json(a.reports[i]).dump(), to_json(b.reports[i]).dump());
    }
    EXPECT_EQ(a.violated(), 0u);
}

TEST(VanishingProperty, PredictedClassIsObserved) {
    for (auto fam : {ScanFamily::mcl_plus, ScanFamily::mcl_minus, ScanFamily::ab, ScanFamily::ag_plus,
                     ScanFamily::ag_minus}) {
        const auto res = scan(fam, {2, 7}, {2, 4}, 400);
        for (const auto& rep : res.reports) {
            EXPECT_TRUE(rep.verified()) << family_name(rep.params) << ' ' << describe(rep.params);
            EXPECT_TRUE(observed(rep, rep.predicted)) << family_name(rep.params) << ' ' << describe(rep.params);
        }
    }
}

TEST(VanishingProperty, RemarkShift) {
    // For r < tk the raw quotient and the normalized product differ by exactly -q^{tk-r}.
    std::size_t checked = 0;
    for (Exponent m = 2; m <= 6; ++m) {
        for (Exponent k = 2; k <= 6; ++k) {
            for (Exponent s = 0; s < k; ++s) {
                for (Exponent t = 1; t < m; ++t) {
                    for (Sign sign : {Sign::plus, Sign::minus}) {
                        const McLaughlinParams p{m, k, s, t, sign};
                        if (invalid_reason(TheoremInstance{p}) || p.r() > p.tk()) continue;
                        const auto normalized = expand_product(build_spec(p).normalized(), 300);
                        const auto raw = raw_quotient(p, 300);
                        EXPECT_EQ(monomial_mul(normalized, -1, p.r() - p.tk()), raw);
                        EXPECT_EQ(expand_product(build_spec(p), 300), raw);
                        ++checked;
                    }
                }
            }
        }
    }
    EXPECT_GT(checked, 20u);
}

TEST(VanishingProperty, AlladiGordonAgreesWithMcLaughlin) {
    // When an AG product coincides with a normalized McLaughlin product the two predictions agree.
    std::size_t overlaps = 0;
    for (Exponent m = 2; m <= 8; ++m) {
        for (Exponent k = m + 1; k <= 10; ++k) {
            for (Exponent s = 0; s < k; ++s) {
                for (Exponent t = 1; t < m; ++t) {
                    for (Sign sign : {Sign::plus, Sign::minus}) {
                        const McLaughlinParams mcl{m, k, s, t, sign};
                        if (invalid_reason(TheoremInstance{mcl})) continue;
                        const Exponent mk = m * k;
                        if (std::gcd(mcl.r(), mk) != 1) continue;
                        const AlladiGordonParams ag{m, k, mcl.r(), sign};
                        if (invalid_reason(TheoremInstance{ag})) continue;
                        const Exponent d = std::abs(mcl.r() - mcl.tk());
                        if (ag.r() != d && ag.r() != mk - d) continue;
                        EXPECT_EQ(zero_class(ag), zero_class(mcl)) << describe(mcl);
                        ++overlaps;
                    }
                }
            }
        }
    }
    EXPECT_GT(overlaps, 10u);
}

TEST(VanishingProperty, Mk30WithMBelowKIsAlsoAg) {
    // k = 6, 10, 15 with mk = 30 are covered by AG; k = 3, 5 are not (m > k there).
    for (Exponent k : {6, 10, 15}) {
        const AlladiGordonParams ag{30 / k, k, 1};
        ASSERT_FALSE(invalid_reason(TheoremInstance{ag}).has_value());
        EXPECT_EQ(ag.r(), k - 1);
        EXPECT_EQ(zero_class(ag), zero_class(McLaughlinParams{30 / k, k, 0, 1}));
    }
    for (Exponent k : {3, 5}) EXPECT_TRUE(invalid_reason(TheoremInstance{AlladiGordonParams{30 / k, k, 1}}));
}
