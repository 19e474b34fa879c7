#include <gtest/gtest.h>

#include "kloost/invdims.hpp"
#include "kloost/monodromy.hpp"

using namespace kloost;

namespace {

const MatGroup& g108() {
    static const MatGroup g = build_group(GroupName::G108);
    return g;
}
const MatGroup& g216() {
    static const MatGroup g = build_group(GroupName::G216);
    return g;
}

} // namespace

TEST(Generators, Relations) {
    auto one = CycMatrix::identity();
    auto S = gens::S(), T = gens::T(), V = gens::V();
    EXPECT_EQ(S * S * S, one);
    EXPECT_EQ(T * T * T, one);
    EXPECT_EQ(gens::U() * gens::U_inv(), one);
    EXPECT_FALSE(V == one);
    for (const auto& g : {S, T, V, gens::U()}) EXPECT_EQ(g.det(), CycElem::from_int(kMonoCond, 1));
    // TST^{-1} is a scalar multiple of S
    auto C = T * S * T * T;
    EXPECT_TRUE(C(0, 1).is_zero() && C(1, 0).is_zero());
}

TEST(Groups, Orders) {
    EXPECT_EQ(build_group(GroupName::ST27).order(), 27u);
    EXPECT_EQ(g108().order(), 108u);
    EXPECT_EQ(g216().order(), 216u);
    for (const auto& h : g108().elements) EXPECT_TRUE(g216().contains(h));
}

TEST(Groups, Axioms) {
    const auto& G = g108();
    auto one = CycElem::from_int(kMonoCond, 1);
    EXPECT_TRUE(G.contains(CycMatrix::identity()));
    for (std::size_t i = 0; i < G.order(); i += 7)
        for (std::size_t j = 0; j < G.order(); j += 5) EXPECT_TRUE(G.contains(G.elements[i] * G.elements[j]));
    for (const auto& g : G.elements) {
        EXPECT_EQ(g.det(), one);
        // some power is the identity, so the inverse is in G
        CycMatrix x = g;
        int k = 1;
        while (!(x == CycMatrix::identity()) && k < 100) {
            x = x * g;
            ++k;
        }
        EXPECT_LT(k, 100);
    }
}

TEST(Groups, ClosureGuard) {
    try {
        close_group({gens::S(), gens::T(), gens::V(), gens::U()}, 50);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ClosureOverflow);
    }
}

TEST(Molien, TrivialGroup) {
    RatFunc f = molien({CycMatrix::identity()});
    QPoly d = QPoly::one_minus_x_pow(1);
    EXPECT_EQ(f, RatFunc(QPoly{1}, d * d * d));
}

TEST(Molien, ClosedForms) {
    RatFunc P = molien(g108()), Pt = molien(g216());
    EXPECT_EQ(P, molien_P());
    EXPECT_EQ(Pt, molien_Ptilde());
    EXPECT_EQ(Pt.scaled(2) - P, molien_Q());
    EXPECT_EQ(P.series(7)[6], 2);
    EXPECT_EQ(Pt.series(7)[6], 1);
}

TEST(Molien, CosetIsTwicePtildeMinusP) {
    auto rest = complement(g216(), g108());
    ASSERT_EQ(rest.size(), 108u);
    EXPECT_EQ(molien(rest), molien_Q());
    // any element outside G108 gives the same coset
    CycMatrix phi = gens::U() * gens::V() * gens::U_inv();
    ASSERT_FALSE(g108().contains(phi));
    EXPECT_EQ(molien(coset(g108(), phi)), molien_Q());
}

TEST(Molien, CoefficientsNonNegativeIntegers) {
    for (const auto& f : {molien_P(), molien_Ptilde()}) {
        auto s = f.series(21);
        for (const auto& c : s) {
            EXPECT_EQ(c.get_den(), 1);
            EXPECT_GE(c, 0);
        }
    }
}

TEST(Molien, SubgroupMatchesOrbitCount) {
    auto s = molien(build_group(GroupName::ST27)).series(19);
    for (int k = 0; k < 19; ++k) EXPECT_EQ(s[k], p3_st_invariants(k)) << k;
}

TEST(P3, SwanAndInvariants) {
    EXPECT_EQ(p3_swan(3), 2);
    EXPECT_EQ(p3_swan(6), 6);
    EXPECT_EQ(p3_swan(4), 5);
    EXPECT_EQ(p3_inv_dim(6), 2);
    EXPECT_EQ(p3_inv_dim(4), 0);
    EXPECT_EQ(p3_inv_dim_tilde(6), 1);
    for (int k = 0; k <= 30; ++k) EXPECT_EQ(p3_swan(k).get_den(), 1) << k;
}

TEST(P3, FrobeniusSigns) {
    EXPECT_EQ(frob_signs_p3(6), std::make_pair(BigInt(1), BigInt(1)));
    EXPECT_EQ(frob_signs_p3(0), std::make_pair(BigInt(1), BigInt(0)));
    for (int k = 0; k <= 20; ++k) {
        auto [plus, minus] = frob_signs_p3(k);
        EXPECT_GE(plus, 0);
        EXPECT_GE(minus, 0);
        EXPECT_EQ(plus + minus, p3_inv_dim(k));
        EXPECT_EQ(plus - minus, 2 * p3_inv_dim_tilde(k) - p3_inv_dim(k));
    }
}

TEST(P3, DimensionChain) {
    for (int k = 1; k <= 12; ++k) {
        BigInt d = p3_swan(k).get_num() - mk_total(3, k) - p3_inv_dim(k);
        EXPECT_GE(d, 0) << k;
        EXPECT_EQ(dim_mid(3, k, 3), d);
    }
    EXPECT_EQ(dim_mid(3, 4, 3), 2);
    EXPECT_EQ(dim_mid(3, 6, 3), 0);
}
