#include <filesystem>

#include <gtest/gtest.h>

#include "kloost/klsum.hpp"

using namespace kloost;

namespace {

std::vector<std::pair<int, int>> small_fields() {
    // q <= 13
    return {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}};
}

} // namespace

TEST(Kl, BaseCaseIsAdditiveCharacter) {
    auto t = kl_table(2, 5, 1);
    // Kl_2(a) is real
    for (const auto& v : t.values) EXPECT_EQ(v.conj(), v);
    auto F = ext_field(7, 1);
    EXPECT_EQ(kl_naive(1, 7, 1, F.from_code(3)), psi(7, 3));
}

TEST(Kl, ReferencePins) {
    auto F2 = ext_field(2, 1), F4 = ext_field(2, 2);
    EXPECT_EQ(cyc_to_rational(kl_naive(4, 2, 1, F2.one())), BigRat(1));
    EXPECT_EQ(cyc_to_rational(kl_naive(4, 2, 2, F4.one())), BigRat(11));
    auto t = kl_table(4, 2, 2);
    EXPECT_EQ(cyc_to_rational(t.at(F4.one())), BigRat(11));
}

TEST(Kl, BackendEquivalence) {
    for (int nplus1 = 2; nplus1 <= 5; ++nplus1)
        for (auto [p, r] : small_fields()) {
            auto a = kl_table(nplus1, p, r, Backend::naive);
            auto b = kl_table(nplus1, p, r, Backend::convolution);
            ASSERT_EQ(a.values.size(), b.values.size());
            for (std::size_t i = 0; i < a.values.size(); ++i)
                ASSERT_EQ(a.values[i], b.values[i]) << "n+1=" << nplus1 << " p=" << p << " r=" << r << " i=" << i;
        }
}

TEST(Kl, WeilBound) {
    for (int nplus1 = 2; nplus1 <= 5; ++nplus1)
        for (auto [p, r] : small_fields()) EXPECT_TRUE(weil_bound_holds(kl_table(nplus1, p, r), 128, 1e-6));
    EXPECT_TRUE(weil_bound_holds(kl_table(3, 31, 1)));
    EXPECT_TRUE(weil_bound_holds(kl_table(2, 5, 3)));
}

TEST(Kl, ComplexConjugation) {
    // conj Kl(a) = Kl((-1)^{n+1} a)
    for (int nplus1 = 2; nplus1 <= 4; ++nplus1) {
        auto t = kl_table(nplus1, 7, 1);
        const auto& F = t.index->field;
        for (std::int64_t c = 1; c < 7; ++c) {
            std::int64_t c2 = (nplus1 % 2) ? mod(-c, 7) : c;
            EXPECT_EQ(t.at_code(c).conj(), t.at_code(c2)) << nplus1 << " " << c;
        }
        (void)F;
    }
}

TEST(Kl, GaloisAction) {
    // sigma_t Kl(a) = Kl(t^{n+1} a) for t in F_p^x
    for (int nplus1 : {2, 3, 4}) {
        std::int64_t p = 11;
        auto t = kl_table(nplus1, p, 1);
        for (std::int64_t s = 2; s < p; ++s)
            for (std::int64_t a = 1; a < p; ++a) {
                std::int64_t b = mod(static_cast<std::int64_t>(ipow(s, nplus1) % p) * a, p);
                ASSERT_EQ(t.at_code(a).galois(s), t.at_code(b));
            }
    }
}

TEST(Kl, ValuesAreIntegralAndSumToSign) {
    // sum over a of Kl_{n+1}(a) = (-1)^{n+1}
    for (int nplus1 = 2; nplus1 <= 4; ++nplus1)
        for (auto [p, r] : std::vector<std::pair<int, int>>{{5, 1}, {3, 2}, {2, 3}}) {
            auto t = kl_table(nplus1, p, r);
            CycElem s(p);
            for (const auto& v : t.values) {
                EXPECT_TRUE(v.is_integral());
                s += v;
            }
            EXPECT_EQ(cyc_to_rational(s), BigRat((nplus1 % 2) ? -1 : 1));
        }
}

TEST(Kl, CharacterMultiplierTwistsValues) {
    auto t1 = kl_table(3, 7, 1), t2 = kl_table(3, 7, 1, Backend::convolution, 2);
    auto tn = kl_table(3, 7, 1, Backend::naive, 2);
    EXPECT_EQ(t2.values, tn.values);
    for (std::size_t i = 0; i < t1.values.size(); ++i) EXPECT_EQ(t2.values[i], t1.values[i].galois(2));
    EXPECT_THROW(kl_table(3, 7, 1, Backend::convolution, 7), Error);
}

TEST(Kl, Errors) {
    EXPECT_THROW(kl_table(3, 9, 1), Error);
    auto F = ext_field(5, 1);
    EXPECT_THROW(kl_naive(3, 5, 1, F.zero()), Error);
    try {
        kl_table(5, 2, 20);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DeskScaleExceeded);
    }
}

TEST(Cache, RoundTripAndHits) {
    auto dir = std::filesystem::temp_directory_path() / ("kloost_cache_test_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    {
        TableStore s(dir.string());
        auto t = s.get(3, 5, 2);
        EXPECT_EQ(s.disk_hits(), 0);
        EXPECT_TRUE(std::filesystem::exists(cache::file_for(dir, 3, 5, 2)));
    }
    TableStore s2(dir.string());
    auto t2 = s2.get(3, 5, 2);
    EXPECT_EQ(s2.disk_hits(), 1);
    auto fresh = kl_table(3, 5, 2);
    EXPECT_EQ(t2->values, fresh.values);
    EXPECT_EQ(t2->generator(), fresh.generator());
    // in-memory hit does not touch the disk again
    s2.get(3, 5, 2);
    EXPECT_EQ(s2.disk_hits(), 1);
    std::filesystem::remove_all(dir);
}

TEST(Cache, CorruptFileIsRejected) {
    auto dir = std::filesystem::temp_directory_path() / ("kloost_cache_bad_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(cache::file_for(dir, 2, 5, 1), std::ios::binary);
        out << "garbage";
    }
    TableStore s(dir.string());
    auto t = s.get(2, 5, 1); // rebuilt
    EXPECT_EQ(t->values, kl_table(2, 5, 1).values);
    EXPECT_EQ(s.disk_hits(), 0);
    std::filesystem::remove_all(dir);
}
