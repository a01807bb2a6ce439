#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "skelhedge/rng.hpp"

using namespace skelhedge;

// Known-answer vectors published with Random123 (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswerZero) {
    const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r[0], 0x6627e8d5u);
    EXPECT_EQ(r[1], 0xe169c58du);
    EXPECT_EQ(r[2], 0xbc57ac4cu);
    EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
    const auto r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(r[0], 0x408f276du);
    EXPECT_EQ(r[1], 0x41c83b0eu);
    EXPECT_EQ(r[2], 0xa20bc7c6u);
    EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
    const auto r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(r[0], 0xd16cfe09u);
    EXPECT_EQ(r[1], 0x94fdccebu);
    EXPECT_EQ(r[2], 0x5001e420u);
    EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(RandomStream, ReproducibleAndIndependentOfOtherStreams) {
    RandomStream a(7, 11), b(7, 11), c(7, 12), d(8, 11);
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
        EXPECT_NE(x, d());
    }
    EXPECT_EQ(a.position(), 50u);
}

TEST(RandomStream, CopyForksState) {
    RandomStream a(3, 4);
    a();
    RandomStream b = a;
    EXPECT_EQ(a(), b());
}

TEST(RandomStream, UniformOpenInterval) {
    RandomStream r(1, 2);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
    }
    EXPECT_NEAR(s / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(StreamId, DistinguishesTuples) {
    EXPECT_NE(stream_id(1, 2), stream_id(2, 1));
    EXPECT_NE(stream_id(1), stream_id(1, 0));
    EXPECT_EQ(stream_id(5, 6, 7), stream_id(5, 6, 7));
}

TEST(Normal, Moments) {
    RandomStream r(9, 9);
    const int n = 400000;
    double m1 = 0, m2 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(r);
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(Gamma, MeanAndVariance) {
    for (double a : {1.0, 1.09022, 3.5}) {
        RandomStream r(4, 5);
        const int n = 200000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const double g = standard_gamma(a, r);
            ASSERT_GT(g, 0.0);
            s += g;
            s2 += g * g;
        }
        const double mean = s / n, var = s2 / n - mean * mean;
        EXPECT_NEAR(mean, a, 5.0 * std::sqrt(a / n)) << a;
        EXPECT_NEAR(var, a, 0.03 * a) << a;
    }
}
