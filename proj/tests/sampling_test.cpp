#include <gtest/gtest.h>

#include "adjtrace/rng.h"
#include "adjtrace/sampling.h"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

using namespace adjtrace;

TEST(Philox, KnownAnswer) {
    // Random123 kat_vectors: philox4x32 10 rounds, zero counter and key.
    const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(0x6627e8d5u, out[0]);
    EXPECT_EQ(0xe169c58du, out[1]);
    EXPECT_EQ(0xbc57ac4cu, out[2]);
    EXPECT_EQ(0x9b00dbd8u, out[3]);
}

TEST(RngStream, SameKeySameSequence) {
    RngStream a(42, 17, 3), b(42, 17, 3);
    for (int i = 0; i < 10; ++i)
        EXPECT_EQ(a.next(), b.next());
}

TEST(RngStream, NeighbouringKeysDiffer) {
    EXPECT_NE(RngStream(42, 5, 0).next(), RngStream(42, 5, 1).next());
    EXPECT_NE(RngStream(42, 5, 0).next(), RngStream(42, 6, 0).next());
    EXPECT_NE(RngStream(42, 5, 0).next(), RngStream(43, 5, 0).next());
}

TEST(RngStream, MeanOfMillionDraws) {
    RngStream r(1, 2, 3);
    double sum = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double u = r.next();
        ASSERT_GE(u, 0);
        ASSERT_LT(u, 1);
        sum += u;
    }
    EXPECT_NEAR(0.5, sum / 1e6, 0.002);
}

TEST(RngStream, IndependentOfThreadScheduling) {
    std::vector<double> serial(64), parallel(64);
    for (int p = 0; p < 64; ++p)
        serial[p] = RngStream(9, p, 0).next();
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t)
            pool.emplace_back([&, t] {
                for (int p = 63 - t; p >= 0; p -= 4)
                    parallel[p] = RngStream(9, p, 0).next();
            });
    }
    EXPECT_EQ(serial, parallel);
}

TEST(CdfInverse, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(0, cdf_inverse_phong(0, 0));
    EXPECT_NEAR(std::numbers::pi / 3, cdf_inverse_phong(0, 0.75), 1e-15);
    EXPECT_DOUBLE_EQ(0, cdf_inverse_phong(2, 0));
}

TEST(CdfInverse, DomainErrors) {
    EXPECT_THROW(cdf_inverse_phong(-1, 0.5), std::domain_error);
    EXPECT_THROW(cdf_inverse_phong(0, 1), std::domain_error);
    EXPECT_THROW(cdf_inverse_phong(0, -0.1), std::domain_error);
}

TEST(CdfInverse, InvertsCdfAndIsMonotone) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0, 100), uu(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double a = alpha(rng), u = uu(rng);
        EXPECT_NEAR(u, cdf_phong(a, cdf_inverse_phong(a, u)), 1e-12);
        const double u2 = u + 0.01 * (1 - u);
        EXPECT_LE(cdf_inverse_phong(a, u), cdf_inverse_phong(a, u2));
    }
}

TEST(CosineLobe, SpotDirection) {
    const Frame f = make_frame({0, 0, 1});
    const LobeSample s = sample_cosine_lobe(f, 0, 0.25, 0);
    const Vec3 expect = std::sqrt(0.75) * f.x + 0.5 * f.z;
    EXPECT_NEAR(0, length(s.dir - expect), 1e-15);
    EXPECT_EQ(0.25, s.u1);
}

TEST(CosineLobe, LimitTowardNormal) {
    const Frame f = make_frame(normalize(Vec3(1, 2, 3)));
    const LobeSample s = sample_cosine_lobe(f, 0, std::nextafter(1.0, 0.0), 0.3);
    EXPECT_NEAR(1, dot(s.dir, f.z), 1e-12);
}

TEST(CosineLobe, MeanCosineIsTwoThirds) {
    // E[cos] under p(theta) = 2 cos sin is the integral of 2 cos^2 sin over [0, pi/2] = 2/3.
    const Frame f = make_frame({0, 0, 1});
    RngStream r(42, 0, 0);
    double sum = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const auto s = sample_cosine_lobe(f, 0, r.next_open(), r.next());
        ASSERT_GE(dot(s.dir, f.z), 0);
        ASSERT_NEAR(1, length(s.dir), 1e-12);
        sum += dot(s.dir, f.z);
    }
    EXPECT_NEAR(2.0 / 3.0, sum / 1e6, 0.001);
}

TEST(CosineLobe, ChiSquareAgainstCosineDensity) {
    // The CDF of theta under 2 cos sin is sin^2 theta; bins of equal probability.
    constexpr int kBins = 32;
    constexpr int kSamples = 1'000'000;
    const Frame f = make_frame(normalize(Vec3(-0.3, 0.5, 0.8)));
    std::vector<int> counts(kBins);
    RngStream r(7, 1, 2);
    for (int i = 0; i < kSamples; ++i) {
        const auto s = sample_cosine_lobe(f, 0, r.next_open(), r.next());
        const double c = std::clamp(dot(s.dir, f.z), 0.0, 1.0);
        const int bin = std::min(kBins - 1, static_cast<int>((1 - c * c) * kBins));
        ++counts[bin];
    }
    const double expected = static_cast<double>(kSamples) / kBins;
    double chi2 = 0;
    for (int c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(kBins - 1);
    EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 0.001)));
}

TEST(PhongReflection, SpecularLimitIsMirror) {
    const Vec3 n = normalize(Vec3(0.2, 1, -0.1));
    const Vec3 in = normalize(Vec3(1, 1, 0.5));
    const auto out = sample_phong_reflection(n, in, 5, std::nextafter(1.0, 0.0), 0.4);
    ASSERT_TRUE(out);
    const Vec3 mirror = 2 * dot(n, in) * n - in;
    EXPECT_NEAR(0, length(*out - mirror), 1e-7);
}

TEST(PhongReflection, OutputUnitAndAboveHorizon) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> g;
    int absent = 0;
    for (int i = 0; i < 20000; ++i) {
        const Vec3 n = normalize(Vec3(g(rng), g(rng), g(rng)));
        Vec3 in = normalize(Vec3(g(rng), g(rng), g(rng)));
        if (dot(in, n) <= 0)
            in = -in;
        const auto out = sample_phong_reflection(n, in, 10 * u(rng), u(rng), u(rng));
        if (!out) {
            ++absent;
            continue;
        }
        EXPECT_NEAR(1, length(*out), 1e-12);
        EXPECT_GT(dot(*out, n), 0);
    }
    EXPECT_GT(absent, 0);
}

TEST(PhongReflection, IncomingAlongNormalStaysUnit) {
    const Vec3 n{0, 0, 1};
    for (double u1 : {0.5, 0.7, 0.9}) {
        const auto out = sample_phong_reflection(n, n, 3, u1, 0.2);
        ASSERT_TRUE(out);
        EXPECT_NEAR(1, length(*out), 1e-12);
    }
}

TEST(PhongReflection, GrazingIncomingAgreesWithHandReflection) {
    // Grazing incoming with a broad lobe: some half vectors reflect below the horizon.
    const Vec3 n{0, 0, 1};
    const Vec3 in = normalize(Vec3(1, 0, 0.02));
    const Frame f = make_frame(n);
    int absent = 0;
    for (double u1 : {0.05, 0.25, 0.6, 0.95})
        for (int i = 0; i < 64; ++i) {
            const double u2 = i / 64.0;
            Vec3 h = sample_cosine_lobe(f, 0, u1, u2).dir;
            if (dot(h, in) < 0)
                h = 2 * dot(h, n) * n - h;
            const Vec3 expect = 2 * dot(h, in) * h - in;
            const auto out = sample_phong_reflection(n, in, 0, u1, u2);
            if (dot(expect, n) <= 0) {
                EXPECT_FALSE(out) << "u1 = " << u1 << " u2 = " << u2;
                ++absent;
            } else {
                ASSERT_TRUE(out) << "u1 = " << u1 << " u2 = " << u2;
                EXPECT_NEAR(0, length(*out - expect), 1e-12);
            }
        }
    EXPECT_GT(absent, 0);
}

TEST(SinM, ValuesAndLimits) {
    EXPECT_NEAR(0.8660254037844386, sin_m_of(0, 0.25), 1e-15);
    EXPECT_NEAR(0, sin_m_of(3, std::nextafter(1.0, 0.0)), 1e-7);
    EXPECT_NEAR(1, sin_m_of(3, 1e-300), 1e-12);
    EXPECT_THROW(sin_m_of(0, 0), std::domain_error);
    EXPECT_THROW(sin_m_of(0, 1), std::domain_error);
    EXPECT_THROW(sin_m_of(-0.5, 0.5), std::domain_error);
}

TEST(SinM, MatchesSampledHalfVector) {
    const Frame f = make_frame({0, 0, 1});
    for (double a : {0.0, 1.0, 20.0})
        for (double u1 : {0.1, 0.5, 0.9}) {
            const Vec3 d = sample_cosine_lobe(f, a, u1, 0.3).dir;
            EXPECT_NEAR(std::sqrt(1 - d.z * d.z), sin_m_of(a, u1), 1e-12);
        }
}

namespace {

double central_fd_sin(double alpha, double u1, double eps) {
    return (sin_m_of(alpha + eps, u1) - sin_m_of(alpha - eps, u1)) / (2 * eps);
}

}  // namespace

TEST(DsinDalpha, SpotValue) {
    // cos = 0.5, sin = sqrt(0.75): 0.25 ln(0.5) / (2 sqrt(0.75)) = -0.100047...
    const double expect = 0.25 * std::log(0.5) / (2 * std::sqrt(0.75));
    EXPECT_NEAR(-0.100047, expect, 5e-7);
    EXPECT_NEAR(expect, dsin_dalpha(0, 0.25), 1e-15);
    // alpha = 0 is the domain edge; a one-sided difference checks it.
    const double eps = 1e-7;
    const double fd = (sin_m_of(eps, 0.25) - sin_m_of(0, 0.25)) / eps;
    EXPECT_NEAR(expect, fd, 1e-6);
}

TEST(DsinDalpha, AgreesWithCentralDifferences) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> alpha(0, 100), uu(0.01, 0.99);
    for (int i = 0; i < 1000; ++i) {
        const double a = alpha(rng) + 1e-6, u1 = uu(rng);
        const double d = dsin_dalpha(a, u1);
        EXPECT_LT(d, 0);
        EXPECT_LE(std::abs(d - central_fd_sin(a, u1, 1e-6)), 1e-6 * std::abs(d)) << a << " " << u1;
    }
}

TEST(DsinDalpha, ClampNearOne) {
    const double u1 = std::nextafter(1.0, 0.0);
    const double d = dsin_dalpha(2, u1);
    EXPECT_TRUE(std::isfinite(d));
    EXPECT_LE(d, 0);
    // With the clamp active, sin is replaced by kSinClamp.
    const double log_cos = std::log(u1) / 4;
    EXPECT_NEAR(std::exp(2 * log_cos) * log_cos / (4 * kSinClamp), d, 1e-20);
}
