#include "jumpfbst/error.hpp"
#include "jumpfbst/fbst.hpp"
#include "jumpfbst/risk.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using jumpfbst::Params;
using jumpfbst::PosteriorSample;
using jumpfbst::ReducedParams;
using jumpfbst::SampleCloud;

namespace {

// Random cloud of small size with random log values; a few points off support.
SampleCloud random_cloud(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SampleCloud c;
    for (std::size_t i = 0; i < n; ++i) {
        c.points.push_back({u(rng), u(rng), -1.0 + 2.0 * u(rng), 0.05 + u(rng), 0.2 + 3.0 * u(rng)});
        c.log_values.push_back(u(rng) < 0.1 ? -std::numeric_limits<double>::infinity() : -5.0 * u(rng));
    }
    c.log_values[0] = 0.0;
    return c;
}

}  // namespace

TEST(NormalTail, MatchesErfc) {
    for (double x = -8.0; x <= 8.0; x += 0.25) {
        EXPECT_NEAR(jumpfbst::normal_upper_tail(x), 0.5 * std::erfc(x / std::sqrt(2.0)), 1e-16);
    }
}

TEST(NormalTail, FarTailAgainstLongDoubleErfc) {
    for (double x = 8.0; x <= 37.0; x += 0.37) {
        const long double ref = 0.5L * std::erfc(static_cast<long double>(x) / std::sqrt(2.0L));
        const double got = jumpfbst::normal_upper_tail(x);
        EXPECT_NEAR(got / static_cast<double>(ref), 1.0, 1e-12) << "x=" << x;
        EXPECT_NEAR(jumpfbst::normal_upper_tail(-x), 1.0, 1e-15);
    }
    EXPECT_EQ(jumpfbst::normal_upper_tail(std::numeric_limits<double>::infinity()), 0.0);
    EXPECT_THROW(jumpfbst::normal_upper_tail(std::nan("")), jumpfbst::DomainError);
}

TEST(Exceedance, Examples) {
    EXPECT_EQ(jumpfbst::exceedance_prob({0.3, 0.0, 1.0, 1.0}, -1e300), 1.0);
    EXPECT_EQ(jumpfbst::exceedance_prob({0.0, 0.0, 1.0, 1.0}, 0.0), 0.5);
    // k = 0 collapses to a single normal
    EXPECT_NEAR(jumpfbst::exceedance_prob({0.5, 0.0, 1.0, 0.0}, 1.0), 0.5 * std::erfc(1.0 / std::sqrt(2.0)), 1e-16);
    EXPECT_EQ(jumpfbst::exceedance_prob({0.3, 0.0, 1.0, 1.0}, 1e300), 0.0);
}

TEST(Exceedance, MonotoneInThreshold) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        const ReducedParams th{u(rng), u(rng) - 0.5, 0.1 + u(rng), 3.0 * u(rng)};
        double prev = 2.0;
        for (double l = -6.0; l <= 10.0; l += 0.1) {
            const double p = jumpfbst::exceedance_prob(th, l);
            EXPECT_LE(p, prev);
            prev = p;
        }
    }
}

TEST(Survival, Limits) {
    std::mt19937_64 rng(1);
    const auto cloud = random_cloud(rng, 50);
    const PosteriorSample post(cloud);
    auto s = post.survival_curve(1.0, 10);
    ASSERT_EQ(s.size(), 11u);
    EXPECT_EQ(s[0], 1.0);
    s = post.survival_curve(-1e300, 5);
    EXPECT_EQ(s[0], 1.0);
    for (std::size_t t = 1; t < s.size(); ++t) EXPECT_EQ(s[t], 0.0);
}

TEST(Survival, WeightedGeometricOracle) {
    // Each point contributes (1 - p_theta)^t with self-normalized weights.
    std::mt19937_64 rng(2);
    const auto cloud = random_cloud(rng, 30);
    const PosteriorSample post(cloud);
    const double l = 0.7;
    const auto s = post.survival_curve(l, 12);
    double m = -std::numeric_limits<double>::infinity();
    for (const double v : cloud.log_values) m = std::max(m, v);
    for (std::size_t t = 0; t <= 12; ++t) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (!std::isfinite(cloud.log_values[i])) continue;
            const double w = std::exp(cloud.log_values[i] - m);
            const double p = jumpfbst::exceedance_prob(jumpfbst::reduce(cloud.points[i]), l);
            num += w * std::pow(1.0 - p, static_cast<double>(t));
            den += w;
        }
        EXPECT_NEAR(s[t], num / den, 1e-13);
    }
}

TEST(Survival, Monotonicity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 100; ++c) {
        const auto cloud = random_cloud(rng, 20);
        const PosteriorSample post(cloud);
        const double l1 = 4.0 * u(rng) - 2.0;
        const double l2 = l1 + 2.0 * u(rng);
        const auto s1 = post.survival_curve(l1, 40);
        const auto s2 = post.survival_curve(l2, 40);
        for (std::size_t t = 0; t <= 40; ++t) {
            if (t > 0) EXPECT_LE(s1[t], s1[t - 1]);
            EXPECT_GE(s2[t], s1[t]);
        }
    }
}

TEST(ExpectedTime, ReciprocalOfExceedance) {
    std::mt19937_64 rng(5);
    const auto cloud = random_cloud(rng, 40);
    const PosteriorSample post(cloud);
    for (double l = -1.0; l <= 3.0; l += 0.25) {
        const double p = post.marginal_exceedance(l);
        const double t = post.expected_time(l);
        EXPECT_NEAR(t * p, 1.0, 4e-16);
        EXPECT_GE(post.expected_time_per_theta(l), t * (1.0 - 1e-12));  // Jensen
    }
    EXPECT_EQ(post.expected_time(-1e300), 1.0);
    EXPECT_THROW(post.expected_time(1e300), jumpfbst::OverflowError);
}

TEST(ExpectedTime, MonotoneInThreshold) {
    std::mt19937_64 rng(6);
    for (int c = 0; c < 100; ++c) {
        const auto cloud = random_cloud(rng, 15);
        const PosteriorSample post(cloud);
        double prev = 0.0;
        for (double l = -3.0; l <= 4.0; l += 0.2) {
            const double t = post.expected_time(l);
            EXPECT_GE(t, prev);
            prev = t;
        }
    }
}

TEST(ExpectedTime, PointMassCloud) {
    SampleCloud c;
    c.points = {{0.5, 0.4, 0.0, 1.0, 2.0}};
    c.log_values = {0.0};
    const ReducedParams th = jumpfbst::reduce(c.points[0]);
    EXPECT_EQ(jumpfbst::marginal_exceedance(c, 1.5), jumpfbst::exceedance_prob(th, 1.5));
    EXPECT_EQ(jumpfbst::expected_time(c, 1.5), 1.0 / jumpfbst::exceedance_prob(th, 1.5));
    const auto s = jumpfbst::survival_curve(c, 1.5, 3);
    EXPECT_NEAR(s[3], std::pow(1.0 - jumpfbst::exceedance_prob(th, 1.5), 3.0), 1e-15);
}

TEST(RiskQuery, FromOriginal) {
    const std::vector<double> orig{100.0, 140.0, 150.0};
    const auto q = jumpfbst::RiskQuery::from_original(orig, 20.0, 40.0, 30);
    EXPECT_EQ(q.thresholds, (std::vector<double>{2.0, 3.0, 3.25}));
    EXPECT_EQ(q.thresholds_original, orig);
    const std::vector<double> unordered{150.0, 140.0};
    EXPECT_THROW(jumpfbst::RiskQuery::from_original(unordered, 0.0, 1.0, 3), jumpfbst::ArgumentError);
    EXPECT_THROW(jumpfbst::RiskQuery::from_original(orig, 0.0, 1.0, 0), jumpfbst::ArgumentError);
    EXPECT_THROW(jumpfbst::RiskQuery::from_original(orig, 0.0, 0.0, 3), jumpfbst::ArgumentError);
}
