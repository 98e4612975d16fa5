#include "jumpfbst/error.hpp"
#include "jumpfbst/fbst.hpp"
#include "jumpfbst/io.hpp"
#include "jumpfbst/simulate.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace jt = jumpfbst::testing;
using jumpfbst::Hyperparams;
using jumpfbst::Params;
using jumpfbst::SampleCloud;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> standardized_sample(std::size_t n, double eta, double k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::bernoulli_distribution b(eta);
    std::vector<double> raw(n);
    for (double& x : raw) x = z(rng) + (b(rng) ? k : 0.0);
    return jumpfbst::standardize(raw).values;
}

SampleCloud tiny_cloud(std::vector<Params> pts, std::vector<double> logv) {
    SampleCloud c;
    c.points = std::move(pts);
    c.log_values = std::move(logv);
    return c;
}

}  // namespace

TEST(SampleSupport, Deterministic) {
    const auto d = standardized_sample(40, 0.1, 3.0, 1);
    const auto a = jumpfbst::sample_support(d, Hyperparams{}, 20000, 5);
    const auto b = jumpfbst::sample_support(d, Hyperparams{}, 20000, 5);
    EXPECT_EQ(a.log_values, b.log_values);
    const auto c = jumpfbst::sample_support(d, Hyperparams{}, 20000, 6);
    EXPECT_NE(a.log_values, c.log_values);
    EXPECT_EQ(a.data_digest, jumpfbst::data_digest(d));
}

TEST(SampleSupport, AcceptedFractionMatchesIndicatorOracle) {
    // Acceptance needs |mu - mu0| < c*sigma with mu uniform over the full
    // c*sigma0 box, so P(accept) = E[sigma]/sigma0 = 2/3. The oracle redraws
    // the indicator alone with an unrelated generator.
    const std::size_t n = 300000;
    const auto d = standardized_sample(20, 0.0, 3.0, 2);
    const Hyperparams h;
    const auto cloud = jumpfbst::sample_support(d, h, n, 17);
    std::size_t finite = 0;
    for (const double v : cloud.log_values) finite += std::isfinite(v);
    const double frac = static_cast<double>(finite) / static_cast<double>(n);

    std::minstd_rand rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = h.sigma0 * std::sqrt(u(rng));
        const double mu = h.mu0 + h.c * h.sigma0 * (2.0 * u(rng) - 1.0);
        hits += std::abs(mu - h.mu0) < h.c * sigma;
    }
    const double oracle = static_cast<double>(hits) / static_cast<double>(n);
    const double se = std::sqrt(2.0 / 9.0 / static_cast<double>(n));
    EXPECT_NEAR(frac, 2.0 / 3.0, 4.0 * se);
    EXPECT_NEAR(frac, oracle, 6.0 * se);
}

TEST(SampleSupport, Errors) {
    const auto d = standardized_sample(10, 0.0, 1.0, 3);
    EXPECT_THROW(jumpfbst::sample_support(d, Hyperparams{}, 0, 1), jumpfbst::ArgumentError);
    EXPECT_THROW(jumpfbst::sample_support(std::vector<double>{}, Hyperparams{}, 10, 1), jumpfbst::ArgumentError);
    Hyperparams bad;
    bad.c = -1.0;
    EXPECT_THROW(jumpfbst::sample_support(d, bad, 10, 1), jumpfbst::ArgumentError);
}

TEST(SupNull, ClosedFormOnStandardizedData) {
    for (const std::size_t n : {5u, 20u, 40u}) {
        const auto d = standardized_sample(n, 0.2, 3.0, n);
        const double s2 = (static_cast<double>(n) - 1.0) / (static_cast<double>(n) + 1.0);
        const double expected = jumpfbst::log_posterior_unnorm({0.0, 0.0, 0.0, s2, 1.0}, d, Hyperparams{});
        EXPECT_NEAR(jumpfbst::sup_null_closed_form(d, Hyperparams{}), expected, 1e-9);
    }
}

TEST(SupNull, MonteCarloNeverExceedsClosedForm) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto d = standardized_sample(15, 0.1, 2.0, 1000 + s);
        const double closed = jumpfbst::sup_null_closed_form(d, Hyperparams{});
        const double mc = jumpfbst::sup_null_monte_carlo(d, Hyperparams{}, 3000, s);
        EXPECT_LE(mc, closed + 1e-9);
        EXPECT_EQ(jumpfbst::sup_null(d, Hyperparams{}, 3000, s), std::max(mc, closed));
    }
}

TEST(SupNull, ConstantDataIsDegenerate) {
    const std::vector<double> d(10, 1.5);
    EXPECT_THROW(jumpfbst::sup_null(d, Hyperparams{}, 100, 1), jumpfbst::DegenerateDataError);
    jumpfbst::RunOptions opt;
    opt.n_support = opt.n_null = 100;
    EXPECT_THROW(jumpfbst::run_fbst(d, Hyperparams{}, opt), jumpfbst::DegenerateDataError);
}

TEST(Evidence, EdgeCases) {
    const std::vector<double> v{-3.0, -1.0, -2.0, -kInf};
    auto e = jumpfbst::evidence(v, 0.0);
    EXPECT_EQ(e.ev, 1.0);
    EXPECT_EQ(e.kappa0, 0.0);
    e = jumpfbst::evidence(v, -kInf);
    EXPECT_EQ(e.ev, 0.0);
    EXPECT_EQ(e.kappa0, 1.0);
    // strict inequality: a point at phi0 is not tangential
    e = jumpfbst::evidence(v, -1.0);
    EXPECT_EQ(e.kappa0, 0.0);
    e = jumpfbst::evidence(v, -1.5);
    const double w1 = 1.0;
    const double total = 1.0 + std::exp(-2.0) + std::exp(-1.0);
    EXPECT_NEAR(e.kappa0, w1 / total, 1e-15);
    EXPECT_EQ(e.ev, 1.0 - e.kappa0);

    const std::vector<double> dead{-kInf, -kInf};
    EXPECT_THROW(jumpfbst::evidence(dead, 0.0), jumpfbst::EstimationError);
    EXPECT_THROW(jumpfbst::evidence(std::vector<double>{}, 0.0), jumpfbst::ArgumentError);
}

TEST(Evidence, MonotoneInThreshold) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    for (int c = 0; c < 100; ++c) {
        std::vector<double> v(200);
        for (double& x : v) x = 5.0 * z(rng);
        double prev = -1.0;
        for (double phi = -20.0; phi <= 20.0; phi += 0.5) {
            const double ev = jumpfbst::evidence(v, phi).ev;
            EXPECT_GE(ev, prev);
            prev = ev;
        }
    }
}

TEST(Evidence, ShiftInvariance) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    std::vector<double> v(1000);
    for (double& x : v) x = 3.0 * z(rng);
    std::vector<double> shifted = v;
    for (double& x : shifted) x += 700.0;
    EXPECT_NEAR(jumpfbst::evidence(v, 1.0).ev, jumpfbst::evidence(shifted, 701.0).ev, 1e-12);
}

TEST(Evidence, InvariantUnderLambdaPRelabeling) {
    const auto d = standardized_sample(20, 0.3, 2.0, 4);
    Hyperparams h;
    h.sigma0 = 2.0;
    h.c = 2.0;
    const auto cloud = jumpfbst::sample_support(d, h, 50000, 2);
    SampleCloud swapped = cloud;
    for (Params& p : swapped.points) std::swap(p.lambda, p.p);
    for (std::size_t i = 0; i < swapped.size(); ++i) {
        swapped.log_values[i] = jumpfbst::log_posterior_unnorm(swapped.points[i], d, h);
    }
    EXPECT_EQ(swapped.log_values, cloud.log_values);
    const double phi = jumpfbst::sup_null(d, h, 5000, 1);
    const double ev = jumpfbst::evidence(cloud, phi).ev;
    EXPECT_GT(ev, 0.0);
    EXPECT_LT(ev, 1.0);
    EXPECT_EQ(ev, jumpfbst::evidence(swapped, phi).ev);
    EXPECT_EQ(jumpfbst::posterior_mode(cloud).reduced, jumpfbst::posterior_mode(swapped).reduced);
    EXPECT_EQ(jumpfbst::posterior_mean(cloud).mean, jumpfbst::posterior_mean(swapped).mean);
}

TEST(Evidence, AgreesWithGridQuadrature) {
    const auto d = standardized_sample(20, 0.4, 3.0, 14);
    Hyperparams h;
    h.sigma0 = 2.0;
    h.c = 2.0;
    h.fixed_k = 1.5;
    jumpfbst::RunOptions opt;
    opt.seed = 3;
    opt.refine_mode = false;
    const auto r = jumpfbst::run_fbst(d, h, opt).report;
    const auto g = jt::grid_evidence(d, h.beta, h.sigma0, h.mu0, h.c, h.fixed_k, r.log_phi0, 120);
    EXPECT_NEAR(r.ev, g.ev, 0.02) << "grid ev " << g.ev;
}

TEST(Mode, SinglePointCloud) {
    const Params p{0.3, 0.5, 0.1, 0.8, 1.0};
    const auto c = tiny_cloud({p}, {-4.0});
    const auto m = jumpfbst::posterior_mode(c);
    EXPECT_EQ(m.reduced, jumpfbst::reduce(p));
    EXPECT_EQ(m.log_value, -4.0);
    const auto mean = jumpfbst::posterior_mean(c);
    EXPECT_EQ(mean.mean, jumpfbst::reduce(p));
    EXPECT_EQ(mean.ess, 1.0);
}

TEST(Mode, RefinementNeverWorse) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto d = standardized_sample(40, 0.2, 3.0, 50 + s);
        Hyperparams h;
        h.fixed_k = 1.2;
        const auto cloud = jumpfbst::sample_support(d, h, 20000, s);
        const auto raw = jumpfbst::posterior_mode(cloud, d, false);
        const auto refined = jumpfbst::posterior_mode(cloud, d, true);
        EXPECT_GE(refined.log_value, raw.log_value);
        EXPECT_TRUE(jumpfbst::in_support(refined.point, h));
        EXPECT_NEAR(refined.log_value, jumpfbst::log_posterior_unnorm(refined.point, d, h), 1e-9);
    }
}

TEST(Mean, UniformWeightsGiveArithmeticMean) {
    const auto c = tiny_cloud({{0.2, 0.5, 0.0, 1.0, 1.0}, {0.4, 0.5, 1.0, 4.0, 3.0}, {0.0, 0.0, -1.0, 1.0, 1.0}},
                              {-2.0, -2.0, -kInf});
    const auto m = jumpfbst::posterior_mean(c);
    EXPECT_NEAR(m.mean.eta, 0.15, 1e-15);
    EXPECT_NEAR(m.mean.mu, 0.5, 1e-15);
    EXPECT_NEAR(m.mean.sigma, 1.5, 1e-15);
    EXPECT_NEAR(m.mean.k, 2.0, 1e-15);
    EXPECT_NEAR(m.ess, 2.0, 1e-15);
}

TEST(RunFbst, DeterministicAndThreadIndependent) {
    const auto d = standardized_sample(40, 0.1, 3.0, 21);
    jumpfbst::RunOptions opt;
    opt.n_support = 50000;
    opt.n_null = 50000;
    opt.seed = 77;
    const auto a = jumpfbst::run_fbst(d, Hyperparams{}, opt);
    opt.threads = 4;
    const auto b = jumpfbst::run_fbst(d, Hyperparams{}, opt);
    EXPECT_EQ(a.cloud.log_values, b.cloud.log_values);
    EXPECT_EQ(a.report.ev, b.report.ev);
    EXPECT_EQ(a.report.log_phi0, b.report.log_phi0);
    EXPECT_EQ(a.report.mode, b.report.mode);
    EXPECT_EQ(a.report.mean, b.report.mean);
}

TEST(RunFbst, NullAndJumpData) {
    jumpfbst::SimConfig cfg;
    cfg.mu = 5.0;
    cfg.sigma = 0.2;
    cfg.n = 40;
    cfg.seed = 31;
    const auto calm = jumpfbst::Dataset::from_values(jumpfbst::simulate_returns(cfg), jumpfbst::DataKind::Returns);
    cfg.eta = 0.35;
    const auto jumpy = jumpfbst::Dataset::from_values(jumpfbst::simulate_returns(cfg), jumpfbst::DataKind::Returns);
    jumpfbst::RunOptions opt;
    opt.seed = 2;
    Hyperparams h;
    h.fixed_k = 1.0 / calm.sd;
    EXPECT_GE(jumpfbst::run_fbst(calm.standardized, h, opt).report.ev, 0.5);
    h.fixed_k = 1.0 / jumpy.sd;
    EXPECT_LE(jumpfbst::run_fbst(jumpy.standardized, h, opt).report.ev, 0.01);
}
