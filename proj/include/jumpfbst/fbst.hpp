#pragma once

#include "jumpfbst/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jumpfbst {

// Monte-Carlo cloud drawn uniformly from the sampling box
//   lambda, p ~ U[0,1], sigma2 ~ U(0, sigma0^2), mu ~ U(mu0 - c*sigma0, mu0 + c*sigma0),
//   k ~ U(0, k_max) (random jump size only),
// a superset of the posterior support. Points outside the support keep a
// log value of -inf and carry zero weight.
struct SampleCloud {
    std::vector<Params> points;
    std::vector<double> log_values;
    std::uint64_t seed = 0;
    Hyperparams hyper;
    std::uint64_t data_digest = 0;

    std::size_t size() const { return points.size(); }
    void validate() const;
};

struct Evidence {
    double ev = 1.0;
    double kappa0 = 0.0;
};

struct ModeEstimate {
    Params point;
    ReducedParams reduced;
    double log_value = 0.0;
};

struct MeanEstimate {
    ReducedParams mean;
    double ess = 0.0;
};

struct EvidenceReport {
    double ev = 1.0;
    double kappa0 = 0.0;
    double log_phi0 = 0.0;
    std::uint64_t n_support = 0;
    std::uint64_t n_null = 0;
    std::uint64_t seed = 0;
    ReducedParams mode;
    ReducedParams mean;
    double ess = 0.0;
    // Diagnostics beyond the core fields.
    double log_phi0_mc = 0.0;
    double log_phi0_closed_form = 0.0;
    double mode_log_value = 0.0;
    bool mode_refined = true;
};

struct RunOptions {
    std::size_t n_support = 400000;
    std::size_t n_null = 400000;
    std::uint64_t seed = 1;
    bool refine_mode = true;
    // 0 selects std::thread::hardware_concurrency(). Output does not depend on it.
    unsigned threads = 1;
};

inline constexpr double kLowEssThreshold = 100.0;

// FNV-1a over the IEEE-754 bytes of the series.
std::uint64_t data_digest(std::span<const double> data);

SampleCloud sample_support(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                           std::uint64_t seed, unsigned threads = 1);

// Maximum of the log unnormalized posterior over n uniform draws on {lambda = 0}.
double sup_null_monte_carlo(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                            std::uint64_t seed, unsigned threads = 1);

// Exact maximizer of the Gaussian (no-jump) posterior, clamped to the support.
double sup_null_closed_form(std::span<const double> data, const Hyperparams& hyper);

// max(Monte-Carlo, closed form). Throws DegenerateDataError for constant data.
double sup_null(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                std::uint64_t seed, unsigned threads = 1);

// Self-normalized share of cloud mass strictly above log_phi0.
Evidence evidence(std::span<const double> log_values, double log_phi0);
Evidence evidence(const SampleCloud& cloud, double log_phi0);

// exp(log_value - max finite log value); throws EstimationError when every
// value is -inf.
std::vector<double> relative_weights(std::span<const double> log_values);

ModeEstimate posterior_mode(const SampleCloud& cloud);

// Best cloud point refined by cyclic coordinate search on the support. The
// refined log value is never below the raw cloud maximum.
ModeEstimate posterior_mode(const SampleCloud& cloud, std::span<const double> data, bool refine);

MeanEstimate posterior_mean(const SampleCloud& cloud);

struct FbstResult {
    EvidenceReport report;
    SampleCloud cloud;
};

FbstResult run_fbst(std::span<const double> data, const Hyperparams& hyper, const RunOptions& options);

}  // namespace jumpfbst
