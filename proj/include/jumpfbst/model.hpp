#pragma once

#include <optional>
#include <span>

namespace jumpfbst {

enum class JumpSizeVariant { FixedJumpSize, RandomJumpSize };

// Full parameter point. All quantities are in standardized data units.
struct Params {
    double lambda = 0.0;  // per-period jump intensity, [0,1]
    double p = 0.0;       // jump-mark success probability, [0,1]
    double mu = 0.0;      // drift per period
    double sigma2 = 1.0;  // squared volatility, > 0
    double k = 1.0;       // jump size, > 0
};

// Image of the identifying map (lambda, p, mu, sigma2, k) -> (lambda*p, mu, sigma, k).
struct ReducedParams {
    double eta = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
    double k = 1.0;

    friend bool operator==(const ReducedParams&, const ReducedParams&) = default;
};

struct Hyperparams {
    double beta = 1.0;
    double sigma0 = 10.0;  // sigma^2 ~ U(0, sigma0^2)
    double mu0 = 0.0;
    double c = 10.0;       // mu | sigma ~ U(mu0 - c*sigma, mu0 + c*sigma)
    std::optional<double> k_max;
    JumpSizeVariant variant = JumpSizeVariant::FixedJumpSize;
    // Jump size used under FixedJumpSize. A unit jump in the original data
    // scale corresponds to 1/sd in standardized units; callers that
    // standardize the data set this accordingly.
    double fixed_k = 1.0;

    static Hyperparams random_jump_size(double k_max = 30.0);
    void validate() const;
    bool random_k() const { return variant == JumpSizeVariant::RandomJumpSize; }
};

ReducedParams reduce(const Params& theta);

void validate(const ReducedParams& theta);

double mixture_pdf(double y, const ReducedParams& theta);

// Stable log of the two-component mixture density at y.
double log_mixture_pdf(double y, const ReducedParams& theta);

// Sum of per-observation log mixture densities. Depends on theta only through
// (lambda*p, mu, sigma2, k).
double log_likelihood(const Params& theta, std::span<const double> data);

double log_prior(const Params& theta, const Hyperparams& hyper);

double log_posterior_unnorm(const Params& theta, std::span<const double> data,
                            const Hyperparams& hyper);

// Support predicate shared by the prior, the sampler and the mode search.
bool in_support(const Params& theta, const Hyperparams& hyper);

}  // namespace jumpfbst
