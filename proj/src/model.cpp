#include "jumpfbst/model.hpp"

#include "jumpfbst/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace jumpfbst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(const Params& theta) {
    if (!std::isfinite(theta.lambda) || !std::isfinite(theta.p) || !std::isfinite(theta.mu) ||
        !std::isfinite(theta.sigma2) || !std::isfinite(theta.k)) {
        throw DomainError("parameter point has a non-finite coordinate");
    }
}

}  // namespace

Hyperparams Hyperparams::random_jump_size(double k_max) {
    Hyperparams h;
    h.variant = JumpSizeVariant::RandomJumpSize;
    h.k_max = k_max;
    return h;
}

void Hyperparams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("beta must be positive");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw ArgumentError("sigma0 must be positive");
    if (!std::isfinite(mu0)) throw ArgumentError("mu0 must be finite");
    if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("c must be positive");
    if (random_k()) {
        if (!k_max || !(*k_max > 0.0) || !std::isfinite(*k_max)) {
            throw ArgumentError("k_max must be positive under the random jump size variant");
        }
    } else {
        if (k_max) throw ArgumentError("k_max is only meaningful under the random jump size variant");
        if (!(fixed_k > 0.0) || !std::isfinite(fixed_k)) throw ArgumentError("jump size must be positive");
    }
}

ReducedParams reduce(const Params& theta) {
    return {theta.lambda * theta.p, theta.mu, std::sqrt(theta.sigma2), theta.k};
}

void validate(const ReducedParams& theta) {
    if (!std::isfinite(theta.eta) || !std::isfinite(theta.mu) || !std::isfinite(theta.sigma) ||
        !std::isfinite(theta.k)) {
        throw DomainError("reduced parameter point has a non-finite coordinate");
    }
    if (theta.eta < 0.0 || theta.eta > 1.0) throw DomainError("eta must lie in [0,1]");
    if (!(theta.sigma > 0.0)) throw DomainError("sigma must be positive");
}

double mixture_pdf(double y, const ReducedParams& theta) {
    if (!std::isfinite(y)) throw DomainError("mixture_pdf: non-finite argument");
    validate(theta);
    const double s = theta.sigma;
    const double a = (y - theta.mu) / s;
    const double b = (y - (theta.mu + theta.k)) / s;
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s);
    return norm * ((1.0 - theta.eta) * std::exp(-0.5 * a * a) + theta.eta * std::exp(-0.5 * b * b));
}

double log_mixture_pdf(double y, const ReducedParams& theta) {
    if (!std::isfinite(y)) throw DomainError("log_mixture_pdf: non-finite argument");
    validate(theta);
    const double s2 = theta.sigma * theta.sigma;
    const double a = std::log1p(-theta.eta) - (y - theta.mu) * (y - theta.mu) / (2.0 * s2);
    const double e = y - theta.mu - theta.k;
    const double b = std::log(theta.eta) - e * e / (2.0 * s2);
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return -0.5 * std::log(2.0 * std::numbers::pi * s2) + hi + std::log1p(std::exp(lo - hi));
}

double log_likelihood(const Params& theta, std::span<const double> data) {
    if (data.empty()) throw ArgumentError("log_likelihood: empty data");
    require_finite(theta);
    const double eta = theta.lambda * theta.p;
    if (eta < 0.0 || eta > 1.0) throw DomainError("lambda*p must lie in [0,1]");
    if (!(theta.sigma2 > 0.0)) throw DomainError("sigma2 must be positive");

    const double inv_two_var = 0.5 / theta.sigma2;
    const double log_w0 = std::log1p(-eta);
    const double log_w1 = std::log(eta);
    const double mu = theta.mu;
    const double mu_jump = theta.mu + theta.k;

    double sum = 0.0;
    for (const double x : data) {
        const double d0 = x - mu;
        const double d1 = x - mu_jump;
        const double a = log_w0 - d0 * d0 * inv_two_var;
        const double b = log_w1 - d1 * d1 * inv_two_var;
        const double hi = a > b ? a : b;
        const double lo = a > b ? b : a;
        sum += hi + std::log1p(std::exp(lo - hi));
    }
    const double n = static_cast<double>(data.size());
    return sum - 0.5 * n * std::log(2.0 * std::numbers::pi * theta.sigma2);
}

bool in_support(const Params& theta, const Hyperparams& hyper) {
    if (theta.lambda < 0.0 || theta.lambda > 1.0 || theta.p < 0.0 || theta.p > 1.0) return false;
    if (!(theta.sigma2 > 0.0) || !(theta.sigma2 < hyper.sigma0 * hyper.sigma0)) return false;
    const double half_width = hyper.c * std::sqrt(theta.sigma2);
    if (!(theta.mu > hyper.mu0 - half_width) || !(theta.mu < hyper.mu0 + half_width)) return false;
    if (hyper.random_k() && (!(theta.k > 0.0) || theta.k > *hyper.k_max)) return false;
    return true;
}

double log_prior(const Params& theta, const Hyperparams& hyper) {
    require_finite(theta);
    if (!in_support(theta, hyper)) return kNegInf;

    double lp = -0.5 * std::log(theta.sigma2);
    const double eta = theta.lambda * theta.p;
    if (hyper.beta != 1.0) {
        // eta == 1 with beta < 1 diverges; treated as zero posterior.
        if (eta >= 1.0) return kNegInf;
        lp += (hyper.beta - 1.0) * std::log1p(-eta);
    }
    if (hyper.random_k()) lp -= std::log(*hyper.k_max);
    return lp;
}

double log_posterior_unnorm(const Params& theta, std::span<const double> data,
                            const Hyperparams& hyper) {
    const double lp = log_prior(theta, hyper);
    if (lp == kNegInf) return kNegInf;
    return lp + log_likelihood(theta, data);
}

}  // namespace jumpfbst
