#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace jumpfbst {

// Unit time step. eta is the per-period jump probability (lambda * dt with dt = 1)
// and at most one jump occurs per period.
struct SimConfig {
    std::size_t n = 40;
    double mu = 0.0;
    double sigma = 0.2;
    double eta = 0.0;
    double k = 1.0;
    std::uint64_t seed = 1;
    double s0 = 100.0;

    void validate() const;
};

struct SimulatedReturns {
    std::vector<double> returns;
    std::vector<std::uint8_t> jumps;  // 1 where the period carried a jump
};

// mu + sigma*Z_i + B_i*k with Z_i ~ N(0,1), B_i ~ Bernoulli(eta). Here mu is the
// final per-period drift of the discretized return model, not the SDE drift
// before the Ito correction.
std::vector<double> simulate_returns(const SimConfig& cfg);

SimulatedReturns simulate_returns_with_jumps(const SimConfig& cfg);

// Exact solution sampled at integer times: S_t = S_{t-1} exp(mu - sigma^2/2 + sigma*dW + B*k).
// Returns n+1 prices starting at s0.
std::vector<double> simulate_price_path(const SimConfig& cfg);

// (S_{t+1} - S_t) / S_t
std::vector<double> returns_from_prices(std::span<const double> prices);

}  // namespace jumpfbst
