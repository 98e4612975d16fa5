#include "jumpfbst/simulate.hpp"

#include "jumpfbst/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace jumpfbst {

void SimConfig::validate() const {
    if (n < 1) throw ArgumentError("simulation length must be at least 1");
    if (!std::isfinite(mu)) throw ArgumentError("mu must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be positive");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [0,1]");
    if (!(k > 0.0) || !std::isfinite(k)) throw ArgumentError("jump size must be positive");
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw ArgumentError("s0 must be positive");
}

namespace {

// One period's Gaussian shock and jump indicator, drawn in a fixed order so
// that returns and paths built from the same seed share their innovations.
class Innovations {
public:
    explicit Innovations(std::uint64_t seed) : rng_(seed) {}

    void next(double eta, double& z, bool& jump) {
        z = normal_(rng_);
        jump = uniform_(rng_) < eta;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace

SimulatedReturns simulate_returns_with_jumps(const SimConfig& cfg) {
    cfg.validate();
    SimulatedReturns out;
    out.returns.reserve(cfg.n);
    out.jumps.reserve(cfg.n);
    Innovations innov(cfg.seed);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        double z = 0.0;
        bool jump = false;
        innov.next(cfg.eta, z, jump);
        out.returns.push_back(cfg.mu + cfg.sigma * z + (jump ? cfg.k : 0.0));
        out.jumps.push_back(jump ? 1 : 0);
    }
    return out;
}

std::vector<double> simulate_returns(const SimConfig& cfg) {
    return simulate_returns_with_jumps(cfg).returns;
}

std::vector<double> simulate_price_path(const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> path;
    path.reserve(cfg.n + 1);
    path.push_back(cfg.s0);
    Innovations innov(cfg.seed);
    const double drift = cfg.mu - 0.5 * cfg.sigma * cfg.sigma;
    double log_s = std::log(cfg.s0);
    for (std::size_t t = 1; t <= cfg.n; ++t) {
        double z = 0.0;
        bool jump = false;
        innov.next(cfg.eta, z, jump);
        log_s += drift + cfg.sigma * z + (jump ? cfg.k : 0.0);
        const double price = std::exp(log_s);
        if (!std::isfinite(price) || price == 0.0) {
            throw OverflowError("price path left the double range at step " + std::to_string(t));
        }
        path.push_back(price);
    }
    return path;
}

std::vector<double> returns_from_prices(std::span<const double> prices) {
    if (prices.size() < 2) throw ArgumentError("at least two prices are required");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            throw DataError("non-positive price at position " + std::to_string(i + 1));
        }
    }
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        out.push_back((prices[t + 1] - prices[t]) / prices[t]);
    }
    return out;
}

}  // namespace jumpfbst
