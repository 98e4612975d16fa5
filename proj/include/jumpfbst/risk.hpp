#pragma once

#include "jumpfbst/fbst.hpp"
#include "jumpfbst/model.hpp"

#include <span>
#include <vector>

namespace jumpfbst {

// Standard normal upper tail P(Z >= x).
double normal_upper_tail(double x);

// Threshold levels in standardized units with their original-unit values kept
// for reporting.
struct RiskQuery {
    std::vector<double> thresholds;
    std::vector<double> thresholds_original;
    std::size_t t_max = 1;

    static RiskQuery from_original(std::span<const double> original, double mean, double sd,
                                   std::size_t t_max);
    void validate() const;
};

// P(S >= l | theta) for one period.
double exceedance_prob(const ReducedParams& theta, double l);

// Posterior-weighted view of a cloud restricted to points with nonzero weight.
class PosteriorSample {
public:
    explicit PosteriorSample(const SampleCloud& cloud);

    double marginal_exceedance(double l) const;
    // Entry t is the posterior probability that no period in 1..t reaches l.
    std::vector<double> survival_curve(double l, std::size_t t_max) const;
    // 1 / P(S >= l | d).
    double expected_time(double l) const;
    // E[1 / P(S >= l | theta) | d]; the per-theta waiting time averaged over the posterior.
    double expected_time_per_theta(double l) const;

    std::size_t size() const { return points_.size(); }

private:
    std::vector<ReducedParams> points_;
    std::vector<double> weights_;  // normalized to sum 1
};

double marginal_exceedance(const SampleCloud& cloud, double l);
std::vector<double> survival_curve(const SampleCloud& cloud, double l, std::size_t t_max);
double expected_time(const SampleCloud& cloud, double l);

}  // namespace jumpfbst
