#include "jumpfbst/risk.hpp"

#include "detail/summation.hpp"
#include "jumpfbst/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace jumpfbst {

double normal_upper_tail(double x) {
    if (std::isnan(x)) throw DomainError("normal_upper_tail: NaN argument");
    if (std::abs(x) <= 8.0) return 0.5 * std::erfc(x / std::numbers::sqrt2);
    if (x < 0.0) return 1.0 - normal_upper_tail(-x);
    if (std::isinf(x)) return 0.0;
    // Mills ratio by its continued fraction x + 1/(x + 2/(x + 3/(x + ...))),
    // evaluated backwards; 60 levels are far past convergence for x > 8.
    double t = x;
    for (int j = 60; j >= 1; --j) t = x + j / t;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return pdf / t;
}

RiskQuery RiskQuery::from_original(std::span<const double> original, double mean, double sd,
                                   std::size_t t_max) {
    if (!(sd > 0.0)) throw ArgumentError("standardization sd must be positive");
    RiskQuery q;
    q.t_max = t_max;
    q.thresholds_original.assign(original.begin(), original.end());
    for (const double l : original) q.thresholds.push_back((l - mean) / sd);
    q.validate();
    return q;
}

void RiskQuery::validate() const {
    if (thresholds.empty()) throw ArgumentError("at least one threshold is required");
    if (thresholds_original.size() != thresholds.size()) {
        throw ArgumentError("threshold unit vectors differ in length");
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!std::isfinite(thresholds[i])) throw ArgumentError("thresholds must be finite");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
            throw ArgumentError("thresholds must be strictly increasing");
        }
    }
    if (t_max < 1) throw ArgumentError("horizon must be at least 1");
}

double exceedance_prob(const ReducedParams& theta, double l) {
    validate(theta);
    if (std::isnan(l)) throw DomainError("exceedance_prob: NaN threshold");
    const double base = normal_upper_tail((l - theta.mu) / theta.sigma);
    const double jump = normal_upper_tail((l - (theta.mu + theta.k)) / theta.sigma);
    return (1.0 - theta.eta) * base + theta.eta * jump;
}

PosteriorSample::PosteriorSample(const SampleCloud& cloud) {
    cloud.validate();
    const std::vector<double> w = relative_weights(cloud.log_values);
    detail::CompensatedSum total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        points_.push_back(reduce(cloud.points[i]));
        weights_.push_back(w[i]);
        total.add(w[i]);
    }
    const double t = total.value();
    if (!(t > 0.0)) throw EstimationError("posterior weights sum to zero");
    for (double& x : weights_) x /= t;
}

double PosteriorSample::marginal_exceedance(double l) const {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < points_.size(); ++i) s.add(weights_[i] * exceedance_prob(points_[i], l));
    return std::clamp(s.value(), 0.0, 1.0);
}

std::vector<double> PosteriorSample::survival_curve(double l, std::size_t t_max) const {
    std::vector<detail::CompensatedSum> acc(t_max + 1);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double stay = 1.0 - exceedance_prob(points_[i], l);
        double s = 1.0;
        acc[0].add(weights_[i]);
        for (std::size_t t = 1; t <= t_max; ++t) {
            s *= stay;
            acc[t].add(weights_[i] * s);
        }
    }
    std::vector<double> out(t_max + 1);
    out[0] = 1.0;
    for (std::size_t t = 1; t <= t_max; ++t) out[t] = std::clamp(acc[t].value(), 0.0, 1.0);
    // Enforce the exact monotone shape against last-bit summation noise.
    for (std::size_t t = 1; t <= t_max; ++t) out[t] = std::min(out[t], out[t - 1]);
    return out;
}

double PosteriorSample::expected_time(double l) const {
    const double p = marginal_exceedance(l);
    if (!(p > 0.0)) {
        std::ostringstream msg;
        msg << "zero marginal exceedance probability at threshold " << l
            << " (standardized); expected time is unbounded";
        throw OverflowError(msg.str());
    }
    return 1.0 / p;
}

double PosteriorSample::expected_time_per_theta(double l) const {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double p = exceedance_prob(points_[i], l);
        if (!(p > 0.0)) {
            std::ostringstream msg;
            msg << "zero exceedance probability at threshold " << l << " for a weighted point";
            throw OverflowError(msg.str());
        }
        s.add(weights_[i] / p);
    }
    return s.value();
}

double marginal_exceedance(const SampleCloud& cloud, double l) {
    return PosteriorSample(cloud).marginal_exceedance(l);
}

std::vector<double> survival_curve(const SampleCloud& cloud, double l, std::size_t t_max) {
    return PosteriorSample(cloud).survival_curve(l, t_max);
}

double expected_time(const SampleCloud& cloud, double l) {
    return PosteriorSample(cloud).expected_time(l);
}

}  // namespace jumpfbst
