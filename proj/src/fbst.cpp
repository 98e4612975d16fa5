#include "jumpfbst/fbst.hpp"

#include "detail/parallel.hpp"
#include "detail/random.hpp"
#include "detail/summation.hpp"
#include "jumpfbst/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

namespace jumpfbst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kChunkSize = 8192;
constexpr std::uint64_t kSupportStream = 0;
constexpr std::uint64_t kNullStream = 1;
constexpr double kSigma2Floor = 1e-12;
constexpr std::size_t kModeStarts = 8;

void require_usable_data(std::span<const double> data) {
    if (data.empty()) throw ArgumentError("data must be nonempty");
    for (const double x : data) {
        if (!std::isfinite(x)) throw DataError("data contains a non-finite value");
    }
}

Params draw_point(std::mt19937_64& rng, const Hyperparams& hyper, bool on_null) {
    Params theta;
    const double lambda = detail::open01(rng);
    theta.lambda = on_null ? 0.0 : lambda;
    theta.p = detail::open01(rng);
    theta.sigma2 = hyper.sigma0 * hyper.sigma0 * detail::open01(rng);
    const double half_box = hyper.c * hyper.sigma0;
    theta.mu = hyper.mu0 - half_box + 2.0 * half_box * detail::open01(rng);
    theta.k = hyper.random_k() ? *hyper.k_max * detail::open01(rng) : hyper.fixed_k;
    return theta;
}

// Fills points/log values for n draws of the given stream.
void fill_cloud(std::span<const double> data, const Hyperparams& hyper, std::uint64_t seed,
                std::uint64_t stream, bool on_null, unsigned threads, std::vector<Params>& points,
                std::vector<double>& log_values) {
    const std::size_t n = points.size();
    const std::size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    detail::parallel_for(n_chunks, threads, [&](std::size_t chunk) {
        std::mt19937_64 rng(detail::chunk_seed(seed, stream, chunk));
        const std::size_t begin = chunk * kChunkSize;
        const std::size_t end = std::min(n, begin + kChunkSize);
        for (std::size_t i = begin; i < end; ++i) {
            points[i] = draw_point(rng, hyper, on_null);
            log_values[i] = log_posterior_unnorm(points[i], data, hyper);
        }
    });
}

double finite_max(std::span<const double> log_values) {
    double m = kNegInf;
    for (const double v : log_values) {
        if (std::isnan(v)) throw EstimationError("cloud contains a NaN log value");
        if (v > m) m = v;
    }
    if (m == kNegInf) throw EstimationError("every cloud point lies outside the posterior support");
    if (!std::isfinite(m)) throw EstimationError("cloud contains an infinite log value");
    return m;
}

void check_distinct(std::span<const double> data) {
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    if (*lo == *hi) {
        throw DegenerateDataError("all observations are equal; the null supremum diverges as sigma -> 0");
    }
}

// ---- mode refinement --------------------------------------------------------

enum class Coord { Lambda, P, Mu, Sigma2, K };

double& coord_ref(Params& theta, Coord c) {
    switch (c) {
        case Coord::Lambda: return theta.lambda;
        case Coord::P: return theta.p;
        case Coord::Mu: return theta.mu;
        case Coord::Sigma2: return theta.sigma2;
        case Coord::K: return theta.k;
    }
    return theta.mu;
}

struct Interval {
    double lo;
    double hi;
    bool log_scale;
};

Interval coord_range(const Params& theta, const Hyperparams& hyper, Coord c) {
    constexpr double shrink = 1e-12;
    switch (c) {
        case Coord::Lambda:
        case Coord::P:
            return {0.0, 1.0, false};
        case Coord::Mu: {
            const double hw = hyper.c * std::sqrt(theta.sigma2) * (1.0 - shrink);
            return {hyper.mu0 - hw, hyper.mu0 + hw, false};
        }
        case Coord::Sigma2: {
            const double top = hyper.sigma0 * hyper.sigma0;
            return {top * 1e-10, top * (1.0 - shrink), true};
        }
        case Coord::K:
            return {*hyper.k_max * shrink, *hyper.k_max, false};
    }
    return {0.0, 1.0, false};
}

class CoordinateSearch {
public:
    CoordinateSearch(std::span<const double> data, const Hyperparams& hyper)
        : data_(data), hyper_(hyper) {}

    double objective(const Params& theta) const { return log_posterior_unnorm(theta, data_, hyper_); }

    // One pass over `coord`; updates theta/value only on strict improvement.
    void optimize(Params& theta, double& value, Coord coord) const {
        const Interval range = coord_range(theta, hyper_, coord);
        if (!(range.hi > range.lo)) return;

        std::array<double, kGrid> xs{};
        for (std::size_t i = 0; i < kGrid; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(kGrid - 1);
            xs[i] = range.log_scale ? range.lo * std::pow(range.hi / range.lo, t)
                                    : range.lo + t * (range.hi - range.lo);
        }
        xs.back() = range.hi;

        Params trial = theta;
        double& x = coord_ref(trial, coord);
        std::size_t best_i = 0;
        double best_v = kNegInf;
        for (std::size_t i = 0; i < kGrid; ++i) {
            x = xs[i];
            const double v = objective(trial);
            if (v > best_v) {
                best_v = v;
                best_i = i;
            }
        }
        double best_x = xs[best_i];
        if (best_v > kNegInf) {
            const double a = xs[best_i == 0 ? 0 : best_i - 1];
            const double b = xs[std::min(best_i + 1, kGrid - 1)];
            const auto [gx, gv] = golden(trial, coord, a, b);
            if (gv > best_v) {
                best_v = gv;
                best_x = gx;
            }
        }
        if (best_v > value) {
            coord_ref(theta, coord) = best_x;
            value = best_v;
        }
    }

private:
    static constexpr std::size_t kGrid = 101;

    std::pair<double, double> golden(Params trial, Coord coord, double a, double b) const {
        constexpr double inv_phi = 0.6180339887498949;
        double& x = coord_ref(trial, coord);
        auto f = [&](double at) {
            x = at;
            return objective(trial);
        };
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f(c);
        double fd = f(d);
        for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
    }

    std::span<const double> data_;
    const Hyperparams& hyper_;
};

}  // namespace

void SampleCloud::validate() const {
    if (points.empty()) throw ArgumentError("sample cloud is empty");
    if (points.size() != log_values.size()) {
        throw ArgumentError("sample cloud points and log values differ in length");
    }
}

std::uint64_t data_digest(std::span<const double> data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const double x : data) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &x, sizeof(double));
        for (const unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

SampleCloud sample_support(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                           std::uint64_t seed, unsigned threads) {
    if (n == 0) throw ArgumentError("sample_support: n must be at least 1");
    hyper.validate();
    require_usable_data(data);
    SampleCloud cloud;
    cloud.points.resize(n);
    cloud.log_values.resize(n);
    cloud.seed = seed;
    cloud.hyper = hyper;
    cloud.data_digest = data_digest(data);
    fill_cloud(data, hyper, seed, kSupportStream, false, threads, cloud.points, cloud.log_values);
    return cloud;
}

double sup_null_monte_carlo(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                            std::uint64_t seed, unsigned threads) {
    if (n == 0) throw ArgumentError("sup_null: n must be at least 1");
    hyper.validate();
    require_usable_data(data);
    std::vector<Params> points(n);
    std::vector<double> log_values(n);
    fill_cloud(data, hyper, seed, kNullStream, true, threads, points, log_values);
    return *std::max_element(log_values.begin(), log_values.end());
}

double sup_null_closed_form(std::span<const double> data, const Hyperparams& hyper) {
    hyper.validate();
    require_usable_data(data);
    check_distinct(data);

    const double n = static_cast<double>(data.size());
    double xbar = 0.0;
    for (const double x : data) xbar += x;
    xbar /= n;

    auto sum_sq = [&](double m) {
        double s = 0.0;
        for (const double x : data) s += (x - m) * (x - m);
        return s;
    };

    double mu = xbar;
    double sigma2 = 0.0;
    double ss = 0.0;
    for (int it = 0; it < 100; ++it) {
        ss = sum_sq(mu);
        sigma2 = std::clamp(ss / (n + 1.0), kSigma2Floor, hyper.sigma0 * hyper.sigma0);
        const double hw = hyper.c * std::sqrt(sigma2);
        const double next = std::clamp(xbar, hyper.mu0 - hw, hyper.mu0 + hw);
        if (next == mu) break;
        mu = next;
    }
    ss = sum_sq(mu);

    double value = -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - ss / (2.0 * sigma2) -
                   0.5 * std::log(sigma2);
    if (hyper.random_k()) value -= std::log(*hyper.k_max);
    return value;
}

double sup_null(std::span<const double> data, const Hyperparams& hyper, std::size_t n,
                std::uint64_t seed, unsigned threads) {
    const double closed = sup_null_closed_form(data, hyper);
    const double mc = sup_null_monte_carlo(data, hyper, n, seed, threads);
    return std::max(mc, closed);
}

Evidence evidence(std::span<const double> log_values, double log_phi0) {
    if (log_values.empty()) throw ArgumentError("evidence: empty cloud");
    if (std::isnan(log_phi0)) throw ArgumentError("evidence: log_phi0 is NaN");
    const double m = finite_max(log_values);
    detail::CompensatedSum total;
    detail::CompensatedSum tangential;
    for (const double v : log_values) {
        if (v == kNegInf) continue;
        const double w = std::exp(v - m);
        total.add(w);
        if (v > log_phi0) tangential.add(w);
    }
    Evidence out;
    out.kappa0 = std::clamp(tangential.value() / total.value(), 0.0, 1.0);
    out.ev = 1.0 - out.kappa0;
    return out;
}

Evidence evidence(const SampleCloud& cloud, double log_phi0) {
    cloud.validate();
    return evidence(cloud.log_values, log_phi0);
}

std::vector<double> relative_weights(std::span<const double> log_values) {
    const double m = finite_max(log_values);
    std::vector<double> w(log_values.size());
    for (std::size_t i = 0; i < log_values.size(); ++i) {
        w[i] = log_values[i] == kNegInf ? 0.0 : std::exp(log_values[i] - m);
    }
    return w;
}

ModeEstimate posterior_mode(const SampleCloud& cloud) {
    cloud.validate();
    finite_max(cloud.log_values);
    const auto it = std::max_element(cloud.log_values.begin(), cloud.log_values.end());
    const auto idx = static_cast<std::size_t>(it - cloud.log_values.begin());
    return {cloud.points[idx], reduce(cloud.points[idx]), *it};
}

ModeEstimate posterior_mode(const SampleCloud& cloud, std::span<const double> data, bool refine) {
    ModeEstimate best = posterior_mode(cloud);
    if (!refine) return best;
    require_usable_data(data);

    const CoordinateSearch search(data, cloud.hyper);
    std::vector<Coord> coords{Coord::Lambda, Coord::P, Coord::Mu, Coord::Sigma2};
    if (cloud.hyper.random_k()) coords.push_back(Coord::K);

    // Start from the best few cloud points; a single start can stall on the
    // eta = 0 ridge where the jump size has no effect on the likelihood.
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t starts = std::min(kModeStarts, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](std::size_t a, std::size_t b) { return cloud.log_values[a] > cloud.log_values[b]; });

    for (std::size_t s = 0; s < starts; ++s) {
        const std::size_t idx = order[s];
        if (cloud.log_values[idx] == kNegInf) break;
        Params theta = cloud.points[idx];
        double value = search.objective(theta);
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (const Coord c : coords) search.optimize(theta, value, c);
        }
        if (value > best.log_value) {
            best.point = theta;
            best.reduced = reduce(theta);
            best.log_value = value;
        }
    }
    return best;
}

MeanEstimate posterior_mean(const SampleCloud& cloud) {
    cloud.validate();
    const std::vector<double> w = relative_weights(cloud.log_values);
    detail::CompensatedSum sw;
    detail::CompensatedSum sw2;
    detail::CompensatedSum eta;
    detail::CompensatedSum mu;
    detail::CompensatedSum sigma;
    detail::CompensatedSum k;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const ReducedParams r = reduce(cloud.points[i]);
        sw.add(w[i]);
        sw2.add(w[i] * w[i]);
        eta.add(w[i] * r.eta);
        mu.add(w[i] * r.mu);
        sigma.add(w[i] * r.sigma);
        k.add(w[i] * r.k);
    }
    const double total = sw.value();
    MeanEstimate out;
    out.mean = {eta.value() / total, mu.value() / total, sigma.value() / total, k.value() / total};
    out.ess = total * total / sw2.value();
    return out;
}

FbstResult run_fbst(std::span<const double> data, const Hyperparams& hyper, const RunOptions& options) {
    hyper.validate();
    require_usable_data(data);
    check_distinct(data);

    FbstResult result;
    result.cloud = sample_support(data, hyper, options.n_support, options.seed, options.threads);

    EvidenceReport& r = result.report;
    r.log_phi0_closed_form = sup_null_closed_form(data, hyper);
    r.log_phi0_mc = sup_null_monte_carlo(data, hyper, options.n_null, options.seed, options.threads);
    r.log_phi0 = std::max(r.log_phi0_mc, r.log_phi0_closed_form);

    const Evidence e = evidence(result.cloud, r.log_phi0);
    r.ev = e.ev;
    r.kappa0 = e.kappa0;
    r.n_support = options.n_support;
    r.n_null = options.n_null;
    r.seed = options.seed;

    const ModeEstimate mode = posterior_mode(result.cloud, data, options.refine_mode);
    r.mode = mode.reduced;
    r.mode_log_value = mode.log_value;
    r.mode_refined = options.refine_mode;

    const MeanEstimate mean = posterior_mean(result.cloud);
    r.mean = mean.mean;
    r.ess = mean.ess;
    return result;
}

}  // namespace jumpfbst
