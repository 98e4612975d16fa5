#include "jumpfbst/jumpfbst.h"

#include "jumpfbst/error.hpp"
#include "jumpfbst/fbst.hpp"
#include "jumpfbst/io.hpp"
#include "jumpfbst/model.hpp"
#include "jumpfbst/risk.hpp"
#include "jumpfbst/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>

struct jfbst_dataset {
    jumpfbst::Dataset data;
};

struct jfbst_cloud {
    jumpfbst::SampleCloud cloud;
};

struct jfbst_posterior {
    jumpfbst::PosteriorSample sample;
};

namespace {

using namespace jumpfbst;

thread_local std::string g_last_error;

template <class F>
jfbst_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return JFBST_OK;
    } catch (const EstimationError& e) {
        g_last_error = e.what();
        return JFBST_ERR_ESTIMATION;
    } catch (const DataError& e) {
        g_last_error = e.what();
        return JFBST_ERR_DATA;
    } catch (const ArgumentError& e) {
        g_last_error = e.what();
        return JFBST_ERR_ARGUMENT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return JFBST_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return JFBST_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return JFBST_ERR_INTERNAL;
    }
}

template <class T>
const T& deref(const T* p, const char* what) {
    if (p == nullptr) throw ArgumentError(std::string(what) + " is NULL");
    return *p;
}

template <class T>
T& out_ref(T* p, const char* what) {
    if (p == nullptr) throw ArgumentError(std::string(what) + " is NULL");
    return *p;
}

const char* require_path(const char* path) {
    if (path == nullptr || *path == '\0') throw ArgumentError("path is empty");
    return path;
}

std::span<const double> as_span(const double* data, std::size_t n) {
    if (data == nullptr && n > 0) throw ArgumentError("data pointer is NULL");
    return {data, n};
}

Params to_params(const jfbst_params& p) { return {p.lambda, p.p, p.mu, p.sigma2, p.k}; }
ReducedParams to_reduced(const jfbst_reduced& r) { return {r.eta, r.mu, r.sigma, r.k}; }
jfbst_reduced from_reduced(const ReducedParams& r) { return {r.eta, r.mu, r.sigma, r.k}; }

Hyperparams to_hyper(const jfbst_hyper& h) {
    Hyperparams out;
    out.beta = h.beta;
    out.sigma0 = h.sigma0;
    out.mu0 = h.mu0;
    out.c = h.c;
    if (h.variant == JFBST_RANDOM_JUMP_SIZE) {
        out.variant = JumpSizeVariant::RandomJumpSize;
        out.k_max = h.k_max;
    } else if (h.variant == JFBST_FIXED_JUMP_SIZE) {
        out.variant = JumpSizeVariant::FixedJumpSize;
        out.fixed_k = h.fixed_k;
    } else {
        throw ArgumentError("unknown jump size variant");
    }
    out.validate();
    return out;
}

jfbst_hyper from_hyper(const Hyperparams& h) {
    jfbst_hyper out{};
    out.beta = h.beta;
    out.sigma0 = h.sigma0;
    out.mu0 = h.mu0;
    out.c = h.c;
    out.k_max = h.k_max ? *h.k_max : std::numeric_limits<double>::quiet_NaN();
    out.variant = h.random_k() ? JFBST_RANDOM_JUMP_SIZE : JFBST_FIXED_JUMP_SIZE;
    out.fixed_k = h.fixed_k;
    return out;
}

DataKind to_kind(int kind) {
    switch (kind) {
        case JFBST_KIND_RETURNS: return DataKind::Returns;
        case JFBST_KIND_PRICES: return DataKind::Prices;
        case JFBST_KIND_MAXIMA: return DataKind::Maxima;
        default: throw ArgumentError("unknown data kind");
    }
}

SimConfig to_sim(const jfbst_sim_config& c) {
    SimConfig out;
    out.n = c.n;
    out.mu = c.mu;
    out.sigma = c.sigma;
    out.eta = c.eta;
    out.k = c.k;
    out.seed = c.seed;
    out.s0 = c.s0;
    return out;
}

jfbst_report from_report(const EvidenceReport& r) {
    jfbst_report out{};
    out.ev = r.ev;
    out.kappa0 = r.kappa0;
    out.log_phi0 = r.log_phi0;
    out.n_support = r.n_support;
    out.n_null = r.n_null;
    out.seed = r.seed;
    out.mode = from_reduced(r.mode);
    out.mean = from_reduced(r.mean);
    out.ess = r.ess;
    out.log_phi0_mc = r.log_phi0_mc;
    out.log_phi0_closed_form = r.log_phi0_closed_form;
    out.mode_log_value = r.mode_log_value;
    out.mode_refined = r.mode_refined ? 1 : 0;
    return out;
}

EvidenceReport to_report(const jfbst_report& r) {
    EvidenceReport out;
    out.ev = r.ev;
    out.kappa0 = r.kappa0;
    out.log_phi0 = r.log_phi0;
    out.n_support = r.n_support;
    out.n_null = r.n_null;
    out.seed = r.seed;
    out.mode = to_reduced(r.mode);
    out.mean = to_reduced(r.mean);
    out.ess = r.ess;
    out.log_phi0_mc = r.log_phi0_mc;
    out.log_phi0_closed_form = r.log_phi0_closed_form;
    out.mode_log_value = r.mode_log_value;
    out.mode_refined = r.mode_refined != 0;
    return out;
}

void copy_out(const std::vector<double>& v, double* out, std::size_t capacity) {
    if (out == nullptr) throw ArgumentError("output buffer is NULL");
    if (capacity < v.size()) {
        throw ArgumentError("output buffer too small: need " + std::to_string(v.size()) + " values");
    }
    std::copy(v.begin(), v.end(), out);
}

}  // namespace

extern "C" {

const char* jfbst_last_error(void) { return g_last_error.c_str(); }

const char* jfbst_version(void) { return "0.1.0"; }

void jfbst_hyper_defaults(jfbst_hyper* out) {
    if (out != nullptr) *out = from_hyper(Hyperparams{});
}

void jfbst_run_options_defaults(jfbst_run_options* out) {
    if (out == nullptr) return;
    const RunOptions d;
    out->n_support = d.n_support;
    out->n_null = d.n_null;
    out->seed = d.seed;
    out->refine_mode = d.refine_mode ? 1 : 0;
    out->threads = d.threads;
}

jfbst_status jfbst_parse_kind(const char* name, jfbst_data_kind* out) {
    return guarded([&] {
        if (name == nullptr) throw ArgumentError("kind is NULL");
        switch (parse_data_kind(name)) {
            case DataKind::Returns: out_ref(out, "out") = JFBST_KIND_RETURNS; break;
            case DataKind::Prices: out_ref(out, "out") = JFBST_KIND_PRICES; break;
            case DataKind::Maxima: out_ref(out, "out") = JFBST_KIND_MAXIMA; break;
        }
    });
}

jfbst_status jfbst_mixture_pdf(double y, const jfbst_reduced* theta, double* out) {
    return guarded([&] { out_ref(out, "out") = mixture_pdf(y, to_reduced(deref(theta, "theta"))); });
}

jfbst_status jfbst_log_likelihood(const jfbst_params* theta, const double* data, size_t n, double* out) {
    return guarded([&] {
        out_ref(out, "out") = log_likelihood(to_params(deref(theta, "theta")), as_span(data, n));
    });
}

jfbst_status jfbst_log_posterior(const jfbst_params* theta, const double* data, size_t n,
                                 const jfbst_hyper* hyper, double* out) {
    return guarded([&] {
        out_ref(out, "out") = log_posterior_unnorm(to_params(deref(theta, "theta")), as_span(data, n),
                                                   to_hyper(deref(hyper, "hyper")));
    });
}

jfbst_status jfbst_simulate_returns(const jfbst_sim_config* cfg, double* out, size_t capacity) {
    return guarded([&] { copy_out(simulate_returns(to_sim(deref(cfg, "cfg"))), out, capacity); });
}

jfbst_status jfbst_simulate_price_path(const jfbst_sim_config* cfg, double* out, size_t capacity) {
    return guarded([&] { copy_out(simulate_price_path(to_sim(deref(cfg, "cfg"))), out, capacity); });
}

jfbst_status jfbst_write_series(const char* path, const char* header, const double* values, size_t n) {
    return guarded([&] { write_series(require_path(path), header ? header : "", as_span(values, n)); });
}

jfbst_status jfbst_dataset_load(const char* path, jfbst_data_kind kind, jfbst_dataset** out) {
    return guarded([&] {
        auto ds = std::make_unique<jfbst_dataset>();
        ds->data = read_series(require_path(path), to_kind(kind));
        out_ref(out, "out") = ds.release();
    });
}

jfbst_status jfbst_dataset_from_values(const double* values, size_t n, jfbst_data_kind kind,
                                       jfbst_dataset** out) {
    return guarded([&] {
        const auto span = as_span(values, n);
        auto ds = std::make_unique<jfbst_dataset>();
        ds->data = Dataset::from_values(std::vector<double>(span.begin(), span.end()), to_kind(kind));
        out_ref(out, "out") = ds.release();
    });
}

void jfbst_dataset_free(jfbst_dataset* ds) { delete ds; }

jfbst_status jfbst_dataset_get_info(const jfbst_dataset* ds, jfbst_dataset_info* out) {
    return guarded([&] {
        const Dataset& d = deref(ds, "dataset").data;
        jfbst_dataset_info& info = out_ref(out, "out");
        info.kind = static_cast<int>(d.kind);
        info.n = d.values.size();
        info.mean = d.mean;
        info.sd = d.sd;
        info.digest = data_digest(d.standardized);
    });
}

jfbst_status jfbst_dataset_standardized(const jfbst_dataset* ds, double* out, size_t capacity) {
    return guarded([&] { copy_out(deref(ds, "dataset").data.standardized, out, capacity); });
}

jfbst_status jfbst_run_test(const jfbst_dataset* ds, const jfbst_hyper* hyper, const jfbst_run_options* options,
                            jfbst_report* report, jfbst_cloud** cloud_out) {
    return guarded([&] {
        const Dataset& d = deref(ds, "dataset").data;
        const jfbst_run_options& o = deref(options, "options");
        jfbst_report& rep = out_ref(report, "report");
        RunOptions run;
        run.n_support = o.n_support;
        run.n_null = o.n_null;
        run.seed = o.seed;
        run.refine_mode = o.refine_mode != 0;
        run.threads = o.threads;
        FbstResult result = run_fbst(d.standardized, to_hyper(deref(hyper, "hyper")), run);
        rep = from_report(result.report);
        if (cloud_out != nullptr) {
            auto c = std::make_unique<jfbst_cloud>();
            c->cloud = std::move(result.cloud);
            *cloud_out = c.release();
        }
    });
}

jfbst_status jfbst_write_report(const char* path, const jfbst_report* report, const jfbst_hyper* hyper,
                                const jfbst_dataset* ds) {
    return guarded([&] {
        write_report(require_path(path), to_report(deref(report, "report")), to_hyper(deref(hyper, "hyper")),
                     deref(ds, "dataset").data);
    });
}

jfbst_status jfbst_cloud_save(const jfbst_cloud* cloud, const char* path) {
    return guarded([&] { write_cloud(require_path(path), deref(cloud, "cloud").cloud); });
}

jfbst_status jfbst_cloud_load(const char* path, jfbst_cloud** out) {
    return guarded([&] {
        auto c = std::make_unique<jfbst_cloud>();
        c->cloud = read_cloud(require_path(path));
        out_ref(out, "out") = c.release();
    });
}

void jfbst_cloud_free(jfbst_cloud* cloud) { delete cloud; }

size_t jfbst_cloud_size(const jfbst_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

jfbst_status jfbst_cloud_get_hyper(const jfbst_cloud* cloud, jfbst_hyper* out) {
    return guarded([&] { out_ref(out, "out") = from_hyper(deref(cloud, "cloud").cloud.hyper); });
}

jfbst_status jfbst_cloud_check_data(const jfbst_cloud* cloud, const jfbst_dataset* ds) {
    return guarded([&] {
        const SampleCloud& c = deref(cloud, "cloud").cloud;
        if (c.data_digest != data_digest(deref(ds, "dataset").data.standardized)) {
            throw DataError("sample cloud was computed from a different dataset (digest mismatch)");
        }
    });
}

jfbst_status jfbst_cloud_evidence(const jfbst_cloud* cloud, double log_phi0, double* ev, double* kappa0) {
    return guarded([&] {
        const Evidence e = evidence(deref(cloud, "cloud").cloud, log_phi0);
        out_ref(ev, "ev") = e.ev;
        out_ref(kappa0, "kappa0") = e.kappa0;
    });
}

jfbst_status jfbst_cloud_mode(const jfbst_cloud* cloud, const jfbst_dataset* ds, int refine, jfbst_reduced* out) {
    return guarded([&] {
        const SampleCloud& c = deref(cloud, "cloud").cloud;
        if (refine != 0) {
            out_ref(out, "out") =
                from_reduced(posterior_mode(c, deref(ds, "dataset").data.standardized, true).reduced);
        } else {
            out_ref(out, "out") = from_reduced(posterior_mode(c).reduced);
        }
    });
}

jfbst_status jfbst_cloud_mean(const jfbst_cloud* cloud, jfbst_reduced* out, double* ess) {
    return guarded([&] {
        const MeanEstimate m = posterior_mean(deref(cloud, "cloud").cloud);
        out_ref(out, "out") = from_reduced(m.mean);
        if (ess != nullptr) *ess = m.ess;
    });
}

jfbst_status jfbst_exceedance_prob(const jfbst_reduced* theta, double l, double* out) {
    return guarded([&] { out_ref(out, "out") = exceedance_prob(to_reduced(deref(theta, "theta")), l); });
}

jfbst_status jfbst_posterior_create(const jfbst_cloud* cloud, jfbst_posterior** out) {
    return guarded([&] {
        auto p = std::make_unique<jfbst_posterior>(jfbst_posterior{PosteriorSample(deref(cloud, "cloud").cloud)});
        out_ref(out, "out") = p.release();
    });
}

void jfbst_posterior_free(jfbst_posterior* posterior) { delete posterior; }

jfbst_status jfbst_marginal_exceedance(const jfbst_posterior* posterior, double l, double* out) {
    return guarded([&] { out_ref(out, "out") = deref(posterior, "posterior").sample.marginal_exceedance(l); });
}

jfbst_status jfbst_survival_curve(const jfbst_posterior* posterior, double l, size_t t_max, double* out) {
    return guarded([&] {
        const auto curve = deref(posterior, "posterior").sample.survival_curve(l, t_max);
        copy_out(curve, out, curve.size());
    });
}

jfbst_status jfbst_expected_time(const jfbst_posterior* posterior, double l, int per_theta, double* out) {
    return guarded([&] {
        const PosteriorSample& s = deref(posterior, "posterior").sample;
        out_ref(out, "out") = per_theta != 0 ? s.expected_time_per_theta(l) : s.expected_time(l);
    });
}

jfbst_status jfbst_write_risk_csv(const jfbst_posterior* posterior, const jfbst_dataset* ds,
                                  const double* thresholds, size_t n_thresholds, size_t horizon, int per_theta,
                                  const char* survival_path, const char* times_path) {
    return guarded([&] {
        const PosteriorSample& s = deref(posterior, "posterior").sample;
        const Dataset& d = deref(ds, "dataset").data;
        const RiskQuery q = RiskQuery::from_original(as_span(thresholds, n_thresholds), d.mean, d.sd, horizon);
        // Render both before writing either so a failure leaves no partial output.
        const std::string survival = survival_path ? survival_csv(s, q) : std::string{};
        const std::string times = times_path ? expected_times_csv(s, q, per_theta != 0) : std::string{};
        if (survival_path) write_text(require_path(survival_path), survival);
        if (times_path) write_text(require_path(times_path), times);
    });
}

jfbst_status jfbst_write_density_csv(const jfbst_dataset* ds, const jfbst_reduced* fitted, size_t grid,
                                     const char* path) {
    return guarded([&] {
        const std::string text = density_csv(deref(ds, "dataset").data, to_reduced(deref(fitted, "fitted")), grid);
        write_text(require_path(path), text);
    });
}

}  // extern "C"
