// jumpfbst: command-line front end. Links only the C interface.

#include "jumpfbst/jumpfbst.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Failure {
    jfbst_status status;
};

void check(jfbst_status s) {
    if (s != JFBST_OK) throw Failure{s};
}

struct DatasetDeleter {
    void operator()(jfbst_dataset* p) const { jfbst_dataset_free(p); }
};
struct CloudDeleter {
    void operator()(jfbst_cloud* p) const { jfbst_cloud_free(p); }
};
struct PosteriorDeleter {
    void operator()(jfbst_posterior* p) const { jfbst_posterior_free(p); }
};
using DatasetPtr = std::unique_ptr<jfbst_dataset, DatasetDeleter>;
using CloudPtr = std::unique_ptr<jfbst_cloud, CloudDeleter>;
using PosteriorPtr = std::unique_ptr<jfbst_posterior, PosteriorDeleter>;

DatasetPtr load_dataset(const std::string& path, const std::string& kind_name) {
    jfbst_data_kind kind{};
    check(jfbst_parse_kind(kind_name.c_str(), &kind));
    jfbst_dataset* ds = nullptr;
    check(jfbst_dataset_load(path.c_str(), kind, &ds));
    return DatasetPtr(ds);
}

CloudPtr load_cloud_for(const std::string& path, const jfbst_dataset* ds) {
    jfbst_cloud* cloud = nullptr;
    check(jfbst_cloud_load(path.c_str(), &cloud));
    CloudPtr owned(cloud);
    check(jfbst_cloud_check_data(owned.get(), ds));
    return owned;
}

struct SimulateArgs {
    jfbst_sim_config cfg{40, 0.0, 0.2, 0.0, 1.0, 1, 100.0};
    std::string out;
    bool path = false;
};

int run_simulate(const SimulateArgs& a) {
    const std::size_t len = a.path ? a.cfg.n + 1 : a.cfg.n;
    std::vector<double> values(len);
    if (a.path) {
        check(jfbst_simulate_price_path(&a.cfg, values.data(), values.size()));
    } else {
        check(jfbst_simulate_returns(&a.cfg, values.data(), values.size()));
    }
    check(jfbst_write_series(a.out.c_str(), a.path ? "price" : "return", values.data(), values.size()));
    return 0;
}

struct TestArgs {
    std::string data;
    std::string kind = "returns";
    jfbst_hyper hyper{};
    bool random_jump_size = false;
    double k_max = 30.0;
    double jump_size = 1.0;
    jfbst_run_options run{};
    std::string report;
    std::string cloud;
    bool no_refine = false;
};

void print_reduced(const char* label, const jfbst_reduced& r) {
    std::printf("%-5s eta=%.6g mu=%.6g sigma=%.6g k=%.6g\n", label, r.eta, r.mu, r.sigma, r.k);
}

int run_test(TestArgs a) {
    DatasetPtr ds = load_dataset(a.data, a.kind);
    jfbst_dataset_info info{};
    check(jfbst_dataset_get_info(ds.get(), &info));

    if (a.random_jump_size) {
        a.hyper.variant = JFBST_RANDOM_JUMP_SIZE;
        a.hyper.k_max = a.k_max;
    } else {
        a.hyper.variant = JFBST_FIXED_JUMP_SIZE;
        // Jump size is given in original data units.
        a.hyper.fixed_k = a.jump_size / info.sd;
    }
    a.run.refine_mode = a.no_refine ? 0 : 1;

    jfbst_report report{};
    jfbst_cloud* cloud = nullptr;
    check(jfbst_run_test(ds.get(), &a.hyper, &a.run, &report, a.cloud.empty() ? nullptr : &cloud));
    CloudPtr owned(cloud);

    check(jfbst_write_report(a.report.c_str(), &report, &a.hyper, ds.get()));
    if (owned) check(jfbst_cloud_save(owned.get(), a.cloud.c_str()));

    std::printf("n=%zu mean=%.6g sd=%.6g\n", info.n, info.mean, info.sd);
    std::printf("ev=%.6g kappa0=%.6g log_phi0=%.10g ess=%.4g\n", report.ev, report.kappa0, report.log_phi0,
                report.ess);
    print_reduced("mode", report.mode);
    print_reduced("mean", report.mean);
    if (report.ess < 100.0) {
        std::fprintf(stderr, "warning: effective sample size %.3g < 100; estimates are unreliable\n", report.ess);
    }
    return 0;
}

struct RiskArgs {
    std::string data;
    std::string kind = "maxima";
    std::string cloud;
    std::vector<double> thresholds;
    std::size_t horizon = 100;
    std::string out_survival;
    std::string out_times;
    bool per_theta = false;
};

int run_risk(const RiskArgs& a) {
    DatasetPtr ds = load_dataset(a.data, a.kind);
    CloudPtr cloud = load_cloud_for(a.cloud, ds.get());
    jfbst_posterior* post = nullptr;
    check(jfbst_posterior_create(cloud.get(), &post));
    PosteriorPtr owned(post);
    check(jfbst_write_risk_csv(owned.get(), ds.get(), a.thresholds.data(), a.thresholds.size(), a.horizon,
                               a.per_theta ? 1 : 0, a.out_survival.empty() ? nullptr : a.out_survival.c_str(),
                               a.out_times.empty() ? nullptr : a.out_times.c_str()));
    return 0;
}

struct DensityArgs {
    std::string data;
    std::string kind = "returns";
    std::string cloud;
    std::size_t grid = 200;
    std::string out;
    bool no_refine = false;
};

int run_density(const DensityArgs& a) {
    DatasetPtr ds = load_dataset(a.data, a.kind);
    CloudPtr cloud = load_cloud_for(a.cloud, ds.get());
    jfbst_reduced mode{};
    check(jfbst_cloud_mode(cloud.get(), ds.get(), a.no_refine ? 0 : 1, &mode));
    check(jfbst_write_density_csv(ds.get(), &mode, a.grid, a.out.c_str()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full Bayesian significance test for Bernoulli jumps in diffusion returns"};
    app.set_config("--config", "", "Flat key=value configuration file (flags take precedence)");
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate jump-diffusion returns or a price path");
    simulate->add_option("--n", sim.cfg.n, "Number of periods")->check(CLI::PositiveNumber);
    simulate->add_option("--mu", sim.cfg.mu, "Drift per period");
    simulate->add_option("--sigma", sim.cfg.sigma, "Volatility per period");
    simulate->add_option("--eta", sim.cfg.eta, "Jump probability per period")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--k", sim.cfg.k, "Jump size");
    simulate->add_option("--seed", sim.cfg.seed, "RNG seed");
    simulate->add_option("--out", sim.out, "Output CSV")->required();
    simulate->add_flag("--path", sim.path, "Emit a price path instead of returns");
    simulate->add_option("--s0", sim.cfg.s0, "Initial price (path mode)");

    TestArgs test;
    jfbst_hyper_defaults(&test.hyper);
    jfbst_run_options_defaults(&test.run);
    test.run.threads = 0;
    auto* test_cmd = app.add_subcommand("test", "Evidence for the no-jump hypothesis");
    test_cmd->add_option("--data", test.data, "Input series (one value per row)")->required();
    test_cmd->add_option("--kind", test.kind, "returns|prices|maxima");
    test_cmd->add_option("--beta", test.hyper.beta, "Prior shape for (lambda, p)");
    test_cmd->add_option("--sigma0", test.hyper.sigma0, "Volatility prior bound (sigma^2 < sigma0^2)");
    test_cmd->add_option("--mu0", test.hyper.mu0, "Drift prior centre");
    test_cmd->add_option("--c", test.hyper.c, "Drift prior half-width multiplier");
    test_cmd->add_flag("--random-jump-size", test.random_jump_size, "Jump size k ~ U(0, k_max)");
    test_cmd->add_option("--k-max", test.k_max, "Jump size prior bound (standardized units)");
    test_cmd->add_option("--jump-size", test.jump_size, "Fixed jump size in original data units");
    test_cmd->add_option("--samples", test.run.n_support, "Points sampled on the posterior support");
    test_cmd->add_option("--null-samples", test.run.n_null, "Points sampled on the null set");
    test_cmd->add_option("--seed", test.run.seed, "RNG seed");
    test_cmd->add_option("--threads", test.run.threads, "Worker threads (0 = all cores)");
    test_cmd->add_option("--report", test.report, "Output JSON report")->required();
    test_cmd->add_option("--cloud", test.cloud, "Optional output path for the sample cloud");
    test_cmd->add_flag("--no-refine-mode", test.no_refine, "Report the raw cloud maximum as the mode");

    RiskArgs risk;
    auto* risk_cmd = app.add_subcommand("risk", "Survival curves and expected times to thresholds");
    risk_cmd->add_option("--data", risk.data, "Series the cloud was computed from")->required();
    risk_cmd->add_option("--kind", risk.kind, "returns|prices|maxima");
    risk_cmd->add_option("--cloud", risk.cloud, "Sample cloud file")->required();
    risk_cmd->add_option("--thresholds", risk.thresholds, "Thresholds in original units")
        ->required()
        ->delimiter(',');
    risk_cmd->add_option("--horizon", risk.horizon, "Horizon in periods")->check(CLI::PositiveNumber);
    risk_cmd->add_option("--out-survival", risk.out_survival, "Survival curve CSV");
    risk_cmd->add_option("--out-times", risk.out_times, "Expected time CSV");
    risk_cmd->add_flag("--per-theta-time", risk.per_theta,
                       "Expected time as the posterior mean of 1/P(S >= l | theta)");

    DensityArgs dens;
    auto* density = app.add_subcommand("density", "Empirical and fitted density grid");
    density->add_option("--data", dens.data, "Series the cloud was computed from")->required();
    density->add_option("--kind", dens.kind, "returns|prices|maxima");
    density->add_option("--cloud", dens.cloud, "Sample cloud file")->required();
    density->add_option("--grid", dens.grid, "Grid points")->check(CLI::Range(2, 1000000));
    density->add_option("--out", dens.out, "Output CSV")->required();
    density->add_flag("--no-refine-mode", dens.no_refine, "Use the raw cloud maximum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return JFBST_ERR_ARGUMENT;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*test_cmd) return run_test(test);
        if (*risk_cmd) return run_risk(risk);
        if (*density) return run_density(dens);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", jfbst_last_error());
        return static_cast<int>(f.status);
    }
    return JFBST_ERR_ARGUMENT;
}
