/*
 * C interface to the jump-diffusion FBST library.
 *
 * Every function returning jfbst_status reports failures through the status
 * code; jfbst_last_error() returns the message of the most recent failure on
 * the calling thread. Status codes double as CLI exit codes.
 *
 * Parameters are in standardized data units unless stated otherwise.
 */
#ifndef JUMPFBST_H
#define JUMPFBST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(JUMPFBST_BUILDING)
#    define JUMPFBST_API __declspec(dllexport)
#  else
#    define JUMPFBST_API __declspec(dllimport)
#  endif
#else
#  define JUMPFBST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jfbst_status {
  JFBST_OK = 0,
  JFBST_ERR_ARGUMENT = 1,   /* bad arguments, invalid parameter points */
  JFBST_ERR_DATA = 2,       /* unreadable, malformed or constant data */
  JFBST_ERR_ESTIMATION = 3, /* degenerate data, empty support, zero exceedance */
  JFBST_ERR_INTERNAL = 4
} jfbst_status;

typedef enum jfbst_data_kind {
  JFBST_KIND_RETURNS = 0,
  JFBST_KIND_PRICES = 1,
  JFBST_KIND_MAXIMA = 2
} jfbst_data_kind;

typedef enum jfbst_variant {
  JFBST_FIXED_JUMP_SIZE = 0,
  JFBST_RANDOM_JUMP_SIZE = 1
} jfbst_variant;

typedef struct jfbst_dataset jfbst_dataset;
typedef struct jfbst_cloud jfbst_cloud;
typedef struct jfbst_posterior jfbst_posterior;

typedef struct jfbst_params {
  double lambda, p, mu, sigma2, k;
} jfbst_params;

typedef struct jfbst_reduced {
  double eta, mu, sigma, k;
} jfbst_reduced;

typedef struct jfbst_hyper {
  double beta;
  double sigma0;
  double mu0;
  double c;
  double k_max;    /* used only with JFBST_RANDOM_JUMP_SIZE */
  int variant;     /* jfbst_variant */
  double fixed_k;  /* jump size with JFBST_FIXED_JUMP_SIZE */
} jfbst_hyper;

typedef struct jfbst_sim_config {
  size_t n;
  double mu;
  double sigma;
  double eta;
  double k;
  uint64_t seed;
  double s0;
} jfbst_sim_config;

typedef struct jfbst_run_options {
  uint64_t n_support;
  uint64_t n_null;
  uint64_t seed;
  int refine_mode;
  unsigned threads; /* 0 = hardware concurrency; results do not depend on it */
} jfbst_run_options;

typedef struct jfbst_report {
  double ev;
  double kappa0;
  double log_phi0;
  uint64_t n_support;
  uint64_t n_null;
  uint64_t seed;
  jfbst_reduced mode;
  jfbst_reduced mean;
  double ess;
  double log_phi0_mc;
  double log_phi0_closed_form;
  double mode_log_value;
  int mode_refined;
} jfbst_report;

typedef struct jfbst_dataset_info {
  int kind; /* jfbst_data_kind */
  size_t n; /* analysed observations (returns for price input) */
  double mean;
  double sd;
  uint64_t digest;
} jfbst_dataset_info;

JUMPFBST_API const char* jfbst_last_error(void);
JUMPFBST_API const char* jfbst_version(void);

JUMPFBST_API void jfbst_hyper_defaults(jfbst_hyper* out);
JUMPFBST_API void jfbst_run_options_defaults(jfbst_run_options* out);
JUMPFBST_API jfbst_status jfbst_parse_kind(const char* name, jfbst_data_kind* out);

/* model */
JUMPFBST_API jfbst_status jfbst_mixture_pdf(double y, const jfbst_reduced* theta, double* out);
JUMPFBST_API jfbst_status jfbst_log_likelihood(const jfbst_params* theta, const double* data, size_t n,
                                               double* out);
JUMPFBST_API jfbst_status jfbst_log_posterior(const jfbst_params* theta, const double* data, size_t n,
                                              const jfbst_hyper* hyper, double* out);

/* simulation; `capacity` must be at least n (returns) or n + 1 (paths) */
JUMPFBST_API jfbst_status jfbst_simulate_returns(const jfbst_sim_config* cfg, double* out, size_t capacity);
JUMPFBST_API jfbst_status jfbst_simulate_price_path(const jfbst_sim_config* cfg, double* out,
                                                    size_t capacity);
JUMPFBST_API jfbst_status jfbst_write_series(const char* path, const char* header, const double* values,
                                             size_t n);

/* datasets */
JUMPFBST_API jfbst_status jfbst_dataset_load(const char* path, jfbst_data_kind kind, jfbst_dataset** out);
JUMPFBST_API jfbst_status jfbst_dataset_from_values(const double* values, size_t n, jfbst_data_kind kind,
                                                    jfbst_dataset** out);
JUMPFBST_API void jfbst_dataset_free(jfbst_dataset* ds);
JUMPFBST_API jfbst_status jfbst_dataset_get_info(const jfbst_dataset* ds, jfbst_dataset_info* out);
JUMPFBST_API jfbst_status jfbst_dataset_standardized(const jfbst_dataset* ds, double* out, size_t capacity);

/* evidence */
JUMPFBST_API jfbst_status jfbst_run_test(const jfbst_dataset* ds, const jfbst_hyper* hyper,
                                         const jfbst_run_options* options, jfbst_report* report,
                                         jfbst_cloud** cloud_out /* may be NULL */);
JUMPFBST_API jfbst_status jfbst_write_report(const char* path, const jfbst_report* report,
                                             const jfbst_hyper* hyper, const jfbst_dataset* ds);

/* sample clouds */
JUMPFBST_API jfbst_status jfbst_cloud_save(const jfbst_cloud* cloud, const char* path);
JUMPFBST_API jfbst_status jfbst_cloud_load(const char* path, jfbst_cloud** out);
JUMPFBST_API void jfbst_cloud_free(jfbst_cloud* cloud);
JUMPFBST_API size_t jfbst_cloud_size(const jfbst_cloud* cloud);
JUMPFBST_API jfbst_status jfbst_cloud_get_hyper(const jfbst_cloud* cloud, jfbst_hyper* out);
/* JFBST_ERR_DATA when the cloud was not computed from this dataset */
JUMPFBST_API jfbst_status jfbst_cloud_check_data(const jfbst_cloud* cloud, const jfbst_dataset* ds);
JUMPFBST_API jfbst_status jfbst_cloud_evidence(const jfbst_cloud* cloud, double log_phi0, double* ev,
                                               double* kappa0);
/* ds may be NULL when refine is 0 */
JUMPFBST_API jfbst_status jfbst_cloud_mode(const jfbst_cloud* cloud, const jfbst_dataset* ds, int refine,
                                           jfbst_reduced* out);
JUMPFBST_API jfbst_status jfbst_cloud_mean(const jfbst_cloud* cloud, jfbst_reduced* out, double* ess);

/* risk */
JUMPFBST_API jfbst_status jfbst_exceedance_prob(const jfbst_reduced* theta, double l, double* out);
JUMPFBST_API jfbst_status jfbst_posterior_create(const jfbst_cloud* cloud, jfbst_posterior** out);
JUMPFBST_API void jfbst_posterior_free(jfbst_posterior* posterior);
JUMPFBST_API jfbst_status jfbst_marginal_exceedance(const jfbst_posterior* posterior, double l, double* out);
/* out receives t_max + 1 values */
JUMPFBST_API jfbst_status jfbst_survival_curve(const jfbst_posterior* posterior, double l, size_t t_max,
                                               double* out);
JUMPFBST_API jfbst_status jfbst_expected_time(const jfbst_posterior* posterior, double l, int per_theta,
                                              double* out);
/* thresholds in original data units, strictly increasing */
JUMPFBST_API jfbst_status jfbst_write_risk_csv(const jfbst_posterior* posterior, const jfbst_dataset* ds,
                                               const double* thresholds, size_t n_thresholds, size_t horizon,
                                               int per_theta, const char* survival_path,
                                               const char* times_path);

/* density grid (y, empirical, fitted) in original units */
JUMPFBST_API jfbst_status jfbst_write_density_csv(const jfbst_dataset* ds, const jfbst_reduced* fitted,
                                                  size_t grid, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* JUMPFBST_H */
