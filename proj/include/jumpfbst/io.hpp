#pragma once

#include "jumpfbst/fbst.hpp"
#include "jumpfbst/model.hpp"
#include "jumpfbst/risk.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jumpfbst {

enum class DataKind { Returns, Prices, Maxima };

DataKind parse_data_kind(std::string_view name);
std::string_view to_string(DataKind kind);

struct Standardized {
    std::vector<double> values;
    double mean = 0.0;
    double sd = 1.0;  // sample sd, n - 1 denominator
};

Standardized standardize(std::span<const double> values);

// One analysed series. For prices, `values` holds the derived returns and
// `raw` the prices as read.
struct Dataset {
    DataKind kind = DataKind::Returns;
    std::vector<double> raw;
    std::vector<double> values;
    double mean = 0.0;
    double sd = 1.0;
    std::vector<double> standardized;

    static Dataset from_values(std::vector<double> raw, DataKind kind);

    double to_standard(double original) const { return (original - mean) / sd; }
    double to_original(double standard) const { return mean + sd * standard; }
};

// Single numeric column, one value per row; a non-numeric first row is taken
// as a header. Parse failures report the 1-based line number.
std::vector<double> parse_series(std::string_view text);
std::vector<double> read_series_file(const std::filesystem::path& path);
Dataset read_series(const std::filesystem::path& path, DataKind kind);

// Shortest rendering that round-trips exactly; used by every text output.
std::string format_double(double x);

void write_series(const std::filesystem::path& path, std::string_view header,
                  std::span<const double> values);

// ---- sample cloud binary format ------------------------------------------
//
// All fields little-endian.
//   magic        8 bytes  "FBSTCLD1"
//   count        u64
//   seed         u64
//   data_digest  u64
//   variant      u64      0 fixed jump size, 1 random jump size
//   beta sigma0 mu0 c k_max fixed_k   6 x f64 (k_max is NaN when absent)
//   count records of 6 x f64: lambda, p, mu, sigma2, k, log_value
inline constexpr std::string_view kCloudMagic = "FBSTCLD1";

void write_cloud(const std::filesystem::path& path, const SampleCloud& cloud);
SampleCloud read_cloud(const std::filesystem::path& path);

// ---- reports ---------------------------------------------------------------

std::string report_to_json(const EvidenceReport& report, const Hyperparams& hyper,
                           const Dataset& data);
void write_report(const std::filesystem::path& path, const EvidenceReport& report,
                  const Hyperparams& hyper, const Dataset& data);

// Column t followed by one survival column per threshold (original-unit header).
std::string survival_csv(const PosteriorSample& posterior, const RiskQuery& query);
// threshold,expected_time. per_theta switches to the posterior mean of 1/P(S >= l | theta).
std::string expected_times_csv(const PosteriorSample& posterior, const RiskQuery& query,
                               bool per_theta = false);

// Gaussian kernel density with Silverman's rule-of-thumb bandwidth.
struct KernelDensity {
    std::vector<double> sample;
    double bandwidth = 1.0;

    explicit KernelDensity(std::vector<double> sample);
    double operator()(double y) const;
};

double silverman_bandwidth(std::span<const double> sample);

// Grid of (y, empirical density, density of the fitted model) in original units.
std::string density_csv(const Dataset& data, const ReducedParams& fitted, std::size_t grid);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace jumpfbst
