#include "jumpfbst/io.hpp"

#include "jumpfbst/error.hpp"
#include "jumpfbst/simulate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace jumpfbst {

namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    const auto b = std::find_if(s.begin(), s.end(), not_space);
    const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
    return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view{};
}

bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    os.write(b.data(), 8);
}

void put_f64(std::ostream& os, double x) {
    std::uint64_t v = 0;
    std::memcpy(&v, &x, sizeof v);
    put_u64(os, v);
}

std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    if (!is) throw DataError("cloud file is truncated");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double x = 0.0;
    std::memcpy(&x, &v, sizeof x);
    return x;
}

nlohmann::ordered_json reduced_json(const ReducedParams& r) {
    return {{"eta", r.eta}, {"mu", r.mu}, {"sigma", r.sigma}, {"k", r.k}};
}

ReducedParams to_original_units(const ReducedParams& r, const Dataset& data) {
    return {r.eta, data.to_original(r.mu), data.sd * r.sigma, data.sd * r.k};
}

double quantile_sorted(std::span<const double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DataKind parse_data_kind(std::string_view name) {
    if (name == "returns") return DataKind::Returns;
    if (name == "prices") return DataKind::Prices;
    if (name == "maxima") return DataKind::Maxima;
    throw ArgumentError("unknown data kind '" + std::string(name) + "' (expected returns|prices|maxima)");
}

std::string_view to_string(DataKind kind) {
    switch (kind) {
        case DataKind::Returns: return "returns";
        case DataKind::Prices: return "prices";
        case DataKind::Maxima: return "maxima";
    }
    return "returns";
}

Standardized standardize(std::span<const double> values) {
    if (values.size() < 2) throw DataError("standardization needs at least two values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double x : values) mean += x;
    mean /= n;
    double ss = 0.0;
    for (const double x : values) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0) || std::all_of(values.begin(), values.end(), [&](double x) { return x == values[0]; })) {
        throw DataError("constant series cannot be standardized");
    }
    Standardized out;
    out.mean = mean;
    out.sd = sd;
    out.values.reserve(values.size());
    for (const double x : values) out.values.push_back((x - mean) / sd);
    return out;
}

Dataset Dataset::from_values(std::vector<double> raw, DataKind kind) {
    Dataset d;
    d.kind = kind;
    d.raw = std::move(raw);
    d.values = kind == DataKind::Prices ? returns_from_prices(d.raw) : d.raw;
    Standardized s = standardize(d.values);
    d.mean = s.mean;
    d.sd = s.sd;
    d.standardized = std::move(s.values);
    return d;
}

std::vector<double> parse_series(std::string_view text) {
    std::vector<double> out;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        const std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        double x = 0.0;
        if (parse_number(line, x)) {
            out.push_back(x);
        } else if (!seen_content) {
            // header row
        } else {
            throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(line) +
                            "' as a number");
        }
        seen_content = true;
    }
    if (out.empty()) throw DataError("series is empty");
    return out;
}

std::vector<double> read_series_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_series(buf.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

Dataset read_series(const std::filesystem::path& path, DataKind kind) {
    return Dataset::from_values(read_series_file(path), kind);
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    // shortest representation that parses back to the same double
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void write_series(const std::filesystem::path& path, std::string_view header,
                  std::span<const double> values) {
    std::string text;
    if (!header.empty()) {
        text += header;
        text += '\n';
    }
    for (const double x : values) {
        text += format_double(x);
        text += '\n';
    }
    write_text(path, text);
}

void write_cloud(const std::filesystem::path& path, const SampleCloud& cloud) {
    cloud.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.write(kCloudMagic.data(), static_cast<std::streamsize>(kCloudMagic.size()));
    put_u64(out, cloud.size());
    put_u64(out, cloud.seed);
    put_u64(out, cloud.data_digest);
    const Hyperparams& h = cloud.hyper;
    put_u64(out, h.random_k() ? 1 : 0);
    put_f64(out, h.beta);
    put_f64(out, h.sigma0);
    put_f64(out, h.mu0);
    put_f64(out, h.c);
    put_f64(out, h.k_max ? *h.k_max : std::numeric_limits<double>::quiet_NaN());
    put_f64(out, h.fixed_k);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Params& t = cloud.points[i];
        put_f64(out, t.lambda);
        put_f64(out, t.p);
        put_f64(out, t.mu);
        put_f64(out, t.sigma2);
        put_f64(out, t.k);
        put_f64(out, cloud.log_values[i]);
    }
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

SampleCloud read_cloud(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), 8);
    if (!in || std::string_view(magic.data(), 8) != kCloudMagic) {
        throw DataError("'" + path.string() + "' is not a sample cloud file");
    }
    SampleCloud cloud;
    const std::uint64_t count = get_u64(in);
    cloud.seed = get_u64(in);
    cloud.data_digest = get_u64(in);
    const std::uint64_t variant = get_u64(in);
    if (variant > 1) throw DataError("cloud file has an unknown jump size variant");
    Hyperparams& h = cloud.hyper;
    h.variant = variant == 1 ? JumpSizeVariant::RandomJumpSize : JumpSizeVariant::FixedJumpSize;
    h.beta = get_f64(in);
    h.sigma0 = get_f64(in);
    h.mu0 = get_f64(in);
    h.c = get_f64(in);
    const double k_max = get_f64(in);
    if (!std::isnan(k_max)) h.k_max = k_max;
    h.fixed_k = get_f64(in);
    try {
        h.validate();
    } catch (const ArgumentError& e) {
        throw DataError(std::string("cloud file carries invalid hyperparameters: ") + e.what());
    }
    if (count == 0 || count > (std::uint64_t{1} << 32)) throw DataError("cloud file has an invalid point count");
    cloud.points.resize(count);
    cloud.log_values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        Params& t = cloud.points[i];
        t.lambda = get_f64(in);
        t.p = get_f64(in);
        t.mu = get_f64(in);
        t.sigma2 = get_f64(in);
        t.k = get_f64(in);
        cloud.log_values[i] = get_f64(in);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw DataError("cloud file has trailing bytes");
    return cloud;
}

std::string report_to_json(const EvidenceReport& r, const Hyperparams& hyper, const Dataset& data) {
    nlohmann::ordered_json j;
    j["ev"] = r.ev;
    j["kappa0"] = r.kappa0;
    j["log_phi0"] = r.log_phi0;
    j["n_support"] = r.n_support;
    j["n_null"] = r.n_null;
    j["seed"] = r.seed;
    j["mode"] = reduced_json(r.mode);
    j["mean"] = reduced_json(r.mean);
    j["ess"] = r.ess;
    j["diagnostics"] = {
        {"log_phi0_mc", r.log_phi0_mc},
        {"log_phi0_closed_form", r.log_phi0_closed_form},
        {"mode_log_value", r.mode_log_value},
        {"mode_refined", r.mode_refined},
        {"low_ess", r.ess < kLowEssThreshold},
    };
    nlohmann::ordered_json h;
    h["beta"] = hyper.beta;
    h["sigma0"] = hyper.sigma0;
    h["mu0"] = hyper.mu0;
    h["c"] = hyper.c;
    h["variant"] = hyper.random_k() ? "random_jump_size" : "fixed_jump_size";
    if (hyper.random_k()) {
        h["k_max"] = *hyper.k_max;
    } else {
        h["k_max"] = nullptr;
        h["jump_size"] = hyper.fixed_k;
    }
    j["hyperparameters"] = h;
    j["data"] = {
        {"kind", std::string(to_string(data.kind))},
        {"n", data.values.size()},
        {"mean", data.mean},
        {"sd", data.sd},
        {"sd_denominator", "n-1"},
        {"digest", data_digest(data.standardized)},
    };
    j["original_units"] = {
        {"mode", reduced_json(to_original_units(r.mode, data))},
        {"mean", reduced_json(to_original_units(r.mean, data))},
    };
    return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const EvidenceReport& report,
                  const Hyperparams& hyper, const Dataset& data) {
    write_text(path, report_to_json(report, hyper, data));
}

std::string survival_csv(const PosteriorSample& posterior, const RiskQuery& query) {
    query.validate();
    std::vector<std::vector<double>> curves;
    for (const double l : query.thresholds) curves.push_back(posterior.survival_curve(l, query.t_max));
    std::string out = "t";
    for (const double l : query.thresholds_original) out += "," + format_double(l);
    out += '\n';
    for (std::size_t t = 0; t <= query.t_max; ++t) {
        out += std::to_string(t);
        for (const auto& c : curves) out += "," + format_double(c[t]);
        out += '\n';
    }
    return out;
}

std::string expected_times_csv(const PosteriorSample& posterior, const RiskQuery& query, bool per_theta) {
    query.validate();
    std::string out = "threshold,expected_time\n";
    for (std::size_t i = 0; i < query.thresholds.size(); ++i) {
        const double l = query.thresholds[i];
        const double t = per_theta ? posterior.expected_time_per_theta(l) : posterior.expected_time(l);
        out += format_double(query.thresholds_original[i]) + "," + format_double(t) + "\n";
    }
    return out;
}

double silverman_bandwidth(std::span<const double> sample) {
    if (sample.size() < 2) throw DataError("bandwidth needs at least two values");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double mean = 0.0;
    for (const double x : sorted) mean += x;
    mean /= n;
    double ss = 0.0;
    for (const double x : sorted) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    if (!(spread > 0.0)) throw DataError("bandwidth undefined for a constant sample");
    return 0.9 * spread * std::pow(n, -0.2);
}

KernelDensity::KernelDensity(std::vector<double> s)
    : sample(std::move(s)), bandwidth(silverman_bandwidth(sample)) {}

double KernelDensity::operator()(double y) const {
    double sum = 0.0;
    for (const double x : sample) {
        const double u = (y - x) / bandwidth;
        sum += std::exp(-0.5 * u * u);
    }
    return sum / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
}

std::string density_csv(const Dataset& data, const ReducedParams& fitted, std::size_t grid) {
    if (grid < 2) throw ArgumentError("density grid needs at least two points");
    const KernelDensity kde(data.values);
    const auto [lo_it, hi_it] = std::minmax_element(data.values.begin(), data.values.end());
    const double lo = *lo_it - 3.0 * kde.bandwidth;
    const double hi = *hi_it + 3.0 * kde.bandwidth;
    std::string out = "# bandwidth=" + format_double(kde.bandwidth) + "\n";
    out += "y,empirical,fitted\n";
    for (std::size_t i = 0; i < grid; ++i) {
        const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double fitted_density = mixture_pdf(data.to_standard(y), fitted) / data.sd;
        out += format_double(y) + "," + format_double(kde(y)) + "," + format_double(fitted_density) + "\n";
    }
    return out;
}

}  // namespace jumpfbst
