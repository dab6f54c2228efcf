#include "pfloc/inference.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "pfloc/errors.hpp"
#include "pfloc/io.hpp"
#include "pfloc/parallel.hpp"
#include "pfloc/stats.hpp"

namespace pfloc {

using io::format_double;

// ---------------------------------------------------------------------------
// CalibrationCache

CalibrationCache::CalibrationCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<CalibrationCache> CalibrationCache::from_environment() {
    const char* dir = std::getenv("PFLOC_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return CalibrationCache(dir);
}

std::filesystem::path CalibrationCache::path_for(const std::string& key) const {
    char name[40];
    std::snprintf(name, sizeof name, "%016llx.json",
                  static_cast<unsigned long long>(io::fnv1a(key)));
    return dir_ / name;
}

std::optional<std::vector<std::vector<double>>> CalibrationCache::load(const std::string& key) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("key").get<std::string>() != key) return std::nullopt;
        return doc.at("data").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

void CalibrationCache::store(const std::string& key,
                             const std::vector<std::vector<double>>& data) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) return;
    const auto target = path_for(key);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << nlohmann::json{{"key", key}, {"data", data}}.dump();
        if (!out) return;
    }
    std::filesystem::rename(tmp, target, ec);
}

// ---------------------------------------------------------------------------
// Portmanteau

double kappa_statistic(const FlocEstimator& est, long long v, std::size_t h_max) {
    double sum = 0.0;
    const auto hm = static_cast<long long>(h_max);
    for (long long h = -hm; h <= hm; ++h) {
        if (h == 0) continue;
        const double eta = est.acf(v, h);
        sum += eta * eta;
    }
    return static_cast<double>(est.n_cycles()) * sum;
}

std::vector<double> kappa_statistics(const PeriodicSeries& series, const FlocParams& fp,
                                     std::size_t h_max) {
    const FlocEstimator est(series, fp);
    std::vector<double> out;
    out.reserve(series.period());
    for (std::size_t v = 1; v <= series.period(); ++v) {
        out.push_back(kappa_statistic(est, static_cast<long long>(v), h_max));
    }
    return out;
}

double PortmanteauCalibration::critical_value(double level) const {
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("significance level must lie in (0, 1)");
    return quantile_sorted(sorted_kappa, 1.0 - level / static_cast<double>(period));
}

std::string PortmanteauCalibration::cache_key() const {
    std::ostringstream key;
    key << "portmanteau|alpha=" << format_double(alpha) << "|nt=" << nt << "|T=" << period
        << "|A=" << format_double(fp.a()) << "|B=" << format_double(fp.b())
        << "|hmax=" << h_max << "|m=" << m << "|seed=" << seed;
    return key.str();
}

namespace {

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ParameterError("significance level must lie in (0, 1)");
    }
}

void check_alpha_bound(const FlocParams& fp, double alpha) {
    if (!(fp.order() < alpha)) {
        throw ParameterError("FLOC exponents must satisfy A + B < alpha");
    }
}

void check_length(std::size_t nt, std::size_t period, std::size_t h_max) {
    if (h_max < 1) throw ParameterError("h_max must be at least 1");
    if (nt < 2 * period * h_max) {
        throw InsufficientDataError("series of length " + std::to_string(nt) +
                                    " is too short for h_max = " + std::to_string(h_max) +
                                    " (need at least 2 T h_max = " +
                                    std::to_string(2 * period * h_max) + ")");
    }
}

}  // namespace

PortmanteauCalibration calibrate_portmanteau(double alpha, std::size_t nt, std::size_t period,
                                             const FlocParams& fp, std::size_t h_max,
                                             std::size_t m, std::uint64_t seed,
                                             const CalibrationCache* cache) {
    (void)StableParams(alpha, 1.0);
    check_alpha_bound(fp, alpha);
    if (period == 0 || nt % period != 0) {
        throw ParameterError("calibration length must be a multiple of the period");
    }
    check_length(nt, period, h_max);
    if (m < 100) throw ParameterError("calibration needs m >= 100 draws");

    PortmanteauCalibration calib;
    calib.alpha = alpha;
    calib.nt = nt;
    calib.period = period;
    calib.fp = fp;
    calib.h_max = h_max;
    calib.m = m;
    calib.seed = seed;

    const std::string key = calib.cache_key();
    if (cache) {
        if (auto hit = cache->load(key); hit && hit->size() == 1 && hit->front().size() == m) {
            calib.sorted_kappa = std::move(hit->front());
            return calib;
        }
    }

    const RandomStream master(seed);
    const std::vector<double> unit(period, 1.0);
    calib.sorted_kappa.assign(m, 0.0);
    parallel_for(m, [&](std::size_t i) {
        RandomStream rng = master.substream(i);
        const auto series = gen_ipd_stable(period, unit, alpha, nt / period, rng);
        calib.sorted_kappa[i] = kappa_statistic(FlocEstimator(series, fp), 1, h_max);
    });
    std::sort(calib.sorted_kappa.begin(), calib.sorted_kappa.end());

    if (cache) cache->store(key, {calib.sorted_kappa});
    return calib;
}

PortmanteauResult evaluate_portmanteau(const PeriodicSeries& series,
                                       const PortmanteauCalibration& calibration, double level) {
    check_level(level);
    if (series.period() != calibration.period || series.size() != calibration.nt) {
        throw ParameterError("calibration was built for a different period or sample length");
    }
    PortmanteauResult result;
    result.kappa = kappa_statistics(series, calibration.fp, calibration.h_max);
    result.level = level;
    result.subtest_level = level / static_cast<double>(series.period());
    result.critical_value = calibration.critical_value(level);
    result.h_max = calibration.h_max;
    result.m = calibration.m;
    result.alpha = calibration.alpha;
    result.fp = calibration.fp;
    result.nt = calibration.nt;
    result.period = calibration.period;
    for (double k : result.kappa) {
        const bool reject = k > result.critical_value;
        result.reject_by_season.push_back(reject);
        result.reject_any = result.reject_any || reject;
    }
    return result;
}

bool portmanteau_rejects_early_stop(const PeriodicSeries& series,
                                    const PortmanteauCalibration& calibration, double level) {
    const double critical = calibration.critical_value(level);
    const FlocEstimator est(series, calibration.fp);
    for (std::size_t v = 1; v <= series.period(); ++v) {
        if (kappa_statistic(est, static_cast<long long>(v), calibration.h_max) > critical) {
            return true;
        }
    }
    return false;
}

PortmanteauResult portmanteau_test(const PeriodicSeries& series, double alpha,
                                   const FlocParams& fp, std::size_t h_max, double level,
                                   std::size_t m, std::uint64_t seed,
                                   const CalibrationCache* cache) {
    check_level(level);
    check_alpha_bound(fp, alpha);
    check_length(series.size(), series.period(), h_max);
    const auto calib =
        calibrate_portmanteau(alpha, series.size(), series.period(), fp, h_max, m, seed, cache);
    return evaluate_portmanteau(series, calib, level);
}

// ---------------------------------------------------------------------------
// Order identification

bool OrderResult::flagged(std::size_t v, long long h) const {
    const auto it = std::find(bands.lags.begin(), bands.lags.end(), h);
    if (it == bands.lags.end() || v < 1 || v > seasonal.size()) {
        throw ParameterError("(v, h) outside the identification grid");
    }
    const auto k = static_cast<std::size_t>(it - bands.lags.begin());
    return flags[(v - 1) * bands.lags.size() + k] != 0;
}

NullSample cached_null_sample(Measure measure, double alpha, std::size_t nt, std::size_t period,
                              std::span<const long long> lags, const FlocParams& fp,
                              std::size_t m, std::uint64_t seed, const CalibrationCache* cache) {
    std::ostringstream key;
    key << "null|" << to_string(measure) << "|alpha=" << format_double(alpha) << "|nt=" << nt
        << "|T=" << period << "|A=" << format_double(fp.a()) << "|B=" << format_double(fp.b())
        << "|lags=";
    for (long long h : lags) key << h << ';';
    key << "|m=" << m << "|seed=" << seed;

    if (cache) {
        if (auto hit = cache->load(key.str()); hit && hit->size() == lags.size() + 1 &&
                                               hit->back().size() == 1) {
            NullSample sample;
            sample.measure = measure;
            sample.alpha = alpha;
            sample.nt = nt;
            sample.period = period;
            sample.lags.assign(lags.begin(), lags.end());
            sample.fp = fp;
            sample.m = m;
            sample.seed = seed;
            sample.dropped = static_cast<std::size_t>(hit->back().front());
            hit->pop_back();
            sample.sorted = std::move(*hit);
            return sample;
        }
    }
    auto sample = simulate_null_sample(measure, alpha, nt, period, lags, fp, m, seed);
    if (cache) {
        auto data = sample.sorted;
        data.push_back({static_cast<double>(sample.dropped)});
        cache->store(key.str(), data);
    }
    return sample;
}

namespace {

OrderResult evaluate_order(const PeriodicSeries& series, const NullBands& bands,
                           OrderFamily family) {
    const Measure expected = family == OrderFamily::par ? Measure::peflopacf : Measure::pefloacf;
    if (bands.measure != expected) throw ParameterError("bands were built for another measure");
    if (series.period() != bands.period) throw ParameterError("bands were built for another period");

    OrderResult result;
    result.family = family;
    result.bands = bands;
    const std::size_t period = series.period();
    const std::size_t n_lags = bands.lags.size();
    result.values.assign(period * n_lags, 0.0);
    result.flags.assign(period * n_lags, 0);
    result.seasonal.assign(period, 0);

    const FlocEstimator est(series, bands.fp);
    std::size_t h_max = 0;
    for (long long h : bands.lags) h_max = std::max<std::size_t>(h_max, static_cast<std::size_t>(std::abs(h)));

    for (std::size_t v = 1; v <= period; ++v) {
        const auto sv = static_cast<long long>(v);
        PacfProfile profile;
        if (family == OrderFamily::par) profile = peflopacf_profile(est, sv, h_max);

        std::size_t order = 0;
        for (std::size_t k = 0; k < n_lags; ++k) {
            const long long h = bands.lags[k];
            const std::size_t cell = (v - 1) * n_lags + k;
            double value = 0.0;
            if (family == OrderFamily::par) {
                const auto idx = static_cast<std::size_t>(h - 1);
                if (profile.singular[idx]) {
                    result.singular.emplace_back(v, h);
                    result.values[cell] = profile.values[idx];
                    continue;
                }
                value = profile.values[idx];
            } else {
                value = est.acf(sv, h);
            }
            result.values[cell] = value;
            if (bands.outside(k, value)) {
                result.flags[cell] = 1;
                order = std::max<std::size_t>(order, static_cast<std::size_t>(std::abs(h)));
            }
        }
        result.seasonal[v - 1] = order;
        result.global = std::max(result.global, order);
    }
    if (!result.singular.empty()) {
        std::string msg = "singular peFLOPACF system treated as inside the band at";
        for (const auto& [v, h] : result.singular) {
            msg += " (v = " + std::to_string(v) + ", h = " + std::to_string(h) + ")";
        }
        result.warnings.push_back(msg);
    }
    if (bands.dropped > 0) {
        result.warnings.push_back(std::to_string(bands.dropped) + " of " + std::to_string(bands.m) +
                                  " null draws dropped for singular systems");
    }
    return result;
}

void check_identify_args(std::size_t h_max, double d) {
    if (h_max < 1) throw ParameterError("h_max must be at least 1");
    if (!(d > 0.0 && d < 1.0)) throw ParameterError("confidence level must lie in (0, 1)");
}

}  // namespace

OrderResult evaluate_par_order(const PeriodicSeries& series, const NullBands& bands) {
    return evaluate_order(series, bands, OrderFamily::par);
}

OrderResult evaluate_pma_order(const PeriodicSeries& series, const NullBands& bands) {
    return evaluate_order(series, bands, OrderFamily::pma);
}

OrderResult identify_par_order(const PeriodicSeries& series, double alpha, double b_exp,
                               std::size_t h_max, double d, std::size_t m, std::uint64_t seed,
                               const CalibrationCache* cache) {
    check_identify_args(h_max, d);
    const FlocParams fp = pacf_params(b_exp, alpha);
    const auto lags = lags_positive(h_max);
    const auto sample = cached_null_sample(Measure::peflopacf, alpha, series.size(),
                                           series.period(), lags, fp, m, seed, cache);
    return evaluate_par_order(series, bands_from_sample(sample, d));
}

OrderResult identify_pma_order(const PeriodicSeries& series, double alpha, const FlocParams& fp,
                               std::size_t h_max, double d, std::size_t m, std::uint64_t seed,
                               const CalibrationCache* cache) {
    check_identify_args(h_max, d);
    check_alpha_bound(fp, alpha);
    const auto lags = lags_plus_minus(h_max);
    const auto sample = cached_null_sample(Measure::pefloacf, alpha, series.size(),
                                           series.period(), lags, fp, m, seed, cache);
    return evaluate_pma_order(series, bands_from_sample(sample, d));
}

// ---------------------------------------------------------------------------
// Yule-Walker fit

std::size_t ParFit::max_order() const noexcept {
    std::size_t p = 0;
    for (auto o : orders) p = std::max(p, o);
    return p;
}

double ParFit::coefficient(std::size_t v, std::size_t i) const {
    if (v < 1 || v > period) throw ParameterError("season outside fit");
    const auto& c = coeffs[v - 1];
    return (i >= 1 && i <= c.size()) ? c[i - 1] : 0.0;
}

ParFit fit_par_yw(const PeriodicSeries& series, std::span<const std::size_t> orders,
                  const FlocParams& fp) {
    if (fp.a() != 1.0) throw ParameterError("Yule-Walker fit requires A = 1");
    if (orders.size() != series.period()) {
        throw ShapeError("one seasonal order per season required");
    }
    ParFit fit;
    fit.period = series.period();
    fit.orders.assign(orders.begin(), orders.end());
    fit.fp = fp;
    fit.coeffs.assign(fit.period, {});

    const FlocEstimator est(series, fp);
    for (std::size_t v = 1; v <= fit.period; ++v) {
        const std::size_t p = orders[v - 1];
        if (p == 0) continue;
        const auto n = static_cast<Eigen::Index>(p);
        Eigen::MatrixXd psi(n, n);
        Eigen::VectorXd rhs(n);
        const auto sv = static_cast<long long>(v);
        try {
            for (long long i = 1; i <= static_cast<long long>(p); ++i) {
                for (long long j = 1; j <= static_cast<long long>(p); ++j) {
                    psi(i - 1, j - 1) = est.acvf(sv - j, i - j);
                }
                rhs(i - 1) = est.acvf(sv, i);
            }
            const Eigen::VectorXd phi = solve_checked(psi, rhs);
            fit.coeffs[v - 1].assign(phi.data(), phi.data() + phi.size());
        } catch (const Error& e) {
            throw FitError("Yule-Walker system for season " + std::to_string(v) +
                               " cannot be solved: " + e.what(),
                           static_cast<int>(v));
        }
    }
    fit.residual_start = fit.max_order() + 1;
    fit.residuals = residuals(series, fit);
    return fit;
}

std::vector<double> residuals(const PeriodicSeries& series, const ParFit& fit) {
    if (fit.period != series.period()) throw ShapeError("fit period does not match the series");
    const std::size_t start = fit.max_order() + 1;
    std::vector<double> out;
    if (start > series.size()) return out;
    out.reserve(series.size() - start + 1);
    for (std::size_t t = start; t <= series.size(); ++t) {
        const std::size_t v = PeriodicSeries::season_of(t, series.period());
        double e = series.at(t);
        const auto& c = fit.coeffs[v - 1];
        for (std::size_t i = 1; i <= c.size(); ++i) e -= c[i - 1] * series.at(t - i);
        out.push_back(e);
    }
    return out;
}

PeriodicSeries residual_series(const ParFit& fit) {
    const std::size_t period = fit.period;
    const std::size_t skipped = fit.residual_start - 1;
    const std::size_t drop_cycles = (skipped + period - 1) / period;
    const std::size_t first_t = drop_cycles * period + 1;
    const std::size_t offset = first_t - fit.residual_start;
    if (offset >= fit.residuals.size()) {
        throw InsufficientDataError("no complete cycle of residuals");
    }
    std::vector<double> values(fit.residuals.begin() + static_cast<std::ptrdiff_t>(offset),
                               fit.residuals.end());
    values.resize(values.size() - values.size() % period);
    if (values.empty()) throw InsufficientDataError("no complete cycle of residuals");
    return {std::move(values), period};
}

}  // namespace pfloc
