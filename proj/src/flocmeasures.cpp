#include "pfloc/flocmeasures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfloc/errors.hpp"
#include "pfloc/parallel.hpp"
#include "pfloc/stats.hpp"

namespace pfloc {

namespace {

long long floor_div(long long a, long long b) {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

long long ceil_div(long long a, long long b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

std::string where(long long v, long long h) {
    return "(v = " + std::to_string(v) + ", h = " + std::to_string(h) + ")";
}

void check_season(const PeriodicSeries& series, long long v) {
    if (v < 1 || v > static_cast<long long>(series.period())) {
        throw ParameterError("season " + std::to_string(v) + " outside 1.." +
                             std::to_string(series.period()));
    }
}

void check_pacf_params(const FlocParams& fp) {
    if (fp.a() != 1.0) {
        throw ParameterError("partial measures require A = 1 (got A = " + std::to_string(fp.a()) +
                             ")");
    }
}

struct LinearSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

LinearSystem pacf_system(const FlocEstimator& est, long long v, std::size_t h, PacfBasis basis) {
    const auto n = static_cast<Eigen::Index>(h);
    LinearSystem sys{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
    auto entry = [&](long long season, long long lag) {
        return basis == PacfBasis::acf ? est.acf(season, lag) : est.acvf(season, lag);
    };
    for (long long i = 1; i <= static_cast<long long>(h); ++i) {
        for (long long j = 1; j <= static_cast<long long>(h); ++j) {
            sys.matrix(i - 1, j - 1) = entry(v - j, i - j);
        }
        sys.rhs(i - 1) = entry(v, i);
    }
    return sys;
}

double single_pacf(const PeriodicSeries& series, long long v, long long h, const FlocParams& fp,
                   PacfBasis basis) {
    check_pacf_params(fp);
    check_season(series, v);
    if (h < 1) throw ParameterError("partial measures are defined for h >= 1");
    const FlocEstimator est(series, fp);
    const auto sys = pacf_system(est, v, static_cast<std::size_t>(h), basis);
    try {
        const Eigen::VectorXd phi = solve_checked(sys.matrix, sys.rhs);
        return phi(phi.size() - 1);
    } catch (const SingularSystemError& e) {
        throw SingularSystemError(std::string(e.what()) + " at " + where(v, h));
    }
}

}  // namespace

std::string_view to_string(Measure m) noexcept {
    switch (m) {
        case Measure::pefloacvf: return "pefloacvf";
        case Measure::pefloacf: return "pefloacf";
        case Measure::peflopacf: return "peflopacf";
    }
    return "unknown";
}

Measure parse_measure(std::string_view name) {
    if (name == "pefloacvf") return Measure::pefloacvf;
    if (name == "pefloacf") return Measure::pefloacf;
    if (name == "peflopacf") return Measure::peflopacf;
    throw ParameterError("unknown measure '" + std::string(name) + "'");
}

FlocEstimator::FlocEstimator(const PeriodicSeries& series, const FlocParams& fp)
    : period_(series.period()), n_cycles_(series.n_cycles()), fp_(fp) {
    const auto x = series.values();
    pow_a_.resize(x.size());
    pow_b_.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        pow_a_[i] = detail::spow(x[i], fp.a());
        pow_b_[i] = fp.b() == fp.a() ? pow_a_[i] : detail::spow(x[i], fp.b());
    }
    lag0_.resize(period_);
    for (std::size_t v = 1; v <= period_; ++v) {
        lag0_[v - 1] = acvf(static_cast<long long>(v), 0);
    }
}

double FlocEstimator::acvf(long long v, long long h) const {
    const auto period = static_cast<long long>(period_);
    const auto length = static_cast<long long>(pow_a_.size());
    v = static_cast<long long>(PeriodicSeries::wrap_season(v, period_));
    const long long shifted = v - h;

    const long long lb = std::max(ceil_div(1 - v, period), ceil_div(1 - shifted, period));
    const long long rb = std::min(floor_div(length - v, period), floor_div(length - shifted, period));
    if (lb > rb) {
        throw InsufficientDataError("no complete lag pair for " + where(v, h) + " in a sample of " +
                                    std::to_string(length));
    }

    double sum = 0.0;
    for (long long n = lb; n <= rb; ++n) {
        const long long t = n * period + v;
        sum += pow_a_[static_cast<std::size_t>(t - 1)] * pow_b_[static_cast<std::size_t>(t - h - 1)];
    }
    return sum / static_cast<double>(n_cycles_);
}

double FlocEstimator::flom(long long v) const {
    return lag0_[PeriodicSeries::wrap_season(v, period_) - 1];
}

double FlocEstimator::acf(long long v, long long h) const {
    const double own = flom(v);
    const double other = flom(v - h);
    if (!(own > 0.0) || !(other > 0.0)) {
        throw DegenerateDataError("zero FLOM normalizer for " + where(v, h));
    }
    if (h == 0) return 1.0;
    const double a = fp_.a() / fp_.order();
    const double b = fp_.b() / fp_.order();
    return acvf(v, h) / (std::pow(own, a) * std::pow(other, b));
}

double sample_pefloacvf(const PeriodicSeries& series, long long v, long long h,
                        const FlocParams& fp) {
    check_season(series, v);
    return FlocEstimator(series, fp).acvf(v, h);
}

double sample_pefloacf(const PeriodicSeries& series, long long v, long long h,
                       const FlocParams& fp) {
    check_season(series, v);
    return FlocEstimator(series, fp).acf(v, h);
}

FlocParams pacf_params(double b_exp, double moment_bound) { return {1.0, b_exp, moment_bound}; }

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
    constexpr double min_rcond = 1e-12;
    if (!m.allFinite() || !rhs.allFinite()) throw SingularSystemError("non-finite linear system");
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond >= min_rcond)) {
        throw SingularSystemError("ill-conditioned system (reciprocal condition " +
                                  std::to_string(rcond) + ")");
    }
    Eigen::VectorXd x = lu.solve(rhs);
    if (!x.allFinite()) throw SingularSystemError("singular linear system");
    return x;
}

double sample_peflopacf(const PeriodicSeries& series, long long v, long long h,
                        const FlocParams& fp) {
    return single_pacf(series, v, h, fp, PacfBasis::acf);
}

double sample_peflopacf_acvf_variant(const PeriodicSeries& series, long long v, long long h,
                                     const FlocParams& fp) {
    return single_pacf(series, v, h, fp, PacfBasis::acvf);
}

PacfProfile peflopacf_profile(const FlocEstimator& est, long long v, std::size_t h_max,
                              PacfBasis basis) {
    check_pacf_params(est.params());
    PacfProfile profile;
    profile.values.assign(h_max, std::numeric_limits<double>::quiet_NaN());
    profile.singular.assign(h_max, false);
    if (h_max == 0) return profile;

    const auto full = pacf_system(est, v, h_max, basis);
    for (std::size_t h = 1; h <= h_max; ++h) {
        const auto n = static_cast<Eigen::Index>(h);
        try {
            const Eigen::VectorXd phi =
                solve_checked(full.matrix.topLeftCorner(n, n), full.rhs.head(n));
            profile.values[h - 1] = phi(n - 1);
        } catch (const SingularSystemError&) {
            profile.singular[h - 1] = true;
        }
    }
    return profile;
}

double SeasonalLagTable::at(std::size_t v, long long h) const {
    if (v < 1 || v > period) throw ParameterError("season outside table");
    return values[(v - 1) * lags.size() + lag_index(h)];
}

std::size_t SeasonalLagTable::lag_index(long long h) const {
    const auto it = std::find(lags.begin(), lags.end(), h);
    if (it == lags.end()) throw ParameterError("lag " + std::to_string(h) + " not in table");
    return static_cast<std::size_t>(it - lags.begin());
}

std::vector<long long> lags_plus_minus(std::size_t h_max) {
    std::vector<long long> out;
    const auto hm = static_cast<long long>(h_max);
    for (long long h = -hm; h <= hm; ++h) {
        if (h != 0) out.push_back(h);
    }
    return out;
}

std::vector<long long> lags_positive(std::size_t h_max) {
    std::vector<long long> out;
    for (long long h = 1; h <= static_cast<long long>(h_max); ++h) out.push_back(h);
    return out;
}

namespace {

std::size_t max_positive_lag(std::span<const long long> lags) {
    long long hm = 0;
    for (long long h : lags) {
        if (h < 1) throw ParameterError("partial measures are defined for h >= 1");
        hm = std::max(hm, h);
    }
    return static_cast<std::size_t>(hm);
}

/// Measure at one season for every lag; returns false if a partial system is singular.
bool season_row(const FlocEstimator& est, Measure measure, long long v,
                std::span<const long long> lags, std::span<double> out, long long* bad_lag) {
    switch (measure) {
        case Measure::pefloacvf:
            for (std::size_t k = 0; k < lags.size(); ++k) out[k] = est.acvf(v, lags[k]);
            return true;
        case Measure::pefloacf:
            for (std::size_t k = 0; k < lags.size(); ++k) out[k] = est.acf(v, lags[k]);
            return true;
        case Measure::peflopacf: {
            const auto profile = peflopacf_profile(est, v, max_positive_lag(lags));
            for (std::size_t k = 0; k < lags.size(); ++k) {
                const auto idx = static_cast<std::size_t>(lags[k] - 1);
                if (profile.singular[idx]) {
                    if (bad_lag) *bad_lag = lags[k];
                    return false;
                }
                out[k] = profile.values[idx];
            }
            return true;
        }
    }
    return false;
}

}  // namespace

SeasonalLagTable compute_table(const PeriodicSeries& series, Measure measure,
                               std::span<const long long> lags, const FlocParams& fp) {
    if (measure == Measure::peflopacf) check_pacf_params(fp);
    SeasonalLagTable table;
    table.measure = measure;
    table.period = series.period();
    table.lags.assign(lags.begin(), lags.end());
    table.fp = fp;
    table.values.assign(table.period * lags.size(), 0.0);

    const FlocEstimator est(series, fp);
    for (std::size_t v = 1; v <= table.period; ++v) {
        std::span<double> row(table.values.data() + (v - 1) * lags.size(), lags.size());
        long long bad = 0;
        if (!season_row(est, measure, static_cast<long long>(v), lags, row, &bad)) {
            throw SingularSystemError("singular peFLOPACF system at " +
                                      where(static_cast<long long>(v), bad));
        }
    }
    return table;
}

McAverage mc_average_table(const PeriodicModel& model, Measure measure,
                           std::span<const long long> lags, const FlocParams& fp,
                           std::size_t n_traj, std::size_t nt, std::uint64_t seed) {
    if (n_traj < 1) throw ParameterError("mc_average_table needs at least one trajectory");
    if (nt == 0 || nt % model.period() != 0) {
        throw ParameterError("trajectory length must be a positive multiple of the period");
    }
    const RandomStream master(seed);
    const std::size_t cells = model.period() * lags.size();

    std::vector<std::vector<double>> per_traj(n_traj);
    std::vector<char> ok(n_traj, 0);
    parallel_for(n_traj, [&](std::size_t i) {
        RandomStream rng = master.substream(i);
        const auto series = gen_parma(model, nt / model.period(), rng);
        try {
            per_traj[i] = compute_table(series, measure, lags, fp).values;
            ok[i] = 1;
        } catch (const SingularSystemError&) {
            ok[i] = 0;
        }
    });

    McAverage out;
    out.table.measure = measure;
    out.table.period = model.period();
    out.table.lags.assign(lags.begin(), lags.end());
    out.table.fp = fp;
    out.table.values.assign(cells, 0.0);

    std::vector<double> column;
    column.reserve(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) out.used += ok[i] ? 1 : 0;
    out.dropped = n_traj - out.used;
    if (out.used == 0) throw SingularSystemError("every trajectory produced a singular system");

    for (std::size_t c = 0; c < cells; ++c) {
        column.clear();
        for (std::size_t i = 0; i < n_traj; ++i) {
            if (ok[i]) column.push_back(per_traj[i][c]);
        }
        out.table.values[c] = compensated_sum(column) / static_cast<double>(out.used);
    }
    if (static_cast<double>(out.dropped) > 0.05 * static_cast<double>(n_traj)) {
        out.warnings.push_back("calibration warning: " + std::to_string(out.dropped) + " of " +
                               std::to_string(n_traj) +
                               " trajectories dropped for singular peFLOPACF systems");
    }
    return out;
}

NullSample simulate_null_sample(Measure measure, double alpha, std::size_t nt, std::size_t period,
                                std::span<const long long> lags, const FlocParams& fp,
                                std::size_t m, std::uint64_t seed) {
    if (m < 100) throw ParameterError("null calibration needs m >= 100 draws");
    if (period == 0 || nt == 0 || nt % period != 0) {
        throw ParameterError("null trajectory length must be a positive multiple of the period");
    }
    if (lags.empty()) throw ParameterError("null calibration needs at least one lag");
    if (measure == Measure::peflopacf) {
        check_pacf_params(fp);
        (void)max_positive_lag(lags);
    }
    (void)StableParams(alpha, 1.0);

    NullSample sample;
    sample.measure = measure;
    sample.alpha = alpha;
    sample.nt = nt;
    sample.period = period;
    sample.lags.assign(lags.begin(), lags.end());
    sample.fp = fp;
    sample.m = m;
    sample.seed = seed;

    const RandomStream master(seed);
    const std::vector<double> unit(period, 1.0);
    std::vector<std::vector<double>> rows(m);
    std::vector<char> ok(m, 0);
    parallel_for(m, [&](std::size_t i) {
        RandomStream rng = master.substream(i);
        const auto series = gen_ipd_stable(period, unit, alpha, nt / period, rng);
        const FlocEstimator est(series, fp);
        rows[i].resize(lags.size());
        ok[i] = season_row(est, measure, 1, lags, rows[i], nullptr) ? 1 : 0;
    });

    sample.sorted.assign(lags.size(), {});
    for (std::size_t i = 0; i < m; ++i) {
        if (!ok[i]) {
            ++sample.dropped;
            continue;
        }
        for (std::size_t k = 0; k < lags.size(); ++k) sample.sorted[k].push_back(rows[i][k]);
    }
    for (auto& s : sample.sorted) std::sort(s.begin(), s.end());
    return sample;
}

NullBands bands_from_sample(const NullSample& sample, double d) {
    if (!(d > 0.0 && d < 1.0)) throw ParameterError("confidence level must lie in (0, 1)");
    NullBands bands;
    bands.measure = sample.measure;
    bands.lags = sample.lags;
    bands.level = d;
    bands.m = sample.m;
    bands.alpha = sample.alpha;
    bands.nt = sample.nt;
    bands.period = sample.period;
    bands.fp = sample.fp;
    bands.dropped = sample.dropped;
    for (const auto& s : sample.sorted) {
        if (s.empty()) throw SingularSystemError("no usable null draws for the confidence bands");
        bands.lower.push_back(quantile_sorted(s, (1.0 - d) / 2.0));
        bands.upper.push_back(quantile_sorted(s, 1.0 - (1.0 - d) / 2.0));
    }
    return bands;
}

NullBands null_bands(Measure measure, double alpha, std::size_t nt, std::size_t period,
                     std::span<const long long> lags, const FlocParams& fp, double d,
                     std::size_t m, std::uint64_t seed) {
    if (!(d > 0.0 && d < 1.0)) throw ParameterError("confidence level must lie in (0, 1)");
    return bands_from_sample(simulate_null_sample(measure, alpha, nt, period, lags, fp, m, seed),
                             d);
}

}  // namespace pfloc
