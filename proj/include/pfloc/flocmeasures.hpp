#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfloc/heavytail.hpp"
#include "pfloc/procgen.hpp"

namespace pfloc {

enum class Measure { pefloacvf, pefloacf, peflopacf };

[[nodiscard]] std::string_view to_string(Measure m) noexcept;
/// @throws ParameterError for unknown names.
[[nodiscard]] Measure parse_measure(std::string_view name);

/**
 * @brief Sample periodic FLOC measures of one series.
 *
 * Signed powers x^<A>, x^<B> and the lag-0 values psi_v(0) are computed once
 * at construction, so evaluating many (v, h) pairs costs one pass over the
 * relevant cycles each. Seasons are 1-based and any integer season is
 * wrapped onto {1..T}; lags may be negative.
 *
 *   psi_v(h) = (1/N) sum_{n=lb}^{rb} x_{nT+v}^<A> x_{nT+v-h}^<B>
 *
 * with lb, rb the first and last cycles for which both indices fall inside
 * 1..NT. The divisor is N even when fewer than N terms are summed.
 */
class FlocEstimator {
public:
    FlocEstimator(const PeriodicSeries& series, const FlocParams& fp);

    [[nodiscard]] const FlocParams& params() const noexcept { return fp_; }
    [[nodiscard]] std::size_t period() const noexcept { return period_; }
    [[nodiscard]] std::size_t n_cycles() const noexcept { return n_cycles_; }

    /// Sample peFLOACVF psi_v(h).
    /// @throws InsufficientDataError when no cycle has both indices in range.
    [[nodiscard]] double acvf(long long v, long long h) const;

    /// Sample peFLOACF eta_v(h) = psi_v(h) / (psi_v(0)^(A/(A+B)) psi_{v-h}(0)^(B/(A+B))).
    /// eta_v(0) is exactly 1.
    /// @throws DegenerateDataError when a lag-0 normalizer is zero.
    [[nodiscard]] double acf(long long v, long long h) const;

    /// psi_v(0), the per-season FLOM.
    [[nodiscard]] double flom(long long v) const;

private:
    std::size_t period_;
    std::size_t n_cycles_;
    FlocParams fp_;
    std::vector<double> pow_a_;
    std::vector<double> pow_b_;
    std::vector<double> lag0_;
};

[[nodiscard]] double sample_pefloacvf(const PeriodicSeries& series, long long v, long long h,
                                      const FlocParams& fp);
[[nodiscard]] double sample_pefloacf(const PeriodicSeries& series, long long v, long long h,
                                     const FlocParams& fp);

/// FLOC exponents for partial measures: A fixed to 1, 1 + B < moment_bound.
[[nodiscard]] FlocParams pacf_params(double b_exp, double moment_bound);

/**
 * Sample peFLOPACF zeta_v(h): last component of the solution of
 * H phi = [eta_v(1) .. eta_v(h)]', (H)_{ij} = eta_{v-j}(i-j), computed
 * with A = 1.
 *
 * @throws ParameterError if fp.a() != 1 or h < 1.
 * @throws SingularSystemError if H has condition number above 1e12.
 */
[[nodiscard]] double sample_peflopacf(const PeriodicSeries& series, long long v, long long h,
                                      const FlocParams& fp);

/// Same construction with raw psi entries: (Psi)_{ij} = psi_{v-j}(i-j), rhs psi_v(1..h).
[[nodiscard]] double sample_peflopacf_acvf_variant(const PeriodicSeries& series, long long v,
                                                   long long h, const FlocParams& fp);

/// zeta_v(1..h_max) from one estimator; singular orders are flagged, not thrown.
struct PacfProfile {
    std::vector<double> values;  ///< index h-1; NaN where singular
    std::vector<bool> singular;
};

enum class PacfBasis { acf, acvf };

[[nodiscard]] PacfProfile peflopacf_profile(const FlocEstimator& est, long long v,
                                            std::size_t h_max, PacfBasis basis = PacfBasis::acf);

/// Solves `m x = rhs` by partial-pivot LU, refusing condition numbers above 1e12.
/// @throws SingularSystemError
[[nodiscard]] Eigen::VectorXd solve_checked(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

/**
 * @brief Values of a periodic measure indexed by season v in 1..T and lag h.
 */
struct SeasonalLagTable {
    Measure measure = Measure::pefloacf;
    std::size_t period = 1;
    std::vector<long long> lags;
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::vector<double> values;  ///< row-major: (v-1) * lags.size() + lag index

    [[nodiscard]] double at(std::size_t v, long long h) const;
    [[nodiscard]] std::size_t lag_index(long long h) const;
};

/// Symmetric lag set {-h_max..h_max} \ {0}.
[[nodiscard]] std::vector<long long> lags_plus_minus(std::size_t h_max);
/// {1..h_max}.
[[nodiscard]] std::vector<long long> lags_positive(std::size_t h_max);

/// Measure evaluated at every season and lag of one series.
/// @throws SingularSystemError naming (v, h) for partial measures.
[[nodiscard]] SeasonalLagTable compute_table(const PeriodicSeries& series, Measure measure,
                                             std::span<const long long> lags,
                                             const FlocParams& fp);

struct McAverage {
    SeasonalLagTable table;
    std::size_t used = 0;
    std::size_t dropped = 0;
    std::vector<std::string> warnings;
};

/**
 * Element-wise mean of the sample measure over `n_traj` trajectories of
 * length `nt` simulated from `model`. Trajectory i draws from substream i of
 * `seed`. Trajectories with a singular partial system are dropped; more than
 * 5% drops adds a warning.
 */
[[nodiscard]] McAverage mc_average_table(const PeriodicModel& model, Measure measure,
                                         std::span<const long long> lags, const FlocParams& fp,
                                         std::size_t n_traj, std::size_t nt, std::uint64_t seed);

/// Monte Carlo null distribution of a measure at v = 1 on i.i.d. S(alpha, 1) data.
struct NullSample {
    Measure measure = Measure::pefloacf;
    double alpha = 2.0;
    std::size_t nt = 0;
    std::size_t period = 1;
    std::vector<long long> lags;
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> sorted;  ///< per lag, ascending
    std::size_t dropped = 0;
};

/// Per-lag two-sided empirical intervals (Q_{(1-d)/2}(h), Q_{1-(1-d)/2}(h)).
struct NullBands {
    Measure measure = Measure::pefloacf;
    std::vector<long long> lags;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.0;
    std::size_t m = 0;
    double alpha = 2.0;
    std::size_t nt = 0;
    std::size_t period = 1;
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::size_t dropped = 0;

    /// True when value is not strictly inside the interval of lag index i.
    [[nodiscard]] bool outside(std::size_t lag_index, double value) const {
        return !(value > lower[lag_index] && value < upper[lag_index]);
    }
};

/// @throws ParameterError if m < 100 or nt is not a multiple of the period.
[[nodiscard]] NullSample simulate_null_sample(Measure measure, double alpha, std::size_t nt,
                                              std::size_t period, std::span<const long long> lags,
                                              const FlocParams& fp, std::size_t m,
                                              std::uint64_t seed);

/// @throws ParameterError unless 0 < d < 1.
[[nodiscard]] NullBands bands_from_sample(const NullSample& sample, double d);

[[nodiscard]] NullBands null_bands(Measure measure, double alpha, std::size_t nt,
                                   std::size_t period, std::span<const long long> lags,
                                   const FlocParams& fp, double d, std::size_t m,
                                   std::uint64_t seed);

}  // namespace pfloc
