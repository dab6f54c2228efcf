#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfloc/flocmeasures.hpp"
#include "pfloc/heavytail.hpp"
#include "pfloc/procgen.hpp"

namespace pfloc {

/**
 * @brief On-disk store for Monte Carlo null samples.
 *
 * Entries are JSON files named by a hash of the key; the full key is stored
 * inside and checked on load, so a hash collision reads as a miss.
 */
class CalibrationCache {
public:
    explicit CalibrationCache(std::filesystem::path dir);

    /// Cache rooted at $PFLOC_CACHE_DIR, or nullopt when the variable is unset or empty.
    [[nodiscard]] static std::optional<CalibrationCache> from_environment();

    [[nodiscard]] const std::filesystem::path& directory() const noexcept { return dir_; }

    [[nodiscard]] std::optional<std::vector<std::vector<double>>> load(const std::string& key) const;
    /// Best effort; I/O failures leave the cache unchanged.
    void store(const std::string& key, const std::vector<std::vector<double>>& data) const;

private:
    [[nodiscard]] std::filesystem::path path_for(const std::string& key) const;
    std::filesystem::path dir_;
};

// ---------------------------------------------------------------------------
// Portmanteau test
// ---------------------------------------------------------------------------

/// kappa_v = N * sum_{h in H+-} eta_v(h)^2 with H+- = {-h_max..h_max} \ {0}.
[[nodiscard]] double kappa_statistic(const FlocEstimator& est, long long v, std::size_t h_max);
[[nodiscard]] std::vector<double> kappa_statistics(const PeriodicSeries& series,
                                                   const FlocParams& fp, std::size_t h_max);

/// Null distribution of kappa_1 from m i.i.d. S(alpha, 1) sequences of length nt.
struct PortmanteauCalibration {
    double alpha = 2.0;
    std::size_t nt = 0;
    std::size_t period = 1;
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::size_t h_max = 1;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::vector<double> sorted_kappa;

    /// Q_{1 - level/T}, the empirical quantile at the Bonferroni subtest level.
    [[nodiscard]] double critical_value(double level) const;
    [[nodiscard]] std::string cache_key() const;
};

[[nodiscard]] PortmanteauCalibration calibrate_portmanteau(double alpha, std::size_t nt,
                                                           std::size_t period,
                                                           const FlocParams& fp,
                                                           std::size_t h_max, std::size_t m,
                                                           std::uint64_t seed,
                                                           const CalibrationCache* cache = nullptr);

struct PortmanteauResult {
    std::vector<double> kappa;  ///< kappa_v, v = 1..T
    double critical_value = 0.0;
    double level = 0.05;
    double subtest_level = 0.05;  ///< level / T
    bool reject_any = false;
    std::vector<bool> reject_by_season;
    std::size_t h_max = 1;
    std::size_t m = 0;
    double alpha = 2.0;
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::size_t nt = 0;
    std::size_t period = 1;
};

/// All T subtests against one shared critical value.
/// @throws ParameterError if the calibration does not match the series shape or level is outside (0, 1).
[[nodiscard]] PortmanteauResult evaluate_portmanteau(const PeriodicSeries& series,
                                                     const PortmanteauCalibration& calibration,
                                                     double level);

/// Sequential form: stops at the first season whose kappa_v exceeds the critical value.
[[nodiscard]] bool portmanteau_rejects_early_stop(const PeriodicSeries& series,
                                                  const PortmanteauCalibration& calibration,
                                                  double level);

/**
 * @brief Monte Carlo calibrated test of H0: the series is periodic
 * fractional lower-order white noise.
 *
 * @throws ParameterError if level is outside (0, 1) or A + B >= alpha.
 * @throws InsufficientDataError if NT < 2 T h_max.
 */
[[nodiscard]] PortmanteauResult portmanteau_test(const PeriodicSeries& series, double alpha,
                                                 const FlocParams& fp, std::size_t h_max,
                                                 double level, std::size_t m, std::uint64_t seed,
                                                 const CalibrationCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Order identification
// ---------------------------------------------------------------------------

enum class OrderFamily { par, pma };

struct OrderResult {
    OrderFamily family = OrderFamily::par;
    std::vector<std::size_t> seasonal;  ///< p(v) or q(v), v = 1..T
    std::size_t global = 0;
    NullBands bands;
    std::vector<double> values;  ///< measure at (v, lag), row-major like SeasonalLagTable
    std::vector<char> flags;     ///< 1 where the value fell outside its band
    std::vector<std::pair<std::size_t, long long>> singular;  ///< (v, h) treated as inside
    std::vector<std::string> warnings;

    [[nodiscard]] bool flagged(std::size_t v, long long h) const;
};

/// Null sample for a measure, served from `cache` when possible.
[[nodiscard]] NullSample cached_null_sample(Measure measure, double alpha, std::size_t nt,
                                            std::size_t period, std::span<const long long> lags,
                                            const FlocParams& fp, std::size_t m,
                                            std::uint64_t seed, const CalibrationCache* cache);

/// p(v) = largest h whose zeta_v(h) falls outside the bands (bands over H+ = {1..h_max}).
[[nodiscard]] OrderResult evaluate_par_order(const PeriodicSeries& series, const NullBands& bands);
/// q(v) = largest |h| whose eta_v(h) falls outside the bands (bands over H+-).
[[nodiscard]] OrderResult evaluate_pma_order(const PeriodicSeries& series, const NullBands& bands);

/// @throws ParameterError unless 1 + b_exp < alpha, h_max >= 1, 0 < d < 1.
[[nodiscard]] OrderResult identify_par_order(const PeriodicSeries& series, double alpha,
                                             double b_exp, std::size_t h_max, double d,
                                             std::size_t m, std::uint64_t seed,
                                             const CalibrationCache* cache = nullptr);

/// @throws ParameterError unless A + B < alpha, h_max >= 1, 0 < d < 1.
[[nodiscard]] OrderResult identify_pma_order(const PeriodicSeries& series, double alpha,
                                             const FlocParams& fp, std::size_t h_max, double d,
                                             std::size_t m, std::uint64_t seed,
                                             const CalibrationCache* cache = nullptr);

// ---------------------------------------------------------------------------
// FLOC Yule-Walker fit
// ---------------------------------------------------------------------------

struct ParFit {
    std::size_t period = 1;
    std::vector<std::size_t> orders;          ///< p(v)
    std::vector<std::vector<double>> coeffs;  ///< coeffs[v-1][i-1] = phi_i(v), i <= p(v)
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    std::vector<double> residuals;  ///< e_t for t = residual_start..NT
    std::size_t residual_start = 1;

    [[nodiscard]] std::size_t max_order() const noexcept;
    /// phi_i(v), zero for i > p(v).
    [[nodiscard]] double coefficient(std::size_t v, std::size_t i) const;
};

/**
 * Solves, for each season with p(v) >= 1, the p(v) x p(v) system
 * (Psi)_{ij} = psi_{v-j}(i-j), rhs psi_v(1..p(v)), with A = 1, and computes
 * the residuals of the fitted recursion.
 *
 * @throws FitError naming the season if a system is singular.
 */
[[nodiscard]] ParFit fit_par_yw(const PeriodicSeries& series, std::span<const std::size_t> orders,
                                const FlocParams& fp);

/// e_t = x_t - sum_{i <= p(t)} phi_i(t) x_{t-i}, for t > max_v p(v).
[[nodiscard]] std::vector<double> residuals(const PeriodicSeries& series, const ParFit& fit);

/// Residuals trimmed to start at season 1, as a series of whole cycles.
/// @throws InsufficientDataError if no full cycle remains.
[[nodiscard]] PeriodicSeries residual_series(const ParFit& fit);

}  // namespace pfloc
