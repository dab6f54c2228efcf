#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pfloc/heavytail.hpp"
#include "pfloc/random.hpp"

namespace pfloc {

/**
 * @brief Sample x_1..x_{NT} made of N full cycles of period T.
 *
 * Time indices are 1-based; the season of t is ((t - 1) mod T) + 1.
 */
class PeriodicSeries {
public:
    /// @throws ShapeError if empty, T = 0, or size is not a multiple of T.
    /// @throws DomainError on non-finite values.
    PeriodicSeries(std::vector<double> values, std::size_t period);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t period() const noexcept { return period_; }
    [[nodiscard]] std::size_t n_cycles() const noexcept { return values_.size() / period_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    /// x_t for 1-based t.
    [[nodiscard]] double at(std::size_t t) const { return values_.at(t - 1); }

    [[nodiscard]] static std::size_t season_of(std::size_t t, std::size_t period) noexcept {
        return (t - 1) % period + 1;
    }

    /// Wraps any integer season onto {1..T}.
    [[nodiscard]] static std::size_t wrap_season(long long season, std::size_t period) noexcept;

    [[nodiscard]] PeriodicSeries scaled(double factor) const;

private:
    std::vector<double> values_;
    std::size_t period_;
};

/**
 * @brief PARMA_T(p, q) model with symmetric alpha-stable i.p.d. innovations.
 *
 *   X_t - sum_i phi_i(t) X_{t-i} = xi_t + sum_j theta_j(t) xi_{t-j},
 *   xi_t ~ S(alpha, sigma(season(t))).
 *
 * Row v-1 of `ar` holds phi_1(v)..phi_p(v), row v-1 of `ma` holds
 * theta_1(v)..theta_q(v). Either matrix may have zero columns. Construction
 * refuses models whose periodic AR part is not causal.
 */
class PeriodicModel {
public:
    /// @throws ShapeError if row counts differ from the period or scales size.
    /// @throws ParameterError for invalid alpha or scales.
    /// @throws ModelError if the monodromy spectral radius is >= 1 - 1e-9.
    PeriodicModel(std::size_t period, Eigen::MatrixXd ar, Eigen::MatrixXd ma, double alpha,
                  std::vector<double> season_scales);

    [[nodiscard]] static PeriodicModel par(const Eigen::MatrixXd& phi, const StableParams& innov);
    [[nodiscard]] static PeriodicModel pma(const Eigen::MatrixXd& theta, const StableParams& innov);
    [[nodiscard]] static PeriodicModel noise(std::vector<double> season_scales, double alpha);

    [[nodiscard]] std::size_t period() const noexcept { return period_; }
    [[nodiscard]] std::size_t ar_order() const noexcept { return static_cast<std::size_t>(ar_.cols()); }
    [[nodiscard]] std::size_t ma_order() const noexcept { return static_cast<std::size_t>(ma_.cols()); }
    [[nodiscard]] const Eigen::MatrixXd& ar() const noexcept { return ar_; }
    [[nodiscard]] const Eigen::MatrixXd& ma() const noexcept { return ma_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] const std::vector<double>& season_scales() const noexcept { return scales_; }

    /// phi_i(v) for 1-based season v and lag i; zero beyond the stored order.
    [[nodiscard]] double phi(std::size_t v, std::size_t i) const;
    [[nodiscard]] double theta(std::size_t v, std::size_t j) const;

    /// Spectral radius of A_T ... A_1, the product of per-season companion matrices.
    [[nodiscard]] double monodromy_spectral_radius() const;

    /// Default burn-in in whole cycles: ceil((50 T + 10 (p + q)) / T).
    [[nodiscard]] std::size_t default_burn_in_cycles() const noexcept;

private:
    std::size_t period_;
    Eigen::MatrixXd ar_;
    Eigen::MatrixXd ma_;
    double alpha_;
    std::vector<double> scales_;
};

/// Spectral radius of the periodic AR monodromy matrix for rows phi(v).
[[nodiscard]] double monodromy_spectral_radius(const Eigen::MatrixXd& ar);

/// Draws the innovation of 0-based season index `season` (the default draws S(alpha, sigma(v))).
using InnovationSampler = std::function<double(std::size_t season, RandomStream& rng)>;

struct SimulationOptions {
    /// Whole cycles discarded before output; model default when empty.
    std::optional<std::size_t> burn_in_cycles;
    /// Replaces the stable innovation law when set.
    InnovationSampler sampler;
};

/// Trajectory together with the innovations that produced it (aligned 1:1).
struct SimulatedPath {
    PeriodicSeries series;
    std::vector<double> innovations;
};

/// i.p.d. sequence with entries at season v drawn from S(alpha, scales[v-1]).
[[nodiscard]] PeriodicSeries gen_ipd_stable(std::size_t period, std::span<const double> scales,
                                            double alpha, std::size_t n_cycles, RandomStream& rng);

[[nodiscard]] SimulatedPath simulate_parma(const PeriodicModel& model, std::size_t n_cycles,
                                           RandomStream& rng, const SimulationOptions& options = {});

/// PARMA trajectory of N cycles after burn-in; states before burn-in start at 0.
[[nodiscard]] PeriodicSeries gen_parma(const PeriodicModel& model, std::size_t n_cycles,
                                       RandomStream& rng,
                                       std::optional<std::size_t> burn_in_cycles = std::nullopt);

struct SeasonalOrders {
    std::vector<std::size_t> ar;  ///< p(v), v = 1..T
    std::vector<std::size_t> ma;  ///< q(v)
    std::size_t p = 0;
    std::size_t q = 0;
};

/// p(v) = largest i with phi_i(v) != 0 (0 if none); likewise q(v).
[[nodiscard]] SeasonalOrders local_orders(const PeriodicModel& model);

}  // namespace pfloc
