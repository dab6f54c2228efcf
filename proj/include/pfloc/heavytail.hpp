#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pfloc/random.hpp"

namespace pfloc {

/**
 * @brief Parameters of a symmetric alpha-stable law S(alpha, sigma).
 *
 * Characteristic function exp(-sigma^alpha |s|^alpha). alpha = 2 is the
 * Gaussian with variance 2 sigma^2.
 */
class StableParams {
public:
    /// @throws ParameterError unless 0 < alpha <= 2 and sigma > 0.
    StableParams(double alpha, double sigma);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }

private:
    double alpha_;
    double sigma_;
};

/**
 * @brief Exponents (A, B) of the fractional lower-order covariance
 * E[X^<A> Y^<B>] together with the moment order they must stay below.
 */
class FlocParams {
public:
    /// @throws ParameterError unless A > 0, B > 0 and A + B < moment_bound.
    FlocParams(double a_exp, double b_exp, double moment_bound);

    /// Bound taken from a stability index: A + B < alpha.
    [[nodiscard]] static FlocParams for_alpha(double a_exp, double b_exp, double alpha);

    /// No moment restriction; for light-tailed (finite-variance) data.
    [[nodiscard]] static FlocParams unbounded(double a_exp, double b_exp);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double moment_bound() const noexcept { return bound_; }
    [[nodiscard]] double order() const noexcept { return a_ + b_; }

    friend bool operator==(const FlocParams&, const FlocParams&) = default;

private:
    double a_;
    double b_;
    double bound_;
};

/// |x|^c sgn(x); signed_power(0, c) = 0.
/// @throws DomainError for non-finite x or c <= 0.
[[nodiscard]] double signed_power(double x, double c);

/// One standardized S(alpha, 1) variate (Chambers-Mallows-Stuck).
[[nodiscard]] double draw_sym_stable(double alpha, RandomStream& rng);

/// `n` i.i.d. S(alpha, sigma) draws. Bit-reproducible for a given stream.
[[nodiscard]] std::vector<double> sample_sym_stable(const StableParams& params, std::size_t n,
                                                    RandomStream& rng);

/// Sample FLOC: mean of x_i^<A> y_i^<B>.
/// @throws ShapeError on length mismatch or empty input.
[[nodiscard]] double floc_pairs(std::span<const double> x, std::span<const double> y,
                                const FlocParams& fp);

/// Sample FLOM: mean of |x_i|^A |x_i|^B, i.e. the FLOC of x with itself.
[[nodiscard]] double flom_sample(std::span<const double> x, const FlocParams& fp);

/**
 * @brief Regression-type estimate of the stability index of a symmetric
 * stable sample.
 *
 * The sample is centred by its median and scaled by the (0.72, 0.28)
 * quantile spread, then log(-log|phi(t_k)|^2) is regressed on log t_k at
 * t_k = pi k / 25, k = 1..K, with K taken from Koutrouvelis' table for the
 * current (alpha, n). The fitted scale re-standardizes the sample and the
 * regression repeats until alpha and the scale settle.
 *
 * @return estimate clipped to (0.1, 2].
 * @throws InsufficientDataError for fewer than 50 values.
 * @throws EstimationError for constant or non-finite input.
 */
[[nodiscard]] double estimate_alpha(std::span<const double> x);

// ---------------------------------------------------------------------------

namespace detail {
/// Unchecked signed power for inner loops.
[[nodiscard]] inline double spow(double x, double c) noexcept {
    if (c == 1.0) return x;
    if (x > 0.0) return std::pow(x, c);
    if (x < 0.0) return -std::pow(-x, c);
    return 0.0;
}
}  // namespace detail

}  // namespace pfloc

