#include "pfloc/procgen.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "pfloc/errors.hpp"

namespace pfloc {

PeriodicSeries::PeriodicSeries(std::vector<double> values, std::size_t period)
    : values_(std::move(values)), period_(period) {
    if (period_ == 0) throw ShapeError("period must be at least 1");
    if (values_.empty()) throw ShapeError("periodic series is empty");
    if (values_.size() % period_ != 0) {
        throw ShapeError("series length " + std::to_string(values_.size()) +
                         " is not a multiple of the period " + std::to_string(period_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("non-finite value at index " + std::to_string(i + 1));
        }
    }
}

std::size_t PeriodicSeries::wrap_season(long long season, std::size_t period) noexcept {
    const auto t = static_cast<long long>(period);
    long long r = (season - 1) % t;
    if (r < 0) r += t;
    return static_cast<std::size_t>(r) + 1;
}

PeriodicSeries PeriodicSeries::scaled(double factor) const {
    std::vector<double> out(values_);
    for (auto& v : out) v *= factor;
    return {std::move(out), period_};
}

double monodromy_spectral_radius(const Eigen::MatrixXd& ar) {
    const auto p = ar.cols();
    if (p == 0) return 0.0;
    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(p, p);
    for (Eigen::Index v = 0; v < ar.rows(); ++v) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
        companion.row(0) = ar.row(v);
        for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
        product = companion * product;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(product, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PeriodicModel::PeriodicModel(std::size_t period, Eigen::MatrixXd ar, Eigen::MatrixXd ma,
                             double alpha, std::vector<double> season_scales)
    : period_(period),
      ar_(std::move(ar)),
      ma_(std::move(ma)),
      alpha_(alpha),
      scales_(std::move(season_scales)) {
    if (period_ == 0) throw ShapeError("period must be at least 1");
    const auto rows = static_cast<Eigen::Index>(period_);
    if (ar_.rows() != rows && !(ar_.cols() == 0)) {
        throw ShapeError("AR coefficient array must have one row per season");
    }
    if (ma_.rows() != rows && !(ma_.cols() == 0)) {
        throw ShapeError("MA coefficient array must have one row per season");
    }
    if (ar_.cols() == 0) ar_.resize(rows, 0);
    if (ma_.cols() == 0) ma_.resize(rows, 0);
    if (scales_.size() != period_) {
        throw ShapeError("innovation scales must have one entry per season");
    }
    for (double s : scales_) (void)StableParams(alpha_, s);
    if (!ar_.allFinite() || !ma_.allFinite()) throw ParameterError("non-finite model coefficient");

    const double radius = pfloc::monodromy_spectral_radius(ar_);
    if (!(radius < 1.0 - 1e-9)) {
        throw ModelError("periodic AR part is not causal (monodromy spectral radius " +
                         std::to_string(radius) + ")");
    }
}

PeriodicModel PeriodicModel::par(const Eigen::MatrixXd& phi, const StableParams& innov) {
    const auto period = static_cast<std::size_t>(phi.rows());
    return {period, phi, Eigen::MatrixXd(phi.rows(), 0), innov.alpha(),
            std::vector<double>(period, innov.sigma())};
}

PeriodicModel PeriodicModel::pma(const Eigen::MatrixXd& theta, const StableParams& innov) {
    const auto period = static_cast<std::size_t>(theta.rows());
    return {period, Eigen::MatrixXd(theta.rows(), 0), theta, innov.alpha(),
            std::vector<double>(period, innov.sigma())};
}

PeriodicModel PeriodicModel::noise(std::vector<double> season_scales, double alpha) {
    const auto rows = static_cast<Eigen::Index>(season_scales.size());
    return {season_scales.size(), Eigen::MatrixXd(rows, 0), Eigen::MatrixXd(rows, 0), alpha,
            std::move(season_scales)};
}

double PeriodicModel::phi(std::size_t v, std::size_t i) const {
    if (i == 0 || i > ar_order()) return 0.0;
    return ar_(static_cast<Eigen::Index>(PeriodicSeries::wrap_season(static_cast<long long>(v), period_) - 1),
               static_cast<Eigen::Index>(i - 1));
}

double PeriodicModel::theta(std::size_t v, std::size_t j) const {
    if (j == 0 || j > ma_order()) return 0.0;
    return ma_(static_cast<Eigen::Index>(PeriodicSeries::wrap_season(static_cast<long long>(v), period_) - 1),
               static_cast<Eigen::Index>(j - 1));
}

double PeriodicModel::monodromy_spectral_radius() const {
    return pfloc::monodromy_spectral_radius(ar_);
}

std::size_t PeriodicModel::default_burn_in_cycles() const noexcept {
    const std::size_t samples = 50 * period_ + 10 * (ar_order() + ma_order());
    return (samples + period_ - 1) / period_;
}

PeriodicSeries gen_ipd_stable(std::size_t period, std::span<const double> scales, double alpha,
                              std::size_t n_cycles, RandomStream& rng) {
    if (scales.size() != period) throw ShapeError("one scale per season required");
    std::vector<StableParams> params;
    params.reserve(period);
    for (double s : scales) params.emplace_back(alpha, s);

    std::vector<double> values(period * n_cycles);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = params[i % period].sigma() * draw_sym_stable(alpha, rng);
    }
    return {std::move(values), period};
}

SimulatedPath simulate_parma(const PeriodicModel& model, std::size_t n_cycles, RandomStream& rng,
                             const SimulationOptions& options) {
    const std::size_t period = model.period();
    const std::size_t p = model.ar_order();
    const std::size_t q = model.ma_order();
    const std::size_t burn = options.burn_in_cycles.value_or(model.default_burn_in_cycles());
    const std::size_t total = (burn + n_cycles) * period;
    const std::size_t skip = burn * period;

    InnovationSampler sampler = options.sampler;
    if (!sampler) {
        const double alpha = model.alpha();
        const auto& scales = model.season_scales();
        sampler = [alpha, &scales](std::size_t season, RandomStream& r) {
            return scales[season] * draw_sym_stable(alpha, r);
        };
    }

    std::vector<double> xi(total);
    std::vector<double> x(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t s = i % period;
        xi[i] = sampler(s, rng);
        double value = xi[i];
        for (std::size_t j = 1; j <= q && j <= i; ++j) {
            value += model.ma()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j - 1)) *
                     xi[i - j];
        }
        for (std::size_t k = 1; k <= p && k <= i; ++k) {
            value += model.ar()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k - 1)) *
                     x[i - k];
        }
        x[i] = value;
    }

    std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(skip), x.end());
    std::vector<double> innov(xi.begin() + static_cast<std::ptrdiff_t>(skip), xi.end());
    return {PeriodicSeries(std::move(out), period), std::move(innov)};
}

PeriodicSeries gen_parma(const PeriodicModel& model, std::size_t n_cycles, RandomStream& rng,
                         std::optional<std::size_t> burn_in_cycles) {
    SimulationOptions options;
    options.burn_in_cycles = burn_in_cycles;
    return simulate_parma(model, n_cycles, rng, options).series;
}

SeasonalOrders local_orders(const PeriodicModel& model) {
    SeasonalOrders orders;
    const auto& ar = model.ar();
    const auto& ma = model.ma();
    for (Eigen::Index v = 0; v < static_cast<Eigen::Index>(model.period()); ++v) {
        std::size_t pv = 0;
        for (Eigen::Index i = 0; i < ar.cols(); ++i) {
            if (ar(v, i) != 0.0) pv = static_cast<std::size_t>(i + 1);
        }
        std::size_t qv = 0;
        for (Eigen::Index j = 0; j < ma.cols(); ++j) {
            if (ma(v, j) != 0.0) qv = static_cast<std::size_t>(j + 1);
        }
        orders.ar.push_back(pv);
        orders.ma.push_back(qv);
        orders.p = std::max(orders.p, pv);
        orders.q = std::max(orders.q, qv);
    }
    return orders;
}

}  // namespace pfloc
