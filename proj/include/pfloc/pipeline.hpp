#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfloc/heavytail.hpp"
#include "pfloc/inference.hpp"
#include "pfloc/procgen.hpp"

namespace pfloc {

// ---------------------------------------------------------------------------
// Ingestion and preprocessing
// ---------------------------------------------------------------------------

/// Column by header name or 0-based position. Empty selects "value" when the
/// header has it, otherwise the first column.
struct ColumnSelector {
    std::optional<std::string> name;
    std::optional<std::size_t> index;
};

struct IngestedSeries {
    PeriodicSeries series;
    std::size_t rows_read = 0;  ///< data rows before trimming
    std::vector<std::string> warnings;
};

/**
 * Reads one numeric column from a CSV file. A first row with any
 * non-numeric field is taken as the header. A partial trailing cycle is
 * dropped with a warning.
 *
 * @throws IngestionError (with the 1-based line number where one applies)
 *         for unreadable or empty files, missing or non-numeric cells, or
 *         fewer than T values.
 */
[[nodiscard]] IngestedSeries ingest_csv(const std::filesystem::path& path,
                                        const ColumnSelector& column, std::size_t period);
[[nodiscard]] IngestedSeries ingest_csv(std::istream& in, const ColumnSelector& column,
                                        std::size_t period);

struct HuberOptions {
    double k = 1.345;
    double tolerance = 1e-8;  ///< relative change in the location
    std::size_t max_iter = 100;
};

/// Huber M-estimate of location with scale fixed at 1.4826 * MAD, by IRLS from the median.
[[nodiscard]] double huber_location(std::span<const double> x, const HuberOptions& options = {});

/// y_t = log x_t minus the Huber location of the log values of season(t).
/// @throws PreprocessError naming the first non-positive value.
[[nodiscard]] PeriodicSeries preprocess_log_huber(const PeriodicSeries& series,
                                                  const HuberOptions& options = {});

// ---------------------------------------------------------------------------
// Simulation study harness
// ---------------------------------------------------------------------------

enum class ModelFamily { par, pma };

/**
 * Two-season PAR_2(1) or PMA_2(1) experiments over all pairs of first-lag
 * coefficients (c1, c2) drawn from `coefs`, with S(alpha, 1) innovations.
 */
struct ExperimentGrid {
    ModelFamily family = ModelFamily::par;
    std::vector<double> coefs{-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
    std::size_t nt = 1000;
    std::size_t replications = 200;
    std::size_t m = 2000;
    double alpha = 1.7;
    std::uint64_t seed = 1;

    // portmanteau
    FlocParams test_fp = FlocParams(0.8, 0.8, 1.7);
    std::size_t test_h_max = 3;
    double level = 0.05;

    // order identification
    double par_b = 0.6;
    FlocParams pma_fp = FlocParams(0.8, 0.8, 1.7);
    std::size_t id_h_max = 5;
    double d = 0.99;

    /// Period of the simulated models.
    static constexpr std::size_t period = 2;

    [[nodiscard]] std::size_t n_cells() const noexcept { return coefs.size() * coefs.size(); }
    /// Cell i has c1 = coefs[i / n], c2 = coefs[i % n].
    [[nodiscard]] std::pair<double, double> cell(std::size_t index) const;
    [[nodiscard]] PeriodicModel model(std::size_t index) const;
};

struct GridRow {
    double coef1 = 0.0;
    double coef2 = 0.0;
    double sub1 = 0.0;   ///< rejection or correct-order rate of season 1
    double sub2 = 0.0;   ///< season 2
    double total = 0.0;  ///< either season rejects / both correct
};

enum class GridKind { power, order };

struct GridTable {
    GridKind kind = GridKind::power;
    std::vector<GridRow> rows;

    /// "coef1,coef2,power_sub1,power_sub2,power_total" or the rate_* form.
    [[nodiscard]] std::vector<std::string> columns() const;
};

/// Replications that raise a library error are left out of the rates; a
/// cell where every replication failed reports NaN.
[[nodiscard]] GridTable replicate_power_grid(const ExperimentGrid& grid,
                                             const CalibrationCache* cache = nullptr);
[[nodiscard]] GridTable replicate_order_grid(const ExperimentGrid& grid,
                                             const CalibrationCache* cache = nullptr);

void write_grid_csv(std::ostream& out, const GridTable& table);
/// @throws IngestionError on an unknown header or malformed row.
[[nodiscard]] GridTable read_grid_csv(std::istream& in);

}  // namespace pfloc
