#include "pfloc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "pfloc/errors.hpp"
#include "pfloc/io.hpp"
#include "pfloc/parallel.hpp"
#include "pfloc/random.hpp"
#include "pfloc/stats.hpp"

namespace pfloc {

// ---------------------------------------------------------------------------
// Ingestion

namespace {

bool all_numeric(const std::vector<std::string>& fields) {
    return std::all_of(fields.begin(), fields.end(),
                       [](const std::string& f) { return io::parse_double(f).has_value(); });
}

}  // namespace

IngestedSeries ingest_csv(const std::filesystem::path& path, const ColumnSelector& column,
                          std::size_t period) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open " + path.string(), 0);
    return ingest_csv(in, column, period);
}

IngestedSeries ingest_csv(std::istream& in, const ColumnSelector& column, std::size_t period) {
    if (period == 0) throw ParameterError("period must be at least 1");

    std::vector<double> values;
    std::optional<std::size_t> col;
    std::string line;
    std::size_t row = 0;
    bool first = true;

    while (std::getline(in, line)) {
        ++row;
        if (io::trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);

        if (first) {
            first = false;
            if (!all_numeric(fields)) {
                if (column.name) {
                    const auto it = std::find(fields.begin(), fields.end(), *column.name);
                    if (it == fields.end()) {
                        throw IngestionError("no column named '" + *column.name + "'", row);
                    }
                    col = static_cast<std::size_t>(it - fields.begin());
                } else if (column.index) {
                    col = column.index;
                } else {
                    const auto it = std::find(fields.begin(), fields.end(), "value");
                    col = it == fields.end() ? 0 : static_cast<std::size_t>(it - fields.begin());
                }
                if (*col >= fields.size()) {
                    throw IngestionError("column " + std::to_string(*col) + " not in header", row);
                }
                continue;
            }
            if (column.name) throw IngestionError("column names need a header row", row);
            col = column.index.value_or(0);
        }

        if (*col >= fields.size()) {
            throw IngestionError("missing value in column " + std::to_string(*col), row);
        }
        const auto value = io::parse_double(fields[*col]);
        if (!value) throw IngestionError("non-numeric value '" + fields[*col] + "'", row);
        if (!std::isfinite(*value)) throw IngestionError("non-finite value", row);
        values.push_back(*value);
    }

    if (values.empty()) throw IngestionError("no data rows", row);
    if (values.size() < period) {
        throw IngestionError("fewer values (" + std::to_string(values.size()) +
                                 ") than one period (" + std::to_string(period) + ")",
                             row);
    }

    const std::size_t rows_read = values.size();
    std::vector<std::string> warnings;
    if (const std::size_t extra = values.size() % period; extra != 0) {
        warnings.push_back("dropped " + std::to_string(extra) +
                           " trailing value(s) of an incomplete cycle");
        values.resize(values.size() - extra);
    }
    return {PeriodicSeries(std::move(values), period), rows_read, std::move(warnings)};
}

// ---------------------------------------------------------------------------
// Preprocessing

double huber_location(std::span<const double> x, const HuberOptions& options) {
    if (x.empty()) throw InsufficientDataError("Huber location of an empty sample");
    double mu = median(x);
    const double scale = 1.4826 * median_abs_deviation(x);
    if (!(scale > 0.0)) return mu;

    const double c = options.k * scale;
    std::vector<double> w(x.size());
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        std::vector<double> wx(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = std::abs(x[i] - mu);
            w[i] = r <= c ? 1.0 : c / r;
            wx[i] = w[i] * x[i];
        }
        const double next = compensated_sum(wx) / compensated_sum(w);
        const double change = std::abs(next - mu);
        mu = next;
        if (change <= options.tolerance * std::max(std::abs(mu), scale)) break;
    }
    return mu;
}

PeriodicSeries preprocess_log_huber(const PeriodicSeries& series, const HuberOptions& options) {
    const auto x = series.values();
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) {
            throw PreprocessError("non-positive value " + io::format_double(x[i]) +
                                      " at index " + std::to_string(i + 1),
                                  i + 1);
        }
        y[i] = std::log(x[i]);
    }
    const std::size_t period = series.period();
    const std::size_t n = series.n_cycles();
    std::vector<double> season(n);
    for (std::size_t v = 0; v < period; ++v) {
        for (std::size_t c = 0; c < n; ++c) season[c] = y[c * period + v];
        const double mu = huber_location(season, options);
        for (std::size_t c = 0; c < n; ++c) y[c * period + v] -= mu;
    }
    return {std::move(y), period};
}

// ---------------------------------------------------------------------------
// Simulation study harness

std::pair<double, double> ExperimentGrid::cell(std::size_t index) const {
    const std::size_t n = coefs.size();
    if (index >= n * n) throw ParameterError("grid cell index out of range");
    return {coefs[index / n], coefs[index % n]};
}

PeriodicModel ExperimentGrid::model(std::size_t index) const {
    const auto [c1, c2] = cell(index);
    Eigen::MatrixXd coef(2, 1);
    coef << c1, c2;
    const StableParams innov(alpha, 1.0);
    return family == ModelFamily::par ? PeriodicModel::par(coef, innov)
                                      : PeriodicModel::pma(coef, innov);
}

std::vector<std::string> GridTable::columns() const {
    if (kind == GridKind::power) return {"coef1", "coef2", "power_sub1", "power_sub2", "power_total"};
    return {"coef1", "coef2", "rate_sub1", "rate_sub2", "rate_both"};
}

namespace {

constexpr std::uint64_t calibration_stream = 0xCA11B8A7E5EEDULL;

void check_grid(const ExperimentGrid& grid) {
    if (grid.coefs.empty()) throw ParameterError("empty coefficient grid");
    if (grid.replications == 0) throw ParameterError("replications must be positive");
    if (grid.nt == 0 || grid.nt % ExperimentGrid::period != 0) {
        throw ParameterError("NT must be a positive multiple of the period");
    }
}

struct Outcome {
    bool ok = false;
    bool s1 = false;
    bool s2 = false;
    bool total = false;
};

// Runs every (cell, replication) pair as one flat parallel loop; each pair
// owns substream `rep` of the cell's stream, so results do not depend on the schedule.
template <class Eval>
GridTable run_grid(const ExperimentGrid& grid, GridKind kind, Eval&& eval) {
    const std::size_t cells = grid.n_cells();
    const std::size_t reps = grid.replications;
    std::vector<Outcome> outcomes(cells * reps);
    parallel_for(cells * reps, [&](std::size_t job) {
        const std::size_t cell = job / reps;
        const std::size_t rep = job % reps;
        RandomStream rng = RandomStream(derive_seed(grid.seed, cell)).substream(rep);
        try {
            const auto series = gen_parma(grid.model(cell), grid.nt / ExperimentGrid::period, rng);
            outcomes[job] = eval(cell, series);
        } catch (const Error&) {
            outcomes[job] = Outcome{};
        }
    });

    GridTable table;
    table.kind = kind;
    table.rows.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t ok = 0, s1 = 0, s2 = 0, total = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto& o = outcomes[cell * reps + rep];
            if (!o.ok) continue;
            ++ok;
            s1 += o.s1;
            s2 += o.s2;
            total += o.total;
        }
        const auto [c1, c2] = grid.cell(cell);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const auto rate = [&](std::size_t k) {
            return ok == 0 ? nan : static_cast<double>(k) / static_cast<double>(ok);
        };
        table.rows.push_back({c1, c2, rate(s1), rate(s2), rate(total)});
    }
    return table;
}

}  // namespace

GridTable replicate_power_grid(const ExperimentGrid& grid, const CalibrationCache* cache) {
    check_grid(grid);
    const auto calib =
        calibrate_portmanteau(grid.alpha, grid.nt, ExperimentGrid::period, grid.test_fp,
                              grid.test_h_max, grid.m, derive_seed(grid.seed, calibration_stream),
                              cache);
    return run_grid(grid, GridKind::power, [&](std::size_t, const PeriodicSeries& series) {
        const auto r = evaluate_portmanteau(series, calib, grid.level);
        return Outcome{true, r.reject_by_season[0], r.reject_by_season[1], r.reject_any};
    });
}

GridTable replicate_order_grid(const ExperimentGrid& grid, const CalibrationCache* cache) {
    check_grid(grid);
    const std::uint64_t null_seed = derive_seed(grid.seed, calibration_stream);
    const bool par = grid.family == ModelFamily::par;
    const FlocParams fp = par ? pacf_params(grid.par_b, grid.alpha) : grid.pma_fp;
    const auto lags = par ? lags_positive(grid.id_h_max) : lags_plus_minus(grid.id_h_max);
    const Measure measure = par ? Measure::peflopacf : Measure::pefloacf;
    const auto sample = cached_null_sample(measure, grid.alpha, grid.nt, ExperimentGrid::period,
                                           lags, fp, grid.m, null_seed, cache);
    const NullBands bands = bands_from_sample(sample, grid.d);

    return run_grid(grid, GridKind::order, [&](std::size_t cell, const PeriodicSeries& series) {
        const auto truth = local_orders(grid.model(cell));
        const auto& expected = par ? truth.ar : truth.ma;
        const auto r = par ? evaluate_par_order(series, bands) : evaluate_pma_order(series, bands);
        const bool ok1 = r.seasonal[0] == expected[0];
        const bool ok2 = r.seasonal[1] == expected[1];
        return Outcome{true, ok1, ok2, ok1 && ok2};
    });
}

void write_grid_csv(std::ostream& out, const GridTable& table) {
    const auto cols = table.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : table.rows) {
        out << io::format_double(r.coef1) << ',' << io::format_double(r.coef2) << ','
            << io::format_double(r.sub1) << ',' << io::format_double(r.sub2) << ','
            << io::format_double(r.total) << '\n';
    }
}

GridTable read_grid_csv(std::istream& in) {
    GridTable table;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (io::trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            table.kind = GridKind::power;
            if (fields == table.columns()) continue;
            table.kind = GridKind::order;
            if (fields == table.columns()) continue;
            throw IngestionError("unrecognized grid header", row);
        }
        if (fields.size() != 5) throw IngestionError("expected 5 columns", row);
        double v[5];
        for (std::size_t i = 0; i < 5; ++i) {
            const auto x = io::parse_double(fields[i]);
            if (!x) throw IngestionError("non-numeric cell '" + fields[i] + "'", row);
            v[i] = *x;
        }
        table.rows.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    if (!header_seen) throw IngestionError("empty grid file", 0);
    return table;
}

}  // namespace pfloc
