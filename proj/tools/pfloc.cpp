// pfloc: command-line front end for simulating heavy-tailed periodic series,
// computing FLOC-based periodic measures, and running the dependence test,
// order identification and Yule-Walker fit on CSV data.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pfloc/errors.hpp"
#include "pfloc/flocmeasures.hpp"
#include "pfloc/heavytail.hpp"
#include "pfloc/inference.hpp"
#include "pfloc/io.hpp"
#include "pfloc/parallel.hpp"
#include "pfloc/pipeline.hpp"
#include "pfloc/procgen.hpp"
#include "pfloc/random.hpp"
#include "pfloc/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pfloc;

namespace {

struct Global {
    std::size_t threads = 0;
    std::string cache_dir;
    std::vector<std::string> argv;
};

std::optional<CalibrationCache> open_cache(const Global& g) {
    if (!g.cache_dir.empty()) return CalibrationCache(g.cache_dir);
    return CalibrationCache::from_environment();
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest(const Global& g, const std::string& command, json parameters) {
    return json{{"tool", "pfloc"},
                {"version", PFLOC_VERSION},
                {"command", command},
                {"argv", g.argv},
                {"parameters", std::move(parameters)},
                {"threads", thread_limit()},
                {"created", timestamp()}};
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_manifest(const fs::path& output, const json& m) {
    fs::path p = output;
    p += ".manifest.json";
    write_text(p, m.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    if (io::trim(text).empty()) return out;
    for (const auto& field : io::split_csv_line(text)) {
        const auto x = io::parse_double(field);
        if (!x || !std::isfinite(*x)) throw ParameterError(flag + ": not a number: '" + field + "'");
        out.push_back(*x);
    }
    return out;
}

// Season-major coefficient list -> T x p matrix (p = len / T).
Eigen::MatrixXd coef_matrix(const std::vector<double>& c, std::size_t period,
                            const std::string& flag) {
    if (c.size() % period != 0) {
        throw ParameterError(flag + " needs a multiple of T values (season by season)");
    }
    const auto p = static_cast<Eigen::Index>(c.size() / period);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(period), p);
    for (Eigen::Index v = 0; v < m.rows(); ++v) {
        for (Eigen::Index i = 0; i < p; ++i) m(v, i) = c[static_cast<std::size_t>(v * p + i)];
    }
    return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index v = 0; v < m.rows(); ++v) {
        json row = json::array();
        for (Eigen::Index i = 0; i < m.cols(); ++i) row.push_back(m(v, i));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, std::size_t period) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) return Eigen::MatrixXd(static_cast<Eigen::Index>(period), 0);
    if (rows.size() != period) throw ParameterError("model JSON: need one coefficient row per season");
    const std::size_t cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(period), static_cast<Eigen::Index>(cols));
    for (std::size_t v = 0; v < period; ++v) {
        if (rows[v].size() != cols) throw ParameterError("model JSON: ragged coefficient rows");
        for (std::size_t i = 0; i < cols; ++i) {
            m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(i)) = rows[v][i];
        }
    }
    return m;
}

std::string series_csv(const PeriodicSeries& s) {
    std::ostringstream out;
    out << "t,season,value\n";
    for (std::size_t t = 1; t <= s.size(); ++t) {
        out << t << ',' << PeriodicSeries::season_of(t, s.period()) << ','
            << io::format_double(s.at(t)) << '\n';
    }
    return out.str();
}

// Shared input options.
struct Input {
    std::string path;
    std::string column;
    std::size_t period = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--input,-i", path, "CSV file with the series")->required()->check(CLI::ExistingFile);
        cmd->add_option("--column", column, "column name or 0-based index (default: 'value' or first)");
        cmd->add_option("--T", period, "period")->required()->check(CLI::PositiveNumber);
    }

    [[nodiscard]] IngestedSeries load() const {
        ColumnSelector sel;
        if (!column.empty()) {
            const auto idx = io::parse_double(column);
            if (idx && *idx >= 0 && *idx == std::floor(*idx)) {
                sel.index = static_cast<std::size_t>(*idx);
            } else {
                sel.name = column;
            }
        }
        auto in = ingest_csv(path, sel, period);
        for (const auto& w : in.warnings) std::cerr << "warning: " << w << '\n';
        return in;
    }

    [[nodiscard]] json to_json() const {
        return json{{"input", path}, {"column", column}, {"T", period}};
    }
};

// ---------------------------------------------------------------------------

struct SimulateOpts {
    std::string family = "par";
    std::size_t period = 1;
    std::string phi, theta, sigma;
    std::string model_path;
    double alpha = 2.0;
    std::size_t nt = 0;
    std::uint64_t seed = 1;
    std::optional<std::size_t> burn_in;
    std::string output;
};

int run_simulate(const Global& g, const SimulateOpts& o) {
    std::optional<PeriodicModel> model;
    if (!o.model_path.empty()) {
        std::ifstream in(o.model_path);
        if (!in) throw ParameterError("cannot open model file " + o.model_path);
        const json j = json::parse(in);
        const auto period = j.at("period").get<std::size_t>();
        model.emplace(period, matrix_from_json(j.value("ar", json::array()), period),
                      matrix_from_json(j.value("ma", json::array()), period),
                      j.at("alpha").get<double>(), j.at("sigma").get<std::vector<double>>());
    } else {
        if (o.period == 0) throw ParameterError("--T must be positive");
        if (o.family != "par" && o.family != "pma" && o.family != "parma" && o.family != "ipd") {
            throw ParameterError("unknown --family " + o.family);
        }
        auto scales = parse_list(o.sigma, "--sigma");
        if (scales.empty()) scales.assign(o.period, 1.0);
        if (scales.size() == 1) scales.assign(o.period, scales.front());
        const auto phi = parse_list(o.phi, "--phi");
        const auto theta = parse_list(o.theta, "--theta");
        const auto empty = Eigen::MatrixXd(static_cast<Eigen::Index>(o.period), 0);
        Eigen::MatrixXd ar = empty, ma = empty;
        if (o.family == "par" || o.family == "parma") {
            if (phi.empty()) throw ParameterError("--phi is required for family " + o.family);
            ar = coef_matrix(phi, o.period, "--phi");
        }
        if (o.family == "pma" || o.family == "parma") {
            if (theta.empty()) throw ParameterError("--theta is required for family " + o.family);
            ma = coef_matrix(theta, o.period, "--theta");
        }
        model.emplace(o.period, ar, ma, o.alpha, scales);
    }

    if (o.nt == 0 || o.nt % model->period() != 0) {
        throw ParameterError("--nt must be a positive multiple of T");
    }
    RandomStream rng(o.seed);
    const auto series = gen_parma(*model, o.nt / model->period(), rng, o.burn_in);
    write_text(o.output, series_csv(series));

    json params{{"family", o.family},
                {"T", model->period()},
                {"ar", matrix_json(model->ar())},
                {"ma", matrix_json(model->ma())},
                {"sigma", model->season_scales()},
                {"alpha", model->alpha()},
                {"nt", o.nt},
                {"seed", o.seed},
                {"burn_in_cycles", o.burn_in.value_or(model->default_burn_in_cycles())},
                {"output", o.output}};
    write_manifest(o.output, manifest(g, "simulate", params));
    return 0;
}

// ---------------------------------------------------------------------------

struct MeasureOpts {
    Input input;
    std::string measure = "pefloacf";
    std::optional<double> a;
    double b = 0.8;
    std::optional<double> alpha;
    std::size_t h_max = 5;
    bool bands = false;
    double d = 0.99;
    std::size_t m = 2000;
    std::uint64_t seed = 1;
    std::string output;
};

int run_measure(const Global& g, const MeasureOpts& o) {
    const auto data = o.input.load();
    const Measure measure = parse_measure(o.measure);
    const bool pacf = measure == Measure::peflopacf;
    if (pacf && o.a && *o.a != 1.0) throw ParameterError("peflopacf uses A = 1");
    const double a = pacf ? 1.0 : o.a.value_or(0.8);
    const FlocParams fp = o.alpha ? FlocParams(a, o.b, *o.alpha) : FlocParams::unbounded(a, o.b);

    std::vector<long long> lags;
    if (pacf) {
        lags = lags_positive(o.h_max);
    } else {
        for (long long h = -static_cast<long long>(o.h_max); h <= static_cast<long long>(o.h_max); ++h) {
            lags.push_back(h);
        }
    }
    const auto table = compute_table(data.series, measure, lags, fp);

    std::ostringstream csv;
    json params{{"measure", o.measure}, {"A", a}, {"B", o.b}, {"hmax", o.h_max},
                {"alpha", o.alpha ? json(*o.alpha) : json(nullptr)}, {"output", o.output}};
    params.update(o.input.to_json());
    if (o.bands) {
        if (!o.alpha) throw ParameterError("--bands needs --alpha for the null distribution");
        std::vector<long long> band_lags;
        for (long long h : lags) if (h != 0) band_lags.push_back(h);
        auto cache = open_cache(g);
        const auto sample = cached_null_sample(measure, *o.alpha, data.series.size(),
                                               data.series.period(), band_lags, fp, o.m, o.seed,
                                               cache ? &*cache : nullptr);
        const auto bands = bands_from_sample(sample, o.d);
        // Lag 0 has no band; widen with +-inf so the columns stay aligned.
        NullBands full = bands;
        full.lags = lags;
        full.lower.clear();
        full.upper.clear();
        std::size_t k = 0;
        for (long long h : lags) {
            if (h == 0) {
                full.lower.push_back(-std::numeric_limits<double>::infinity());
                full.upper.push_back(std::numeric_limits<double>::infinity());
            } else {
                full.lower.push_back(bands.lower[k]);
                full.upper.push_back(bands.upper[k]);
                ++k;
            }
        }
        write_table_csv(csv, table, full);
        params.update(json{{"d", o.d}, {"m", o.m}, {"seed", o.seed}});
    } else {
        write_table_csv(csv, table);
    }
    write_text(o.output, csv.str());
    write_manifest(o.output, manifest(g, "measure", params));
    return 0;
}

// ---------------------------------------------------------------------------

struct TestOpts {
    Input input;
    double alpha = 1.7;
    double a = 0.8;
    double b = 0.8;
    std::size_t h_max = 3;
    double level = 0.05;
    std::size_t m = 2000;
    std::uint64_t seed = 1;
    std::string output;
};

int run_test(const Global& g, const TestOpts& o) {
    const auto data = o.input.load();
    auto cache = open_cache(g);
    const auto result = portmanteau_test(data.series, o.alpha, FlocParams(o.a, o.b, o.alpha),
                                         o.h_max, o.level, o.m, o.seed, cache ? &*cache : nullptr);
    std::cout << format_portmanteau_table(result);
    if (!o.output.empty()) {
        write_text(o.output, json(result).dump(2) + "\n");
        json params{{"alpha", o.alpha}, {"A", o.a}, {"B", o.b}, {"hmax", o.h_max},
                    {"level", o.level}, {"m", o.m}, {"seed", o.seed}, {"output", o.output}};
        params.update(o.input.to_json());
        write_manifest(o.output, manifest(g, "test", params));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct IdentifyOpts {
    Input input;
    std::string family = "par";
    double alpha = 1.7;
    std::optional<double> a;
    std::optional<double> b;
    std::size_t h_max = 5;
    double d = 0.99;
    std::size_t m = 2000;
    std::uint64_t seed = 1;
    std::string output;
};

int run_identify(const Global& g, const IdentifyOpts& o) {
    const auto data = o.input.load();
    auto cache = open_cache(g);
    const CalibrationCache* c = cache ? &*cache : nullptr;
    OrderResult result;
    json params{{"family", o.family}, {"alpha", o.alpha}, {"hmax", o.h_max}, {"d", o.d},
                {"m", o.m}, {"seed", o.seed}, {"output", o.output}};
    if (o.family == "par") {
        const double b = o.b.value_or(0.6);
        result = identify_par_order(data.series, o.alpha, b, o.h_max, o.d, o.m, o.seed, c);
        params.update(json{{"A", 1.0}, {"B", b}});
    } else if (o.family == "pma") {
        const double a = o.a.value_or(0.8);
        const double b = o.b.value_or(0.8);
        result = identify_pma_order(data.series, o.alpha, FlocParams(a, b, o.alpha), o.h_max, o.d,
                                    o.m, o.seed, c);
        params.update(json{{"A", a}, {"B", b}});
    } else {
        throw ParameterError("unknown --family " + o.family);
    }
    std::cout << format_order_table(result);
    if (!o.output.empty()) {
        params.update(o.input.to_json());
        write_text(o.output, json(result).dump(2) + "\n");
        write_manifest(o.output, manifest(g, "identify", params));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FitOpts {
    Input input;
    bool log_huber = false;
    std::optional<double> alpha;
    double b = 0.6;
    std::size_t h_max = 5;
    double d = 0.99;
    double test_a = 0.8;
    double test_b = 0.8;
    std::size_t test_h_max = 3;
    double level = 0.05;
    std::size_t m = 2000;
    std::uint64_t seed = 1;
    std::string output;
};

int run_fit(const Global& g, const FitOpts& o) {
    const auto data = o.input.load();
    const PeriodicSeries series = o.log_huber ? preprocess_log_huber(data.series) : data.series;
    const std::size_t period = series.period();

    // Per-season alpha estimates are advisory: the estimator assumes i.i.d. data.
    std::vector<double> alpha_by_season;
    for (std::size_t v = 0; v < period; ++v) {
        std::vector<double> season;
        for (std::size_t c = 0; c < series.n_cycles(); ++c) season.push_back(series.values()[c * period + v]);
        try {
            alpha_by_season.push_back(estimate_alpha(season));
        } catch (const Error& e) {
            std::cerr << "warning: alpha estimate for season " << v + 1 << " unavailable: " << e.what() << '\n';
            alpha_by_season.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    double alpha = 0.0;
    if (o.alpha) {
        alpha = *o.alpha;
    } else {
        std::size_t n = 0;
        for (double a : alpha_by_season) if (std::isfinite(a)) { alpha += a; ++n; }
        if (n == 0) throw EstimationError("no alpha estimate available; pass --alpha");
        alpha = alpha / static_cast<double>(n);
        std::cerr << "using mean advisory alpha estimate " << io::format_double(alpha) << '\n';
    }

    auto cache = open_cache(g);
    const CalibrationCache* c = cache ? &*cache : nullptr;
    const auto order = identify_par_order(series, alpha, o.b, o.h_max, o.d, o.m, o.seed, c);
    const FlocParams fp = pacf_params(o.b, alpha);
    const auto fit = fit_par_yw(series, order.seasonal, fp);
    const auto resid = fit.max_order() == 0 ? series : residual_series(fit);
    const auto test = portmanteau_test(resid, alpha, FlocParams(o.test_a, o.test_b, alpha),
                                       o.test_h_max, o.level, o.m, derive_seed(o.seed, 1), c);

    std::cout << "identified orders and estimated coefficients\n" << format_fit_table(fit)
              << "\nportmanteau test on residuals\n" << format_portmanteau_table(test);
    std::cout << "\nadvisory alpha by season:";
    for (double a : alpha_by_season) std::cout << ' ' << io::format_double(a);
    std::cout << '\n';

    if (!o.output.empty()) {
        json out{{"alpha", alpha},
                 {"alpha_by_season", json::array()},
                 {"order", order},
                 {"fit", fit},
                 {"residual_test", test}};
        for (double a : alpha_by_season) {
            out["alpha_by_season"].push_back(std::isfinite(a) ? json(a) : json(nullptr));
        }
        write_text(o.output, out.dump(2) + "\n");
        json params{{"log_huber", o.log_huber}, {"alpha", o.alpha ? json(*o.alpha) : json(nullptr)},
                    {"B", o.b}, {"hmax", o.h_max}, {"d", o.d}, {"test_A", o.test_a},
                    {"test_B", o.test_b}, {"test_hmax", o.test_h_max}, {"level", o.level},
                    {"m", o.m}, {"seed", o.seed}, {"output", o.output}};
        params.update(o.input.to_json());
        write_manifest(o.output, manifest(g, "fit", params));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ReplicateOpts {
    std::string figure = "power-par";
    std::vector<std::size_t> nt{100, 1000};
    std::size_t reps = 200;
    std::size_t m = 2000;
    std::string coefs;
    double alpha = 1.7;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
};

int run_replicate(const Global& g, const ReplicateOpts& o) {
    ExperimentGrid grid;
    bool power = true;
    if (o.figure == "power-par") {
        grid.family = ModelFamily::par;
    } else if (o.figure == "power-pma") {
        grid.family = ModelFamily::pma;
    } else if (o.figure == "order-par") {
        grid.family = ModelFamily::par;
        power = false;
    } else if (o.figure == "order-pma") {
        grid.family = ModelFamily::pma;
        power = false;
    } else {
        throw ParameterError("unknown --figure " + o.figure);
    }
    if (!o.coefs.empty()) grid.coefs = parse_list(o.coefs, "--coefs");
    grid.replications = o.reps;
    grid.m = o.m;
    grid.alpha = o.alpha;
    grid.seed = o.seed;
    grid.test_fp = FlocParams(0.8, 0.8, o.alpha);
    grid.pma_fp = FlocParams(0.8, 0.8, o.alpha);

    auto cache = open_cache(g);
    for (std::size_t nt : o.nt) {
        grid.nt = nt;
        const auto table = power ? replicate_power_grid(grid, cache ? &*cache : nullptr)
                                 : replicate_order_grid(grid, cache ? &*cache : nullptr);
        std::ostringstream csv;
        write_grid_csv(csv, table);
        const fs::path out = fs::path(o.output_dir) / (o.figure + "_nt" + std::to_string(nt) + ".csv");
        write_text(out, csv.str());
        json params{{"figure", o.figure}, {"nt", nt}, {"reps", o.reps}, {"m", o.m},
                    {"coefs", grid.coefs}, {"alpha", o.alpha}, {"seed", o.seed},
                    {"test", {{"A", 0.8}, {"B", 0.8}, {"hmax", grid.test_h_max}, {"level", grid.level}}},
                    {"identify", {{"par_B", grid.par_b}, {"pma_A", 0.8}, {"pma_B", 0.8},
                                  {"hmax", grid.id_h_max}, {"d", grid.d}}},
                    {"output", out.string()}};
        write_manifest(out, manifest(g, "replicate", params));
        std::cout << "wrote " << out.string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heavy-tailed periodic time series: simulation, FLOC measures, dependence test, "
                 "order identification and Yule-Walker fitting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", PFLOC_VERSION);

    Global g;
    for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
    app.add_option("--threads", g.threads, "worker thread cap (0 = hardware concurrency)");
    app.add_option("--cache-dir", g.cache_dir, "calibration cache directory (default $PFLOC_CACHE_DIR)");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "simulate a periodic stable ARMA trajectory");
    simulate->add_option("--family", sim.family, "par | pma | parma | ipd")
        ->check(CLI::IsMember({"par", "pma", "parma", "ipd"}));
    simulate->add_option("--T", sim.period, "period");
    simulate->add_option("--phi", sim.phi, "AR coefficients, season by season (comma separated)");
    simulate->add_option("--theta", sim.theta, "MA coefficients, season by season");
    simulate->add_option("--sigma", sim.sigma, "innovation scale per season (or one value)");
    simulate->add_option("--model", sim.model_path, "model JSON {period, ar, ma, alpha, sigma}");
    simulate->add_option("--alpha", sim.alpha, "stability index in (0, 2]");
    simulate->add_option("--nt", sim.nt, "series length (multiple of T)")->required();
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--burn-in", sim.burn_in, "burn-in cycles");
    simulate->add_option("--output,-o", sim.output, "output CSV")->required();

    MeasureOpts mea;
    auto* measure = app.add_subcommand("measure", "seasonal lag table of a FLOC measure");
    mea.input.add(measure);
    measure->add_option("--measure", mea.measure, "pefloacvf | pefloacf | peflopacf")
        ->check(CLI::IsMember({"pefloacvf", "pefloacf", "peflopacf"}));
    measure->add_option("--A", mea.a, "exponent A (default 0.8; always 1 for peflopacf)");
    measure->add_option("--B", mea.b, "exponent B");
    measure->add_option("--alpha", mea.alpha, "stability index; enforces A + B < alpha");
    measure->add_option("--hmax", mea.h_max, "largest lag");
    measure->add_flag("--bands", mea.bands, "append Monte Carlo null bands (needs --alpha)");
    measure->add_option("--d", mea.d, "band confidence level");
    measure->add_option("--m", mea.m, "null draws");
    measure->add_option("--seed", mea.seed, "master seed");
    measure->add_option("--output,-o", mea.output, "output CSV")->required();

    TestOpts tst;
    auto* test = app.add_subcommand("test", "portmanteau test for periodic fractional lower-order white noise");
    tst.input.add(test);
    test->add_option("--alpha", tst.alpha, "stability index used for calibration");
    test->add_option("--A", tst.a, "exponent A");
    test->add_option("--B", tst.b, "exponent B");
    test->add_option("--hmax", tst.h_max, "largest lag");
    test->add_option("--level", tst.level, "significance level c");
    test->add_option("--m", tst.m, "calibration draws");
    test->add_option("--seed", tst.seed, "master seed");
    test->add_option("--output,-o", tst.output, "result JSON");

    IdentifyOpts idf;
    auto* identify = app.add_subcommand("identify", "seasonal PAR or PMA order identification");
    idf.input.add(identify);
    identify->add_option("--family", idf.family, "par | pma")->check(CLI::IsMember({"par", "pma"}));
    identify->add_option("--alpha", idf.alpha, "stability index");
    identify->add_option("--A", idf.a, "exponent A (pma; default 0.8)");
    identify->add_option("--B", idf.b, "exponent B (default 0.6 for par, 0.8 for pma)");
    identify->add_option("--hmax", idf.h_max, "largest lag");
    identify->add_option("--d", idf.d, "band confidence level");
    identify->add_option("--m", idf.m, "null draws");
    identify->add_option("--seed", idf.seed, "master seed");
    identify->add_option("--output,-o", idf.output, "result JSON");

    FitOpts fo;
    auto* fit = app.add_subcommand("fit", "identify PAR orders, fit by FLOC Yule-Walker, test the residuals");
    fo.input.add(fit);
    fit->add_flag("--log-huber", fo.log_huber, "log transform and per-season Huber centering first");
    fit->add_option("--alpha", fo.alpha, "stability index (default: mean of per-season estimates)");
    fit->add_option("--B", fo.b, "exponent B for identification and fit");
    fit->add_option("--hmax", fo.h_max, "largest lag for identification");
    fit->add_option("--d", fo.d, "band confidence level");
    fit->add_option("--test-A", fo.test_a, "residual test exponent A");
    fit->add_option("--test-B", fo.test_b, "residual test exponent B");
    fit->add_option("--test-hmax", fo.test_h_max, "residual test largest lag");
    fit->add_option("--level", fo.level, "residual test level");
    fit->add_option("--m", fo.m, "null draws");
    fit->add_option("--seed", fo.seed, "master seed");
    fit->add_option("--output,-o", fo.output, "result JSON");

    ReplicateOpts rep;
    auto* replicate = app.add_subcommand("replicate", "simulation study grids");
    replicate->add_option("--figure", rep.figure, "power-par | power-pma | order-par | order-pma")
        ->check(CLI::IsMember({"power-par", "power-pma", "order-par", "order-pma"}));
    replicate->add_option("--nt", rep.nt, "series lengths")->delimiter(',');
    replicate->add_option("--reps", rep.reps, "replications per cell");
    replicate->add_option("--m", rep.m, "calibration draws");
    replicate->add_option("--coefs", rep.coefs, "coefficient grid (comma separated)");
    replicate->add_option("--alpha", rep.alpha, "stability index");
    replicate->add_option("--seed", rep.seed, "master seed");
    replicate->add_option("--output-dir", rep.output_dir, "directory for grid CSVs");

    CLI11_PARSE(app, argc, argv);
    set_thread_limit(g.threads);

    try {
        if (*simulate) return run_simulate(g, sim);
        if (*measure) return run_measure(g, mea);
        if (*test) return run_test(g, tst);
        if (*identify) return run_identify(g, idf);
        if (*fit) return run_fit(g, fo);
        if (*replicate) return run_replicate(g, rep);
    } catch (const IngestionError& e) {
        std::cerr << "error: " << e.what();
        if (e.row() != 0) std::cerr << " (line " << e.row() << ")";
        std::cerr << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
