#include "pfloc/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "pfloc/errors.hpp"
#include "pfloc/io.hpp"

namespace pfloc {

using nlohmann::json;
using io::format_double;

namespace {

// Finite values are JSON numbers; NaN is null; infinities are the strings "inf" / "-inf".
json num(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double num(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string()) {
        const auto parsed = io::parse_double(j.get<std::string>());
        if (!parsed) throw ParameterError("not a number: " + j.get<std::string>());
        return *parsed;
    }
    return j.get<double>();
}

json nums(const std::vector<double>& xs) {
    json arr = json::array();
    for (double x : xs) arr.push_back(num(x));
    return arr;
}

std::vector<double> nums(const json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(num(x));
    return out;
}

FlocParams floc_from(const json& j) {
    FlocParams fp = FlocParams::unbounded(1.0, 1.0);
    from_json(j, fp);
    return fp;
}

Measure measure_from(const json& j) { return parse_measure(j.get<std::string>()); }

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string brief(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string fixed(double x, int digits = 4) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const FlocParams& fp) {
    j = json{{"A", num(fp.a())}, {"B", num(fp.b())}, {"moment_bound", num(fp.moment_bound())}};
}

void from_json(const json& j, FlocParams& fp) {
    const double a = num(j.at("A"));
    const double b = num(j.at("B"));
    const double bound = num(j.at("moment_bound"));
    fp = std::isinf(bound) ? FlocParams::unbounded(a, b) : FlocParams(a, b, bound);
}

void to_json(json& j, const SeasonalLagTable& table) {
    j = json{{"measure", std::string(to_string(table.measure))},
             {"period", table.period},
             {"lags", table.lags},
             {"floc", table.fp},
             {"values", nums(table.values)}};
}

void from_json(const json& j, SeasonalLagTable& table) {
    table.measure = measure_from(j.at("measure"));
    table.period = j.at("period").get<std::size_t>();
    table.lags = j.at("lags").get<std::vector<long long>>();
    table.fp = floc_from(j.at("floc"));
    table.values = nums(j.at("values"));
    if (table.values.size() != table.period * table.lags.size()) {
        throw ShapeError("table values do not match period x lags");
    }
}

void to_json(json& j, const NullBands& bands) {
    j = json{{"measure", std::string(to_string(bands.measure))},
             {"lags", bands.lags},
             {"lower", nums(bands.lower)},
             {"upper", nums(bands.upper)},
             {"level", num(bands.level)},
             {"m", bands.m},
             {"alpha", num(bands.alpha)},
             {"nt", bands.nt},
             {"period", bands.period},
             {"floc", bands.fp},
             {"dropped", bands.dropped}};
}

void from_json(const json& j, NullBands& bands) {
    bands.measure = measure_from(j.at("measure"));
    bands.lags = j.at("lags").get<std::vector<long long>>();
    bands.lower = nums(j.at("lower"));
    bands.upper = nums(j.at("upper"));
    bands.level = num(j.at("level"));
    bands.m = j.at("m").get<std::size_t>();
    bands.alpha = num(j.at("alpha"));
    bands.nt = j.at("nt").get<std::size_t>();
    bands.period = j.at("period").get<std::size_t>();
    bands.fp = floc_from(j.at("floc"));
    bands.dropped = j.at("dropped").get<std::size_t>();
}

void to_json(json& j, const PortmanteauResult& r) {
    j = json{{"kappa", nums(r.kappa)},
             {"critical_value", num(r.critical_value)},
             {"level", num(r.level)},
             {"subtest_level", num(r.subtest_level)},
             {"reject_any", r.reject_any},
             {"reject_by_season", r.reject_by_season},
             {"h_max", r.h_max},
             {"m", r.m},
             {"alpha", num(r.alpha)},
             {"floc", r.fp},
             {"nt", r.nt},
             {"period", r.period}};
}

void from_json(const json& j, PortmanteauResult& r) {
    r.kappa = nums(j.at("kappa"));
    r.critical_value = num(j.at("critical_value"));
    r.level = num(j.at("level"));
    r.subtest_level = num(j.at("subtest_level"));
    r.reject_any = j.at("reject_any").get<bool>();
    r.reject_by_season = j.at("reject_by_season").get<std::vector<bool>>();
    r.h_max = j.at("h_max").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.alpha = num(j.at("alpha"));
    r.fp = floc_from(j.at("floc"));
    r.nt = j.at("nt").get<std::size_t>();
    r.period = j.at("period").get<std::size_t>();
}

void to_json(json& j, const OrderResult& r) {
    json singular = json::array();
    for (const auto& [v, h] : r.singular) singular.push_back({v, h});
    std::vector<int> flags(r.flags.begin(), r.flags.end());
    j = json{{"family", r.family == OrderFamily::par ? "par" : "pma"},
             {"seasonal", r.seasonal},
             {"global", r.global},
             {"bands", r.bands},
             {"values", nums(r.values)},
             {"flags", flags},
             {"singular", singular},
             {"warnings", r.warnings}};
}

void from_json(const json& j, OrderResult& r) {
    const auto family = j.at("family").get<std::string>();
    if (family != "par" && family != "pma") throw ParameterError("unknown order family: " + family);
    r.family = family == "par" ? OrderFamily::par : OrderFamily::pma;
    r.seasonal = j.at("seasonal").get<std::vector<std::size_t>>();
    r.global = j.at("global").get<std::size_t>();
    from_json(j.at("bands"), r.bands);
    r.values = nums(j.at("values"));
    const auto flags = j.at("flags").get<std::vector<int>>();
    r.flags.assign(flags.begin(), flags.end());
    r.singular.clear();
    for (const auto& p : j.at("singular")) {
        r.singular.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<long long>());
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(json& j, const ParFit& fit) {
    json coeffs = json::array();
    for (const auto& c : fit.coeffs) coeffs.push_back(nums(c));
    j = json{{"period", fit.period},
             {"orders", fit.orders},
             {"coefficients", coeffs},
             {"floc", fit.fp},
             {"residual_start", fit.residual_start},
             {"residuals", nums(fit.residuals)}};
}

void from_json(const json& j, ParFit& fit) {
    fit.period = j.at("period").get<std::size_t>();
    fit.orders = j.at("orders").get<std::vector<std::size_t>>();
    fit.coeffs.clear();
    for (const auto& c : j.at("coefficients")) fit.coeffs.push_back(nums(c));
    fit.fp = floc_from(j.at("floc"));
    fit.residual_start = j.at("residual_start").get<std::size_t>();
    fit.residuals = nums(j.at("residuals"));
}

// ---------------------------------------------------------------------------
// CSV

void write_table_csv(std::ostream& out, const SeasonalLagTable& table) {
    out << "v,h,value\n";
    const std::size_t n_lags = table.lags.size();
    for (std::size_t v = 1; v <= table.period; ++v) {
        for (std::size_t k = 0; k < n_lags; ++k) {
            out << v << ',' << table.lags[k] << ','
                << format_double(table.values[(v - 1) * n_lags + k]) << '\n';
        }
    }
}

void write_table_csv(std::ostream& out, const SeasonalLagTable& table, const NullBands& bands) {
    if (bands.lags != table.lags) throw ShapeError("bands and table use different lags");
    out << "v,h,value,lower,upper\n";
    const std::size_t n_lags = table.lags.size();
    for (std::size_t v = 1; v <= table.period; ++v) {
        for (std::size_t k = 0; k < n_lags; ++k) {
            out << v << ',' << table.lags[k] << ','
                << format_double(table.values[(v - 1) * n_lags + k]) << ','
                << format_double(bands.lower[k]) << ',' << format_double(bands.upper[k]) << '\n';
        }
    }
}

SeasonalLagTable read_table_csv(std::istream& in, Measure measure, const FlocParams& fp) {
    std::string line;
    std::size_t row = 0;
    std::map<std::pair<long long, long long>, double> cells;
    std::vector<long long> lags;
    long long max_v = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (io::trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 3 || fields[0] != "v" || fields[1] != "h" || fields[2] != "value") {
                throw IngestionError("expected header v,h,value", row);
            }
            continue;
        }
        if (fields.size() < 3) throw IngestionError("expected at least 3 columns", row);
        const auto v = io::parse_double(fields[0]);
        const auto h = io::parse_double(fields[1]);
        const auto value = io::parse_double(fields[2]);
        if (!v || !h || !value || *v < 1 || *v != std::floor(*v) || *h != std::floor(*h)) {
            throw IngestionError("malformed table row", row);
        }
        const auto iv = static_cast<long long>(*v);
        const auto ih = static_cast<long long>(*h);
        if (iv == 1) lags.push_back(ih);
        max_v = std::max(max_v, iv);
        if (!cells.emplace(std::pair{iv, ih}, *value).second) {
            throw IngestionError("duplicate (v, h) cell", row);
        }
    }
    if (!header_seen) throw IngestionError("empty table file", 0);
    if (max_v == 0) throw IngestionError("table has no rows", 0);

    SeasonalLagTable table;
    table.measure = measure;
    table.fp = fp;
    table.period = static_cast<std::size_t>(max_v);
    table.lags = lags;
    if (cells.size() != table.period * lags.size()) {
        throw IngestionError("table does not cover every (v, h) pair", 0);
    }
    table.values.reserve(cells.size());
    for (long long v = 1; v <= max_v; ++v) {
        for (long long h : lags) {
            const auto it = cells.find({v, h});
            if (it == cells.end()) {
                throw IngestionError("missing cell (v = " + std::to_string(v) +
                                         ", h = " + std::to_string(h) + ")",
                                     0);
            }
            table.values.push_back(it->second);
        }
    }
    return table;
}

void write_bands_csv(std::ostream& out, const NullBands& bands) {
    out << "h,lower,upper\n";
    for (std::size_t k = 0; k < bands.lags.size(); ++k) {
        out << bands.lags[k] << ',' << format_double(bands.lower[k]) << ','
            << format_double(bands.upper[k]) << '\n';
    }
}

NullBands read_bands_csv(std::istream& in) {
    NullBands bands;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (io::trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 3 || fields[0] != "h" || fields[1] != "lower" ||
                fields[2] != "upper") {
                throw IngestionError("expected header h,lower,upper", row);
            }
            continue;
        }
        const auto h = fields.size() >= 3 ? io::parse_double(fields[0]) : std::nullopt;
        const auto lo = fields.size() >= 3 ? io::parse_double(fields[1]) : std::nullopt;
        const auto hi = fields.size() >= 3 ? io::parse_double(fields[2]) : std::nullopt;
        if (!h || !lo || !hi || *h != std::floor(*h)) throw IngestionError("malformed band row", row);
        bands.lags.push_back(static_cast<long long>(*h));
        bands.lower.push_back(*lo);
        bands.upper.push_back(*hi);
    }
    if (!header_seen) throw IngestionError("empty bands file", 0);
    return bands;
}

// ---------------------------------------------------------------------------
// Text tables

std::string format_portmanteau_table(const PortmanteauResult& r) {
    std::ostringstream s;
    const std::string region = "(" + fixed(r.critical_value, 1) + ", inf)";
    s << pad("v", 4) << pad("kappa_v", 14) << pad("critical region", 22) << pad("decision", 12)
      << '\n';
    for (std::size_t v = 1; v <= r.kappa.size(); ++v) {
        s << pad(std::to_string(v), 4) << pad(fixed(r.kappa[v - 1], 1), 14) << pad(region, 22)
          << pad(r.reject_by_season[v - 1] ? "reject" : "accept", 12) << '\n';
    }
    s << "level " << brief(r.level) << ", subtest level " << brief(r.subtest_level)
      << ", M = " << r.m << ": " << (r.reject_any ? "reject H0" : "do not reject H0") << '\n';
    return s.str();
}

std::string format_order_table(const OrderResult& r) {
    std::ostringstream s;
    const std::size_t n_lags = r.bands.lags.size();
    s << pad("v", 4) << pad(r.family == OrderFamily::par ? "p(v)" : "q(v)", 6);
    for (long long h : r.bands.lags) s << pad("h=" + std::to_string(h), 11);
    s << '\n';
    for (std::size_t v = 1; v <= r.seasonal.size(); ++v) {
        s << pad(std::to_string(v), 4) << pad(std::to_string(r.seasonal[v - 1]), 6);
        for (std::size_t k = 0; k < n_lags; ++k) {
            const std::size_t cell = (v - 1) * n_lags + k;
            s << pad(fixed(r.values[cell]) + (r.flags[cell] ? "*" : " "), 11);
        }
        s << '\n';
    }
    s << pad("band", 10);
    for (std::size_t k = 0; k < n_lags; ++k) {
        s << pad(fixed(r.bands.upper[k]) + " ", 11);
    }
    s << '\n' << pad("", 10);
    for (std::size_t k = 0; k < n_lags; ++k) {
        s << pad(fixed(r.bands.lower[k]) + " ", 11);
    }
    s << "\nglobal order " << r.global << " (* outside the " << brief(r.bands.level)
      << " band)\n";
    for (const auto& w : r.warnings) s << "warning: " << w << '\n';
    return s.str();
}

std::string format_fit_table(const ParFit& fit) {
    std::ostringstream s;
    const std::size_t pmax = fit.max_order();
    s << pad("v", 4) << pad("p(v)", 6);
    for (std::size_t i = 1; i <= pmax; ++i) s << pad("phi_" + std::to_string(i) + "(v)", 12);
    s << '\n';
    for (std::size_t v = 1; v <= fit.period; ++v) {
        s << pad(std::to_string(v), 4) << pad(std::to_string(fit.orders[v - 1]), 6);
        for (std::size_t i = 1; i <= pmax; ++i) {
            s << pad(i <= fit.orders[v - 1] ? fixed(fit.coefficient(v, i)) : "-", 12);
        }
        s << '\n';
    }
    return s.str();
}

}  // namespace pfloc
