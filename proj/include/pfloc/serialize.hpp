#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "pfloc/flocmeasures.hpp"
#include "pfloc/heavytail.hpp"
#include "pfloc/inference.hpp"

// CSV and JSON forms of the library's result types. Every double is written
// with 17 significant digits, so reading back gives bit-identical values.
// NaN is written as "nan" in CSV and null in JSON.

namespace pfloc {

void to_json(nlohmann::json& j, const FlocParams& fp);
void from_json(const nlohmann::json& j, FlocParams& fp);

void to_json(nlohmann::json& j, const SeasonalLagTable& table);
void from_json(const nlohmann::json& j, SeasonalLagTable& table);

void to_json(nlohmann::json& j, const NullBands& bands);
void from_json(const nlohmann::json& j, NullBands& bands);

void to_json(nlohmann::json& j, const PortmanteauResult& result);
void from_json(const nlohmann::json& j, PortmanteauResult& result);

void to_json(nlohmann::json& j, const OrderResult& result);
void from_json(const nlohmann::json& j, OrderResult& result);

void to_json(nlohmann::json& j, const ParFit& fit);
void from_json(const nlohmann::json& j, ParFit& fit);

/// Columns v,h,value; one row per (season, lag), seasons outermost.
void write_table_csv(std::ostream& out, const SeasonalLagTable& table);
/// Columns v,h,value,lower,upper with the band of each lag repeated per season.
/// @throws ShapeError if the bands and the table use different lags.
void write_table_csv(std::ostream& out, const SeasonalLagTable& table, const NullBands& bands);

/**
 * Reads the v,h,value layout (extra lower/upper columns are ignored).
 * Period and lags come from the file; measure and exponents are not part of
 * the CSV and are set from the arguments.
 *
 * @throws IngestionError on malformed rows or an incomplete (v, h) grid.
 */
[[nodiscard]] SeasonalLagTable read_table_csv(std::istream& in, Measure measure,
                                              const FlocParams& fp);

/// Columns h,lower,upper.
void write_bands_csv(std::ostream& out, const NullBands& bands);
/// Reads lags and limits only; the remaining fields keep their defaults.
[[nodiscard]] NullBands read_bands_csv(std::istream& in);

/// Rows v; kappa_v; critical region (c, inf); decision.
[[nodiscard]] std::string format_portmanteau_table(const PortmanteauResult& result);
/// Rows v; identified order; measure values with outside-band entries starred.
[[nodiscard]] std::string format_order_table(const OrderResult& result);
/// Rows v; p(v); phi_1(v) .. phi_pmax(v).
[[nodiscard]] std::string format_fit_table(const ParFit& fit);

}  // namespace pfloc
