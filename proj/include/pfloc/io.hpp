#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfloc::io {

/// Shortest-safe decimal: 17 significant digits, round-trips every double.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] std::string_view trim(std::string_view s) noexcept;

/// Splits one CSV record on commas, trimming blanks and surrounding double quotes.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

/// Strict decimal parse of the whole (trimmed) field; nullopt otherwise.
[[nodiscard]] std::optional<double> parse_double(std::string_view field) noexcept;

/// 64-bit FNV-1a; stable across platforms, used for cache file names.
[[nodiscard]] std::uint64_t fnv1a(std::string_view text) noexcept;

}  // namespace pfloc::io
