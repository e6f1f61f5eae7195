#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace coordnet {

using Timestamp = std::chrono::sys_seconds;

/// Parses ISO-8601 UTC instants: `YYYY-MM-DDTHH:MM:SS` followed by `Z` or
/// `+00:00`, optional fractional seconds (truncated). A space is accepted in
/// place of `T`.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp ts);

/// `YYYY-MM` bucket label.
std::string month_label(Timestamp ts);

int year_of(Timestamp ts);

}  // namespace coordnet
