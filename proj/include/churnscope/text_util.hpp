#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace churnscope {

/// Replaces invalid UTF-8 byte sequences with U+FFFD so downstream lexing
/// never has to abort on a bad file.
std::string sanitize_utf8(const std::string& bytes);

/// Splits on '\n'; a trailing '\r' is stripped from each line. The final
/// line is included even without a terminator.
std::vector<std::string> split_lines(const std::string& text);

bool is_probably_binary(const std::string& bytes);

// --- UTC calendar days ------------------------------------------------
//
// All date math is UTC; days are uniform 86400 s, so day arithmetic is
// plain integer arithmetic on the day number.

int64_t unix_to_day_number(int64_t unix_seconds);

/// "YYYY-MM-DD" for the UTC calendar day containing the timestamp.
std::string day_string_from_unix(int64_t unix_seconds);

std::string day_string_from_day_number(int64_t day_number);

/// Parses "YYYY-MM-DD"; returns the day number, or nullopt on bad input.
std::optional<int64_t> day_number_from_string(const std::string& day);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string iso8601_from_unix(int64_t unix_seconds);

}  // namespace churnscope
