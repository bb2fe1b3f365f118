#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtoa::cli {

/// Full-precision scientific notation (17 significant digits).
std::string format_real(double v);

/// One CSV table: header row plus rows of optional numbers (empty cell when absent).
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::optional<double>>>& rows);

/// JSON number, or null for non-finite or absent values.
nlohmann::json json_number(std::optional<double> v);

/// Writes text to the given path, or to stdout for an empty path.
void write_text(const std::string& path, const std::string& text);

}  // namespace qtoa::cli
