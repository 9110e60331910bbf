#pragma once

#include <string>
#include <string_view>

namespace tsad::core {

// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

// Quotes a CSV field when it contains a delimiter, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace tsad::core
