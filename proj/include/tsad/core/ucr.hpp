#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "tsad/core/time_series.hpp"

namespace tsad::core {

// Split and anomaly range encoded in a UCR anomaly-archive filename, e.g.
// `002_UCR_Anomaly_DISTORTED2sddb40_35000_56600_56900.txt`. Indices are
// 0-based positions into the full series; the anomaly range is inclusive.
struct UcrFilename {
    std::string name;  // filename stem
    std::size_t train_end = 0;
    std::size_t anomaly_begin = 0;
    std::size_t anomaly_end = 0;
};

UcrFilename parse_ucr_filename(const std::filesystem::path& path);

// One real per line, or a single whitespace/comma separated row. Blank lines
// are skipped. `source` only labels error messages.
std::vector<double> parse_ucr_values(std::istream& in, const std::string& source);

Dataset load_ucr(const std::filesystem::path& path);

// Writes train+test back out as a UCR file named after the dataset and its
// single contiguous anomaly range. Returns the written path.
std::filesystem::path write_ucr(const Dataset& dataset, const std::filesystem::path& directory);

}  // namespace tsad::core
