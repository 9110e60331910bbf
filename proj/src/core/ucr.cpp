#include "tsad/core/ucr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "tsad/core/format.hpp"
#include "tsad/error.hpp"

namespace tsad::core {

namespace {

bool is_decimal(std::string_view token) {
    return !token.empty() &&
           std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t parse_index(std::string_view token, const char* field, const std::string& file) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("UCR filename '" + file + "': field " + field + " ('" +
                         std::string(token) + "') is not a decimal integer");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_real(std::string_view token, double& out) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size() && std::isfinite(out);
}

}  // namespace

UcrFilename parse_ucr_filename(const std::filesystem::path& path) {
    const std::string file = path.filename().string();
    const std::string stem = path.stem().string();

    std::vector<std::string_view> tokens;
    std::string_view rest = stem;
    while (true) {
        const auto pos = rest.find('_');
        tokens.push_back(rest.substr(0, pos));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 1);
    }

    static constexpr const char* kFields[] = {"train_end", "anom_begin", "anom_end"};
    if (tokens.size() < 3) {
        throw ParseError("UCR filename '" + file +
                         "': expected <train_end>_<anom_begin>_<anom_end> before the extension");
    }
    const auto offset = tokens.size() - 3;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!is_decimal(tokens[offset + k])) {
            throw ParseError("UCR filename '" + file + "': field " + kFields[k] + " ('" +
                             std::string(tokens[offset + k]) + "') is not a decimal integer");
        }
    }

    UcrFilename out;
    out.name = stem;
    out.train_end = parse_index(tokens[offset], kFields[0], file);
    out.anomaly_begin = parse_index(tokens[offset + 1], kFields[1], file);
    out.anomaly_end = parse_index(tokens[offset + 2], kFields[2], file);
    if (out.train_end == 0) {
        throw ParseError("UCR filename '" + file + "': field train_end must be positive");
    }
    if (out.anomaly_begin > out.anomaly_end) {
        throw ParseError("UCR filename '" + file + "': field anom_begin (" +
                         std::to_string(out.anomaly_begin) + ") exceeds anom_end (" +
                         std::to_string(out.anomaly_end) + ")");
    }
    return out;
}

std::vector<double> parse_ucr_values(std::istream& in, const std::string& source) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (!trim(line).empty()) lines.emplace_back(number, line);
    }
    if (in.bad()) throw IoError("failed reading " + source);

    std::vector<double> values;
    if (lines.size() == 1) {
        // Single row: any mix of whitespace and commas separates fields.
        const auto& [number, row] = lines.front();
        std::string_view rest = row;
        std::size_t field = 0;
        while (!rest.empty()) {
            const auto start = rest.find_first_not_of(" \t\r\n,");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            const auto stop = rest.find_first_of(" \t\r\n,");
            const auto token = rest.substr(0, stop);
            ++field;
            double v = 0.0;
            if (!parse_real(token, v)) {
                throw ParseError(source + ": line " + std::to_string(number) + ", field " +
                                 std::to_string(field) + ": '" + std::string(token) +
                                 "' is not a finite real number");
            }
            values.push_back(v);
            if (stop == std::string_view::npos) break;
            rest.remove_prefix(stop);
        }
        return values;
    }

    values.reserve(lines.size());
    for (const auto& [number, text] : lines) {
        const auto token = trim(text);
        double v = 0.0;
        if (!parse_real(token, v)) {
            throw ParseError(source + ": line " + std::to_string(number) + ": '" +
                             std::string(token) + "' is not a finite real number");
        }
        values.push_back(v);
    }
    return values;
}

Dataset load_ucr(const std::filesystem::path& path) {
    const auto meta = parse_ucr_filename(path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    auto values = parse_ucr_values(in, path.string());
    const std::size_t n = values.size();

    if (meta.train_end >= n) {
        throw ParseError("UCR filename '" + path.filename().string() + "': field train_end (" +
                         std::to_string(meta.train_end) + ") must be below the series length (" +
                         std::to_string(n) + ")");
    }
    if (meta.anomaly_begin < meta.train_end || meta.anomaly_end >= n) {
        throw ValidationError("UCR file '" + path.filename().string() + "': anomaly range [" +
                              std::to_string(meta.anomaly_begin) + ", " +
                              std::to_string(meta.anomaly_end) +
                              "] is not inside the test region [" +
                              std::to_string(meta.train_end) + ", " + std::to_string(n - 1) + "]");
    }

    std::vector<double> train(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(meta.train_end));
    std::vector<double> test(values.begin() + static_cast<std::ptrdiff_t>(meta.train_end), values.end());
    Labels labels(test.size(), 0);
    for (std::size_t g = meta.anomaly_begin; g <= meta.anomaly_end; ++g) {
        labels[g - meta.train_end] = 1;
    }
    return Dataset(meta.name, TimeSeries(std::move(train)), TimeSeries(std::move(test)),
                   std::move(labels));
}

std::filesystem::path write_ucr(const Dataset& dataset, const std::filesystem::path& directory) {
    const auto& y = dataset.y_test;
    const auto first = std::find(y.begin(), y.end(), Label{1});
    if (first == y.end()) {
        throw ValidationError("write_ucr: dataset '" + dataset.name + "' has no labeled anomaly");
    }
    const auto last = std::find(first, y.end(), Label{0});
    if (std::find(last, y.end(), Label{1}) != y.end()) {
        throw ValidationError("write_ucr: dataset '" + dataset.name +
                              "' has more than one anomaly range");
    }
    const std::size_t train_end = dataset.x_train.size();
    const std::size_t begin = train_end + static_cast<std::size_t>(first - y.begin());
    const std::size_t end = train_end + static_cast<std::size_t>(last - y.begin()) - 1;

    const auto path = directory / (dataset.name + "_" + std::to_string(train_end) + "_" +
                                   std::to_string(begin) + "_" + std::to_string(end) + ".txt");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (double v : dataset.x_train) out << format_real(v) << '\n';
    for (double v : dataset.x_test) out << format_real(v) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
    return path;
}

}  // namespace tsad::core
