#include "volsel/csv.hpp"

#include "volsel/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace volsel {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_number(std::string_view field) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

} // namespace

RealMatrix parse_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    bool first_content_line = true;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find('\n', pos);
        const std::string_view line =
            trim(text.substr(pos, end == std::string_view::npos ? text.npos : end - pos));
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        std::vector<double> values;
        values.reserve(fields.size());
        std::optional<std::size_t> bad_column;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_number(fields[c]);
            if (!v) {
                bad_column = c;
                break;
            }
            values.push_back(*v);
        }
        if (first_content_line) {
            first_content_line = false;
            if (bad_column) continue;  // header
        }
        if (bad_column) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ", column " +
                                                   std::to_string(*bad_column + 1) + ": '" +
                                                   std::string(fields[*bad_column]) + "' is not a number");
        }
        for (std::size_t c = 0; c < values.size(); ++c) {
            if (!std::isfinite(values[c])) {
                throw Error(ErrorKind::NonFinite, "line " + std::to_string(line_no) + ", column " +
                                                      std::to_string(c + 1) + " is not finite");
            }
        }
        if (!rows.empty() && values.size() != rows.front().size()) {
            throw Error(ErrorKind::NonRectangular, "line " + std::to_string(line_no) + " has " +
                                                       std::to_string(values.size()) + " fields, expected " +
                                                       std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw Error(ErrorKind::ParseError, "no numeric rows");
    return RealMatrix::from_rows(rows);
}

RealMatrix ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

} // namespace volsel
