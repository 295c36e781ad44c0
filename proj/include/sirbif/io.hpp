#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sirbif {

// 17 significant digits, enough to round-trip any double.
std::string format_number(double v);
double parse_number(const std::string& text);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws InvalidInput when absent
    bool operator==(const Table&) const = default;
};

// Comma separated, LF line endings, header row first.  Cells may not
// contain commas, quotes or line breaks.
std::string to_csv(const Table& t);
Table parse_csv(const std::string& text);

// JSON text with every floating-point value printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace sirbif
