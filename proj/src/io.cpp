#include "sirbif/io.hpp"

#include "sirbif/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sirbif {

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& text)
{
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() ||
        (errno == ERANGE && std::isinf(v)))
        throw InvalidInput("not a number: '" + text + "'");
    return v;
}

std::size_t Table::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InvalidInput("table has no column '" + name + "'");
}

namespace {

void check_cell(const std::string& cell)
{
    if (cell.find_first_of(",\"\r\n") != std::string::npos)
        throw InvalidInput("CSV cell contains a reserved character: '" + cell + "'");
}

void append_row(std::string& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        check_cell(cells[i]);
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

std::string to_csv(const Table& t)
{
    std::string out;
    append_row(out, t.header);
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw InvalidInput("CSV row width does not match the header");
        append_row(out, row);
    }
    return out;
}

Table parse_csv(const std::string& text)
{
    Table t;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) throw InvalidInput("CSV does not end with a line feed");
        const std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.find('\r') != std::string::npos) throw InvalidInput("CSV contains a carriage return");
        auto cells = split_row(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size()) throw InvalidInput("CSV row width does not match the header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw InvalidInput("CSV has no header row");
    return t;
}

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out)
{
    const auto pad = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            pad(depth + 1);
            out += nlohmann::json(it.key()).dump();
            out += indent >= 0 ? ": " : ":";
            emit(it.value(), indent, depth + 1, out);
        }
        pad(depth);
        out += '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            pad(depth + 1);
            emit(v, indent, depth + 1, out);
        }
        pad(depth);
        out += ']';
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        // JSON has no literal for non-finite values.
        out += std::isfinite(v) ? format_number(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent)
{
    std::string out;
    emit(j, indent, 0, out);
    out += '\n';
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace sirbif
