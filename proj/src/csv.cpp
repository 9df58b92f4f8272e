#include "trl/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trl/errors.hpp"

namespace trl {

int CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_col(const std::string& name) const {
    const int i = col(name);
    if (i < 0) fail(ErrorCode::SchemaError, origin + ": missing column '" + name + "'");
    return i;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
    CsvTable table;
    table.origin = origin;

    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_char = false;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = record;
        } else {
            if (record.size() != table.header.size())
                fail(ErrorCode::SchemaError,
                     origin + ": row " + std::to_string(table.rows.size() + 2) + " has " +
                         std::to_string(record.size()) + " fields, header has " +
                         std::to_string(table.header.size()));
            table.rows.push_back(record);
        }
        record.clear();
        any_char = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            any_char = true;
        } else if (c == '"') {
            in_quotes = true;
            any_char = true;
        } else if (c == ',') {
            end_field();
            any_char = true;
        } else if (c == '\n') {
            if (any_char || !record.empty() || !field.empty()) end_record();
        } else if (c == '\r') {
            // swallowed; the following \n (or end of text) closes the record
        } else {
            field += c;
            any_char = true;
        }
    }
    if (in_quotes) fail(ErrorCode::SchemaError, origin + ": unterminated quoted field");
    if (any_char || !record.empty() || !field.empty()) end_record();
    if (table.header.empty()) fail(ErrorCode::SchemaError, origin + ": empty file");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::MissingFile, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

std::string csv_escape(const std::string& field) {
    // An empty field is quoted so a one-column row never becomes a blank
    // line, which the parser would drop.
    if (field.empty()) return "\"\"";
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail(ErrorCode::SchemaError, where + ": bad number '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
    std::int64_t v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail(ErrorCode::SchemaError, where + ": bad integer '" + s + "'");
    return v;
}

}  // namespace trl
