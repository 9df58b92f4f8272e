#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trl {

struct CsvTable {
    std::string origin;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name, -1 when absent.
    int col(const std::string& name) const;
    // Same, but raises SchemaError naming the file when the column is missing.
    int require_col(const std::string& name) const;
};

// RFC 4180 flavoured: quoted fields, embedded commas/quotes, CRLF tolerant.
CsvTable parse_csv(const std::string& text, const std::string& origin);
CsvTable read_csv(const std::string& path);

std::string csv_escape(const std::string& field);

// Doubles are printed with the shortest digits that round-trip, so output
// files are byte-stable and loaders recover the exact value.
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& where);
std::int64_t parse_int(const std::string& s, const std::string& where);

}  // namespace trl
