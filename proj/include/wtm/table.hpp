#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace wtm::io {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-oriented output table. '#' comment lines precede the header in CSV form.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// RFC-4180 CSV: fields containing comma, quote, CR or LF are quoted and quotes doubled.
std::string csv_escape(const std::string& field);
void write_csv(std::ostream& os, const Table& t);

/// {"comments": [...], "columns": [...], "rows": [{col: value, ...}, ...]}
nlohmann::json to_json(const Table& t);

}  // namespace wtm::io
