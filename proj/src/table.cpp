#include "wtm/table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace wtm::io {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match table columns");
    rows.push_back(std::move(row));
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& c : t.comments) os << "# " << c << "\r\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        os << "\r\n";
    }
}

nlohmann::json to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        // JSON has no inf/nan; carry them as strings.
                        if (std::isfinite(v))
                            obj[t.columns[i]] = v;
                        else
                            obj[t.columns[i]] = format_double(v);
                    } else {
                        obj[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return {{"comments", t.comments}, {"columns", t.columns}, {"rows", rows}};
}

}  // namespace wtm::io
