/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/table.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dclab/config.hpp"
#include "dclab/error.hpp"

namespace dclab {

namespace {

std::string number_text(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string cell_text(const Cell& c)
{
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return number_text(*d);
    return std::get<std::string>(c);
}

}  // namespace

const char* version() { return "0.1.0"; }

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row)
{
    require(row.size() == columns_.size(), ErrorCode::InvalidArgument,
            "table row has " + std::to_string(row.size()) + " cells for " + std::to_string(columns_.size()) +
                " columns");
    rows_.push_back(std::move(row));
}

const Cell& ResultTable::at(std::size_t row, const std::string& column) const
{
    require(row < rows_.size(), ErrorCode::OutOfRange, "table row out of range");
    for (std::size_t c = 0; c < columns_.size(); ++c)
        if (columns_[c] == column) return rows_[row][c];
    raise(ErrorCode::InvalidArgument, "no column named '" + column + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const
{
    const Cell& c = at(row, column);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    raise(ErrorCode::InvalidArgument, "column '" + column + "' is not numeric");
}

std::string ResultTable::to_csv() const
{
    std::string out = std::string("# dclab ") + version() + " config_hash=" + hash_hex(config_hash) + "\r\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + csv_field(columns_[c]);
    out += "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(cell_text(row[c]));
        out += "\r\n";
    }
    return out;
}

std::string ResultTable::to_json() const
{
    nlohmann::ordered_json doc;
    doc["name"] = name;
    doc["version"] = version();
    doc["config_hash"] = hash_hex(config_hash);
    doc["columns"] = columns_;
    auto records = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json rec;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (const auto* i = std::get_if<std::int64_t>(&row[c]))
                rec[columns_[c]] = *i;
            else if (const auto* d = std::get_if<double>(&row[c]))
                rec[columns_[c]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(number_text(*d));
            else
                rec[columns_[c]] = std::get<std::string>(row[c]);
        }
        records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    return doc.dump(2) + "\n";
}

}  // namespace dclab
