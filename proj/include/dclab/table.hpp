/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace dclab {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rectangular table of typed cells with a provenance header.
class ResultTable {
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns);

    [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    /// Throws InvalidArgument unless the row has one cell per column.
    void add_row(std::vector<Cell> row);

    [[nodiscard]] const Cell& at(std::size_t row, const std::string& column) const;
    [[nodiscard]] double number(std::size_t row, const std::string& column) const;

    std::string name;
    std::uint64_t config_hash = 0;

    /// `# dclab <version> config_hash=<hex>` then RFC 4180 CSV.
    [[nodiscard]] std::string to_csv() const;
    /// {"name", "version", "config_hash", "columns", "records": [{column: value}]}.
    [[nodiscard]] std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

const char* version();

}  // namespace dclab
