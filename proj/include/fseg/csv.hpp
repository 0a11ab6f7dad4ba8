#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fseg::csv {

struct RowError {
    std::size_t record;  // 1-based data-record ordinal (header excluded)
    std::string reason;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // rows that matched the header arity
    std::vector<RowError> errors;                // skipped rows

    // -1 when the column is absent
    int column(const std::string& name) const;
};

// RFC-4180 style reader: quoted fields may contain commas, doubled quotes and
// newlines. Rows whose arity differs from the header are reported in
// Table::errors and skipped. Throws std::runtime_error when the file cannot
// be opened.
Table read_file(const std::filesystem::path& path);
Table read_stream(std::istream& in);

std::string escape_field(const std::string& field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace fseg::csv
