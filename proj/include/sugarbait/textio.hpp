#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sugarbait {

/// "%.17g": shortest form that round-trips every double.
std::string format_double(double value);

struct NumericRow {
    std::size_t line = 0; // 1-based source line
    std::vector<double> values;
};

/// Whitespace- or comma-separated numeric rows; blank lines and '#' comments skipped.
std::vector<NumericRow> read_numeric_rows(std::istream& in);

/// CSV dialect: comma-separated, '#'-prefixed comment lines, one header row, LF endings.
struct CsvTable {
    std::vector<std::string> comments; // without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const; // throws if absent
    std::vector<double> column_values(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Splits on `sep` and trims surrounding whitespace from each field.
std::vector<std::string> split_trimmed(const std::string& text, char sep);
std::string trim(const std::string& text);

} // namespace sugarbait
