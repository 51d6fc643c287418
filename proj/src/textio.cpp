#include "sugarbait/textio.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sugarbait {

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string trim(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_trimmed(const std::string& text, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(text);
    while (std::getline(in, field, sep))
        fields.push_back(trim(field));
    if (!text.empty() && text.back() == sep)
        fields.emplace_back();
    return fields;
}

namespace {

double parse_number(const std::string& token, std::size_t line)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size())
        throw std::invalid_argument("line " + std::to_string(line) + ": not a number: '" + token + "'");
    return value;
}

} // namespace

std::vector<NumericRow> read_numeric_rows(std::istream& in)
{
    std::vector<NumericRow> rows;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (const auto hash = text.find('#'); hash != std::string::npos)
            text.erase(hash);
        for (auto& ch : text) {
            if (ch == ',')
                ch = ' ';
        }
        std::istringstream fields(text);
        NumericRow row{line, {}};
        std::string token;
        while (fields >> token)
            row.values.push_back(parse_number(token, line));
        if (!row.values.empty())
            rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name)
            return i;
    }
    throw std::out_of_range("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::column_values(const std::string& name) const
{
    const auto idx = column(name);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows)
        values.push_back(row[idx]);
    return values;
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (const auto& c : table.comments)
        out << '#' << c << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (text.empty())
            continue;
        if (text.front() == '#') {
            table.comments.push_back(text.substr(1));
            continue;
        }
        auto fields = split_trimmed(text, ',');
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw std::invalid_argument("CSV line " + std::to_string(line) + ": expected "
                                        + std::to_string(table.header.size()) + " fields, got "
                                        + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_number(f, line));
        table.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw std::invalid_argument("CSV has no header row");
    return table;
}

CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

} // namespace sugarbait
