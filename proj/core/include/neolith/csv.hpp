#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace neolith::csv {

/// Comma-separated table with a header row. Fields may be double-quoted;
/// blank lines and lines starting with '#' are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line;  // 1-based source line of each row

    /// Column position, or -1.
    int find(std::string_view name) const;
    /// Column position; throws InputError naming `source` when absent.
    std::size_t require(std::string_view name, std::string_view source) const;
};

/// Throws InputError when the file cannot be opened or has no header.
Table read(const std::filesystem::path& path);
Table parse(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

std::optional<double> to_double(std::string_view text);
std::optional<long> to_long(std::string_view text);

/// Shortest representation that round-trips, "" for nullopt.
std::string format(double value);
std::string format(std::optional<double> value);

/// Writes rows joined by commas. Fields are written verbatim.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <class... Fields>
    void row(const Fields&... fields)
    {
        bool first = true;
        (write_field(first, fields), ...);
        out_ << '\n';
    }

private:
    void write_field(bool& first, std::string_view text);
    void write_field(bool& first, const std::string& text) { write_field(first, std::string_view(text)); }
    void write_field(bool& first, const char* text) { write_field(first, std::string_view(text)); }
    void write_field(bool& first, double value) { write_field(first, format(value)); }
    void write_field(bool& first, std::optional<double> value) { write_field(first, format(value)); }
    void write_field(bool& first, int value) { write_field(first, std::to_string(value)); }
    void write_field(bool& first, std::size_t value) { write_field(first, std::to_string(value)); }

    std::ostream& out_;
};

}  // namespace neolith::csv
