#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fewscast::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes; does not
/// support embedded newlines.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  ///< 1-based source line of each row

    /// Index of a header column; throws DataError if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] bool has_column(std::string_view name) const;
};

/// Reads a headed CSV file. Rows whose field count differs from the header are a DataError.
Table read(const std::filesystem::path& path);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& field(std::string_view value);
    Writer& field(double value);
    Writer& field(long long value);
    Writer& field(int value) { return field(static_cast<long long>(value)); }
    Writer& field(std::size_t value) { return field(static_cast<long long>(value)); }
    void end_row();

    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    bool first_ = true;
};

/// Shortest round-trippable decimal form ("%.17g" trimmed), "nan" for NaN.
std::string format_double(double value);

}  // namespace fewscast::csv
