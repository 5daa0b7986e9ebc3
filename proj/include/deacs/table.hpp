#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deacs {

enum class ColumnKind { Numeric, Categorical };

/// One raw column. `cells` keeps the original text of every cell
/// (std::nullopt marks a missing cell); numeric columns additionally carry
/// the parsed values, with NaN in missing positions.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    std::vector<std::optional<std::string>> cells;
    std::vector<double> numbers;

    std::size_t size() const { return cells.size(); }
    bool is_missing(std::size_t row) const { return !cells[row].has_value(); }
};

/// Untyped tabular data as read from disk, with one designated class column.
class RawTable {
public:
    /// Throws ConfigError unless all columns have the same nonzero length and
    /// the class column is categorical.
    RawTable(std::vector<Column> columns, std::size_t class_column);

    std::size_t n_rows() const { return columns_.front().size(); }
    std::size_t n_columns() const { return columns_.size(); }
    std::span<const Column> columns() const { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }
    std::size_t class_column() const { return class_column_; }
    const Column& class_values() const { return columns_[class_column_]; }

    /// Index of the column named `name`, if any.
    std::optional<std::size_t> find(std::string_view name) const;

    /// Table restricted to `rows`, in the given order.
    RawTable subset(std::span<const std::size_t> rows) const;

private:
    std::vector<Column> columns_;
    std::size_t class_column_;
};

struct CsvOptions {
    bool has_header = true;
    /// Name of the class column; empty selects the last column. Without a
    /// header, columns are named col0, col1, ...
    std::string class_column;
    char delimiter = ',';
    /// Accept a class column whose cells all parse as numbers.
    bool class_categorical = false;
    /// Cell contents (after trimming) that denote a missing value.
    std::vector<std::string> missing_markers{"", "?"};
};

/// Parses CSV text: quoted fields, doubled-quote escapes, CRLF or LF line
/// ends. A column is numeric iff every non-missing cell parses as a finite
/// real number and at least one cell is present.
RawTable parse_csv(std::string_view text, const CsvOptions& options);

RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Low-level record splitter shared with other CSV consumers. Empty records
/// are dropped; each record carries its 1-based starting line number.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
    std::vector<bool> quoted;
};
std::vector<CsvRecord> split_csv(std::string_view text, char delimiter);

}  // namespace deacs
