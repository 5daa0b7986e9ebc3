#include "deacs/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "deacs/error.hpp"

namespace deacs {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

void sniff(Column& col) {
    std::vector<double> numbers(col.size(), std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (!col.cells[i]) continue;
        const auto v = parse_real(*col.cells[i]);
        if (!v) {
            col.kind = ColumnKind::Categorical;
            return;
        }
        numbers[i] = *v;
        any = true;
    }
    if (!any) {
        col.kind = ColumnKind::Categorical;
        return;
    }
    col.kind = ColumnKind::Numeric;
    col.numbers = std::move(numbers);
}

}  // namespace

RawTable::RawTable(std::vector<Column> columns, std::size_t class_column)
    : columns_(std::move(columns)), class_column_(class_column) {
    if (columns_.empty()) throw ConfigError("table has no columns");
    if (class_column_ >= columns_.size()) throw ConfigError("class column index out of range");
    const std::size_t n = columns_.front().size();
    if (n == 0) throw ConfigError("table has no rows");
    for (const auto& col : columns_) {
        if (col.size() != n) throw ConfigError("column '" + col.name + "' has inconsistent length");
        if (col.kind == ColumnKind::Numeric && col.numbers.size() != n)
            throw ConfigError("numeric column '" + col.name + "' lacks parsed values");
    }
    if (columns_[class_column_].kind != ColumnKind::Categorical)
        throw ConfigError("class column '" + columns_[class_column_].name + "' is not categorical");
}

std::optional<std::size_t> RawTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    return std::nullopt;
}

RawTable RawTable::subset(std::span<const std::size_t> rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& src : columns_) {
        Column c{src.name, src.kind, {}, {}};
        c.cells.reserve(rows.size());
        for (auto r : rows) c.cells.push_back(src.cells.at(r));
        if (src.kind == ColumnKind::Numeric) {
            c.numbers.reserve(rows.size());
            for (auto r : rows) c.numbers.push_back(src.numbers[r]);
        }
        cols.push_back(std::move(c));
    }
    return RawTable(std::move(cols), class_column_);
}

std::vector<CsvRecord> split_csv(std::string_view text, char delimiter) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    bool record_has_content = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(field_quoted ? field : std::string(trim(field)));
        current.quoted.push_back(field_quoted);
        if (field_quoted || !trim(field).empty()) record_has_content = true;
        field.clear();
        field_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (record_has_content || current.fields.size() > 1) records.push_back(std::move(current));
        current = CsvRecord{};
        current.line = line;
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && trim(field).empty()) {
            field.clear();
            in_quotes = true;
            field_quoted = true;
        } else if (ch == delimiter) {
            end_field();
        } else if (ch == '\n') {
            ++line;
            end_record();
        } else if (ch == '\r') {
            // swallowed; CRLF handled by the '\n' branch
        } else if (field_quoted) {
            if (ch != ' ' && ch != '\t')
                throw ParseError("line " + std::to_string(line) + ": text after closing quote");
        } else {
            field.push_back(ch);
        }
    }
    if (in_quotes) throw ParseError("line " + std::to_string(current.line) + ": unterminated quoted field");
    if (!field.empty() || field_quoted || !current.fields.empty()) end_record();
    return records;
}

RawTable parse_csv(std::string_view text, const CsvOptions& options) {
    auto records = split_csv(text, options.delimiter);
    if (records.empty()) throw ParseError("input contains no records");

    std::vector<std::string> names;
    std::size_t first_data = 0;
    const std::size_t width = records.front().fields.size();
    if (options.has_header) {
        names = records.front().fields;
        first_data = 1;
    } else {
        for (std::size_t c = 0; c < width; ++c) names.push_back("col" + std::to_string(c));
    }
    if (records.size() <= first_data) throw ParseError("input contains no data rows");

    std::vector<Column> columns(width);
    for (std::size_t c = 0; c < width; ++c) columns[c].name = names[c];

    for (std::size_t r = first_data; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row_number = r - first_data + 1;
        if (rec.fields.size() != width) {
            std::ostringstream msg;
            msg << "row " << row_number << " (line " << rec.line << "): expected " << width
                << " cells, found " << rec.fields.size();
            throw ParseError(msg.str());
        }
        for (std::size_t c = 0; c < width; ++c) {
            const auto& cell = rec.fields[c];
            const bool missing =
                !rec.quoted[c] && std::find(options.missing_markers.begin(), options.missing_markers.end(),
                                            cell) != options.missing_markers.end();
            columns[c].cells.push_back(missing ? std::nullopt : std::optional<std::string>(cell));
        }
    }

    std::size_t class_index = width - 1;
    if (!options.class_column.empty()) {
        const auto it = std::find(names.begin(), names.end(), options.class_column);
        if (it == names.end()) throw ConfigError("class column '" + options.class_column + "' not found");
        class_index = static_cast<std::size_t>(it - names.begin());
    }

    for (std::size_t c = 0; c < width; ++c) sniff(columns[c]);

    auto& cls = columns[class_index];
    if (cls.kind == ColumnKind::Numeric) {
        if (!options.class_categorical)
            throw ConfigError("class column '" + cls.name +
                              "' is numeric; flag it categorical to use it as a class");
        cls.kind = ColumnKind::Categorical;
        cls.numbers.clear();
    }
    return RawTable(std::move(columns), class_index);
}

RawTable load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_csv(buffer.str(), options);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace deacs
