#include "deacs/dataset.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "deacs/error.hpp"

namespace deacs {

namespace {

// Renumbers codes to 0..k-1 keeping their relative order; returns k.
std::size_t compact(std::vector<Code>& codes) {
    if (codes.empty()) return 0;
    const Code max_code = *std::max_element(codes.begin(), codes.end());
    std::vector<Code> remap(static_cast<std::size_t>(max_code) + 1, 0);
    for (auto c : codes) remap[c] = 1;
    Code next = 0;
    for (auto& r : remap) {
        if (r) r = next++;
    }
    for (auto& c : codes) c = remap[c];
    return next;
}

}  // namespace

Dataset::Dataset(std::vector<std::vector<Code>> features, std::vector<std::string> feature_names,
                 std::vector<Code> classes, std::vector<std::string> label_names)
    : features_(std::move(features)),
      feature_names_(std::move(feature_names)),
      classes_(std::move(classes)),
      label_names_(std::move(label_names)) {
    if (classes_.empty()) throw ConfigError("dataset has no samples");
    if (label_names_.empty()) throw ConfigError("dataset has no class labels");
    if (feature_names_.empty()) {
        for (std::size_t f = 0; f < features_.size(); ++f) feature_names_.push_back("f" + std::to_string(f));
    }
    if (feature_names_.size() != features_.size()) throw ConfigError("feature name count mismatch");
    for (auto c : classes_)
        if (c >= label_names_.size()) throw ConfigError("class code out of range");
    cardinalities_.reserve(features_.size());
    for (auto& col : features_) {
        if (col.size() != classes_.size()) throw ConfigError("feature column length mismatch");
        cardinalities_.push_back(compact(col));
    }
}

CategoricalCodes encode_categorical(const Column& column) {
    CategoricalCodes out;
    out.codes.resize(column.size());
    std::unordered_map<std::string, Code> seen;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (!column.cells[i]) continue;
        const auto [it, inserted] = seen.try_emplace(*column.cells[i], static_cast<Code>(out.names.size()));
        if (inserted) out.names.push_back(*column.cells[i]);
        out.codes[i] = it->second;
    }
    const auto missing_code = static_cast<Code>(out.names.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (!column.cells[i]) {
            out.codes[i] = missing_code;
            out.has_missing = true;
        }
    }
    if (out.has_missing) out.names.emplace_back("?");
    return out;
}

Code bin_of(double value, std::span<const double> thresholds) {
    return static_cast<Code>(std::lower_bound(thresholds.begin(), thresholds.end(), value) - thresholds.begin());
}

Dataset encode(const RawTable& table, std::span<const CutPoints> cuts) {
    std::map<std::string, const CutPoints*, std::less<>> by_name;
    for (const auto& c : cuts) by_name[c.feature] = &c;

    std::vector<std::vector<Code>> features;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < table.n_columns(); ++c) {
        if (c == table.class_column()) continue;
        const auto& col = table.column(c);
        names.push_back(col.name);
        if (col.kind == ColumnKind::Categorical) {
            features.push_back(encode_categorical(col).codes);
            continue;
        }
        const auto it = by_name.find(col.name);
        if (it == by_name.end()) throw ConfigError("no cut points for numeric column '" + col.name + "'");
        const auto& thresholds = it->second->thresholds;
        const auto missing_code = static_cast<Code>(thresholds.size() + 1);
        std::vector<Code> codes(col.size());
        for (std::size_t i = 0; i < col.size(); ++i)
            codes[i] = col.is_missing(i) ? missing_code : bin_of(col.numbers[i], thresholds);
        features.push_back(std::move(codes));
    }

    const auto& cls = table.class_values();
    for (std::size_t i = 0; i < cls.size(); ++i)
        if (cls.is_missing(i))
            throw ParseError("row " + std::to_string(i + 1) + ": missing class value in column '" + cls.name + "'");
    auto labels = encode_categorical(cls);
    return Dataset(std::move(features), std::move(names), std::move(labels.codes), std::move(labels.names));
}

}  // namespace deacs
