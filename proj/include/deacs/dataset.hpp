#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deacs/discretize.hpp"
#include "deacs/table.hpp"
#include "deacs/types.hpp"

namespace deacs {

/// Discrete sample table: integer-coded feature columns plus a class column.
/// Immutable once built, so it can be shared freely between threads.
///
/// Feature codes are always dense: the constructor renumbers each column's
/// observed codes to 0..k-1 preserving their order, so cardinality(f) equals
/// the number of distinct values actually present.
class Dataset {
public:
    Dataset(std::vector<std::vector<Code>> features, std::vector<std::string> feature_names,
            std::vector<Code> classes, std::vector<std::string> label_names);

    std::size_t n_samples() const { return classes_.size(); }
    std::size_t n_features() const { return features_.size(); }
    std::size_t n_classes() const { return label_names_.size(); }

    std::span<const Code> feature(std::size_t f) const { return features_.at(f); }
    std::size_t cardinality(std::size_t f) const { return cardinalities_.at(f); }
    std::span<const std::size_t> cardinalities() const { return cardinalities_; }
    std::span<const Code> classes() const { return classes_; }

    const std::string& feature_name(std::size_t f) const { return feature_names_.at(f); }
    std::span<const std::string> feature_names() const { return feature_names_; }
    std::span<const std::string> label_names() const { return label_names_; }

    bool operator==(const Dataset&) const = default;

private:
    std::vector<std::vector<Code>> features_;
    std::vector<std::size_t> cardinalities_;
    std::vector<std::string> feature_names_;
    std::vector<Code> classes_;
    std::vector<std::string> label_names_;
};

struct CategoricalCodes {
    std::vector<Code> codes;
    /// Name per code; a trailing "?" entry when the column has missing cells.
    std::vector<std::string> names;
    bool has_missing = false;
};

/// Dense codes in first-appearance order; missing cells share one extra code
/// placed after every observed value.
CategoricalCodes encode_categorical(const Column& column);

/// Bin index of `value`: the number of thresholds strictly below it.
Code bin_of(double value, std::span<const double> thresholds);

/// Builds a Dataset from raw data. Every numeric feature column must have an
/// entry in `cuts` (matched by name). Missing feature cells get a dedicated
/// code; a missing class cell is a ParseError.
Dataset encode(const RawTable& table, std::span<const CutPoints> cuts);

}  // namespace deacs
