#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "deacs/table.hpp"
#include "deacs/types.hpp"

namespace deacs {

/// Bin boundaries for one numeric column. A value v falls in bin
/// count(thresholds < v); no thresholds means a single bin.
struct CutPoints {
    std::string feature;
    std::vector<double> thresholds;

    bool operator==(const CutPoints&) const = default;
};

/// Supervised entropy/MDL discretization (recursive binary splitting with
/// the minimum-description-length stopping test). Candidate cuts are the
/// midpoints at class boundaries of the sorted values; NaN entries are
/// ignored. Returns strictly increasing thresholds.
std::vector<double> mdl_discretize(std::span<const double> values, std::span<const Code> classes);

/// Fits MDL cuts for every numeric column of `table` against its class
/// column. Columns are independent and may be fitted on `threads` workers;
/// the result does not depend on the thread count.
std::vector<CutPoints> fit_cuts(const RawTable& table, std::size_t threads = 1);

std::string cuts_to_json(std::span<const CutPoints> cuts);
std::vector<CutPoints> cuts_from_json(const std::string& text);

void write_cuts(const std::filesystem::path& path, std::span<const CutPoints> cuts);
std::vector<CutPoints> read_cuts(const std::filesystem::path& path);

}  // namespace deacs
