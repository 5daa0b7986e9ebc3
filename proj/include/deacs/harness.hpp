#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "deacs/dataset.hpp"
#include "deacs/folds.hpp"
#include "deacs/selector.hpp"
#include "deacs/table.hpp"

namespace deacs {

struct ClassifierKind {
    enum class Type { NaiveBayes, KNearest };
    Type type = Type::NaiveBayes;
    std::size_t k = 1;

    static ClassifierKind naive_bayes() { return {Type::NaiveBayes, 0}; }
    static ClassifierKind nearest(std::size_t k = 1);
    std::string name() const;  // "nbc" or "knn<k>"

    bool operator==(const ClassifierKind&) const = default;
};

/// Categorical naive Bayes with add-one smoothing on priors and on the
/// class-conditional value frequencies. Only classes seen in training are
/// predicted; log-posterior ties go to the lowest class code.
std::vector<Code> nbc_fit_predict(const Dataset& ds, std::span<const std::size_t> train,
                                  std::span<const std::size_t> test, std::span<const std::size_t> features);

/// k nearest neighbours under the mismatch count over `features`. Distance
/// ties prefer the lower sample index; vote ties the lower class code.
std::vector<Code> knn_predict(const Dataset& ds, std::span<const std::size_t> train, std::span<const std::size_t> test,
                              std::span<const std::size_t> features, std::size_t k);

std::vector<Code> predict(const ClassifierKind& kind, const Dataset& ds, std::span<const std::size_t> train,
                          std::span<const std::size_t> test, std::span<const std::size_t> features);

/// Longest prefix of a ranking that gets evaluated.
inline constexpr std::size_t kMaxCurveLength = 30;

struct ClassifierCurve {
    std::string classifier;
    std::vector<double> accuracy;  // index m-1: mean fold accuracy with the top m features

    bool operator==(const ClassifierCurve&) const = default;
};

struct AccuracyCurve {
    std::string algorithm;
    std::vector<std::size_t> features;  // ranking prefix the curve was computed on
    std::vector<double> mean_accuracy;  // averaged over classifiers
    std::vector<ClassifierCurve> per_classifier;
    std::size_t folds = 0;
    std::uint64_t seed = 0;

    bool operator==(const AccuracyCurve&) const = default;
};

/// Cross-validated accuracy of the top-m prefix of `trace` for every
/// m = 1..min(|trace|, 30). Fold accuracies are averaged per classifier,
/// then across classifiers. Work is spread over `threads` workers with an
/// ordered reduction, so results do not depend on the thread count.
AccuracyCurve evaluate_curve(const Dataset& ds, const SelectionTrace& trace, std::span<const ClassifierKind> classifiers,
                             const FoldAssignment& folds, std::size_t threads = 1);

using SelectorFn = std::function<SelectionTrace(const Dataset&)>;

/// Strict protocol: for every fold, cuts are fitted and features selected on
/// the training rows only, then the fold's test rows are classified. The
/// curve length is the shortest per-fold ranking (capped at 30).
AccuracyCurve evaluate_curve_per_fold(const RawTable& table, const SelectorFn& selector, const std::string& algorithm,
                                      std::span<const ClassifierKind> classifiers, const FoldAssignment& folds,
                                      std::size_t threads = 1);

/// Rows of `ds` in the given order, codes renumbered densely.
Dataset subset_rows(const Dataset& ds, std::span<const std::size_t> rows);

std::string report_to_json(std::span<const AccuracyCurve> curves);
std::vector<AccuracyCurve> report_from_json(const std::string& text);
/// Flat `algorithm,m,mean_accuracy` table with six decimals.
std::string report_to_csv(std::span<const AccuracyCurve> curves);

/// Writes both report files; throws IoError if either cannot be written.
void emit_report(std::span<const AccuracyCurve> curves, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path);

}  // namespace deacs
