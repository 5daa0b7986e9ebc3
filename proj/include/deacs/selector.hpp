#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deacs/dataset.hpp"

namespace deacs {

enum class StopReason { ReachedDelta, AllScoresZero };

const char* to_string(StopReason reason);

struct CandidateRecord {
    std::size_t feature = 0;
    /// Per-label R-scores for DEA-CS; the single criterion value otherwise.
    std::vector<double> scores;
    /// Super-efficiency of the candidate (DEA-CS rows that entered the LP).
    std::optional<double> efficiency;
};

struct IterationRecord {
    std::vector<CandidateRecord> candidates;
    std::optional<std::size_t> winner;
    double winning_score = 0.0;
    bool rule_of_thumb_violated = false;
};

struct SelectedFeature {
    std::size_t feature = 0;
    double score = 0.0;  // may be +inf for DEA-CS

    bool operator==(const SelectedFeature&) const = default;
};

/// Ordered result of a forward selection run. `delta` is the effective
/// target, min(requested, feature count).
struct SelectionTrace {
    std::string algorithm;
    std::size_t delta = 0;
    std::vector<SelectedFeature> selected;
    std::vector<IterationRecord> iterations;
    StopReason stop_reason = StopReason::ReachedDelta;

    std::vector<std::size_t> features() const;
};

/// Greedy selection on per-label conditional dependence scores ranked by
/// super-efficiency DEA. Each round scores every unselected feature against
/// the current conditioning partition, skips all-zero candidates, picks the
/// most super-efficient row and refines the partition by it. Stops early
/// with AllScoresZero when no candidate has a positive score.
SelectionTrace dea_cs_select(const Dataset& ds, std::size_t delta, std::size_t threads = 1);

/// Top features by I(F;C); ties by lower index.
SelectionTrace mim_select(const Dataset& ds, std::size_t delta);

/// Greedy max of I(F;C) - mean over selected s of I(F;F_s).
SelectionTrace mrmr_select(const Dataset& ds, std::size_t delta);

/// Greedy max of sum over selected s of I(F F_s; C) / H(F F_s C); the first
/// pick uses I(F;C) / H(F C). Terms with zero joint entropy contribute 0.
SelectionTrace disr_select(const Dataset& ds, std::size_t delta);

enum class Scaling { Constant, InverseSelectedCount };
enum class Normalization { Plain, JointEntropy };

/// Coefficients of J(F) = a I(F;C) - b sum_s I(F;F_s) + g sum_s I(F;F_s|C).
/// With InverseSelectedCount scaling the coefficient is divided by |S|.
/// JointEntropy normalization divides each per-s term (and the |S| = 0
/// relevance term) by H(F F_s C).
struct CriterionConfig {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    Scaling beta_scaling = Scaling::Constant;
    Scaling gamma_scaling = Scaling::Constant;
    Normalization normalization = Normalization::Plain;
};

SelectionTrace unified_select(const Dataset& ds, std::size_t delta, const CriterionConfig& cfg);

struct ReliefOptions {
    std::size_t neighbors = 5;
    std::size_t sampled_instances = 30;
    std::uint64_t seed = 0;
};

/// ReliefF weights under the per-feature 0/1 mismatch distance.
std::vector<double> relieff_weights(const Dataset& ds, const ReliefOptions& options);

/// Features ranked by ReliefF weight; ties by lower index.
SelectionTrace relieff_select(const Dataset& ds, std::size_t delta, const ReliefOptions& options);

/// Names accepted by run_selector, in display order.
const std::vector<std::string>& algorithm_names();

struct SelectorParams {
    CriterionConfig criterion;  // unified only
    ReliefOptions relieff;      // relieff only
};

/// Dispatches on an algorithm name ("dea-cs", "mim", "mrmr", "disr",
/// "unified", "relieff"); throws ConfigError for anything else.
SelectionTrace run_selector(const std::string& algorithm, const Dataset& ds, std::size_t delta,
                            const SelectorParams& params, std::size_t threads = 1);

/// JSON document for a trace; feature names come from `ds`. Infinite
/// scores are written as the string "inf".
std::string trace_to_json(const SelectionTrace& trace, const Dataset& ds);
SelectionTrace trace_from_json(const std::string& text);

}  // namespace deacs
