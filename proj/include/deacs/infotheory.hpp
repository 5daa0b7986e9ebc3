#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "deacs/types.hpp"

namespace deacs {

class Dataset;

/// Grouping of sample indices by the joint value of a conditioning feature
/// set. Blocks are disjoint, cover every sample, hold each conditioning
/// feature constant, and differ from each other in at least one of them.
///
/// Stored block-major: order() lists every sample index, and block j is the
/// slice order()[offsets()[j], offsets()[j+1]).
class BlockPartition {
public:
    /// Empty conditioning set: one block holding 0..n_samples-1.
    explicit BlockPartition(std::size_t n_samples);

    std::size_t n_samples() const { return order_.size(); }
    std::size_t n_blocks() const { return offsets_.size() - 1; }
    std::span<const std::size_t> block(std::size_t j) const {
        return std::span<const std::size_t>(order_).subspan(offsets_[j], offsets_[j + 1] - offsets_[j]);
    }
    std::span<const std::size_t> order() const { return order_; }
    std::span<const std::size_t> offsets() const { return offsets_; }
    std::span<const std::size_t> conditioning_features() const { return features_; }

private:
    friend BlockPartition refine_partition(const BlockPartition&, std::span<const Code>, std::size_t);
    BlockPartition() = default;

    std::vector<std::size_t> order_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> features_;
};

/// Splits every block by the value of `feature` (a counting pass per block).
/// Sub-blocks follow parent-block order, then ascending code; sample order
/// within a sub-block is inherited from the parent. Throws ConfigError if
/// `feature_index` is already conditioned on or the column length differs.
BlockPartition refine_partition(const BlockPartition& part, std::span<const Code> feature,
                                std::size_t feature_index);

/// Partition by a whole conditioning set, built by successive refinement.
BlockPartition partition_by(const Dataset& ds, std::span<const std::size_t> features);

/// Empirical (plug-in) entropy in bits. Codes must lie in [0, domain).
double entropy(std::span<const Code> codes, std::size_t domain);

/// Plug-in mutual information in bits, clamped at zero.
double mutual_information(std::span<const Code> x, std::span<const Code> y);

/// Mutual information with probabilities estimated on the samples of
/// `block` only. An empty block yields 0.
double local_mi(std::span<const Code> x, std::span<const Code> y, std::span<const std::size_t> block);

/// I(X;Y|S) as the block-size-weighted sum of local MI over the blocks of
/// the partition induced by S.
double conditional_mi(std::span<const Code> x, std::span<const Code> y, const BlockPartition& part);

/// 1 where the class equals `label`, 0 elsewhere.
std::vector<Code> binary_collapse(std::span<const Code> classes, std::size_t n_classes, std::size_t label);

/// Per-label KL terms Div(F;c) = sum_f p(f|c) log2(p(f|c)/p(f)); labels with
/// no samples get 0. Weighted by p(c) they sum to I(F;C).
std::vector<double> label_divergences(std::span<const Code> feature, std::span<const Code> classes,
                                      std::size_t n_classes);

/// Dense joint code of two columns (first-appearance order of the pairs).
std::vector<Code> join_codes(std::span<const Code> a, std::span<const Code> b);

/// Per-class-label conditional dependence of one feature given S.
struct ScoreVector {
    std::size_t feature = 0;
    std::vector<double> values;  // one entry per class label, bits

    double total() const;
};

/// R(F; c_i | S) for every label i: the conditional MI between F and the
/// one-vs-rest collapse of the class on label i, given the partition.
/// All labels are scored in a single pass over the samples.
ScoreVector r_scores(std::size_t feature_index, std::span<const Code> feature, std::span<const Code> classes,
                     std::size_t n_classes, const BlockPartition& part);

ScoreVector r_scores(const Dataset& ds, std::size_t feature_index, const BlockPartition& part);

/// Negative estimates within this distance of zero are rounding residue.
inline constexpr double kNegativeResidue = 1e-9;

/// Clamps rounding residue to zero; anything more negative is an
/// InternalError.
double clamp_nonnegative(double value);

}  // namespace deacs

namespace deacs {

/// Candidate score vectors for one selection round (the DEA output matrix).
/// Every row has one entry per class label; all-zero rows are never stored.
class ScoreMatrix {
public:
    explicit ScoreMatrix(std::size_t n_labels) : n_labels_(n_labels) {}

    /// Appends `row` unless its entries sum to zero; returns whether it was
    /// kept. Throws ConfigError on a wrong width or a negative entry.
    bool add(ScoreVector row);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_labels() const { return n_labels_; }
    bool empty() const { return rows_.empty(); }
    const ScoreVector& row(std::size_t p) const { return rows_.at(p); }
    std::span<const ScoreVector> rows() const { return rows_; }

private:
    std::size_t n_labels_;
    std::vector<ScoreVector> rows_;
};

}  // namespace deacs
