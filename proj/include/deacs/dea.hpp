#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deacs/infotheory.hpp"
#include "deacs/lp.hpp"

namespace deacs::dea {

/// Row-major n x k matrix of nonnegative reals (rows are DMUs).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return std::span<const double>(data_).subspan(r * cols_, cols_); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// DMUs described by outputs and either an explicit input matrix or a single
/// constant input shared by every DMU (the constant cancels, so it is 1).
class DeaInstance {
public:
    explicit DeaInstance(Matrix outputs, std::optional<Matrix> inputs = std::nullopt,
                         std::vector<std::string> labels = {});

    std::size_t n_dmus() const { return outputs_.rows(); }
    std::size_t n_outputs() const { return outputs_.cols(); }
    std::size_t n_inputs() const { return inputs_ ? inputs_->cols() : 1; }
    double output(std::size_t dmu, std::size_t r) const { return outputs_(dmu, r); }
    double input(std::size_t dmu, std::size_t i) const { return inputs_ ? (*inputs_)(dmu, i) : 1.0; }
    const std::string& label(std::size_t dmu) const { return labels_.at(dmu); }

private:
    Matrix outputs_;
    std::optional<Matrix> inputs_;
    std::vector<std::string> labels_;
};

enum class Basis { Ccr, SuperEfficiency };

struct EfficiencyScore {
    double value = 0.0;  // +inf when no peer combination covers the DMU
    Basis basis = Basis::Ccr;

    bool infinite() const { return value == std::numeric_limits<double>::infinity(); }
};

/// Comparison slack for efficiency scores, absorbing simplex noise.
inline constexpr double kScoreTolerance = 1e-7;

/// Input-oriented CCR envelopment LP for DMU p. Variables: theta, then one
/// lambda per DMU (DMU p's own lambda omitted when `exclude_self`).
lp::LinearProgram envelopment_program(const DeaInstance& inst, std::size_t p, bool exclude_self);

/// CCR efficiency in [0, 1]. DMU p needs at least one positive output.
EfficiencyScore ccr_score(const DeaInstance& inst, std::size_t p);

/// Super-efficiency: CCR with DMU p removed from the reference set. An
/// infeasible program (no peer mix reaches p's outputs) scores +inf.
EfficiencyScore super_efficiency_score(const DeaInstance& inst, std::size_t p);

/// Candidate rows as DMUs with a constant input.
DeaInstance feature_instance(const ScoreMatrix& scores);

/// Super-efficiency of candidate row p against the other candidates, using
/// only their per-label scores as outputs. A lone candidate scores +inf.
EfficiencyScore feature_eval_score(const ScoreMatrix& scores, std::size_t p);

struct SweepResult {
    std::size_t row = 0;
    EfficiencyScore best;
    std::vector<EfficiencyScore> scores;  // one per row
};

/// Scores every row and returns the maximum. Ties within kScoreTolerance go
/// to the lowest row; +inf beats any finite score, and ties among +inf rows
/// go to the larger entry sum, then the lowest row. Per-row solves run on up
/// to `threads` workers without affecting the result.
SweepResult sup_dea_max(const ScoreMatrix& scores, std::size_t threads = 1);

/// True when n_dmus < 3 * (n_inputs + n_outputs), the usual lower bound on
/// DMU count for a discriminating DEA model.
bool breaks_rule_of_thumb(std::size_t n_dmus, std::size_t n_inputs, std::size_t n_outputs);

}  // namespace deacs::dea
