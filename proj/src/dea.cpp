#include "deacs/dea.hpp"

#include <cmath>
#include <string>

#include "deacs/error.hpp"
#include "deacs/parallel.hpp"

namespace deacs::dea {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw ConfigError("matrix data size does not match its shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ConfigError("ragged matrix rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

DeaInstance::DeaInstance(Matrix outputs, std::optional<Matrix> inputs, std::vector<std::string> labels)
    : outputs_(std::move(outputs)), inputs_(std::move(inputs)), labels_(std::move(labels)) {
    if (outputs_.rows() == 0) throw ConfigError("DEA instance needs at least one DMU");
    if (outputs_.cols() == 0) throw ConfigError("DEA instance needs at least one output");
    if (inputs_ && (inputs_->rows() != outputs_.rows() || inputs_->cols() == 0))
        throw ConfigError("input matrix shape does not match the outputs");
    auto check = [](const Matrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (auto v : m.row(r))
                if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("DEA data must be finite and nonnegative");
    };
    check(outputs_);
    if (inputs_) check(*inputs_);
    if (labels_.empty()) {
        for (std::size_t j = 0; j < n_dmus(); ++j) labels_.push_back(std::to_string(j));
    }
    if (labels_.size() != n_dmus()) throw ConfigError("DMU label count mismatch");
}

lp::LinearProgram envelopment_program(const DeaInstance& inst, std::size_t p, bool exclude_self) {
    const std::size_t n = inst.n_dmus();
    std::vector<std::size_t> peers;
    for (std::size_t j = 0; j < n; ++j)
        if (!exclude_self || j != p) peers.push_back(j);

    const std::size_t vars = 1 + peers.size();
    std::vector<double> objective(vars, 0.0);
    objective[0] = 1.0;
    lp::LinearProgram program(std::move(objective));
    for (std::size_t i = 0; i < inst.n_inputs(); ++i) {
        std::vector<double> a(vars, 0.0);
        a[0] = -inst.input(p, i);
        for (std::size_t k = 0; k < peers.size(); ++k) a[k + 1] = inst.input(peers[k], i);
        program.add_constraint(std::move(a), lp::Relation::LessEqual, 0.0);
    }
    for (std::size_t r = 0; r < inst.n_outputs(); ++r) {
        std::vector<double> a(vars, 0.0);
        for (std::size_t k = 0; k < peers.size(); ++k) a[k + 1] = inst.output(peers[k], r);
        program.add_constraint(std::move(a), lp::Relation::GreaterEqual, inst.output(p, r));
    }
    return program;
}

namespace {

void require_dmu(const DeaInstance& inst, std::size_t p) {
    if (p >= inst.n_dmus()) throw ConfigError("DMU index " + std::to_string(p) + " out of range");
    for (std::size_t r = 0; r < inst.n_outputs(); ++r)
        if (inst.output(p, r) > 0.0) return;
    throw ConfigError("DMU " + inst.label(p) + " has no positive output");
}

}  // namespace

EfficiencyScore ccr_score(const DeaInstance& inst, std::size_t p) {
    require_dmu(inst, p);
    const auto sol = lp::solve(envelopment_program(inst, p, false));
    if (sol.status != lp::Status::Optimal)
        throw InternalError(std::string("CCR program is ") + lp::to_string(sol.status) + " for DMU " + inst.label(p));
    return {sol.objective, Basis::Ccr};
}

EfficiencyScore super_efficiency_score(const DeaInstance& inst, std::size_t p) {
    require_dmu(inst, p);
    if (inst.n_dmus() < 2) throw ConfigError("super-efficiency needs at least two DMUs");
    const auto sol = lp::solve(envelopment_program(inst, p, true));
    switch (sol.status) {
        case lp::Status::Optimal: return {sol.objective, Basis::SuperEfficiency};
        case lp::Status::Infeasible: return {std::numeric_limits<double>::infinity(), Basis::SuperEfficiency};
        case lp::Status::Unbounded: break;
    }
    throw InternalError("super-efficiency program is unbounded for DMU " + inst.label(p));
}

DeaInstance feature_instance(const ScoreMatrix& scores) {
    std::vector<double> data;
    data.reserve(scores.n_rows() * scores.n_labels());
    std::vector<std::string> labels;
    for (const auto& row : scores.rows()) {
        data.insert(data.end(), row.values.begin(), row.values.end());
        labels.push_back("F" + std::to_string(row.feature));
    }
    return DeaInstance(Matrix(scores.n_rows(), scores.n_labels(), std::move(data)), std::nullopt, std::move(labels));
}

EfficiencyScore feature_eval_score(const ScoreMatrix& scores, std::size_t p) {
    if (p >= scores.n_rows()) throw ConfigError("candidate row out of range");
    if (scores.n_rows() == 1) return {std::numeric_limits<double>::infinity(), Basis::SuperEfficiency};
    return super_efficiency_score(feature_instance(scores), p);
}

SweepResult sup_dea_max(const ScoreMatrix& scores, std::size_t threads) {
    if (scores.empty()) throw ConfigError("sup_dea_max: no candidates");
    SweepResult out;
    out.scores.resize(scores.n_rows());
    if (scores.n_rows() == 1) {
        out.scores[0] = {std::numeric_limits<double>::infinity(), Basis::SuperEfficiency};
    } else {
        const auto inst = feature_instance(scores);
        parallel_for(scores.n_rows(), threads,
                     [&](std::size_t p) { out.scores[p] = super_efficiency_score(inst, p); });
    }

    out.row = 0;
    for (std::size_t p = 1; p < scores.n_rows(); ++p) {
        const auto& cand = out.scores[p];
        const auto& best = out.scores[out.row];
        bool better = false;
        if (cand.infinite() && best.infinite())
            better = scores.row(p).total() > scores.row(out.row).total() + kScoreTolerance;
        else if (cand.infinite())
            better = true;
        else if (!best.infinite())
            better = cand.value > best.value + kScoreTolerance;
        if (better) out.row = p;
    }
    out.best = out.scores[out.row];
    return out;
}

bool breaks_rule_of_thumb(std::size_t n_dmus, std::size_t n_inputs, std::size_t n_outputs) {
    return n_dmus < 3 * (n_inputs + n_outputs);
}

}  // namespace deacs::dea
