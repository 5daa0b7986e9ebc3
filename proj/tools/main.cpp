#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deacs/dataset.hpp"
#include "deacs/dea.hpp"
#include "deacs/discretize.hpp"
#include "deacs/error.hpp"
#include "deacs/folds.hpp"
#include "deacs/harness.hpp"
#include "deacs/lp.hpp"
#include "deacs/parallel.hpp"
#include "deacs/selector.hpp"
#include "deacs/table.hpp"

namespace fs = std::filesystem;
using namespace deacs;

namespace {

struct Common {
    std::string input;
    std::string class_col;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t threads = default_thread_count();
    bool numeric_class = false;
};

struct SelectorOptions {
    std::vector<std::string> algos;
    std::optional<std::size_t> delta;
    double alpha = 1.0, beta = 0.0, gamma = 0.0;
    std::string beta_scaling = "constant", gamma_scaling = "constant", normalization = "plain";
    std::size_t relieff_neighbors = 5;
    std::size_t relieff_instances = 30;
    std::string cuts;
    bool warn_rule_of_thumb = false;
};

// Thrown for invalid command lines that should print usage.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed) {
    cmd->add_option("--input", c.input, "input CSV")->required();
    cmd->add_option("--class-col", c.class_col, "class column name (default: last column)");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--numeric-class", c.numeric_class, "accept a class column of numbers");
    if (with_seed) cmd->add_option("--seed", c.seed, "random seed");
}

void add_selector(CLI::App* cmd, SelectorOptions& s) {
    cmd->add_option("--delta", s.delta, "number of features to select (default min(|F|, 30))")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", s.alpha, "unified: relevance coefficient");
    cmd->add_option("--beta", s.beta, "unified: redundancy coefficient");
    cmd->add_option("--gamma", s.gamma, "unified: conditional redundancy coefficient");
    cmd->add_option("--beta-scaling", s.beta_scaling, "unified: constant | inverse (divide by |S|)");
    cmd->add_option("--gamma-scaling", s.gamma_scaling, "unified: constant | inverse (divide by |S|)");
    cmd->add_option("--normalization", s.normalization, "unified: plain | joint-entropy");
    cmd->add_option("--relieff-neighbors", s.relieff_neighbors, "relieff: neighbours per class")->check(CLI::PositiveNumber);
    cmd->add_option("--relieff-instances", s.relieff_instances, "relieff: sampled instances");
    cmd->add_option("--cuts", s.cuts, "cut points JSON from `discretize` (default: fit on the input)");
    cmd->add_flag("--warn-rule-of-thumb", s.warn_rule_of_thumb, "dea-cs: warn when candidates < 3 (inputs + outputs)");
}

Scaling parse_scaling(const std::string& v) {
    if (v == "constant") return Scaling::Constant;
    if (v == "inverse") return Scaling::InverseSelectedCount;
    throw UsageError("unknown scaling '" + v + "' (expected constant or inverse)");
}

Normalization parse_normalization(const std::string& v) {
    if (v == "plain") return Normalization::Plain;
    if (v == "joint-entropy") return Normalization::JointEntropy;
    throw UsageError("unknown normalization '" + v + "' (expected plain or joint-entropy)");
}

void validate_selector(const CLI::App* cmd, const SelectorOptions& s) {
    bool unified = false, relieff = false;
    for (const auto& a : s.algos) {
        if (std::find(algorithm_names().begin(), algorithm_names().end(), a) == algorithm_names().end())
            throw UsageError("unknown algorithm '" + a + "'");
        unified |= a == "unified";
        relieff |= a == "relieff";
    }
    for (const char* opt : {"--alpha", "--beta", "--gamma", "--beta-scaling", "--gamma-scaling", "--normalization"})
        if (cmd->count(opt) && !unified) throw UsageError(std::string(opt) + " is only valid with --algo unified");
    for (const char* opt : {"--relieff-neighbors", "--relieff-instances"})
        if (cmd->count(opt) && !relieff) throw UsageError(std::string(opt) + " is only valid with --algo relieff");
    parse_scaling(s.beta_scaling);
    parse_scaling(s.gamma_scaling);
    parse_normalization(s.normalization);
}

RawTable load_table(const Common& c) {
    CsvOptions opts;
    opts.class_column = c.class_col;
    opts.class_categorical = c.numeric_class;
    return load_csv(c.input, opts);
}

Dataset load_dataset(const Common& c, const SelectorOptions& s, const RawTable& table) {
    const auto cuts = s.cuts.empty() ? fit_cuts(table, c.threads) : read_cuts(s.cuts);
    return encode(table, cuts);
}

SelectionTrace select_with(const std::string& algo, const Dataset& ds, std::size_t delta, const SelectorOptions& s,
                           std::uint64_t seed, std::size_t threads) {
    SelectorParams params;
    params.criterion = {s.alpha, s.beta, s.gamma, parse_scaling(s.beta_scaling), parse_scaling(s.gamma_scaling),
                        parse_normalization(s.normalization)};
    params.relieff = {s.relieff_neighbors, s.relieff_instances, seed};
    return run_selector(algo, ds, delta, params, threads);
}

std::size_t resolve_delta(const SelectorOptions& s, std::size_t n_features) {
    return s.delta ? *s.delta : std::max<std::size_t>(1, std::min(n_features, kMaxCurveLength));
}

std::string fixed6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void report_trace_warnings(const SelectionTrace& trace, bool rule_of_thumb) {
    if (rule_of_thumb)
        for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
            const auto& it = trace.iterations[i];
            if (!it.rule_of_thumb_violated) continue;
            std::size_t kept = 0;
            for (const auto& c : it.candidates) kept += c.efficiency.has_value();
            std::cerr << "warning: iteration " << i + 1 << ": " << kept
                      << " candidates is below the DEA rule of thumb\n";
        }
    if (trace.stop_reason == StopReason::AllScoresZero)
        std::cerr << trace.algorithm << ": stopped after " << trace.selected.size()
                  << " features, every remaining candidate scores zero\n";
}

int cmd_discretize(const Common& c) {
    const auto table = load_table(c);
    const auto cuts = fit_cuts(table, c.threads);
    if (c.out.empty()) std::cout << cuts_to_json(cuts);
    else write_cuts(c.out, cuts);
    return 0;
}

int cmd_select(const Common& c, const SelectorOptions& s) {
    const auto table = load_table(c);
    const auto ds = load_dataset(c, s, table);
    const auto trace = select_with(s.algos.front(), ds, resolve_delta(s, ds.n_features()), s, c.seed, c.threads);
    if (!c.out.empty()) write_text_file(c.out, trace_to_json(trace, ds));
    for (std::size_t r = 0; r < trace.selected.size(); ++r)
        std::cout << r + 1 << '\t' << ds.feature_name(trace.selected[r].feature) << '\t'
                  << fixed6(trace.selected[r].score) << '\n';
    report_trace_warnings(trace, s.warn_rule_of_thumb);
    return 0;
}

struct BenchmarkOptions {
    std::size_t folds = 10;
    std::vector<std::string> classifiers{"nbc", "knn"};
    std::size_t knn_k = 1;
    std::string csv;
    bool fit_per_fold = false;
};

int cmd_benchmark(const Common& c, const SelectorOptions& s, const BenchmarkOptions& b) {
    std::vector<ClassifierKind> kinds;
    for (const auto& name : b.classifiers) {
        if (name == "nbc") kinds.push_back(ClassifierKind::naive_bayes());
        else if (name == "knn") kinds.push_back(ClassifierKind::nearest(b.knn_k));
        else throw UsageError("unknown classifier '" + name + "' (expected nbc or knn)");
    }
    if (b.fit_per_fold && !s.cuts.empty()) throw UsageError("--cuts cannot be combined with --fit-per-fold");

    const auto table = load_table(c);
    const auto ds = load_dataset(c, s, table);
    const auto folds = stratified_kfold(ds.classes(), b.folds, c.seed);
    const std::size_t delta = resolve_delta(s, ds.n_features());

    std::vector<AccuracyCurve> curves;
    for (const auto& algo : s.algos) {
        if (b.fit_per_fold) {
            SelectorFn fn = [&](const Dataset& train) { return select_with(algo, train, delta, s, c.seed, c.threads); };
            curves.push_back(evaluate_curve_per_fold(table, fn, algo, kinds, folds, c.threads));
        } else {
            const auto trace = select_with(algo, ds, delta, s, c.seed, c.threads);
            report_trace_warnings(trace, s.warn_rule_of_thumb);
            if (trace.selected.empty()) {
                std::cerr << algo << ": nothing selected, no curve\n";
                continue;
            }
            curves.push_back(evaluate_curve(ds, trace, kinds, folds, c.threads));
        }
    }

    fs::path csv = b.csv;
    if (csv.empty()) csv = fs::path(c.out).replace_extension(".csv");
    emit_report(curves, c.out, csv);
    for (const auto& curve : curves) {
        std::size_t best = 0;
        for (std::size_t m = 1; m < curve.mean_accuracy.size(); ++m)
            if (curve.mean_accuracy[m] > curve.mean_accuracy[best]) best = m;
        std::cout << curve.algorithm << "\tbest_m=" << best + 1 << '\t' << fixed6(curve.mean_accuracy[best]) << '\n';
    }
    return 0;
}

struct DeaSolveOptions {
    std::string input;
    bool no_header = false;
    bool labels = false;
    std::string dump_lp;
};

int cmd_dea_solve(const DeaSolveOptions& o) {
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw IoError("cannot open '" + o.input + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const auto records = split_csv(buffer.str(), ',');

    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    for (std::size_t r = o.no_header ? 0 : 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::vector<double> row;
        for (std::size_t j = 0; j < rec.fields.size(); ++j) {
            if (o.labels && j == 0) {
                names.push_back(rec.fields[j]);
                continue;
            }
            const auto& cell = rec.fields[j];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw ParseError(o.input + ": line " + std::to_string(rec.line) + ": non-numeric cell '" + cell + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(o.input + ": line " + std::to_string(rec.line) + ": expected " +
                             std::to_string(rows.front().size()) + " outputs, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(o.input + ": no DMU rows");
    if (!o.labels)
        for (std::size_t j = 0; j < rows.size(); ++j) names.push_back(std::to_string(j));

    const dea::DeaInstance inst(dea::Matrix::from_rows(rows), std::nullopt, names);
    if (!o.dump_lp.empty()) {
        fs::create_directories(o.dump_lp);
        for (std::size_t p = 0; p < inst.n_dmus(); ++p) {
            write_text_file(fs::path(o.dump_lp) / ("dmu" + std::to_string(p) + "_ccr.lp"),
                            lp::to_text(dea::envelopment_program(inst, p, false)));
            if (inst.n_dmus() > 1)
                write_text_file(fs::path(o.dump_lp) / ("dmu" + std::to_string(p) + "_super.lp"),
                                lp::to_text(dea::envelopment_program(inst, p, true)));
        }
    }
    std::cout << "dmu,ccr,super\n";
    for (std::size_t p = 0; p < inst.n_dmus(); ++p) {
        const double ccr = dea::ccr_score(inst, p).value;
        const double sup = inst.n_dmus() == 1 ? std::numeric_limits<double>::infinity()
                                              : dea::super_efficiency_score(inst, p).value;
        std::cout << inst.label(p) << ',' << fixed6(ccr) << ',' << fixed6(sup) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature selection with per-label conditional dependence scores and super-efficiency DEA"};
    app.require_subcommand(1);

    Common common;
    SelectorOptions sel;
    BenchmarkOptions bench;
    DeaSolveOptions solve;

    auto* discretize = app.add_subcommand("discretize", "fit MDL cut points for numeric columns");
    add_common(discretize, common, false);
    discretize->add_option("--out", common.out, "cut points JSON (default: stdout)");

    auto* select = app.add_subcommand("select", "rank features and write the selection trace");
    add_common(select, common, true);
    select->add_option("--algo", sel.algos, "one of dea-cs, mim, mrmr, disr, unified, relieff")->expected(1);
    select->add_option("--out", common.out, "selection trace JSON");
    add_selector(select, sel);

    auto* benchmark = app.add_subcommand("benchmark", "cross-validated accuracy curves for one or more selectors");
    add_common(benchmark, common, true);
    benchmark->add_option("--algo", sel.algos, "comma-separated selectors")->delimiter(',');
    benchmark->add_option("--out", common.out, "report JSON")->required();
    benchmark->add_option("--csv", bench.csv, "report CSV (default: --out with a .csv extension)");
    benchmark->add_option("--folds", bench.folds, "cross-validation folds");
    benchmark->add_option("--classifiers", bench.classifiers, "comma-separated: nbc, knn")->delimiter(',');
    benchmark->add_option("--knn-k", bench.knn_k, "neighbours for knn")->check(CLI::PositiveNumber);
    benchmark->add_flag("--fit-per-fold", bench.fit_per_fold, "fit cuts and selection on each training split");
    add_selector(benchmark, sel);

    auto* dea_solve = app.add_subcommand("dea-solve", "CCR and super-efficiency scores for a DMU output matrix");
    dea_solve->add_option("--input", solve.input, "CSV, one DMU per row, one output per column")->required();
    dea_solve->add_flag("--no-header", solve.no_header, "first row is data");
    dea_solve->add_flag("--labels", solve.labels, "first column holds DMU names");
    dea_solve->add_option("--dump-lp", solve.dump_lp, "write every envelopment LP to this directory");

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == dea_solve) return cmd_dea_solve(solve);
        if (active == discretize) return cmd_discretize(common);
        if (sel.algos.empty()) sel.algos.push_back("dea-cs");
        validate_selector(active, sel);
        if (active == select) return cmd_select(common, sel);
        if (bench.folds < 2) throw UsageError("--folds must be at least 2");
        return cmd_benchmark(common, sel, bench);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << active->help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
