#include "deacs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "deacs/discretize.hpp"
#include "deacs/error.hpp"
#include "deacs/parallel.hpp"

namespace deacs {

ClassifierKind ClassifierKind::nearest(std::size_t k) {
    if (k < 1) throw ConfigError("kNN needs k >= 1");
    return {Type::KNearest, k};
}

std::string ClassifierKind::name() const {
    return type == Type::NaiveBayes ? "nbc" : "knn" + std::to_string(k);
}

namespace {

void check_features(const Dataset& ds, std::span<const std::size_t> features) {
    if (features.empty()) throw ConfigError("classifier needs at least one feature");
    for (auto f : features)
        if (f >= ds.n_features()) throw ConfigError("feature index " + std::to_string(f) + " out of range");
}

}  // namespace

std::vector<Code> nbc_fit_predict(const Dataset& ds, std::span<const std::size_t> train,
                                  std::span<const std::size_t> test, std::span<const std::size_t> features) {
    check_features(ds, features);
    if (train.empty()) throw ConfigError("empty training set");
    const std::size_t nc = ds.n_classes();
    std::vector<double> class_count(nc, 0.0);
    for (auto i : train) class_count[ds.classes()[i]] += 1.0;

    // counts[f][c * card + v]
    std::vector<std::vector<double>> counts(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
        const auto card = ds.cardinality(features[j]);
        counts[j].assign(nc * card, 0.0);
        const auto col = ds.feature(features[j]);
        for (auto i : train) counts[j][ds.classes()[i] * card + col[i]] += 1.0;
    }

    const double n = static_cast<double>(train.size());
    std::vector<double> log_prior(nc);
    for (std::size_t c = 0; c < nc; ++c) log_prior[c] = std::log((class_count[c] + 1.0) / (n + static_cast<double>(nc)));

    std::vector<Code> out;
    out.reserve(test.size());
    for (auto i : test) {
        Code best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t c = 0; c < nc; ++c) {
            if (class_count[c] == 0.0) continue;
            double score = log_prior[c];
            for (std::size_t j = 0; j < features.size(); ++j) {
                const auto card = ds.cardinality(features[j]);
                const double hits = counts[j][c * card + ds.feature(features[j])[i]];
                score += std::log((hits + 1.0) / (class_count[c] + static_cast<double>(card)));
            }
            if (!found || score > best_score) {
                best = static_cast<Code>(c);
                best_score = score;
                found = true;
            }
        }
        out.push_back(best);
    }
    return out;
}

std::vector<Code> knn_predict(const Dataset& ds, std::span<const std::size_t> train, std::span<const std::size_t> test,
                              std::span<const std::size_t> features, std::size_t k) {
    check_features(ds, features);
    if (k < 1) throw ConfigError("kNN needs k >= 1");
    if (k > train.size())
        throw ConfigError("k = " + std::to_string(k) + " exceeds training size " + std::to_string(train.size()));

    std::vector<std::span<const Code>> cols;
    for (auto f : features) cols.push_back(ds.feature(f));

    std::vector<std::pair<std::size_t, std::size_t>> dist(train.size());
    std::vector<std::size_t> votes(ds.n_classes());
    std::vector<Code> out;
    out.reserve(test.size());
    for (auto t : test) {
        for (std::size_t j = 0; j < train.size(); ++j) {
            std::size_t d = 0;
            for (const auto& col : cols) d += col[t] != col[train[j]];
            dist[j] = {d, train[j]};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::fill(votes.begin(), votes.end(), 0);
        for (std::size_t j = 0; j < k; ++j) ++votes[ds.classes()[dist[j].second]];
        const auto best = std::max_element(votes.begin(), votes.end());  // first maximum = lowest code
        out.push_back(static_cast<Code>(best - votes.begin()));
    }
    return out;
}

std::vector<Code> predict(const ClassifierKind& kind, const Dataset& ds, std::span<const std::size_t> train,
                          std::span<const std::size_t> test, std::span<const std::size_t> features) {
    if (kind.type == ClassifierKind::Type::NaiveBayes) return nbc_fit_predict(ds, train, test, features);
    return knn_predict(ds, train, test, features, kind.k);
}

namespace {

double accuracy(const Dataset& ds, std::span<const std::size_t> test, std::span<const Code> predicted) {
    if (test.empty()) return 1.0;
    std::size_t hits = 0;
    for (std::size_t j = 0; j < test.size(); ++j) hits += predicted[j] == ds.classes()[test[j]];
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

struct FoldRows {
    std::vector<std::size_t> train, test;
};

std::vector<FoldRows> fold_rows(const FoldAssignment& folds) {
    std::vector<FoldRows> rows(folds.k);
    for (std::size_t f = 0; f < folds.k; ++f) rows[f] = {folds.train_rows(f), folds.test_rows(f)};
    return rows;
}

// acc[(m * n_classifiers + c) * k + fold] -> curve, averaging in a fixed order.
AccuracyCurve assemble(std::string algorithm, std::vector<std::size_t> prefix, std::span<const ClassifierKind> classifiers,
                       const FoldAssignment& folds, std::size_t length, const std::vector<double>& acc) {
    AccuracyCurve curve;
    curve.algorithm = std::move(algorithm);
    curve.features = std::move(prefix);
    curve.folds = folds.k;
    curve.seed = folds.seed;
    for (const auto& kind : classifiers) curve.per_classifier.push_back({kind.name(), {}});
    for (std::size_t m = 0; m < length; ++m) {
        double across = 0.0;
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
            double sum = 0.0;
            for (std::size_t f = 0; f < folds.k; ++f) sum += acc[(m * classifiers.size() + c) * folds.k + f];
            const double mean = sum / static_cast<double>(folds.k);
            curve.per_classifier[c].accuracy.push_back(mean);
            across += mean;
        }
        curve.mean_accuracy.push_back(across / static_cast<double>(classifiers.size()));
    }
    return curve;
}

}  // namespace

AccuracyCurve evaluate_curve(const Dataset& ds, const SelectionTrace& trace, std::span<const ClassifierKind> classifiers,
                             const FoldAssignment& folds, std::size_t threads) {
    if (trace.selected.empty()) throw ConfigError("cannot evaluate an empty selection");
    if (classifiers.empty()) throw ConfigError("no classifiers given");
    if (folds.fold_of.size() != ds.n_samples()) throw ConfigError("fold assignment does not match the dataset");

    const auto ranking = trace.features();
    const std::size_t length = std::min(ranking.size(), kMaxCurveLength);
    const auto rows = fold_rows(folds);
    const std::size_t nc = classifiers.size();

    std::vector<double> acc(length * nc * folds.k);
    parallel_for(acc.size(), threads, [&](std::size_t unit) {
        const std::size_t fold = unit % folds.k;
        const std::size_t c = (unit / folds.k) % nc;
        const std::size_t m = unit / (folds.k * nc);
        const std::span<const std::size_t> prefix(ranking.data(), m + 1);
        const auto& r = rows[fold];
        acc[unit] = accuracy(ds, r.test, predict(classifiers[c], ds, r.train, r.test, prefix));
    });
    return assemble(trace.algorithm, std::vector<std::size_t>(ranking.begin(), ranking.begin() + length), classifiers,
                    folds, length, acc);
}

Dataset subset_rows(const Dataset& ds, std::span<const std::size_t> rows) {
    std::vector<std::vector<Code>> features(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        features[f].reserve(rows.size());
        for (auto i : rows) features[f].push_back(ds.feature(f)[i]);
    }
    std::vector<Code> classes;
    classes.reserve(rows.size());
    for (auto i : rows) classes.push_back(ds.classes()[i]);
    return Dataset(std::move(features), std::vector<std::string>(ds.feature_names().begin(), ds.feature_names().end()),
                   std::move(classes), std::vector<std::string>(ds.label_names().begin(), ds.label_names().end()));
}

AccuracyCurve evaluate_curve_per_fold(const RawTable& table, const SelectorFn& selector, const std::string& algorithm,
                                      std::span<const ClassifierKind> classifiers, const FoldAssignment& folds,
                                      std::size_t threads) {
    if (classifiers.empty()) throw ConfigError("no classifiers given");
    if (folds.fold_of.size() != table.n_rows()) throw ConfigError("fold assignment does not match the table");
    const auto rows = fold_rows(folds);

    // Each fold gets its own encoding (cuts from training rows) and ranking.
    std::vector<Dataset> encoded;
    std::vector<std::vector<std::size_t>> rankings;
    for (std::size_t f = 0; f < folds.k; ++f) {
        const auto cuts = fit_cuts(table.subset(rows[f].train), threads);
        encoded.push_back(encode(table, cuts));
        rankings.push_back(selector(subset_rows(encoded.back(), rows[f].train)).features());
    }
    std::size_t length = kMaxCurveLength;
    for (const auto& r : rankings) length = std::min(length, r.size());
    if (length == 0) throw ConfigError("a fold produced an empty selection");

    const std::size_t nc = classifiers.size();
    std::vector<double> acc(length * nc * folds.k);
    parallel_for(acc.size(), threads, [&](std::size_t unit) {
        const std::size_t fold = unit % folds.k;
        const std::size_t c = (unit / folds.k) % nc;
        const std::size_t m = unit / (folds.k * nc);
        const std::span<const std::size_t> prefix(rankings[fold].data(), m + 1);
        const auto& r = rows[fold];
        acc[unit] = accuracy(encoded[fold], r.test, predict(classifiers[c], encoded[fold], r.train, r.test, prefix));
    });
    // The recorded prefix is the first fold's; other folds may differ.
    return assemble(algorithm, std::vector<std::size_t>(rankings[0].begin(), rankings[0].begin() + length),
                    classifiers, folds, length, acc);
}

std::string report_to_json(std::span<const AccuracyCurve> curves) {
    nlohmann::ordered_json doc;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : curves) {
        nlohmann::ordered_json j;
        j["algorithm"] = c.algorithm;
        j["folds"] = c.folds;
        j["seed"] = c.seed;
        j["features"] = c.features;
        j["mean_accuracy"] = c.mean_accuracy;
        auto per = nlohmann::ordered_json::array();
        for (const auto& p : c.per_classifier) per.push_back({{"classifier", p.classifier}, {"accuracy", p.accuracy}});
        j["per_classifier"] = std::move(per);
        arr.push_back(std::move(j));
    }
    doc["curves"] = std::move(arr);
    return doc.dump(2) + "\n";
}

std::vector<AccuracyCurve> report_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        std::vector<AccuracyCurve> out;
        for (const auto& j : doc.at("curves")) {
            AccuracyCurve c;
            c.algorithm = j.at("algorithm").get<std::string>();
            c.folds = j.at("folds").get<std::size_t>();
            c.seed = j.at("seed").get<std::uint64_t>();
            c.features = j.at("features").get<std::vector<std::size_t>>();
            c.mean_accuracy = j.at("mean_accuracy").get<std::vector<double>>();
            for (const auto& p : j.at("per_classifier"))
                c.per_classifier.push_back(
                    {p.at("classifier").get<std::string>(), p.at("accuracy").get<std::vector<double>>()});
            out.push_back(std::move(c));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    }
}

std::string report_to_csv(std::span<const AccuracyCurve> curves) {
    std::string out = "algorithm,m,mean_accuracy\n";
    char buf[64];
    for (const auto& c : curves)
        for (std::size_t m = 0; m < c.mean_accuracy.size(); ++m) {
            std::snprintf(buf, sizeof buf, ",%zu,%.6f\n", m + 1, c.mean_accuracy[m]);
            out += c.algorithm;
            out += buf;
        }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void emit_report(std::span<const AccuracyCurve> curves, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path) {
    write_file(json_path, report_to_json(curves));
    write_file(csv_path, report_to_csv(curves));
}

}  // namespace deacs
