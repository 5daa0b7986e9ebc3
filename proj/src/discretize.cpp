#include "deacs/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "deacs/dataset.hpp"
#include "deacs/error.hpp"
#include "deacs/parallel.hpp"

namespace deacs {

namespace {

double entropy_of(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::size_t distinct(std::span<const std::size_t> counts) {
    return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

// A run of equal values in the sorted column.
struct ValueGroup {
    double value;
    std::size_t begin;  // into the sorted sample arrays
    std::size_t end;
    bool pure;
    Code label;  // meaningful when pure
};

class MdlSplitter {
public:
    MdlSplitter(std::vector<Code> classes, std::vector<ValueGroup> groups, std::size_t n_classes)
        : classes_(std::move(classes)), groups_(std::move(groups)), n_classes_(n_classes) {}

    void split(std::size_t g_lo, std::size_t g_hi, std::vector<double>& cuts) const {
        if (g_hi - g_lo < 2) return;
        const std::size_t lo = groups_[g_lo].begin;
        const std::size_t hi = groups_[g_hi - 1].end;
        const std::size_t n = hi - lo;

        std::vector<std::size_t> total(n_classes_, 0);
        for (std::size_t i = lo; i < hi; ++i) ++total[classes_[i]];
        const double ent = entropy_of(total, n);

        std::vector<std::size_t> left(n_classes_, 0);
        std::vector<std::size_t> right(n_classes_, 0);
        double best_e = std::numeric_limits<double>::infinity();
        std::size_t best_g = 0;
        std::size_t left_n = 0;
        for (std::size_t g = g_lo; g + 1 < g_hi; ++g) {
            for (std::size_t i = groups_[g].begin; i < groups_[g].end; ++i) ++left[classes_[i]];
            left_n += groups_[g].end - groups_[g].begin;
            const auto& a = groups_[g];
            const auto& b = groups_[g + 1];
            if (a.pure && b.pure && a.label == b.label) continue;
            for (std::size_t c = 0; c < n_classes_; ++c) right[c] = total[c] - left[c];
            const double e = (static_cast<double>(left_n) * entropy_of(left, left_n) +
                              static_cast<double>(n - left_n) * entropy_of(right, n - left_n)) /
                             static_cast<double>(n);
            if (e < best_e) {
                best_e = e;
                best_g = g + 1;
            }
        }
        if (!std::isfinite(best_e)) return;

        std::fill(left.begin(), left.end(), 0);
        for (std::size_t i = lo; i < groups_[best_g].begin; ++i) ++left[classes_[i]];
        left_n = groups_[best_g].begin - lo;
        for (std::size_t c = 0; c < n_classes_; ++c) right[c] = total[c] - left[c];
        const double ent_l = entropy_of(left, left_n);
        const double ent_r = entropy_of(right, n - left_n);

        const double gain = ent - best_e;
        const auto k = static_cast<double>(distinct(total));
        const auto k_l = static_cast<double>(distinct(left));
        const auto k_r = static_cast<double>(distinct(right));
        const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * ent - k_l * ent_l - k_r * ent_r);
        const double nd = static_cast<double>(n);
        if (!(gain > (std::log2(nd - 1.0) + delta) / nd)) return;

        split(g_lo, best_g, cuts);
        cuts.push_back(0.5 * (groups_[best_g - 1].value + groups_[best_g].value));
        split(best_g, g_hi, cuts);
    }

private:
    std::vector<Code> classes_;
    std::vector<ValueGroup> groups_;
    std::size_t n_classes_;
};

}  // namespace

std::vector<double> mdl_discretize(std::span<const double> values, std::span<const Code> classes) {
    if (values.size() != classes.size()) throw ConfigError("mdl_discretize: length mismatch");

    std::vector<std::pair<double, Code>> samples;
    samples.reserve(values.size());
    Code max_class = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) continue;
        samples.emplace_back(values[i], classes[i]);
        max_class = std::max(max_class, classes[i]);
    }
    std::sort(samples.begin(), samples.end());

    std::vector<Code> sorted_classes;
    sorted_classes.reserve(samples.size());
    std::vector<ValueGroup> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sorted_classes.push_back(samples[i].second);
        if (groups.empty() || groups.back().value != samples[i].first) {
            groups.push_back({samples[i].first, i, i + 1, true, samples[i].second});
        } else {
            auto& g = groups.back();
            g.end = i + 1;
            if (g.label != samples[i].second) g.pure = false;
        }
    }

    std::vector<double> cuts;
    MdlSplitter splitter(std::move(sorted_classes), groups, static_cast<std::size_t>(max_class) + 1);
    splitter.split(0, groups.size(), cuts);
    return cuts;
}

std::vector<CutPoints> fit_cuts(const RawTable& table, std::size_t threads) {
    const auto classes = encode_categorical(table.class_values()).codes;
    std::vector<std::size_t> numeric;
    for (std::size_t c = 0; c < table.n_columns(); ++c)
        if (c != table.class_column() && table.column(c).kind == ColumnKind::Numeric) numeric.push_back(c);

    std::vector<CutPoints> cuts(numeric.size());
    parallel_for(numeric.size(), threads, [&](std::size_t i) {
        const auto& col = table.column(numeric[i]);
        cuts[i] = CutPoints{col.name, mdl_discretize(col.numbers, classes)};
    });
    return cuts;
}

std::string cuts_to_json(std::span<const CutPoints> cuts) {
    auto doc = nlohmann::json::array();
    for (const auto& c : cuts) doc.push_back({{"feature", c.feature}, {"thresholds", c.thresholds}});
    return doc.dump(2) + "\n";
}

std::vector<CutPoints> cuts_from_json(const std::string& text) {
    std::vector<CutPoints> cuts;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_array()) throw ParseError("cut points document must be a JSON array");
        for (const auto& item : doc) {
            CutPoints c{item.at("feature").get<std::string>(), item.at("thresholds").get<std::vector<double>>()};
            for (std::size_t i = 1; i < c.thresholds.size(); ++i)
                if (!(c.thresholds[i - 1] < c.thresholds[i]))
                    throw ParseError("thresholds for '" + c.feature + "' are not strictly increasing");
            cuts.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid cut points JSON: ") + e.what());
    }
    return cuts;
}

void write_cuts(const std::filesystem::path& path, std::span<const CutPoints> cuts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << cuts_to_json(cuts);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<CutPoints> read_cuts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return cuts_from_json(buffer.str());
}

}  // namespace deacs
