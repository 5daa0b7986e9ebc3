#include "deacs/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "deacs/dataset.hpp"
#include "deacs/error.hpp"

namespace deacs {

namespace {

std::size_t domain_of(std::span<const Code> codes) {
    return codes.empty() ? 0 : static_cast<std::size_t>(*std::max_element(codes.begin(), codes.end())) + 1;
}

// n_xy * log2(n_xy * n / (n_x * n_y)). The ratio is formed from exact
// integer products, so empirical independence gives exactly zero.
inline double mi_term(std::uint64_t n_xy, std::uint64_t n_x, std::uint64_t n_y, std::uint64_t n) {
    if (n_xy == 0) return 0.0;
    const std::uint64_t num = n_xy * n;
    const std::uint64_t den = n_x * n_y;
    if (num == den) return 0.0;
    return static_cast<double>(n_xy) * std::log2(static_cast<double>(num) / static_cast<double>(den));
}

// Plug-in MI over an index subset; `indices` may be empty (result 0).
template <typename IndexFn>
double mi_over(std::span<const Code> x, std::span<const Code> y, std::size_t count, IndexFn index_at) {
    if (count == 0) return 0.0;
    const std::size_t cy = domain_of(y);
    std::vector<std::uint64_t> keys(count);
    std::unordered_map<Code, std::uint64_t> nx;
    std::unordered_map<Code, std::uint64_t> ny;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = index_at(k);
        keys[k] = static_cast<std::uint64_t>(x[i]) * cy + y[i];
        ++nx[x[i]];
        ++ny[y[i]];
    }
    std::sort(keys.begin(), keys.end());
    std::vector<double> terms;
    for (std::size_t k = 0; k < count;) {
        std::size_t run = k + 1;
        while (run < count && keys[run] == keys[k]) ++run;
        const auto xv = static_cast<Code>(keys[k] / cy);
        const auto yv = static_cast<Code>(keys[k] % cy);
        terms.push_back(mi_term(run - k, nx[xv], ny[yv], count));
        k = run;
    }
    // Swapping x and y permutes the terms; a value-sorted sum makes the
    // result exactly symmetric.
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return clamp_nonnegative(sum / static_cast<double>(count));
}

}  // namespace

double clamp_nonnegative(double value) {
    if (value >= 0.0) return value;
    if (value >= -kNegativeResidue) return 0.0;
    throw InternalError("information estimate is negative beyond rounding: " + std::to_string(value));
}

BlockPartition::BlockPartition(std::size_t n_samples) : order_(n_samples), offsets_{0, n_samples} {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
}

BlockPartition refine_partition(const BlockPartition& part, std::span<const Code> feature,
                                std::size_t feature_index) {
    if (feature.size() != part.n_samples()) throw ConfigError("refine_partition: feature length mismatch");
    const auto& existing = part.features_;
    if (std::find(existing.begin(), existing.end(), feature_index) != existing.end())
        throw ConfigError("refine_partition: feature " + std::to_string(feature_index) + " is already conditioned on");

    BlockPartition out;
    out.features_ = existing;
    out.features_.push_back(feature_index);
    out.order_.resize(part.n_samples());
    out.offsets_.reserve(part.n_blocks() + 1);
    out.offsets_.push_back(0);

    std::vector<std::size_t> count(domain_of(feature), 0);
    std::vector<Code> touched;
    std::size_t write = 0;
    for (std::size_t j = 0; j < part.n_blocks(); ++j) {
        const auto blk = part.block(j);
        touched.clear();
        for (auto i : blk) {
            if (count[feature[i]]++ == 0) touched.push_back(feature[i]);
        }
        std::sort(touched.begin(), touched.end());
        // Turn counts into write cursors, emitting one sub-block per code.
        for (auto code : touched) {
            const std::size_t size = count[code];
            count[code] = write;
            write += size;
            out.offsets_.push_back(write);
        }
        for (auto i : blk) out.order_[count[feature[i]]++] = i;
        for (auto code : touched) count[code] = 0;
    }
    if (part.n_samples() == 0) out.offsets_.push_back(0);
    return out;
}

BlockPartition partition_by(const Dataset& ds, std::span<const std::size_t> features) {
    BlockPartition part(ds.n_samples());
    for (auto f : features) part = refine_partition(part, ds.feature(f), f);
    return part;
}

double entropy(std::span<const Code> codes, std::size_t domain) {
    if (codes.empty()) throw ConfigError("entropy of an empty column");
    std::vector<std::uint64_t> counts(domain, 0);
    for (auto c : codes) {
        if (c >= domain) throw ConfigError("entropy: code outside domain");
        ++counts[c];
    }
    const auto n = static_cast<double>(codes.size());
    double h = 0.0;
    for (auto k : counts) {
        if (k == 0) continue;
        const double p = static_cast<double>(k) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double mutual_information(std::span<const Code> x, std::span<const Code> y) {
    if (x.size() != y.size()) throw ConfigError("mutual_information: length mismatch");
    if (x.empty()) throw ConfigError("mutual_information: empty columns");
    return mi_over(x, y, x.size(), [](std::size_t k) { return k; });
}

double local_mi(std::span<const Code> x, std::span<const Code> y, std::span<const std::size_t> block) {
    if (x.size() != y.size()) throw ConfigError("local_mi: length mismatch");
    for (auto i : block)
        if (i >= x.size()) throw ConfigError("local_mi: block index out of range");
    return mi_over(x, y, block.size(), [&](std::size_t k) { return block[k]; });
}

double conditional_mi(std::span<const Code> x, std::span<const Code> y, const BlockPartition& part) {
    if (x.size() != y.size()) throw ConfigError("conditional_mi: length mismatch");
    if (part.n_samples() != x.size()) throw ConfigError("conditional_mi: partition does not cover the samples");
    if (x.empty()) return 0.0;
    const auto n = static_cast<double>(x.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < part.n_blocks(); ++j) {
        const auto blk = part.block(j);
        sum += static_cast<double>(blk.size()) / n * local_mi(x, y, blk);
    }
    return sum;
}

std::vector<Code> binary_collapse(std::span<const Code> classes, std::size_t n_classes, std::size_t label) {
    if (label >= n_classes)
        throw ConfigError("binary_collapse: label " + std::to_string(label) + " out of range");
    std::vector<Code> out(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) out[i] = classes[i] == label ? 1 : 0;
    return out;
}

std::vector<double> label_divergences(std::span<const Code> feature, std::span<const Code> classes,
                                      std::size_t n_classes) {
    if (feature.size() != classes.size()) throw ConfigError("label_divergences: length mismatch");
    const std::size_t rf = domain_of(feature);
    std::vector<std::uint64_t> nf(rf, 0);
    std::vector<std::uint64_t> nc(n_classes, 0);
    std::vector<std::uint64_t> nfc(rf * n_classes, 0);
    for (std::size_t i = 0; i < feature.size(); ++i) {
        if (classes[i] >= n_classes) throw ConfigError("label_divergences: class code out of range");
        ++nf[feature[i]];
        ++nc[classes[i]];
        ++nfc[feature[i] * n_classes + classes[i]];
    }
    std::vector<double> div(n_classes, 0.0);
    const std::uint64_t n = feature.size();
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (nc[c] == 0) continue;
        double sum = 0.0;
        for (std::size_t f = 0; f < rf; ++f) sum += mi_term(nfc[f * n_classes + c], nf[f], nc[c], n);
        div[c] = sum / static_cast<double>(nc[c]);
    }
    return div;
}

std::vector<Code> join_codes(std::span<const Code> a, std::span<const Code> b) {
    if (a.size() != b.size()) throw ConfigError("join_codes: length mismatch");
    const std::uint64_t cb = domain_of(b);
    std::unordered_map<std::uint64_t, Code> seen;
    std::vector<Code> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [it, inserted] =
            seen.try_emplace(static_cast<std::uint64_t>(a[i]) * cb + b[i], static_cast<Code>(seen.size()));
        out[i] = it->second;
    }
    return out;
}

double ScoreVector::total() const {
    double sum = 0.0;
    for (auto v : values) sum += v;
    return sum;
}

ScoreVector r_scores(std::size_t feature_index, std::span<const Code> feature, std::span<const Code> classes,
                     std::size_t n_classes, const BlockPartition& part) {
    if (feature.size() != classes.size()) throw ConfigError("r_scores: length mismatch");
    if (part.n_samples() != feature.size()) throw ConfigError("r_scores: partition does not cover the samples");

    ScoreVector out{feature_index, std::vector<double>(n_classes, 0.0)};
    if (feature.empty()) return out;

    const std::size_t rf = domain_of(feature);
    std::vector<std::uint64_t> nfc(rf * n_classes, 0);
    std::vector<std::uint64_t> nf(rf, 0);
    std::vector<std::uint64_t> nc(n_classes, 0);
    std::vector<Code> touched;
    const auto n = static_cast<double>(feature.size());

    for (std::size_t j = 0; j < part.n_blocks(); ++j) {
        const auto blk = part.block(j);
        touched.clear();
        for (auto i : blk) {
            const Code f = feature[i];
            const Code c = classes[i];
            if (c >= n_classes) throw ConfigError("r_scores: class code out of range");
            if (nf[f]++ == 0) touched.push_back(f);
            ++nc[c];
            ++nfc[f * n_classes + c];
        }
        const std::uint64_t size = blk.size();
        const double weight = static_cast<double>(size) / n;
        for (std::size_t c = 0; c < n_classes; ++c) {
            const std::uint64_t in = nc[c];
            const std::uint64_t out_of = size - in;
            // LMI between F and the collapse (c vs rest) on this block.
            double sum = 0.0;
            for (auto f : touched) {
                const std::uint64_t a = nfc[f * n_classes + c];
                sum += mi_term(a, nf[f], in, size);
                sum += mi_term(nf[f] - a, nf[f], out_of, size);
            }
            out.values[c] += weight * clamp_nonnegative(sum / static_cast<double>(size));
        }
        for (auto f : touched) {
            nf[f] = 0;
            for (std::size_t c = 0; c < n_classes; ++c) nfc[f * n_classes + c] = 0;
        }
        std::fill(nc.begin(), nc.end(), 0);
    }
    return out;
}

ScoreVector r_scores(const Dataset& ds, std::size_t feature_index, const BlockPartition& part) {
    return r_scores(feature_index, ds.feature(feature_index), ds.classes(), ds.n_classes(), part);
}

}  // namespace deacs

namespace deacs {

bool ScoreMatrix::add(ScoreVector row) {
    if (row.values.size() != n_labels_) throw ConfigError("score vector width does not match the label count");
    for (auto v : row.values)
        if (!(v >= 0.0)) throw ConfigError("score vectors must be nonnegative");
    if (row.total() == 0.0) return false;
    rows_.push_back(std::move(row));
    return true;
}

}  // namespace deacs
