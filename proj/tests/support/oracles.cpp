#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace oracle {

namespace {

using Real = long double;

Real log2l_(Real v) { return std::log2(v); }

Column col(std::span<const std::uint32_t> s) { return Column(s.begin(), s.end()); }

}  // namespace

double entropy(const Column& x) {
    std::map<std::uint32_t, std::size_t> counts;
    for (auto v : x) ++counts[v];
    Real h = 0;
    const Real n = static_cast<Real>(x.size());
    for (const auto& [v, c] : counts) {
        const Real p = static_cast<Real>(c) / n;
        h -= p * log2l_(p);
    }
    return static_cast<double>(h);
}

double mutual_information(const Column& x, const Column& y) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> xy;
    std::map<std::uint32_t, std::size_t> cx, cy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ++xy[{x[i], y[i]}];
        ++cx[x[i]];
        ++cy[y[i]];
    }
    const Real n = static_cast<Real>(x.size());
    Real mi = 0;
    for (const auto& [k, c] : xy) {
        const Real pxy = c / n;
        mi += pxy * log2l_(pxy / ((cx[k.first] / n) * (cy[k.second] / n)));
    }
    return static_cast<double>(mi);
}

double cmi_triple_sum(const Column& x, const Column& y, const std::vector<Column>& given) {
    const std::size_t n = x.size();
    auto key_of = [&](std::size_t i) {
        std::vector<std::uint32_t> k;
        for (const auto& g : given) k.push_back(g[i]);
        return k;
    };
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>, std::size_t> xys;
    std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::size_t> xs, ys;
    std::map<std::vector<std::uint32_t>, std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = key_of(i);
        ++xys[{x[i], y[i], k}];
        ++xs[{x[i], k}];
        ++ys[{y[i], k}];
        ++s[k];
    }
    const Real nn = static_cast<Real>(n);
    Real total = 0;
    for (const auto& [key, c] : xys) {
        const auto& [xv, yv, sv] = key;
        const Real p_xys = c / nn;
        const Real p_s = s[sv] / nn;
        const Real p_xs = xs[{xv, sv}] / nn;
        const Real p_ys = ys[{yv, sv}] / nn;
        total += p_xys * log2l_(p_s * p_xys / (p_xs * p_ys));
    }
    return static_cast<double>(total);
}

std::vector<std::vector<std::size_t>> grouping(const std::vector<Column>& given, std::size_t n) {
    std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> k;
        for (const auto& g : given) k.push_back(g[i]);
        groups[k].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [k, v] : groups) out.push_back(std::move(v));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Solves A x = b in place (square); false when singular.
bool gauss(std::vector<std::vector<Real>> a, std::vector<Real> b, std::vector<Real>& x) {
    const std::size_t d = b.size();
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < d; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (std::fabs(a[piv][c]) < 1e-12L) return false;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c) continue;
            const Real f = a[r][c] / a[c][c];
            if (f == 0) continue;
            for (std::size_t k = c; k < d; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.resize(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = b[i] / a[i][i];
    return true;
}

}  // namespace

std::optional<double> lp_by_vertices(const std::vector<double>& c, const std::vector<Row>& rows) {
    const std::size_t d = c.size();
    // All constraints, with x_i >= 0 appended.
    std::vector<Row> all = rows;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> e(d, 0.0);
        e[i] = 1.0;
        all.push_back({e, +1, 0.0});
    }
    if (all.size() < d) return std::nullopt;
    std::optional<Real> best;
    std::vector<bool> mask(all.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(d), true);
    do {
        std::vector<std::size_t> active;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (mask[k]) active.push_back(k);
        std::vector<std::vector<Real>> a;
        std::vector<Real> b;
        for (auto r : active) {
            a.emplace_back(all[r].a.begin(), all[r].a.end());
            b.push_back(all[r].b);
        }
        std::vector<Real> x;
        if (!gauss(a, b, x)) continue;
        bool feasible = true;
        for (const auto& row : all) {
            Real lhs = 0;
            for (std::size_t i = 0; i < d; ++i) lhs += row.a[i] * x[i];
            const Real slack = 1e-9L * (1 + std::fabs(static_cast<Real>(row.b)));
            if ((row.rel <= 0 && lhs > row.b + slack) || (row.rel >= 0 && lhs < row.b - slack)) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        Real obj = 0;
        for (std::size_t i = 0; i < d; ++i) obj += c[i] * x[i];
        if (!best || obj < *best) best = obj;
    } while (std::prev_permutation(mask.begin(), mask.end()));
    if (!best) return std::nullopt;
    return static_cast<double>(*best);
}

namespace {

double multiplier_form(const std::vector<std::vector<double>>& y, std::size_t p, bool include_self) {
    const std::size_t s = y[p].size();
    for (std::size_t r = 0; r < s; ++r) {
        if (y[p][r] <= 0) continue;
        bool covered = false;
        for (std::size_t j = 0; j < y.size(); ++j)
            if ((include_self || j != p) && y[j][r] > 0) covered = true;
        if (!covered) return std::numeric_limits<double>::infinity();
    }
    std::vector<double> c(s);
    for (std::size_t r = 0; r < s; ++r) c[r] = -y[p][r];
    std::vector<Row> rows;
    for (std::size_t j = 0; j < y.size(); ++j)
        if (include_self || j != p) rows.push_back({y[j], -1, 1.0});
    const auto v = lp_by_vertices(c, rows);
    return v ? -*v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double super_efficiency(const std::vector<std::vector<double>>& outputs, std::size_t p) {
    return multiplier_form(outputs, p, false);
}

double ccr(const std::vector<std::vector<double>>& outputs, std::size_t p) { return multiplier_form(outputs, p, true); }

OracleTrace dea_cs(const deacs::Dataset& ds, std::size_t delta) {
    OracleTrace trace;
    delta = std::min(delta, ds.n_features());
    const Column classes = col(ds.classes());
    std::vector<Column> given;
    std::vector<bool> taken(ds.n_features(), false);
    while (trace.selected.size() < delta) {
        OracleIteration it;
        std::vector<std::size_t> live;  // candidate positions with a nonzero row
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            if (taken[f]) continue;
            std::vector<double> row;
            double sum = 0;
            for (std::size_t label = 0; label < ds.n_classes(); ++label) {
                Column collapsed(classes.size());
                for (std::size_t i = 0; i < classes.size(); ++i) collapsed[i] = classes[i] == label ? 1 : 0;
                double v = cmi_triple_sum(col(ds.feature(f)), collapsed, given);
                if (std::fabs(v) < 1e-12) v = 0;
                row.push_back(v);
                sum += v;
            }
            it.candidates.push_back(f);
            it.scores.push_back(row);
            it.efficiency.emplace_back();
            if (sum > 0) live.push_back(it.candidates.size() - 1);
        }
        if (live.empty()) {
            trace.iterations.push_back(std::move(it));
            trace.all_zero_stop = true;
            return trace;
        }
        std::vector<std::vector<double>> outputs;
        for (auto k : live) outputs.push_back(it.scores[k]);
        for (std::size_t q = 0; q < live.size(); ++q)
            it.efficiency[live[q]] =
                live.size() == 1 ? std::numeric_limits<double>::infinity() : super_efficiency(outputs, q);

        auto total = [&](std::size_t k) { return std::accumulate(it.scores[k].begin(), it.scores[k].end(), 0.0); };
        std::size_t best = live[0];
        for (std::size_t q = 1; q < live.size(); ++q) {
            const std::size_t k = live[q];
            const double a = *it.efficiency[k], b = *it.efficiency[best];
            bool better;
            if (std::isinf(a) && std::isinf(b)) better = total(k) > total(best) + 1e-7;
            else if (std::isinf(a)) better = true;
            else if (std::isinf(b)) better = false;
            else better = a > b + 1e-7;
            if (better) best = k;
        }
        const std::size_t f = it.candidates[best];
        it.winner = f;
        trace.iterations.push_back(std::move(it));
        trace.selected.push_back(f);
        taken[f] = true;
        given.push_back(col(ds.feature(f)));
    }
    return trace;
}

namespace {

template <typename Score>
std::vector<std::size_t> greedy(const deacs::Dataset& ds, std::size_t delta, Score score) {
    delta = std::min(delta, ds.n_features());
    std::vector<std::size_t> picked;
    std::vector<bool> taken(ds.n_features(), false);
    while (picked.size() < delta) {
        std::size_t best = ds.n_features();
        Real best_v = 0;
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            if (taken[f]) continue;
            const Real v = score(f, picked);
            if (best == ds.n_features() || v > best_v + 1e-12L) {
                best = f;
                best_v = v;
            }
        }
        picked.push_back(best);
        taken[best] = true;
    }
    return picked;
}

Column joint(const Column& a, const Column& b) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
    Column out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it, fresh] = ids.try_emplace({a[i], b[i]}, static_cast<std::uint32_t>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> mim(const deacs::Dataset& ds, std::size_t delta) {
    const Column c = col(ds.classes());
    return greedy(ds, delta, [&](std::size_t f, const auto&) { return Real(mutual_information(col(ds.feature(f)), c)); });
}

std::vector<std::size_t> mrmr(const deacs::Dataset& ds, std::size_t delta) {
    return unified(ds, delta, 1.0, -1.0, 0.0);
}

std::vector<std::size_t> disr(const deacs::Dataset& ds, std::size_t delta) {
    const Column c = col(ds.classes());
    auto ratio = [&](const Column& x) -> Real {
        const Real h = entropy(joint(x, c));
        return h == 0 ? 0 : mutual_information(x, c) / h;
    };
    return greedy(ds, delta, [&](std::size_t f, const std::vector<std::size_t>& s) -> Real {
        if (s.empty()) return ratio(col(ds.feature(f)));
        Real j = 0;
        for (auto t : s) j += ratio(joint(col(ds.feature(f)), col(ds.feature(t))));
        return j;
    });
}

// beta < 0 means "|beta| / |S|".
std::vector<std::size_t> unified(const deacs::Dataset& ds, std::size_t delta, double alpha, double beta, double gamma) {
    const Column c = col(ds.classes());
    return greedy(ds, delta, [&](std::size_t f, const std::vector<std::size_t>& s) -> Real {
        const Column x = col(ds.feature(f));
        Real j = alpha * mutual_information(x, c);
        if (s.empty()) return j;
        const Real b = beta < 0 ? -beta / static_cast<Real>(s.size()) : beta;
        for (auto t : s) {
            const Column z = col(ds.feature(t));
            j -= b * mutual_information(x, z);
            if (gamma != 0) j += gamma * cmi_triple_sum(x, z, {c});
        }
        return j;
    });
}

std::vector<std::uint32_t> knn(const deacs::Dataset& ds, const std::vector<std::size_t>& train,
                               const std::vector<std::size_t>& test, const std::vector<std::size_t>& features,
                               std::size_t k) {
    std::vector<std::uint32_t> out;
    for (auto t : test) {
        std::vector<std::pair<std::size_t, std::size_t>> d;
        for (auto r : train) {
            std::size_t dist = 0;
            for (auto f : features) dist += ds.feature(f)[t] != ds.feature(f)[r];
            d.emplace_back(dist, r);
        }
        std::sort(d.begin(), d.end());
        std::vector<std::size_t> votes(ds.n_classes(), 0);
        for (std::size_t j = 0; j < k; ++j) ++votes[ds.classes()[d[j].second]];
        std::uint32_t best = 0;
        for (std::uint32_t c = 1; c < votes.size(); ++c)
            if (votes[c] > votes[best]) best = c;
        out.push_back(best);
    }
    return out;
}

namespace {

Real ent_counts(const std::map<std::uint32_t, std::size_t>& counts, std::size_t n) {
    Real h = 0;
    for (const auto& [k, c] : counts)
        if (c) h -= (Real(c) / n) * log2l_(Real(c) / n);
    return h;
}

void mdl_rec(const std::vector<std::pair<double, std::uint32_t>>& s, std::vector<double>& cuts) {
    const std::size_t n = s.size();
    if (n < 2) return;
    std::map<std::uint32_t, std::size_t> all;
    for (const auto& [v, c] : s) ++all[c];
    std::optional<std::size_t> best;
    Real best_e = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[i].first == s[i - 1].first) continue;
        std::map<std::uint32_t, std::size_t> l, r;
        for (std::size_t j = 0; j < i; ++j) ++l[s[j].second];
        for (std::size_t j = i; j < n; ++j) ++r[s[j].second];
        const Real e = (Real(i) * ent_counts(l, i) + Real(n - i) * ent_counts(r, n - i)) / n;
        if (!best || e < best_e - 1e-12L) {
            best = i;
            best_e = e;
        }
    }
    if (!best) return;
    const std::size_t i = *best;
    std::map<std::uint32_t, std::size_t> l, r;
    for (std::size_t j = 0; j < i; ++j) ++l[s[j].second];
    for (std::size_t j = i; j < n; ++j) ++r[s[j].second];
    const Real ent = ent_counts(all, n);
    const Real el = ent_counts(l, i), er = ent_counts(r, n - i);
    const Real k = all.size(), k1 = l.size(), k2 = r.size();
    const Real delta = log2l_(std::pow(3.0L, k) - 2) - (k * ent - k1 * el - k2 * er);
    if (!(ent - best_e > (log2l_(Real(n) - 1) + delta) / n)) return;
    mdl_rec({s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i)}, cuts);
    cuts.push_back(0.5 * (s[i - 1].first + s[i].first));
    mdl_rec({s.begin() + static_cast<std::ptrdiff_t>(i), s.end()}, cuts);
}

}  // namespace

std::vector<double> mdl(const std::vector<double>& values, const std::vector<std::uint32_t>& classes) {
    std::vector<std::pair<double, std::uint32_t>> s;
    for (std::size_t i = 0; i < values.size(); ++i) s.emplace_back(values[i], classes[i]);
    std::sort(s.begin(), s.end());
    std::vector<double> cuts;
    mdl_rec(s, cuts);
    return cuts;
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

deacs::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t n_features, std::size_t max_card,
                              std::size_t n_classes) {
    std::vector<std::vector<std::uint32_t>> features(n_features);
    std::vector<std::string> names;
    for (std::size_t f = 0; f < n_features; ++f) {
        const std::size_t card = uniform(rng, 1, max_card);
        for (std::size_t i = 0; i < n; ++i) features[f].push_back(static_cast<std::uint32_t>(uniform(rng, 0, card - 1)));
        names.push_back("f" + std::to_string(f));
    }
    std::vector<std::uint32_t> classes;
    for (std::size_t i = 0; i < n; ++i) classes.push_back(static_cast<std::uint32_t>(uniform(rng, 0, n_classes - 1)));
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < n_classes; ++c) labels.push_back("c" + std::to_string(c));
    return deacs::Dataset(std::move(features), std::move(names), std::move(classes), std::move(labels));
}

deacs::Dataset informative_dataset(std::mt19937_64& rng, std::size_t n, std::size_t n_features, std::size_t max_card,
                                   std::size_t n_classes) {
    std::vector<std::uint32_t> classes;
    for (std::size_t i = 0; i < n; ++i) classes.push_back(static_cast<std::uint32_t>(uniform(rng, 0, n_classes - 1)));
    std::vector<std::vector<std::uint32_t>> features(n_features);
    std::vector<std::string> names;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t f = 0; f < n_features; ++f) {
        const std::size_t card = uniform(rng, 1, max_card);
        const double signal = unit(rng);
        std::vector<std::uint32_t> mapping;
        for (std::size_t c = 0; c < n_classes; ++c) mapping.push_back(static_cast<std::uint32_t>(uniform(rng, 0, card - 1)));
        for (std::size_t i = 0; i < n; ++i)
            features[f].push_back(unit(rng) < signal ? mapping[classes[i]]
                                                     : static_cast<std::uint32_t>(uniform(rng, 0, card - 1)));
        names.push_back("f" + std::to_string(f));
    }
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < n_classes; ++c) labels.push_back("c" + std::to_string(c));
    return deacs::Dataset(std::move(features), std::move(names), std::move(classes), std::move(labels));
}

}  // namespace oracle
