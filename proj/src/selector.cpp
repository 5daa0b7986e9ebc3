#include "deacs/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "deacs/dea.hpp"
#include "deacs/error.hpp"
#include "deacs/infotheory.hpp"
#include "deacs/parallel.hpp"
#include "deacs/random.hpp"

namespace deacs {

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::ReachedDelta: return "reached_delta";
        case StopReason::AllScoresZero: return "all_scores_zero";
    }
    return "unknown";
}

std::vector<std::size_t> SelectionTrace::features() const {
    std::vector<std::size_t> out;
    out.reserve(selected.size());
    for (const auto& s : selected) out.push_back(s.feature);
    return out;
}

namespace {

std::size_t effective_delta(const Dataset& ds, std::size_t delta) {
    if (delta < 1) throw ConfigError("delta must be at least 1");
    return std::min(delta, ds.n_features());
}

// Greedy forward selection on a per-candidate criterion. `score(f, selected)`
// is evaluated for every unselected f; `on_select(f)` lets the criterion
// update its cached sums. Highest score wins, ties to the lower index.
template <typename Score, typename OnSelect>
SelectionTrace greedy(const Dataset& ds, std::size_t delta, std::string name, Score&& score, OnSelect&& on_select) {
    SelectionTrace trace;
    trace.algorithm = std::move(name);
    trace.delta = effective_delta(ds, delta);
    std::vector<bool> taken(ds.n_features(), false);
    while (trace.selected.size() < trace.delta) {
        IterationRecord rec;
        std::size_t best = ds.n_features();
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < ds.n_features(); ++f) {
            if (taken[f]) continue;
            const double v = score(f, trace.selected.size());
            rec.candidates.push_back({f, {v}, std::nullopt});
            if (best == ds.n_features() || v > best_value) {
                best = f;
                best_value = v;
            }
        }
        rec.winner = best;
        rec.winning_score = best_value;
        trace.iterations.push_back(std::move(rec));
        trace.selected.push_back({best, best_value});
        taken[best] = true;
        on_select(best);
    }
    trace.stop_reason = StopReason::ReachedDelta;
    return trace;
}

SelectionTrace ranking(const Dataset& ds, std::size_t delta, std::string name, const std::vector<double>& values) {
    SelectionTrace trace;
    trace.algorithm = std::move(name);
    trace.delta = effective_delta(ds, delta);
    std::vector<std::size_t> order(ds.n_features());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
    IterationRecord rec;
    for (std::size_t f = 0; f < ds.n_features(); ++f) rec.candidates.push_back({f, {values[f]}, std::nullopt});
    for (std::size_t k = 0; k < trace.delta; ++k) trace.selected.push_back({order[k], values[order[k]]});
    if (!order.empty()) {
        rec.winner = order.front();
        rec.winning_score = values[order.front()];
    }
    trace.iterations.push_back(std::move(rec));
    trace.stop_reason = StopReason::ReachedDelta;
    return trace;
}

std::vector<double> relevance(const Dataset& ds) {
    std::vector<double> rel(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) rel[f] = mutual_information(ds.feature(f), ds.classes());
    return rel;
}

double joint_entropy(std::span<const Code> joint) {
    std::size_t domain = 0;
    for (auto c : joint) domain = std::max<std::size_t>(domain, c + 1);
    return entropy(joint, domain);
}

}  // namespace

SelectionTrace dea_cs_select(const Dataset& ds, std::size_t delta, std::size_t threads) {
    SelectionTrace trace;
    trace.algorithm = "dea-cs";
    trace.delta = effective_delta(ds, delta);

    BlockPartition part(ds.n_samples());
    std::vector<bool> taken(ds.n_features(), false);
    while (trace.selected.size() < trace.delta) {
        std::vector<std::size_t> pool;
        for (std::size_t f = 0; f < ds.n_features(); ++f)
            if (!taken[f]) pool.push_back(f);

        std::vector<ScoreVector> scored(pool.size());
        parallel_for(pool.size(), threads, [&](std::size_t k) { scored[k] = r_scores(ds, pool[k], part); });

        IterationRecord rec;
        ScoreMatrix gamma(ds.n_classes());
        std::vector<std::size_t> record_of_row;
        for (std::size_t k = 0; k < scored.size(); ++k) {
            rec.candidates.push_back({pool[k], scored[k].values, std::nullopt});
            if (gamma.add(scored[k])) record_of_row.push_back(k);
        }
        if (gamma.empty()) {
            trace.iterations.push_back(std::move(rec));
            trace.stop_reason = StopReason::AllScoresZero;
            return trace;
        }

        rec.rule_of_thumb_violated = dea::breaks_rule_of_thumb(gamma.n_rows(), 1, gamma.n_labels());
        const auto sweep = dea::sup_dea_max(gamma, threads);
        for (std::size_t p = 0; p < gamma.n_rows(); ++p)
            rec.candidates[record_of_row[p]].efficiency = sweep.scores[p].value;

        const std::size_t winner = gamma.row(sweep.row).feature;
        rec.winner = winner;
        rec.winning_score = sweep.best.value;
        trace.iterations.push_back(std::move(rec));
        trace.selected.push_back({winner, sweep.best.value});
        taken[winner] = true;
        part = refine_partition(part, ds.feature(winner), winner);
    }
    trace.stop_reason = StopReason::ReachedDelta;
    return trace;
}

SelectionTrace mim_select(const Dataset& ds, std::size_t delta) {
    return ranking(ds, delta, "mim", relevance(ds));
}

SelectionTrace mrmr_select(const Dataset& ds, std::size_t delta) {
    const auto rel = relevance(ds);
    std::vector<double> redundancy(ds.n_features(), 0.0);
    return greedy(
        ds, delta, "mrmr",
        [&](std::size_t f, std::size_t n_selected) {
            if (n_selected == 0) return rel[f];
            return rel[f] - redundancy[f] / static_cast<double>(n_selected);
        },
        [&](std::size_t s) {
            for (std::size_t f = 0; f < ds.n_features(); ++f)
                redundancy[f] += mutual_information(ds.feature(f), ds.feature(s));
        });
}

SelectionTrace disr_select(const Dataset& ds, std::size_t delta) {
    auto normalized = [&](std::span<const Code> joint) {
        const double h = joint_entropy(join_codes(joint, ds.classes()));
        if (h == 0.0) return 0.0;
        return mutual_information(joint, ds.classes()) / h;
    };
    std::vector<double> first(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) first[f] = normalized(ds.feature(f));
    std::vector<double> sum(ds.n_features(), 0.0);
    std::vector<bool> taken(ds.n_features(), false);
    return greedy(
        ds, delta, "disr",
        [&](std::size_t f, std::size_t n_selected) { return n_selected == 0 ? first[f] : sum[f]; },
        [&](std::size_t s) {
            taken[s] = true;
            for (std::size_t f = 0; f < ds.n_features(); ++f)
                if (!taken[f]) sum[f] += normalized(join_codes(ds.feature(f), ds.feature(s)));
        });
}

SelectionTrace unified_select(const Dataset& ds, std::size_t delta, const CriterionConfig& cfg) {
    for (double v : {cfg.alpha, cfg.beta, cfg.gamma})
        if (!std::isfinite(v)) throw ConfigError("criterion coefficients must be finite");

    const auto rel = relevance(ds);
    const bool normalize = cfg.normalization == Normalization::JointEntropy;
    BlockPartition by_class(ds.n_samples());
    by_class = refine_partition(by_class, ds.classes(), std::numeric_limits<std::size_t>::max());

    std::vector<double> first(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        first[f] = cfg.alpha * rel[f];
        if (normalize) {
            const double h = joint_entropy(join_codes(ds.feature(f), ds.classes()));
            first[f] = h == 0.0 ? 0.0 : first[f] / h;
        }
    }

    // Plain: running sums of the pairwise terms. Normalized: the summed
    // per-s normalized criterion, which needs the coefficient at the time
    // of scoring, so its pieces are kept per selected feature.
    std::vector<double> redundancy(ds.n_features(), 0.0);
    std::vector<double> conditional(ds.n_features(), 0.0);
    struct Pair {
        double red, cond, h;
    };
    std::vector<std::vector<Pair>> pairs(ds.n_features());
    std::vector<bool> taken(ds.n_features(), false);

    auto coefficient = [](double c, Scaling scaling, std::size_t n_selected) {
        return scaling == Scaling::InverseSelectedCount ? c * (1.0 / static_cast<double>(n_selected)) : c;
    };

    return greedy(
        ds, delta, "unified",
        [&](std::size_t f, std::size_t n_selected) {
            if (n_selected == 0) return first[f];
            const double b = coefficient(cfg.beta, cfg.beta_scaling, n_selected);
            const double g = coefficient(cfg.gamma, cfg.gamma_scaling, n_selected);
            if (!normalize) return cfg.alpha * rel[f] - b * redundancy[f] + g * conditional[f];
            double j = 0.0;
            for (const auto& p : pairs[f])
                if (p.h != 0.0) j += (cfg.alpha * rel[f] - b * p.red + g * p.cond) / p.h;
            return j;
        },
        [&](std::size_t s) {
            taken[s] = true;
            for (std::size_t f = 0; f < ds.n_features(); ++f) {
                if (taken[f]) continue;
                const double red = mutual_information(ds.feature(f), ds.feature(s));
                const double cond = cfg.gamma == 0.0 ? 0.0 : conditional_mi(ds.feature(f), ds.feature(s), by_class);
                if (normalize) {
                    const double h = joint_entropy(join_codes(join_codes(ds.feature(f), ds.feature(s)), ds.classes()));
                    pairs[f].push_back({red, cond, h});
                } else {
                    redundancy[f] += red;
                    conditional[f] += cond;
                }
            }
        });
}

std::vector<double> relieff_weights(const Dataset& ds, const ReliefOptions& options) {
    if (options.neighbors < 1) throw ConfigError("ReliefF needs at least one neighbor");
    const std::size_t n = ds.n_samples();
    const std::size_t nf = ds.n_features();
    const std::size_t nc = ds.n_classes();
    std::vector<double> weights(nf, 0.0);
    if (nf == 0) return weights;

    std::vector<double> prior(nc, 0.0);
    for (auto c : ds.classes()) prior[c] += 1.0 / static_cast<double>(n);

    const std::size_t m = std::min(options.sampled_instances, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(options.seed);
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
    }

    auto distance = [&](std::size_t a, std::size_t b) {
        std::size_t d = 0;
        for (std::size_t f = 0; f < nf; ++f) d += ds.feature(f)[a] != ds.feature(f)[b];
        return d;
    };

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_class(nc);
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t r = order[s];
        const Code rc = ds.classes()[r];
        for (auto& v : by_class) v.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (i != r) by_class[ds.classes()[i]].emplace_back(distance(r, i), i);

        for (std::size_t c = 0; c < nc; ++c) {
            auto& cand = by_class[c];
            if (cand.empty()) continue;
            const std::size_t k = std::min(options.neighbors, cand.size());
            std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
            double factor = 0.0;
            if (c == rc) {
                factor = -1.0;
            } else {
                if (prior[rc] >= 1.0) continue;
                factor = prior[c] / (1.0 - prior[rc]);
            }
            factor /= static_cast<double>(m) * static_cast<double>(k);
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t other = cand[j].second;
                for (std::size_t f = 0; f < nf; ++f)
                    if (ds.feature(f)[r] != ds.feature(f)[other]) weights[f] += factor;
            }
        }
    }
    return weights;
}

SelectionTrace relieff_select(const Dataset& ds, std::size_t delta, const ReliefOptions& options) {
    return ranking(ds, delta, "relieff", relieff_weights(ds, options));
}

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names{"dea-cs", "mim", "mrmr", "disr", "unified", "relieff"};
    return names;
}

SelectionTrace run_selector(const std::string& algorithm, const Dataset& ds, std::size_t delta,
                            const SelectorParams& params, std::size_t threads) {
    if (algorithm == "dea-cs") return dea_cs_select(ds, delta, threads);
    if (algorithm == "mim") return mim_select(ds, delta);
    if (algorithm == "mrmr") return mrmr_select(ds, delta);
    if (algorithm == "disr") return disr_select(ds, delta);
    if (algorithm == "unified") return unified_select(ds, delta, params.criterion);
    if (algorithm == "relieff") return relieff_select(ds, delta, params.relieff);
    throw ConfigError("unknown algorithm '" + algorithm + "'");
}

namespace {

nlohmann::ordered_json score_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double score_from(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("bad score value '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace

std::string trace_to_json(const SelectionTrace& trace, const Dataset& ds) {
    nlohmann::ordered_json doc;
    doc["algorithm"] = trace.algorithm;
    doc["delta"] = trace.delta;
    auto selected = nlohmann::ordered_json::array();
    for (const auto& s : trace.selected)
        selected.push_back({{"feature", ds.feature_name(s.feature)}, {"index", s.feature}, {"score", score_json(s.score)}});
    doc["selected"] = std::move(selected);
    doc["stop_reason"] = to_string(trace.stop_reason);
    auto iterations = nlohmann::ordered_json::array();
    for (const auto& rec : trace.iterations) {
        nlohmann::ordered_json it;
        it["winner"] = rec.winner ? nlohmann::ordered_json(*rec.winner) : nlohmann::ordered_json(nullptr);
        it["winning_score"] = score_json(rec.winning_score);
        it["rule_of_thumb_violated"] = rec.rule_of_thumb_violated;
        auto cands = nlohmann::ordered_json::array();
        for (const auto& c : rec.candidates) {
            nlohmann::ordered_json cj;
            cj["index"] = c.feature;
            cj["scores"] = c.scores;
            cj["efficiency"] = c.efficiency ? score_json(*c.efficiency) : nlohmann::ordered_json(nullptr);
            cands.push_back(std::move(cj));
        }
        it["candidates"] = std::move(cands);
        iterations.push_back(std::move(it));
    }
    doc["iterations"] = std::move(iterations);
    return doc.dump(2) + "\n";
}

SelectionTrace trace_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        SelectionTrace trace;
        trace.algorithm = doc.at("algorithm").get<std::string>();
        trace.delta = doc.at("delta").get<std::size_t>();
        for (const auto& s : doc.at("selected"))
            trace.selected.push_back({s.at("index").get<std::size_t>(), score_from(s.at("score"))});
        const auto reason = doc.at("stop_reason").get<std::string>();
        if (reason == "reached_delta") trace.stop_reason = StopReason::ReachedDelta;
        else if (reason == "all_scores_zero") trace.stop_reason = StopReason::AllScoresZero;
        else throw ParseError("unknown stop reason '" + reason + "'");
        for (const auto& it : doc.at("iterations")) {
            IterationRecord rec;
            if (!it.at("winner").is_null()) rec.winner = it.at("winner").get<std::size_t>();
            rec.winning_score = score_from(it.at("winning_score"));
            rec.rule_of_thumb_violated = it.at("rule_of_thumb_violated").get<bool>();
            for (const auto& c : it.at("candidates")) {
                CandidateRecord cr{c.at("index").get<std::size_t>(), c.at("scores").get<std::vector<double>>(),
                                   std::nullopt};
                if (!c.at("efficiency").is_null()) cr.efficiency = score_from(c.at("efficiency"));
                rec.candidates.push_back(std::move(cr));
            }
            trace.iterations.push_back(std::move(rec));
        }
        return trace;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid trace JSON: ") + e.what());
    }
}

}  // namespace deacs
