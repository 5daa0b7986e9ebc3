#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "deacs/error.hpp"
#include "deacs/infotheory.hpp"
#include "deacs/selector.hpp"
#include "oracles.hpp"

using namespace deacs;

namespace {

// f0 = class, f1..f3 fixed patterns that are empirically independent of it
Dataset class_copy_dataset() {
    std::vector<Code> c, f1, f2, f3;
    for (Code i = 0; i < 48; ++i) {
        c.push_back(i % 2);
        f1.push_back((i / 2) % 2);
        f2.push_back((i / 4) % 3);
        f3.push_back((i / 12) % 4);
    }
    return Dataset({c, f1, f2, f3}, {"f0", "f1", "f2", "f3"}, c, {"a", "b"});
}

void check_trace_shape(const SelectionTrace& t, std::size_t requested, std::size_t n_features) {
    const auto f = t.features();
    CHECK(std::set<std::size_t>(f.begin(), f.end()).size() == f.size());
    CHECK(f.size() <= std::min(requested, n_features));
    if (f.size() < t.delta) {
        CHECK(t.stop_reason == StopReason::AllScoresZero);
        REQUIRE_FALSE(t.iterations.empty());
        for (const auto& c : t.iterations.back().candidates)
            for (double v : c.scores) CHECK(v == 0.0);
    } else {
        CHECK(t.stop_reason == StopReason::ReachedDelta);
    }
}

void check_against_oracle(const Dataset& ds, const SelectionTrace& got, const oracle::OracleTrace& want) {
    CHECK(got.features() == want.selected);
    CHECK((got.stop_reason == StopReason::AllScoresZero) == want.all_zero_stop);
    REQUIRE(got.iterations.size() == want.iterations.size());
    for (std::size_t k = 0; k < want.iterations.size(); ++k) {
        const auto& g = got.iterations[k];
        const auto& w = want.iterations[k];
        REQUIRE(g.candidates.size() == w.candidates.size());
        CHECK(g.winner == w.winner);
        for (std::size_t q = 0; q < w.candidates.size(); ++q) {
            CHECK(g.candidates[q].feature == w.candidates[q]);
            for (std::size_t l = 0; l < ds.n_classes(); ++l)
                CHECK(std::fabs(g.candidates[q].scores[l] - w.scores[q][l]) <= 1e-10);
            REQUIRE(g.candidates[q].efficiency.has_value() == w.efficiency[q].has_value());
            if (w.efficiency[q]) {
                const double a = *g.candidates[q].efficiency, b = *w.efficiency[q];
                if (std::isinf(b)) CHECK(std::isinf(a));
                else CHECK(std::fabs(a - b) <= 1e-7);
            }
        }
    }
}

}  // namespace

TEST_CASE("class copy is picked first by every selector") {
    const auto ds = class_copy_dataset();
    CHECK(dea_cs_select(ds, 1).features() == std::vector<std::size_t>{0});
    CHECK(mim_select(ds, 1).features() == std::vector<std::size_t>{0});
    CHECK(mrmr_select(ds, 1).features() == std::vector<std::size_t>{0});
    CHECK(disr_select(ds, 1).features() == std::vector<std::size_t>{0});
    CHECK(unified_select(ds, 1, {}).features() == std::vector<std::size_t>{0});
    CHECK(relieff_select(ds, 1, {}).features() == std::vector<std::size_t>{0});
}

TEST_CASE("dea-cs: constant class stops immediately") {
    const Dataset ds({{0, 1, 0, 1}, {1, 1, 0, 0}}, {"a", "b"}, {0, 0, 0, 0}, {"only"});
    const auto t = dea_cs_select(ds, 2);
    CHECK(t.selected.empty());
    CHECK(t.stop_reason == StopReason::AllScoresZero);
    check_trace_shape(t, 2, 2);
}

TEST_CASE("dea-cs: independent noise after the class copy ends the run") {
    const auto ds = class_copy_dataset();
    const auto t = dea_cs_select(ds, 4);
    // given f0 the class is fully determined, so every other candidate scores 0
    CHECK(t.features() == std::vector<std::size_t>{0});
    CHECK(t.stop_reason == StopReason::AllScoresZero);
    check_trace_shape(t, 4, 4);
}

TEST_CASE("dea-cs: 4-feature 3-class seeded dataset matches the straight-line oracle") {
    std::mt19937_64 rng(60);
    const auto ds = oracle::informative_dataset(rng, 60, 4, 4, 3);
    const auto got = dea_cs_select(ds, 4);
    check_against_oracle(ds, got, oracle::dea_cs(ds, 4));
    check_trace_shape(got, 4, 4);
}

TEST_CASE("dea-cs: random datasets match the oracle, any thread count") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        const auto ds = oracle::informative_dataset(rng, oracle::uniform(rng, 10, 120), oracle::uniform(rng, 1, 6),
                                                    4, oracle::uniform(rng, 2, 4));
        const auto want = oracle::dea_cs(ds, ds.n_features());
        const auto one = dea_cs_select(ds, ds.n_features(), 1);
        check_against_oracle(ds, one, want);
        const auto four = dea_cs_select(ds, ds.n_features(), 4);
        CHECK(trace_to_json(one, ds) == trace_to_json(four, ds));
    }
}

TEST_CASE("dea-cs: a lone surviving candidate scores +inf") {
    // f1 constant, f0 informative: only f0 survives the zero-row skip
    const Dataset ds({{0, 0, 1, 1, 0, 1}, {0, 0, 0, 0, 0, 0}}, {"x", "k"}, {0, 0, 1, 1, 0, 1}, {"n", "y"});
    const auto t = dea_cs_select(ds, 2);
    REQUIRE(t.selected.size() == 1);
    CHECK(std::isinf(t.selected[0].score));
    CHECK(t.iterations[0].candidates[1].efficiency == std::nullopt);
}

TEST_CASE("dea-cs: binary class first pick equals MIM's") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const auto ds = oracle::informative_dataset(rng, 80, 6, 4, 2);
        CHECK(dea_cs_select(ds, 1).features() == mim_select(ds, 1).features());
    }
}

TEST_CASE("delta must be positive; large delta is clamped") {
    const auto ds = class_copy_dataset();
    CHECK_THROWS_AS(dea_cs_select(ds, 0), ConfigError);
    CHECK_THROWS_AS(mim_select(ds, 0), ConfigError);
    const auto t = mim_select(ds, 50);
    CHECK(t.selected.size() == 4);
    CHECK(t.delta == 4);
}

TEST_CASE("mim: ties keep index order") {
    const auto ds = class_copy_dataset();
    // f1..f3 all score exactly 0
    CHECK(mim_select(ds, 4).features() == std::vector<std::size_t>{0, 1, 2, 3});
    std::vector<Code> c{0, 1, 0, 1};
    const Dataset zero({{0, 0, 1, 1}, {1, 1, 1, 1}, {1, 1, 0, 0}}, {"a", "b", "c"}, c, {"p", "q"});
    CHECK(mim_select(zero, 2).features() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("mim and greedy baselines match the oracles") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ds = oracle::informative_dataset(rng, oracle::uniform(rng, 20, 150), 5, 4, oracle::uniform(rng, 2, 3));
        CHECK(mim_select(ds, 5).features() == oracle::mim(ds, 5));
        CHECK(mrmr_select(ds, 3).features() == oracle::mrmr(ds, 3));
        CHECK(disr_select(ds, 3).features() == oracle::disr(ds, 3));
        CHECK(unified_select(ds, 4, {0.7, 0.3, 0.2}).features() == oracle::unified(ds, 4, 0.7, 0.3, 0.2));
        CHECK(unified_select(ds, 4, {1.0, 0.0, 1.5}).features() == oracle::unified(ds, 4, 1.0, 0.0, 1.5));
    }
}

TEST_CASE("mrmr: a copy of the best feature is not the second pick") {
    std::mt19937_64 rng(404);
    const auto base = oracle::informative_dataset(rng, 100, 3, 3, 2);
    std::vector<std::vector<Code>> cols;
    for (std::size_t f = 0; f < 3; ++f) cols.emplace_back(base.feature(f).begin(), base.feature(f).end());
    const auto best = mim_select(base, 1).features()[0];
    cols.push_back(cols[best]);
    const Dataset ds(cols, {"a", "b", "c", "copy"},
                     std::vector<Code>(base.classes().begin(), base.classes().end()), {"n", "y"});
    bool positive_alternative = false;
    for (std::size_t f = 0; f < 3; ++f)
        if (f != best)
            positive_alternative |= mutual_information(ds.feature(f), ds.classes()) -
                                        mutual_information(ds.feature(f), ds.feature(best)) >
                                    0;
    REQUIRE(positive_alternative);
    const auto t = mrmr_select(ds, 2).features();
    CHECK(t[0] == best);
    CHECK(t[1] != 3);
}

TEST_CASE("disr: finite criterion on non-constant class") {
    std::mt19937_64 rng(505);
    const auto ds = oracle::random_dataset(rng, 50, 5, 3, 3);
    const auto t = disr_select(ds, 5);
    for (const auto& s : t.selected) CHECK(std::isfinite(s.score));
}

TEST_CASE("unified reduces to MIM and mRMR") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ds = oracle::informative_dataset(rng, 90, 6, 4, 3);
        CHECK(unified_select(ds, 6, {1.0, 0.0, 0.0}).features() == mim_select(ds, 6).features());
        CriterionConfig mrmr{1.0, 1.0, 0.0, Scaling::InverseSelectedCount};
        CHECK(unified_select(ds, 6, mrmr).features() == mrmr_select(ds, 6).features());
    }
    CHECK_THROWS_AS(unified_select(class_copy_dataset(), 1, {NAN, 0, 0}), ConfigError);
}

TEST_CASE("unified with joint-entropy normalization starts like DISR") {
    std::mt19937_64 rng(707);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ds = oracle::informative_dataset(rng, 90, 5, 3, 3);
        CriterionConfig cfg{1.0, 0.5, 0.5, Scaling::Constant, Scaling::Constant, Normalization::JointEntropy};
        const auto a = unified_select(ds, 1, cfg), b = disr_select(ds, 1);
        CHECK(a.features() == b.features());
        CHECK(a.selected[0].score == b.selected[0].score);
    }
}

TEST_CASE("relieff weights") {
    const auto ds = class_copy_dataset();
    const auto w = relieff_weights(ds, {5, 30, 1});
    CHECK(w[0] > 0);
    CHECK(std::max_element(w.begin(), w.end()) - w.begin() == 0);

    const Dataset k({{0, 0, 0, 0, 0, 0}, {0, 1, 0, 1, 1, 0}}, {"const", "v"}, {0, 1, 0, 1, 1, 0}, {"a", "b"});
    CHECK(relieff_weights(k, {5, 30, 3})[0] == 0.0);  // also: fewer than 5 per class is fine

    std::mt19937_64 rng(500);
    std::vector<Code> noise, c;
    for (int i = 0; i < 500; ++i) {
        noise.push_back(static_cast<Code>(oracle::uniform(rng, 0, 2)));
        c.push_back(static_cast<Code>(oracle::uniform(rng, 0, 1)));
    }
    const Dataset big({c, noise}, {"copy", "noise"}, c, {"a", "b"});
    CHECK(std::fabs(relieff_weights(big, {5, 30, 7})[1]) < 0.1);
    CHECK(relieff_weights(big, {5, 30, 7}) == relieff_weights(big, {5, 30, 7}));
    CHECK_THROWS_AS(relieff_weights(big, {0, 30, 7}), ConfigError);
}

TEST_CASE("selectors are deterministic and never repeat") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ds = oracle::informative_dataset(rng, 70, 7, 4, 3);
        for (const auto& name : algorithm_names()) {
            SelectorParams params;
            params.relieff.seed = 5;
            const auto a = run_selector(name, ds, 5, params), b = run_selector(name, ds, 5, params);
            CHECK(trace_to_json(a, ds) == trace_to_json(b, ds));
            check_trace_shape(a, 5, 7);
        }
    }
    CHECK_THROWS_AS(run_selector("cmim", class_copy_dataset(), 1, {}), ConfigError);
}

TEST_CASE("trace JSON round-trip") {
    std::mt19937_64 rng(909);
    const auto ds = oracle::informative_dataset(rng, 60, 5, 3, 3);
    const auto t = dea_cs_select(ds, 5);
    const auto text = trace_to_json(t, ds);
    CHECK(text.find("\"selected\"") != std::string::npos);
    CHECK(text.find("\"feature\": \"f") != std::string::npos);
    const auto back = trace_from_json(text);
    CHECK(back.features() == t.features());
    CHECK(trace_to_json(back, ds) == text);
    CHECK_THROWS_AS(trace_from_json("{}"), ParseError);
}
