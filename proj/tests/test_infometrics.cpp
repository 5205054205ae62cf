#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "matic/agents.hpp"
#include "matic/errors.hpp"
#include "matic/infometrics.hpp"

using namespace matic;

namespace {

SymbolDistribution dist(std::map<std::string, double> probs) {
    SymbolDistribution d;
    d.probs = std::move(probs);
    return d;
}

std::string scenario_path(const std::string& name) {
    return std::string(MATIC_SCENARIO_DIR) + "/" + name;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Event ev(std::string id, Tick t, std::string label) {
    Event e;
    e.id = std::move(id);
    e.t_start = t;
    e.duration = 1;
    e.label = std::move(label);
    return e;
}

}  // namespace

TEST_CASE("entropy of the classic distributions") {
    CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == 2.0);
    CHECK(entropy(std::vector<double>{0.5, 0.25, 0.25}) == 1.5);
    CHECK(entropy(std::vector<double>{1.0}) == 0.0);
    CHECK(entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);  // 0·log 0 = 0
    CHECK(entropy(dist({{"x", 0.5}, {"y", 0.5}})) == 1.0);
}

TEST_CASE("entropy rejects non-distributions") {
    CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.4}), InvalidDistribution);
    CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), InvalidDistribution);
    CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), InvalidDistribution);
    CHECK_THROWS_AS(entropy(std::vector<double>{}), InvalidDistribution);
    const double nan = std::nan("");
    CHECK_THROWS_AS(entropy(std::vector<double>{nan, 1.0}), InvalidDistribution);
}

TEST_CASE("entropy stays within [0, log2 N] on random distributions") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 1 + std::size_t(rng() % 8);
        std::vector<double> probs(n);
        double total = 0.0;
        for (auto& p : probs) total += (p = u(rng) + 1e-12);
        for (auto& p : probs) p /= total;
        const double h = entropy(probs);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(double(n)) + 1e-9);
    }
}

TEST_CASE("possibility projection narrows and renormalizes") {
    const auto d = dist({{"a", 0.5}, {"b", 0.25}, {"c", 0.25}});
    const auto narrowed = possibility_project(d, {"a", "b"});
    CHECK(narrowed.probs.at("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(narrowed.probs.at("b") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(narrowed.probs.count("c") == 0);
    CHECK(entropy(narrowed) < entropy(d));

    // projecting onto everything is the identity
    const auto same = possibility_project(d, {"a", "b", "c"});
    CHECK(same.probs == d.probs);

    // projection can only remove uncertainty, never add it
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        std::map<std::string, double> probs;
        double total = 0.0;
        for (char c = 'a'; c <= 'e'; ++c)
            total += (probs[std::string(1, c)] = u(rng) + 1e-12);
        for (auto& [_, p] : probs) p /= total;
        const auto full = dist(probs);
        const auto cut = possibility_project(full, {"a", "b", "c"});
        CHECK(entropy(cut) <= std::log2(3.0) + 1e-9);
    }
}

TEST_CASE("projection onto a massless set is an error") {
    const auto d = dist({{"a", 1.0}, {"b", 0.0}});
    CHECK_THROWS_AS(possibility_project(d, {"b"}), EmptySupport);
    CHECK_THROWS_AS(possibility_project(d, {}), EmptySupport);
}

TEST_CASE("jensen-shannon divergence: frozen value, symmetry, bounds") {
    const auto quarter = dist({{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}});
    const auto half = dist({{"a", 0.5}, {"b", 0.5}, {"c", 0.0}, {"d", 0.0}});
    CHECK(jensen_shannon(quarter, half) ==
          doctest::Approx(0.31127812445913294).epsilon(1e-12));
    CHECK(jensen_shannon(quarter, half) == jensen_shannon(half, quarter));
    CHECK(jensen_shannon(quarter, quarter) == 0.0);

    // disjoint supports, possibly with missing keys, hit the 1-bit ceiling
    CHECK(jensen_shannon(dist({{"x", 1.0}}), dist({{"y", 1.0}})) ==
          doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        std::map<std::string, double> pa, pb;
        double ta = 0.0, tb = 0.0;
        for (char c = 'a'; c <= 'd'; ++c) {
            ta += (pa[std::string(1, c)] = u(rng) + 1e-12);
            tb += (pb[std::string(1, c)] = u(rng) + 1e-12);
        }
        for (auto& [_, p] : pa) p /= ta;
        for (auto& [_, p] : pb) p /= tb;
        const double jsd = jensen_shannon(dist(pa), dist(pb));
        CHECK(jsd >= 0.0);
        CHECK(jsd <= 1.0 + 1e-12);
        CHECK(jsd == jensen_shannon(dist(pb), dist(pa)));
    }
}

TEST_CASE("garage entropy profile collapses as the dialogue unfolds") {
    const auto scenario = garage_scenario();
    const auto model = train_model(scenario.corpus, 3, 1.0);
    const auto profile = time_varying_entropy(scenario.trace, model);
    REQUIRE(profile.size() == 3);
    CHECK(profile[0].first == 0);
    CHECK(profile[0].second == doctest::Approx(2.2000290232794204).epsilon(1e-12));
    CHECK(profile[1].first == 1);
    CHECK(profile[1].second == doctest::Approx(1.925225327805443).epsilon(1e-12));
    CHECK(profile[2].first == 2);
    CHECK(profile[2].second == 0.0);  // the reply is fully determined

    ConditionalModel blank;
    CHECK_THROWS_AS(time_varying_entropy(scenario.trace, blank), UntrainedModel);
}

TEST_CASE("stationarity verdicts on hand-built windows") {
    SUBCASE("identical windows are stationary") {
        Trace tr({"a", "b"});
        tr.add(ev("e0", 0, "a"));
        tr.add(ev("e1", 1, "b"));
        tr.add(ev("e2", 2, "a"));
        tr.add(ev("e3", 3, "b"));
        const auto report = stationarity_test({tr}, 2, 0.05);
        CHECK(report.verdict == Stationarity::Stationary);
        CHECK(report.max_divergence == 0.0);
        CHECK(report.windows == 2);
    }
    SUBCASE("a hard symbol switch maxes out the divergence") {
        Trace tr({"a", "b"});
        tr.add(ev("e0", 0, "a"));
        tr.add(ev("e1", 1, "a"));
        tr.add(ev("e2", 2, "b"));
        tr.add(ev("e3", 3, "b"));
        const auto report = stationarity_test({tr}, 2, 0.05);
        CHECK(report.verdict == Stationarity::NonStationary);
        CHECK(report.max_divergence == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("counts pool across traces") {
        Trace first({"a", "b"});
        first.add(ev("f0", 0, "a"));
        first.add(ev("f1", 2, "b"));
        Trace second({"a", "b"});
        second.add(ev("s0", 0, "b"));
        second.add(ev("s1", 2, "a"));
        // pooled, both windows are 50/50
        const auto report = stationarity_test({first, second}, 2, 0.05);
        CHECK(report.verdict == Stationarity::Stationary);
        CHECK(report.max_divergence == 0.0);
    }
}

TEST_CASE("stationarity flags the drifting scenario corpus") {
    const auto corpus =
        corpus_from_json_text(slurp_file(scenario_path("corpus_drift.json")));
    const auto report = stationarity_test(corpus, 50, 0.05);
    CHECK(report.verdict == Stationarity::NonStationary);
    CHECK(report.windows == 4);
    CHECK(report.max_divergence == doctest::Approx(0.5606336482937447).epsilon(1e-12));
}

TEST_CASE("stationarity input validation") {
    Trace tr({"a"});
    tr.add(ev("e0", 0, "a"));
    CHECK_THROWS_AS(stationarity_test({tr}, 0, 0.05), ConfigError);
    CHECK_THROWS_AS(stationarity_test({tr}, 2, -1.0), ConfigError);
    // a single occupied window cannot be compared to anything
    CHECK_THROWS_AS(stationarity_test({tr}, 2, 0.05), InsufficientData);
    CHECK_THROWS_AS(stationarity_test({}, 2, 0.05), InsufficientData);
}
