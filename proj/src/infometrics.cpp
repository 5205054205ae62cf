#include "matic/infometrics.hpp"

#include <algorithm>
#include <cmath>

#include "matic/errors.hpp"

namespace matic {

namespace {

void check_probs(const std::vector<double>& probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0)
            throw InvalidDistribution("probabilities must be finite and non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidDistribution("probabilities sum to " + std::to_string(total));
}

double entropy_unchecked(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h < 0.0 ? 0.0 : h;  // clamp -0.0 from rounding
}

}  // namespace

void SymbolDistribution::validate() const {
    std::vector<double> flat;
    flat.reserve(probs.size());
    for (const auto& [_, p] : probs) flat.push_back(p);
    check_probs(flat);
}

std::set<std::string> SymbolDistribution::support() const {
    std::set<std::string> out;
    for (const auto& [label, p] : probs)
        if (p > 0.0) out.insert(label);
    return out;
}

double entropy(const SymbolDistribution& d) {
    d.validate();
    std::vector<double> flat;
    flat.reserve(d.probs.size());
    for (const auto& [_, p] : d.probs) flat.push_back(p);
    return entropy_unchecked(flat);
}

double entropy(const std::vector<double>& probs) {
    check_probs(probs);
    return entropy_unchecked(probs);
}

SymbolDistribution possibility_project(const SymbolDistribution& d,
                                       const std::set<std::string>& possible) {
    d.validate();
    double mass = 0.0;
    for (const auto& [label, p] : d.probs)
        if (possible.count(label)) mass += p;
    if (mass <= 0.0)
        throw EmptySupport("no probability mass on the possible symbols");
    SymbolDistribution out;
    for (const auto& [label, p] : d.probs)
        if (possible.count(label)) out.probs[label] = p / mass;
    return out;
}

double jensen_shannon(const SymbolDistribution& a, const SymbolDistribution& b) {
    a.validate();
    b.validate();
    std::set<std::string> keys;
    for (const auto& [label, _] : a.probs) keys.insert(label);
    for (const auto& [label, _] : b.probs) keys.insert(label);
    auto at = [](const SymbolDistribution& d, const std::string& key) {
        auto it = d.probs.find(key);
        return it == d.probs.end() ? 0.0 : it->second;
    };
    // accumulate the two halves separately so the result is symmetric in the
    // arguments down to the last bit
    double div_a = 0.0, div_b = 0.0;
    for (const auto& key : keys) {
        const double p = at(a, key);
        const double q = at(b, key);
        const double m = 0.5 * (p + q);
        if (p > 0.0) div_a += 0.5 * p * std::log2(p / m);
        if (q > 0.0) div_b += 0.5 * q * std::log2(q / m);
    }
    const double div = div_a + div_b;
    return div < 0.0 ? 0.0 : div;
}

std::vector<std::pair<Tick, double>> time_varying_entropy(
    const Trace& trace, const ConditionalModel& model, const ContextPolicy& contexts) {
    if (!model.trained()) throw UntrainedModel("entropy profile needs a trained model");
    std::vector<std::pair<Tick, double>> profile;
    for (const Event& y : trace.events()) {
        const auto ctx = context_of(trace, y.id, contexts);
        std::vector<std::string> labels;
        for (const Event& e : ctx.events) labels.push_back(e.label);
        const std::string sig = context_signature(std::move(labels));
        SymbolDistribution d;
        d.probs = model.conditional_distribution(sig);
        const auto projected = possibility_project(d, model.possibility_set(sig));
        profile.emplace_back(y.t_start, entropy(projected));
    }
    return profile;
}

StationarityReport stationarity_test(const std::vector<Trace>& traces, Tick window,
                                     double tau) {
    if (window == 0) throw ConfigError("window must be positive");
    if (!(tau >= 0.0)) throw ConfigError("tau must be non-negative");
    std::map<std::uint64_t, std::map<std::string, std::uint64_t>> counts;
    for (const Trace& trace : traces)
        for (const Event& e : trace.events()) ++counts[e.t_start / window][e.label];

    std::vector<SymbolDistribution> dists;
    for (const auto& [_, bucket] : counts) {
        double total = 0.0;
        for (const auto& [label, n] : bucket) total += double(n);
        if (total == 0.0) continue;
        SymbolDistribution d;
        for (const auto& [label, n] : bucket) d.probs[label] = double(n) / total;
        dists.push_back(std::move(d));
    }
    if (dists.size() < 2)
        throw InsufficientData("stationarity test needs at least 2 non-empty windows, got " +
                               std::to_string(dists.size()));

    StationarityReport report;
    report.windows = dists.size();
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (std::size_t j = i + 1; j < dists.size(); ++j)
            report.max_divergence =
                std::max(report.max_divergence, jensen_shannon(dists[i], dists[j]));
    report.verdict = report.max_divergence > tau ? Stationarity::NonStationary
                                                 : Stationarity::Stationary;
    return report;
}

}  // namespace matic
