#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "matic/event_model.hpp"
#include "matic/implicature.hpp"

namespace matic {

// Probability distribution over symbols; must sum to 1 within 1e-9.
struct SymbolDistribution {
    std::map<std::string, double> probs;

    void validate() const;  // throws InvalidDistribution
    std::set<std::string> support() const;
};

// Shannon entropy in bits, 0·log 0 = 0.
double entropy(const SymbolDistribution& d);
double entropy(const std::vector<double>& probs);

// Zero out symbols outside `possible`, renormalize. Throws EmptySupport when
// nothing possible carries probability mass.
SymbolDistribution possibility_project(const SymbolDistribution& d,
                                       const std::set<std::string>& possible);

// Jensen–Shannon divergence in bits; symmetric, within [0, 1].
double jensen_shannon(const SymbolDistribution& a, const SymbolDistribution& b);

// Entropy profile along a trace: at each event, the entropy of the model's
// conditional distribution for the realized context, after possibility
// projection. One (tick, bits) row per event.
std::vector<std::pair<Tick, double>> time_varying_entropy(
    const Trace& trace, const ConditionalModel& model,
    const ContextPolicy& contexts = WindowPolicy{});

enum class Stationarity { Stationary, NonStationary };

struct StationarityReport {
    Stationarity verdict = Stationarity::Stationary;
    double max_divergence = 0.0;  // bits, max pairwise over windows
    std::size_t windows = 0;      // non-empty windows considered
};

// Split ticks into consecutive windows of `window` ticks, pool symbol counts
// across the traces per window, and compare the empirical distributions:
// NonStationary iff some pair of windows diverges by more than tau bits.
StationarityReport stationarity_test(const std::vector<Trace>& traces,
                                     Tick window, double tau = 0.05);

}  // namespace matic
