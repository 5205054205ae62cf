#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "matic/errors.hpp"
#include "matic/rng.hpp"

namespace matic {

// A discrete-time vector signal: one vector of `dim` reals per tick.
struct Signal {
    std::size_t dim = 0;
    std::vector<std::vector<double>> values;

    std::size_t ticks() const { return values.size(); }
    void push(std::vector<double> v);
    void validate() const;  // uniform dim, finite entries
};

// --- transfer function kinds (the fast pathway's h) ---

// One table entry: a discrete distribution over output values.
// A single option means the entry is deterministic; the option value is the
// learnable parameter the slow pathway rewrites.
struct RuleOption {
    double value = 0.0;
    double prob = 1.0;
};

// Total over its declared input arity: 2^arity entries, indexed by the
// thresholded excitatory bits (n[i] != 0), bit i = n[i].
struct BinaryRuleTable {
    std::size_t arity = 0;
    std::vector<std::vector<RuleOption>> entries;
};

// Bank of correlation templates; response = max inner product over templates.
struct MatchedFilterBank {
    std::vector<std::vector<double>> templates;
};

// Piecewise-linear scalar nonlinearity applied to the sum of the excitatory
// inputs; values sampled uniformly on [x_min, x_max], clamped outside.
struct TabulatedNonlinear {
    double x_min = -1.0;
    double x_max = 1.0;
    std::vector<double> values;
};

using TransferFn = std::variant<BinaryRuleTable, MatchedFilterBank, TabulatedNonlinear>;

// --- metabolic function kinds (the slow pathway's m) ---

struct Frozen {};

// When the learning gate is open, each nonzero reward line pulls the matching
// rule-table entry value toward the reward: v += lr * (r - v). A zero line
// carries no signal. Only defined for BinaryRuleTable transfers.
struct GatedRewardUpdate {
    double learning_rate = 0.1;
};

using MetabolicFn = std::variant<Frozen, GatedRewardUpdate>;

struct Ports {
    std::size_t p = 0;  // inhibitory
    std::size_t n = 0;  // excitatory
    std::size_t r = 0;  // reward
    std::size_t l = 0;  // learning gate
};

// The general cognitive module: fast pathway o(t) = h(p(t), n(t)) with an
// any-active-line-vetoes inhibition convention, slow pathway h' = m(l(t), r(t))
// applied every slow_period ticks by run_gcm.
struct Gcm {
    TransferFn transfer;
    MetabolicFn metabolic = Frozen{};
    Ports ports;
    double noise_var = 0.0;
    std::uint64_t rng_seed = 0;
    std::uint64_t slow_period = 10;

    void validate() const;  // throws ConfigError on malformed setups
};

struct InputBundle {
    Signal p, n, r, l;
};

// One fast-pathway evaluation. Any nonzero inhibitory line vetoes the
// transfer response to the baseline 0; output noise (if configured) is
// additive Gaussian drawn from `rng`.
double step_fast(const Gcm& gcm, const std::vector<double>& p,
                 const std::vector<double>& n, Rng& rng);

// One slow-pathway evaluation: returns the module with its transfer function
// rewritten by the metabolic rule. Frozen or a closed gate (all l == 0)
// leaves the transfer bit-for-bit unchanged.
Gcm step_slow(const Gcm& gcm, const std::vector<double>& l,
              const std::vector<double>& r);

// Tick loop: step_fast every tick, step_slow every gcm.slow_period ticks.
// Deterministic given gcm.rng_seed; all input signals must cover `ticks`.
Signal run_gcm(const Gcm& gcm, const InputBundle& inputs, std::size_t ticks);

// Canonical JSON forms; serialize_transfer is the bit-for-bit identity used
// by the frozen-invariance checks.
std::string serialize_transfer(const TransferFn& fn);
std::string gcm_to_json_text(const Gcm& gcm);
Gcm gcm_from_json_text(const std::string& text);
Gcm load_gcm(const std::string& path);

Signal signal_from_json_text(const std::string& text);
std::string signal_to_json_text(const Signal& s);
InputBundle input_bundle_from_json_text(const std::string& text);
InputBundle load_input_bundle(const std::string& path);

}  // namespace matic
