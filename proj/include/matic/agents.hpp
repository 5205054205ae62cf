#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "matic/cognet.hpp"
#include "matic/event_model.hpp"
#include "matic/gcm.hpp"

namespace matic {

// --- matched-filter receiver ---

// One frozen matched-filter node per symbol: excitatory ports carry the
// baseband samples of a symbol period, the inhibitory port carries the
// transition mask derived from the previously decoded symbol.
struct ReceiverConfig {
    std::vector<std::string> alphabet;
    std::vector<std::vector<double>> templates;  // one per symbol, equal length
    std::map<std::string, std::set<std::string>> transitions;  // allowed successors
    double noise_var = 0.0;         // AWGN per sample, applied by the channel
    std::size_t samples_per_symbol = 0;

    void validate() const;
};

Network build_receiver(const ReceiverConfig& cfg);

struct ReceiverRun {
    std::vector<std::size_t> sent;     // symbol indices
    std::vector<std::size_t> decoded;  // symbol indices
    std::size_t symbol_errors = 0;
    double error_rate = 0.0;
};

// Draw a random message respecting the transition graph, pass it through the
// AWGN channel, decode symbol by symbol (the mask input of each node follows
// the previous decision). Deterministic per seed.
ReceiverRun run_receiver(const ReceiverConfig& cfg, std::size_t n_symbols,
                         std::uint64_t seed);

// Antipodal two-symbol configuration at a given Eb/N0; unit amplitude.
ReceiverConfig bpsk_receiver_config(double ebn0_db, std::size_t samples_per_symbol);

// Theoretical BPSK bit error rate Q(sqrt(2 Eb/N0)).
double closed_form_ber(double ebn0_db);

// --- behavior-tree character ---

struct Pose {
    std::string id;
    double dx = 0.0, dy = 0.0;              // per-tick root translation
    std::array<double, 4> rotation{1, 0, 0, 0};  // unit quaternion (w, x, y, z)
};

// Tree nodes are stored flat; children refer by index. Condition nodes hold
// [then, else]; Sequence children play one per phase tick; RandomSelect
// samples a child by weight; Behavior leaves name a pose.
struct BehaviorNode {
    enum class Kind { Condition, Sequence, RandomSelect, Behavior };
    Kind kind = Kind::Behavior;
    std::string condition;              // Condition: named condition bit
    std::vector<std::size_t> children;  // indices into the tree vector
    std::vector<double> weights;        // RandomSelect, one per child
    std::string pose;                   // Behavior leaf
};

struct CharacterConfig {
    std::vector<std::string> conditions;  // named boolean inputs, bit order
    std::vector<Pose> poses;
    std::map<std::string, std::set<std::string>> transitions;  // pose -> allowed next
    std::vector<BehaviorNode> tree;  // node 0 is the root
    std::string initial_pose;
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t phase_count() const;       // longest Sequence, at least 1
    std::size_t phase_bits_needed() const;
};

// Compile the tree into one frozen module: excitatory input = condition bits
// plus a phase counter (binary), output = proposed pose index. Entries under
// a RandomSelect carry the sampling distribution. The inhibitory port is a
// hold line: active means keep the current pose.
Gcm build_character(const CharacterConfig& cfg);

struct PoseOutput {
    std::string pose;
    double x = 0.0, y = 0.0;
    std::array<double, 4> rotation{1, 0, 0, 0};
};

// Tick the character: propose with the module, let the animation state
// machine refuse transitions outside the graph (stay on refusal), integrate
// root motion. conditions[t] holds the named bits true at tick t.
std::vector<PoseOutput> run_character(const CharacterConfig& cfg,
                                      const std::vector<std::set<std::string>>& conditions,
                                      std::size_t ticks);

// --- slow-pathway bandit ---

struct BanditConfig {
    std::size_t arms = 0;
    std::vector<double> payouts;  // true payout per arm
    double learning_rate = 0.1;   // in (0, 1]
    std::size_t episodes = 0;
    std::vector<double> gate;     // l(t) per episode; empty = open throughout
    double exploration_epsilon = 0.1;
    double optimistic_init = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
    double gate_at(std::size_t episode) const;
};

// Rule table over a binary arm index, one reward line per entry, learning
// gate on the slow pathway; estimates start at the optimistic value.
Gcm build_bandit(const BanditConfig& cfg);

struct BanditReport {
    Gcm final_gcm;
    std::size_t greedy_arm = 0;
    std::vector<std::size_t> pulls;  // per arm
    std::map<std::size_t, std::string> snapshots;  // episode -> serialized table
};

// Epsilon-greedy over the table values; rewards flow through the slow
// pathway only while the gate is open. Snapshots are taken after the given
// episode counts complete.
BanditReport run_bandit(const BanditConfig& cfg,
                        const std::vector<std::size_t>& snapshot_after = {});

std::size_t greedy_arm(const Gcm& gcm, std::size_t arms);

// --- the roadside dialogue scenario ---

struct GarageScenario {
    Trace trace;                 // approach, out-of-petrol, garage-reply
    std::vector<Trace> corpus;   // regularities that make the reply inferable
};

GarageScenario garage_scenario();

}  // namespace matic
