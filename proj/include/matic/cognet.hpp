#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "matic/gcm.hpp"

namespace matic {

enum class PortKind { Inhibitory, Excitatory, Reward, Learning };

const char* port_kind_name(PortKind kind);
PortKind port_kind_from_name(const std::string& name);

// A fast-pathway kind (the ones that count for circularity).
inline bool is_fast(PortKind kind) {
    return kind == PortKind::Inhibitory || kind == PortKind::Excitatory;
}

struct Edge {
    std::string from;  // node id or external input name
    std::string to;    // node id
    PortKind kind = PortKind::Excitatory;
};

// A directed, port-wired composition of modules. Sources may be other nodes
// (contributing their scalar output) or named external inputs (contributing
// a whole signal vector).
struct Network {
    std::map<std::string, Gcm> nodes;
    std::vector<Edge> edges;
    std::set<std::string> external_inputs;

    void validate() const;  // edge endpoints exist, node configs well-formed
};

struct CircularityReport {
    bool acyclic = true;
    std::vector<std::string> order;  // topological order of nodes when acyclic
    std::vector<std::string> cycle;  // witness when circular; first == last
};

// Cycle detection over the fast-pathway edges only; reward/learning feedback
// is legal and ignored here.
CircularityReport detect_circularity(const Network& net);

// Reference implementation via reachability closure; used to cross-check
// detect_circularity.
bool circular_by_reachability(const Network& net);

// Level 0 for external inputs, level(node) = 1 + max over fast-pathway input
// sources. Throws CircularSystem on cyclic networks.
std::map<std::string, int> stratify_network(const Network& net);

// One tick-synchronous evaluation of the whole network. Fast edges read the
// source's output of the same tick (well-defined on a DAG); reward/learning
// edges from nodes read the previous tick (0 at t=0), from externals the
// current tick. Slow updates run per node every slow_period ticks.
std::map<std::string, Signal> run_network(const Network& net,
                                          const std::map<std::string, Signal>& inputs,
                                          std::size_t ticks);

// Set-valued reading of one node's output: membership degree of each
// stimulus event = mean output over the run, clamped to [0, 1].
struct Stimulus {
    std::string event_id;
    std::map<std::string, Signal> inputs;
};

struct Predicate {
    std::string id;
    std::map<std::string, double> extension;  // event id -> degree in [0,1]
    int level = 0;
};

Predicate predicate_of(const Network& net, const std::string& node,
                       const std::vector<Stimulus>& stimuli, double threshold,
                       bool crisp = false);

Predicate predicate_union(const Predicate& p, const Predicate& q);
Predicate predicate_intersection(const Predicate& p, const Predicate& q);
bool predicate_equiv(const Predicate& p, const Predicate& q, double tol = 1e-9);

Network network_from_json_text(const std::string& text);
Network load_network(const std::string& path);
std::string network_to_json_text(const Network& net);

}  // namespace matic
