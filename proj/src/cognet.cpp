#include "matic/cognet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matic/errors.hpp"

namespace matic {

using nlohmann::json;

const char* port_kind_name(PortKind kind) {
    switch (kind) {
        case PortKind::Inhibitory: return "inhibitory";
        case PortKind::Excitatory: return "excitatory";
        case PortKind::Reward: return "reward";
        case PortKind::Learning: return "learning";
    }
    return "?";
}

PortKind port_kind_from_name(const std::string& name) {
    if (name == "inhibitory") return PortKind::Inhibitory;
    if (name == "excitatory") return PortKind::Excitatory;
    if (name == "reward") return PortKind::Reward;
    if (name == "learning") return PortKind::Learning;
    throw DataError("unknown port kind: " + name);
}

void Network::validate() const {
    for (const auto& [id, gcm] : nodes) {
        if (id.empty()) throw ConfigError("empty node id");
        if (external_inputs.count(id))
            throw ConfigError("'" + id + "' is both a node and an external input");
        gcm.validate();
    }
    for (const Edge& e : edges) {
        if (!nodes.count(e.to)) throw UnknownNode("edge target '" + e.to + "' is not a node");
        if (!nodes.count(e.from) && !external_inputs.count(e.from))
            throw UnknownNode("edge source '" + e.from + "' is neither a node nor an input");
    }
}

namespace {

// fast-pathway adjacency restricted to node->node edges
std::map<std::string, std::vector<std::string>> fast_successors(const Network& net) {
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& [id, _] : net.nodes) succ[id];
    for (const Edge& e : net.edges)
        if (is_fast(e.kind) && net.nodes.count(e.from)) succ[e.from].push_back(e.to);
    for (auto& [_, v] : succ) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return succ;
}

}  // namespace

CircularityReport detect_circularity(const Network& net) {
    net.validate();
    const auto succ = fast_successors(net);
    std::map<std::string, std::size_t> indegree;
    for (const auto& [id, _] : succ) indegree[id];
    for (const auto& [_, outs] : succ)
        for (const auto& to : outs) ++indegree[to];

    CircularityReport report;
    std::set<std::string> ready;  // ordered: deterministic tie-break by id
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.insert(id);
    auto remaining = indegree;
    while (!ready.empty()) {
        const std::string id = *ready.begin();
        ready.erase(ready.begin());
        remaining.erase(id);
        report.order.push_back(id);
        for (const auto& to : succ.at(id))
            if (remaining.count(to) && --remaining.at(to) == 0) ready.insert(to);
    }
    if (remaining.empty()) return report;

    // Every leftover node keeps an in-edge from another leftover node, so
    // walking predecessors must revisit one; that revisit closes a cycle.
    report.acyclic = false;
    report.order.clear();
    std::map<std::string, std::vector<std::string>> pred;
    for (const auto& [from, outs] : succ) {
        if (!remaining.count(from)) continue;
        for (const auto& to : outs)
            if (remaining.count(to)) pred[to].push_back(from);
    }
    std::string cur = remaining.begin()->first;
    std::vector<std::string> path;
    std::map<std::string, std::size_t> seen;
    while (!seen.count(cur)) {
        seen[cur] = path.size();
        path.push_back(cur);
        cur = *std::min_element(pred.at(cur).begin(), pred.at(cur).end());
    }
    // path[i+1] -> path[i] are edges and cur -> path.back() closes the loop
    report.cycle.push_back(cur);
    for (auto it = path.rbegin(); it != path.rend() - std::ptrdiff_t(seen.at(cur)); ++it)
        report.cycle.push_back(*it);
    return report;
}

bool circular_by_reachability(const Network& net) {
    net.validate();
    const auto succ = fast_successors(net);
    std::vector<std::string> ids;
    for (const auto& [id, _] : succ) ids.push_back(id);
    const std::size_t n = ids.size();
    auto index = [&](const std::string& id) {
        return std::size_t(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& [from, outs] : succ)
        for (const auto& to : outs) reach[index(from)][index(to)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (reach[i][i]) return true;
    return false;
}

std::map<std::string, int> stratify_network(const Network& net) {
    const auto report = detect_circularity(net);
    if (!report.acyclic) {
        std::string msg = "network is circular:";
        for (const auto& id : report.cycle) msg += " " + id;
        throw CircularSystem(msg);
    }
    std::map<std::string, std::vector<std::string>> fast_in;  // node -> fast sources
    for (const Edge& e : net.edges)
        if (is_fast(e.kind)) fast_in[e.to].push_back(e.from);

    std::map<std::string, int> level;
    for (const auto& id : report.order) {
        int deepest = 0;  // externals and absent inputs sit at level 0
        auto it = fast_in.find(id);
        if (it != fast_in.end())
            for (const auto& src : it->second)
                if (net.nodes.count(src)) deepest = std::max(deepest, level.at(src));
        level[id] = deepest + 1;
    }
    return level;
}

namespace {

struct WiredNode {
    std::vector<const Edge*> in[4];  // indexed by PortKind, sorted by source
};

std::map<std::string, WiredNode> wire(const Network& net) {
    std::map<std::string, WiredNode> wired;
    for (const auto& [id, _] : net.nodes) wired[id];
    for (const Edge& e : net.edges) wired.at(e.to).in[int(e.kind)].push_back(&e);
    for (auto& [_, w] : wired)
        for (auto& edges : w.in)
            std::stable_sort(edges.begin(), edges.end(),
                             [](const Edge* a, const Edge* b) { return a->from < b->from; });
    return wired;
}

}  // namespace

std::map<std::string, Signal> run_network(const Network& net,
                                          const std::map<std::string, Signal>& inputs,
                                          std::size_t ticks) {
    const auto report = detect_circularity(net);
    if (!report.acyclic) {
        std::string msg = "cannot run a circular network:";
        for (const auto& id : report.cycle) msg += " " + id;
        throw CircularSystem(msg);
    }
    for (const auto& name : net.external_inputs) {
        auto it = inputs.find(name);
        if (it == inputs.end())
            throw DataError("missing signal for external input '" + name + "'");
        it->second.validate();
        if (it->second.ticks() < ticks)
            throw LengthMismatch("input '" + name + "' covers " +
                                 std::to_string(it->second.ticks()) + " ticks, need " +
                                 std::to_string(ticks));
    }

    const auto wired = wire(net);
    std::map<std::string, Gcm> state = net.nodes;
    std::map<std::string, Rng> rngs;
    std::map<std::string, Signal> out;
    for (const auto& [id, gcm] : state) {
        rngs.emplace(id, Rng(gcm.rng_seed));
        out[id].dim = 1;
    }

    auto gather = [&](const WiredNode& w, PortKind kind, std::size_t t,
                      bool previous_tick_for_nodes) {
        std::vector<double> v;
        for (const Edge* e : w.in[int(kind)]) {
            if (net.nodes.count(e->from)) {
                const auto& sig = out.at(e->from);
                if (previous_tick_for_nodes) {
                    v.push_back(t == 0 ? 0.0 : sig.values[t - 1][0]);
                } else {
                    v.push_back(sig.values[t][0]);
                }
            } else {
                const auto& sig = inputs.at(e->from);
                v.insert(v.end(), sig.values[t].begin(), sig.values[t].end());
            }
        }
        return v;
    };

    for (std::size_t t = 0; t < ticks; ++t) {
        for (const auto& id : report.order) {
            const WiredNode& w = wired.at(id);
            Gcm& gcm = state.at(id);
            const auto p = gather(w, PortKind::Inhibitory, t, false);
            const auto n = gather(w, PortKind::Excitatory, t, false);
            out.at(id).values.push_back({step_fast(gcm, p, n, rngs.at(id))});
        }
        for (const auto& id : report.order) {
            Gcm& gcm = state.at(id);
            if ((t + 1) % gcm.slow_period != 0) continue;
            const WiredNode& w = wired.at(id);
            const auto l = gather(w, PortKind::Learning, t, true);
            const auto r = gather(w, PortKind::Reward, t, true);
            gcm = step_slow(gcm, l, r);
        }
    }
    return out;
}

Predicate predicate_of(const Network& net, const std::string& node,
                       const std::vector<Stimulus>& stimuli, double threshold,
                       bool crisp) {
    if (!net.nodes.count(node)) throw UnknownNode("no node '" + node + "' in network");
    const auto levels = stratify_network(net);  // throws CircularSystem when cyclic
    Predicate pred;
    pred.id = node;
    pred.level = levels.at(node);
    for (const Stimulus& s : stimuli) {
        std::size_t ticks = 0;
        for (const auto& [_, sig] : s.inputs) ticks = std::max(ticks, sig.ticks());
        const auto outputs = run_network(net, s.inputs, ticks);
        const Signal& sig = outputs.at(node);
        double mean = 0.0;
        for (const auto& v : sig.values) mean += v[0];
        if (!sig.values.empty()) mean /= double(sig.values.size());
        double degree = std::clamp(mean, 0.0, 1.0);
        if (crisp) degree = degree >= threshold ? 1.0 : 0.0;
        pred.extension[s.event_id] = degree;
    }
    return pred;
}

namespace {

Predicate combine(const Predicate& p, const Predicate& q, bool take_max) {
    Predicate out;
    out.id = "(" + p.id + (take_max ? " u " : " n ") + q.id + ")";
    out.level = std::max(p.level, q.level);
    std::set<std::string> keys;
    for (const auto& [k, _] : p.extension) keys.insert(k);
    for (const auto& [k, _] : q.extension) keys.insert(k);
    for (const auto& k : keys) {
        auto at = [&](const Predicate& pr) {
            auto it = pr.extension.find(k);
            return it == pr.extension.end() ? 0.0 : it->second;
        };
        out.extension[k] = take_max ? std::max(at(p), at(q)) : std::min(at(p), at(q));
    }
    return out;
}

}  // namespace

Predicate predicate_union(const Predicate& p, const Predicate& q) {
    return combine(p, q, true);
}

Predicate predicate_intersection(const Predicate& p, const Predicate& q) {
    return combine(p, q, false);
}

bool predicate_equiv(const Predicate& p, const Predicate& q, double tol) {
    std::set<std::string> keys;
    for (const auto& [k, _] : p.extension) keys.insert(k);
    for (const auto& [k, _] : q.extension) keys.insert(k);
    for (const auto& k : keys) {
        auto at = [&](const Predicate& pr) {
            auto it = pr.extension.find(k);
            return it == pr.extension.end() ? 0.0 : it->second;
        };
        if (std::abs(at(p) - at(q)) > tol) return false;
    }
    return true;
}

// --- JSON forms ---

namespace {

json parse_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError(std::string("malformed ") + what + " JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Network network_from_json_text(const std::string& text) {
    json j = parse_text(text, "network");
    Network net;
    try {
        for (const auto& node : j.at("nodes")) {
            const auto id = node.at("id").get<std::string>();
            json config = node;
            config.erase("id");
            if (net.nodes.count(id)) throw DataError("duplicate node id: " + id);
            net.nodes.emplace(id, gcm_from_json_text(config.dump()));
        }
        const bool declared = j.contains("external_inputs");
        if (declared)
            for (const auto& name : j.at("external_inputs"))
                net.external_inputs.insert(name.get<std::string>());
        for (const auto& edge : j.at("edges")) {
            Edge e;
            e.from = edge.at("from").get<std::string>();
            e.to = edge.at("to").get<std::string>();
            e.kind = port_kind_from_name(edge.at("kind").get<std::string>());
            if (!net.nodes.count(e.from) && !declared) net.external_inputs.insert(e.from);
            net.edges.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("bad network: ") + e.what());
    }
    net.validate();
    return net;
}

Network load_network(const std::string& path) {
    return network_from_json_text(slurp(path));
}

std::string network_to_json_text(const Network& net) {
    json nodes = json::array();
    for (const auto& [id, gcm] : net.nodes) {
        json node = json::parse(gcm_to_json_text(gcm));
        node["id"] = id;
        nodes.push_back(std::move(node));
    }
    json edges = json::array();
    for (const Edge& e : net.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", port_kind_name(e.kind)}});
    json j{{"nodes", std::move(nodes)},
           {"edges", std::move(edges)},
           {"external_inputs", net.external_inputs}};
    return j.dump(2);
}

}  // namespace matic
