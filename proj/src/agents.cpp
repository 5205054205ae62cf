#include "matic/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matic/errors.hpp"
#include "matic/rng.hpp"

namespace matic {

// --- receiver ---

void ReceiverConfig::validate() const {
    if (alphabet.empty()) throw ConfigError("receiver needs a non-empty alphabet");
    if (templates.size() != alphabet.size())
        throw ConfigError("receiver needs one template per symbol");
    if (samples_per_symbol == 0) throw ConfigError("samples_per_symbol must be positive");
    std::set<std::string> symbols;
    for (const auto& s : alphabet) {
        if (s == "rx" || s.rfind("mask:", 0) == 0)
            throw ConfigError("symbol name '" + s + "' collides with a port name");
        if (!symbols.insert(s).second) throw ConfigError("duplicate symbol '" + s + "'");
    }
    for (const auto& t : templates) {
        if (t.size() != samples_per_symbol)
            throw ConfigError("template length must equal samples_per_symbol");
        for (double x : t)
            if (!std::isfinite(x)) throw ConfigError("non-finite template sample");
    }
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var))
        throw ConfigError("noise_var must be finite and non-negative");
    for (const auto& s : alphabet) {
        auto it = transitions.find(s);
        if (it == transitions.end())
            throw ConfigError("transition graph is not total: no entry for '" + s + "'");
        if (it->second.empty())
            throw ConfigError("symbol '" + s + "' has no allowed successor");
        for (const auto& next : it->second)
            if (!symbols.count(next))
                throw ConfigError("transition to undeclared symbol '" + next + "'");
    }
}

Network build_receiver(const ReceiverConfig& cfg) {
    cfg.validate();
    Network net;
    for (std::size_t i = 0; i < cfg.alphabet.size(); ++i) {
        Gcm node;
        node.transfer = MatchedFilterBank{{cfg.templates[i]}};
        node.metabolic = Frozen{};  // the slow pathway is static
        node.ports = Ports{1, cfg.samples_per_symbol, 0, 0};
        net.nodes.emplace(cfg.alphabet[i], std::move(node));
        net.edges.push_back({"rx", cfg.alphabet[i], PortKind::Excitatory});
        net.edges.push_back({"mask:" + cfg.alphabet[i], cfg.alphabet[i],
                             PortKind::Inhibitory});
        net.external_inputs.insert("mask:" + cfg.alphabet[i]);
    }
    net.external_inputs.insert("rx");
    net.validate();
    return net;
}

ReceiverRun run_receiver(const ReceiverConfig& cfg, std::size_t n_symbols,
                         std::uint64_t seed) {
    cfg.validate();
    const Network net = build_receiver(cfg);
    Rng rng(seed);
    const double sigma = std::sqrt(cfg.noise_var);

    // indices of the allowed successors of each symbol
    std::vector<std::vector<std::size_t>> allowed(cfg.alphabet.size());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < cfg.alphabet.size(); ++i) index[cfg.alphabet[i]] = i;
    for (std::size_t i = 0; i < cfg.alphabet.size(); ++i)
        for (const auto& next : cfg.transitions.at(cfg.alphabet[i]))
            allowed[i].push_back(index.at(next));

    ReceiverRun run;
    std::size_t prev_decoded = 0;
    for (std::size_t t = 0; t < n_symbols; ++t) {
        // the sender respects the transition graph; first symbol unconstrained
        const std::size_t sent =
            t == 0 ? rng.next_below(cfg.alphabet.size())
                   : allowed[run.sent.back()][rng.next_below(allowed[run.sent.back()].size())];
        run.sent.push_back(sent);

        std::map<std::string, Signal> inputs;
        std::vector<double> samples = cfg.templates[sent];
        for (double& s : samples)
            if (sigma > 0.0) s += sigma * rng.next_gaussian();
        inputs["rx"].push(std::move(samples));

        std::vector<bool> mask_allowed(cfg.alphabet.size(), t == 0);
        if (t > 0)
            for (std::size_t i : allowed[prev_decoded]) mask_allowed[i] = true;
        for (std::size_t i = 0; i < cfg.alphabet.size(); ++i)
            inputs["mask:" + cfg.alphabet[i]].push({mask_allowed[i] ? 0.0 : 1.0});

        const auto outputs = run_network(net, inputs, 1);
        std::size_t best = 0;
        double best_response = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cfg.alphabet.size(); ++i) {
            if (!mask_allowed[i]) continue;  // vetoed nodes are silent anyway
            const double response = outputs.at(cfg.alphabet[i]).values[0][0];
            if (response > best_response) {
                best_response = response;
                best = i;
            }
        }
        run.decoded.push_back(best);
        prev_decoded = best;
        if (best != sent) ++run.symbol_errors;
    }
    run.error_rate = n_symbols == 0 ? 0.0 : double(run.symbol_errors) / double(n_symbols);
    return run;
}

ReceiverConfig bpsk_receiver_config(double ebn0_db, std::size_t samples_per_symbol) {
    ReceiverConfig cfg;
    cfg.alphabet = {"0", "1"};
    cfg.samples_per_symbol = samples_per_symbol;
    cfg.templates = {std::vector<double>(samples_per_symbol, -1.0),
                     std::vector<double>(samples_per_symbol, 1.0)};
    cfg.transitions = {{"0", {"0", "1"}}, {"1", {"0", "1"}}};
    // Eb = S * a^2 with a = 1; N0 = 2 sigma^2; sigma^2 = Eb / (2 Eb/N0)
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    cfg.noise_var = double(samples_per_symbol) / (2.0 * ebn0);
    return cfg;
}

double closed_form_ber(double ebn0_db) {
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    return 0.5 * std::erfc(std::sqrt(ebn0));  // Q(sqrt(2 x)) = erfc(sqrt(x)) / 2
}

// --- character ---

void CharacterConfig::validate() const {
    if (poses.empty()) throw ConfigError("character needs at least one pose");
    std::set<std::string> pose_ids;
    for (const auto& p : poses) {
        if (!pose_ids.insert(p.id).second)
            throw ConfigError("duplicate pose id '" + p.id + "'");
        double norm = 0.0;
        for (double q : p.rotation) norm += q * q;
        if (std::abs(std::sqrt(norm) - 1.0) > 1e-9)
            throw ConfigError("pose '" + p.id + "' rotation is not a unit quaternion");
        if (!std::isfinite(p.dx) || !std::isfinite(p.dy))
            throw ConfigError("pose '" + p.id + "' has non-finite motion");
    }
    if (!pose_ids.count(initial_pose))
        throw ConfigError("initial pose '" + initial_pose + "' is not declared");
    for (const auto& [from, nexts] : transitions) {
        if (!pose_ids.count(from))
            throw ConfigError("transition from undeclared pose '" + from + "'");
        for (const auto& to : nexts)
            if (!pose_ids.count(to))
                throw ConfigError("transition to undeclared pose '" + to + "'");
    }
    std::set<std::string> condition_names;
    for (const auto& c : conditions)
        if (!condition_names.insert(c).second)
            throw ConfigError("duplicate condition '" + c + "'");

    if (tree.empty()) throw ConfigError("character needs a behavior tree");
    std::vector<int> seen(tree.size(), 0);
    // a tree: every child index valid, each node referenced at most once,
    // everything reachable from the root
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const BehaviorNode& node = tree[i];
        switch (node.kind) {
            case BehaviorNode::Kind::Condition:
                if (node.children.size() != 2)
                    throw ConfigError("condition node needs [then, else] children");
                if (std::find(conditions.begin(), conditions.end(), node.condition) ==
                    conditions.end())
                    throw ConfigError("undeclared condition '" + node.condition + "'");
                break;
            case BehaviorNode::Kind::Sequence:
                if (node.children.empty())
                    throw ConfigError("sequence node needs children");
                break;
            case BehaviorNode::Kind::RandomSelect: {
                if (node.children.empty())
                    throw ConfigError("random-select node needs children");
                if (node.weights.size() != node.children.size())
                    throw ConfigError("random-select needs one weight per child");
                double total = 0.0;
                for (double w : node.weights) {
                    if (!(w >= 0.0)) throw ConfigError("negative selection weight");
                    total += w;
                }
                if (total <= 0.0) throw ConfigError("selection weights must not all be zero");
                break;
            }
            case BehaviorNode::Kind::Behavior:
                if (!node.children.empty())
                    throw ConfigError("behavior leaves take no children");
                if (!pose_ids.count(node.pose))
                    throw ConfigError("behavior names undeclared pose '" + node.pose + "'");
                break;
        }
        for (std::size_t child : node.children) {
            if (child >= tree.size())
                throw ConfigError("tree child index out of range");
            if (child == 0) throw ConfigError("the root cannot be a child");
            if (++seen[child] > 1)
                throw ConfigError("tree node referenced twice; not a tree");
        }
    }
    // reachability from the root (indices only increase is not required)
    std::vector<bool> reached(tree.size(), false);
    std::vector<std::size_t> stack{0};
    reached[0] = true;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t child : tree[i].children) {
            if (reached[child]) throw ConfigError("tree node reachable twice; not a tree");
            reached[child] = true;
            stack.push_back(child);
        }
    }
    for (std::size_t i = 0; i < tree.size(); ++i)
        if (!reached[i]) throw ConfigError("unreachable tree node");
    if (conditions.size() + phase_bits_needed() > 16)
        throw ConfigError("too many condition/phase bits for a rule table");
}

std::size_t CharacterConfig::phase_count() const {
    std::size_t longest = 1;
    for (const auto& node : tree)
        if (node.kind == BehaviorNode::Kind::Sequence)
            longest = std::max(longest, node.children.size());
    return longest;
}

namespace {

std::size_t bits_for(std::size_t values) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < values) ++bits;
    return bits;
}

}  // namespace

std::size_t CharacterConfig::phase_bits_needed() const { return bits_for(phase_count()); }

namespace {

// distribution over pose indices produced by the tree at one (conditions,
// phase) pair
std::map<std::size_t, double> tree_distribution(const CharacterConfig& cfg,
                                                std::size_t node_index,
                                                std::size_t condition_bits,
                                                std::size_t phase) {
    const BehaviorNode& node = cfg.tree[node_index];
    switch (node.kind) {
        case BehaviorNode::Kind::Behavior: {
            const auto it = std::find_if(cfg.poses.begin(), cfg.poses.end(),
                                         [&](const Pose& p) { return p.id == node.pose; });
            return {{std::size_t(it - cfg.poses.begin()), 1.0}};
        }
        case BehaviorNode::Kind::Condition: {
            const auto pos = std::find(cfg.conditions.begin(), cfg.conditions.end(),
                                       node.condition);
            const std::size_t bit = std::size_t(pos - cfg.conditions.begin());
            const bool held = (condition_bits >> bit) & 1;
            return tree_distribution(cfg, node.children[held ? 0 : 1], condition_bits,
                                     phase);
        }
        case BehaviorNode::Kind::Sequence:
            return tree_distribution(cfg, node.children[phase % node.children.size()],
                                     condition_bits, phase);
        case BehaviorNode::Kind::RandomSelect: {
            double total = 0.0;
            for (double w : node.weights) total += w;
            std::map<std::size_t, double> mixed;
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (node.weights[i] == 0.0) continue;
                const auto part =
                    tree_distribution(cfg, node.children[i], condition_bits, phase);
                for (const auto& [pose, p] : part)
                    mixed[pose] += p * node.weights[i] / total;
            }
            return mixed;
        }
    }
    throw InternalError("unhandled tree node kind");
}

}  // namespace

Gcm build_character(const CharacterConfig& cfg) {
    cfg.validate();
    const std::size_t n_cond = cfg.conditions.size();
    const std::size_t phases = cfg.phase_count();
    const std::size_t n_phase = bits_for(phases);
    const std::size_t arity = n_cond + n_phase;

    BinaryRuleTable table;
    table.arity = arity;
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << arity); ++pattern) {
        const std::size_t condition_bits = pattern & ((std::size_t{1} << n_cond) - 1);
        const std::size_t phase = (pattern >> n_cond) % phases;
        const auto dist = tree_distribution(cfg, 0, condition_bits, phase);
        std::vector<RuleOption> entry;
        for (const auto& [pose, p] : dist) entry.push_back({double(pose), p});
        table.entries.push_back(std::move(entry));
    }

    Gcm gcm;
    gcm.transfer = std::move(table);
    gcm.metabolic = Frozen{};
    gcm.ports = Ports{1, arity, 0, 0};
    gcm.rng_seed = cfg.seed;
    gcm.validate();
    return gcm;
}

std::vector<PoseOutput> run_character(const CharacterConfig& cfg,
                                      const std::vector<std::set<std::string>>& conditions,
                                      std::size_t ticks) {
    const Gcm gcm = build_character(cfg);
    const std::size_t n_cond = cfg.conditions.size();
    const std::size_t phases = cfg.phase_count();
    const std::size_t n_phase = bits_for(phases);
    Rng rng(cfg.seed);

    std::map<std::string, std::size_t> pose_index;
    for (std::size_t i = 0; i < cfg.poses.size(); ++i) pose_index[cfg.poses[i].id] = i;

    std::vector<PoseOutput> outputs;
    std::string current = cfg.initial_pose;
    double x = 0.0, y = 0.0;
    for (std::size_t t = 0; t < ticks; ++t) {
        std::vector<double> n(n_cond + n_phase, 0.0);
        if (t < conditions.size())
            for (const auto& name : conditions[t]) {
                const auto pos = std::find(cfg.conditions.begin(), cfg.conditions.end(), name);
                if (pos == cfg.conditions.end())
                    throw DataError("undeclared condition '" + name + "' at tick " +
                                    std::to_string(t));
                n[std::size_t(pos - cfg.conditions.begin())] = 1.0;
            }
        const std::size_t phase = t % phases;
        for (std::size_t b = 0; b < n_phase; ++b)
            n[n_cond + b] = double((phase >> b) & 1);

        const double o = step_fast(gcm, {0.0}, n, rng);
        const std::size_t proposed = std::size_t(std::llround(o));
        const std::string& proposal = cfg.poses[proposed].id;

        // the state machine refuses transitions outside its graph
        if (proposal != current) {
            auto it = cfg.transitions.find(current);
            if (it != cfg.transitions.end() && it->second.count(proposal))
                current = proposal;
        }
        const Pose& pose = cfg.poses.at(pose_index.at(current));
        x += pose.dx;
        y += pose.dy;
        outputs.push_back({current, x, y, pose.rotation});
    }
    return outputs;
}

// --- bandit ---

void BanditConfig::validate() const {
    if (arms == 0) throw ConfigError("bandit needs at least one arm");
    if (payouts.size() != arms) throw ConfigError("bandit needs one payout per arm");
    for (double p : payouts)
        if (!std::isfinite(p)) throw ConfigError("non-finite payout");
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw ConfigError("learning_rate must lie in (0, 1]");
    if (!gate.empty() && gate.size() < episodes)
        throw ConfigError("gate schedule shorter than the episode count");
    if (!(exploration_epsilon >= 0.0) || exploration_epsilon > 1.0)
        throw ConfigError("exploration_epsilon must lie in [0, 1]");
    if (!std::isfinite(optimistic_init)) throw ConfigError("non-finite optimistic_init");
}

double BanditConfig::gate_at(std::size_t episode) const {
    return gate.empty() ? 1.0 : gate[episode];
}

Gcm build_bandit(const BanditConfig& cfg) {
    cfg.validate();
    const std::size_t arity = std::max<std::size_t>(bits_for(cfg.arms), 1);
    BinaryRuleTable table;
    table.arity = arity;
    table.entries.assign(std::size_t{1} << arity, {RuleOption{cfg.optimistic_init, 1.0}});

    Gcm gcm;
    gcm.transfer = std::move(table);
    gcm.metabolic = GatedRewardUpdate{cfg.learning_rate};
    gcm.ports = Ports{0, arity, std::size_t{1} << arity, 1};
    gcm.rng_seed = cfg.seed;
    gcm.validate();
    return gcm;
}

namespace {

std::vector<double> arm_bits(std::size_t arm, std::size_t arity) {
    std::vector<double> bits(arity, 0.0);
    for (std::size_t b = 0; b < arity; ++b) bits[b] = double((arm >> b) & 1);
    return bits;
}

double table_value(const Gcm& gcm, std::size_t arm, std::size_t arity, Rng& rng) {
    return step_fast(gcm, {}, arm_bits(arm, arity), rng);
}

}  // namespace

std::size_t greedy_arm(const Gcm& gcm, std::size_t arms) {
    const auto& table = std::get<BinaryRuleTable>(gcm.transfer);
    const std::size_t arity = table.arity;
    Rng rng(0);  // deterministic entries; the generator is never consulted
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    Gcm probe = gcm;
    for (std::size_t arm = 0; arm < arms; ++arm) {
        const double v = table_value(probe, arm, arity, rng);
        if (v > best_value) {
            best_value = v;
            best = arm;
        }
    }
    return best;
}

BanditReport run_bandit(const BanditConfig& cfg,
                        const std::vector<std::size_t>& snapshot_after) {
    cfg.validate();
    Gcm gcm = build_bandit(cfg);
    const std::size_t arity = std::get<BinaryRuleTable>(gcm.transfer).arity;
    Rng rng(cfg.seed);

    BanditReport report;
    report.pulls.assign(cfg.arms, 0);
    const std::set<std::size_t> wanted(snapshot_after.begin(), snapshot_after.end());
    if (wanted.count(0)) report.snapshots[0] = serialize_transfer(gcm.transfer);

    for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
        std::size_t arm;
        if (rng.next_double() < cfg.exploration_epsilon) {
            arm = rng.next_below(cfg.arms);
        } else {
            arm = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < cfg.arms; ++a) {
                const double v = table_value(gcm, a, arity, rng);
                if (v > best) {
                    best = v;
                    arm = a;
                }
            }
        }
        ++report.pulls[arm];

        std::vector<double> reward(std::size_t{1} << arity, 0.0);
        reward[arm] = cfg.payouts[arm];
        gcm = step_slow(gcm, {cfg.gate_at(episode)}, reward);

        if (wanted.count(episode + 1))
            report.snapshots[episode + 1] = serialize_transfer(gcm.transfer);
    }
    report.greedy_arm = greedy_arm(gcm, cfg.arms);
    report.final_gcm = std::move(gcm);
    return report;
}

// --- roadside dialogue ---

namespace {

Trace dialogue_trace(const std::set<std::string>& alphabet, const std::string& prefix,
                     const std::vector<std::pair<std::string, std::string>>& events,
                     const std::string& scenario) {
    Trace trace(alphabet, TraceMetadata{scenario, 0});
    Tick t = 0;
    std::size_t i = 1;
    for (const auto& [label, agent] : events) {
        Event e;
        e.id = prefix + "e" + std::to_string(i++);
        e.t_start = t++;
        e.duration = 1;
        e.label = label;
        if (!agent.empty()) e.agent = agent;
        trace.add(e);
    }
    return trace;
}

}  // namespace

GarageScenario garage_scenario() {
    const std::set<std::string> alphabet{"approach", "out-of-petrol", "garage-reply",
                                         "greeting", "smalltalk"};
    GarageScenario s;
    s.trace = dialogue_trace(alphabet, "",
                             {{"approach", "A"}, {"out-of-petrol", "A"},
                              {"garage-reply", "B"}},
                             "garage");

    // Regularities: the reply routinely follows the petrol remark (with or
    // without the approach), while approaches alone lead elsewhere.
    std::size_t k = 0;
    auto add = [&](std::size_t copies,
                   const std::vector<std::pair<std::string, std::string>>& events) {
        for (std::size_t i = 0; i < copies; ++i)
            s.corpus.push_back(
                dialogue_trace(alphabet, "t" + std::to_string(k++) + "_", events,
                               "garage-corpus"));
    };
    add(30, {{"approach", "A"}, {"out-of-petrol", "A"}, {"garage-reply", "B"}});
    add(15, {{"approach", "A"}, {"greeting", "B"}, {"smalltalk", "A"}});
    add(5, {{"out-of-petrol", "A"}, {"garage-reply", "B"}});
    return s;
}

}  // namespace matic
