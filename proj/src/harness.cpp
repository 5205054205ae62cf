#include "matic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "matic/agents.hpp"
#include "matic/cognet.hpp"
#include "matic/event_model.hpp"
#include "matic/gcm.hpp"
#include "matic/implicature.hpp"
#include "matic/infometrics.hpp"
#include "matic/ist_logic.hpp"

#ifndef MATIC_VERSION
#define MATIC_VERSION "0.0.0"
#endif

namespace matic {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string& require_param(const RunManifest& m, const std::string& key) {
    auto it = m.params.find(key);
    if (it == m.params.end() || it->second.empty())
        throw ConfigError("missing required parameter --" + key);
    return it->second;
}

std::string param_or(const RunManifest& m, const std::string& key,
                     const std::string& fallback) {
    auto it = m.params.find(key);
    return it == m.params.end() || it->second.empty() ? fallback : it->second;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("parameter --" + key + " expects a non-negative integer, got '" +
                          text + "'");
    }
}

double parse_real(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("parameter --" + key + " expects a finite number, got '" + text +
                          "'");
    }
}

// short fixed formatting for human-facing lines; full precision lives in the
// summary and metrics files
std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// A metrics table rendered as CSV (stable header) or a JSON array of rows.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> row) { rows.push_back(std::move(row)); }

    std::string render(const std::string& format) const {
        if (header.empty()) return {};
        if (format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                json obj;
                for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
                arr.push_back(std::move(obj));
            }
            return arr.dump(2) + "\n";
        }
        std::ostringstream out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(header[i]);
        }
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                if (row[i].is_string())
                    out << csv_escape(row[i].get<std::string>());
                else
                    out << row[i].dump();
            }
            out << '\n';
        }
        return out.str();
    }
};

std::string make_summary(const RunManifest& m, json results) {
    json params = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    json summary = {
        {"command", m.command},   {"params", std::move(params)},
        {"results", std::move(results)}, {"schema_version", 1},
        {"seed", m.seed},         {"version", MATIC_VERSION},
    };
    return summary.dump(2) + "\n";
}

// --- trace validate ---

CommandOutcome cmd_trace_validate(const RunManifest& m) {
    const std::string path = require_param(m, "trace");
    Trace trace = load_trace(path);

    bool chain_valid = true;
    if (!trace.events().empty()) chain_valid = validate_chain(trace.events()).valid;

    Table table;
    table.header = {"id", "t_start", "duration", "label", "agent"};
    for (const Event& e : trace.events())
        table.add({e.id, e.t_start, e.duration, e.label, e.agent.value_or("")});

    json results = {
        {"events", trace.events().size()},
        {"alphabet_size", trace.alphabet().size()},
        {"chain_valid", chain_valid},
        {"scenario", trace.metadata().scenario},
    };

    CommandOutcome out;
    out.text = "trace " + path + ": " + std::to_string(trace.events().size()) +
               " events, alphabet " + std::to_string(trace.alphabet().size()) +
               (chain_valid ? ", chain valid\n" : ", chain INVALID\n");
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- gcm run ---

CommandOutcome cmd_gcm_run(const RunManifest& m) {
    Gcm gcm = load_gcm(require_param(m, "gcm"));
    InputBundle bundle = load_input_bundle(require_param(m, "inputs"));
    if (param_or(m, "seed_given", "") == "1") gcm.rng_seed = m.seed;
    gcm.validate();

    std::size_t ticks = bundle.n.ticks();
    if (auto it = m.params.find("ticks"); it != m.params.end())
        ticks = parse_size("ticks", it->second);

    Signal out_signal = run_gcm(gcm, bundle, ticks);

    Table table;
    table.header = {"tick", "output"};
    double sum = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t t = 0; t < out_signal.ticks(); ++t) {
        double v = out_signal.values[t][0];
        table.add({t, v});
        sum += v;
        if (t == 0) lo = hi = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    json results = {
        {"ticks", out_signal.ticks()},
        {"mean", out_signal.ticks() ? sum / double(out_signal.ticks()) : 0.0},
        {"min", lo},
        {"max", hi},
        {"final", out_signal.ticks() ? out_signal.values.back()[0] : 0.0},
    };

    CommandOutcome out;
    out.text = "module ran " + std::to_string(out_signal.ticks()) +
               " ticks: mean=" + fmt6(results["mean"].get<double>()) +
               " final=" + fmt6(results["final"].get<double>()) + "\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- net check ---

CommandOutcome cmd_net_check(const RunManifest& m) {
    Network net = load_network(require_param(m, "net"));
    net.validate();
    CircularityReport rep = detect_circularity(net);

    Table table;
    json results = {
        {"acyclic", rep.acyclic},
        {"nodes", net.nodes.size()},
        {"edges", net.edges.size()},
    };

    CommandOutcome out;
    if (rep.acyclic) {
        auto levels = stratify_network(net);
        table.header = {"node", "level"};
        int max_level = 0;
        json jl = json::object();
        for (const auto& [id, lvl] : levels) {
            table.add({id, lvl});
            jl[id] = lvl;
            max_level = std::max(max_level, lvl);
        }
        results["levels"] = std::move(jl);
        out.text = "acyclic: " + std::to_string(net.nodes.size()) + " nodes, max level " +
                   std::to_string(max_level) + "\n";
    } else {
        table.header = {"position", "node"};
        json jc = json::array();
        for (std::size_t i = 0; i < rep.cycle.size(); ++i) {
            table.add({i, rep.cycle[i]});
            jc.push_back(rep.cycle[i]);
        }
        results["cycle"] = std::move(jc);
        std::string chain;
        for (std::size_t i = 0; i < rep.cycle.size(); ++i) {
            if (i) chain += " -> ";
            chain += rep.cycle[i];
        }
        out.text = "circular: " + chain + "\n";
    }
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- infer ---

std::string join_ids(const std::vector<std::string>& ids, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += sep;
        out += ids[i];
    }
    return out;
}

CommandOutcome cmd_infer(const RunManifest& m) {
    auto corpus = load_corpus(require_param(m, "corpus"));
    Trace trace = load_trace(require_param(m, "trace"));
    const std::string& event_id = require_param(m, "event");
    std::size_t k = parse_size("k", param_or(m, "k", "3"));
    double lambda = parse_real("lambda", param_or(m, "lambda", "1"));

    ConditionalModel model = train_model(corpus, k, lambda);
    auto ranked = rank_candidates(model, trace, event_id, k);

    Table table;
    table.header = {"rank", "cause", "context", "surprisal_bits"};
    for (std::size_t i = 0; i < ranked.size(); ++i)
        table.add({i + 1, ranked[i].cause, join_ids(ranked[i].context, "+"),
                   ranked[i].surprisal});

    const CandidatePair& best = ranked.front();
    json results = {
        {"event", event_id},
        {"cause", best.cause},
        {"context", best.context},
        {"surprisal_bits", best.surprisal},
        {"candidates", ranked.size()},
        {"k", k},
        {"lambda", lambda},
    };

    CommandOutcome out;
    out.text = "cause=" + best.cause + " context=[" + join_ids(best.context, ", ") +
               "] surprisal=" + fmt6(best.surprisal) + " bits\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- entropy ---

CommandOutcome cmd_entropy(const RunManifest& m) {
    Trace trace = load_trace(require_param(m, "trace"));
    auto corpus = load_corpus(require_param(m, "model"));
    std::size_t k = parse_size("k", param_or(m, "k", "3"));
    double lambda = parse_real("lambda", param_or(m, "lambda", "1"));

    ConditionalModel model = train_model(corpus, k, lambda);
    auto profile = time_varying_entropy(trace, model, WindowPolicy{k});

    Table table;
    table.header = {"tick", "bits"};
    double sum = 0.0, lo = 0.0, hi = 0.0;
    json jp = json::array();
    for (std::size_t i = 0; i < profile.size(); ++i) {
        auto [tick, bits] = profile[i];
        table.add({tick, bits});
        jp.push_back({tick, bits});
        sum += bits;
        if (i == 0) lo = hi = bits;
        lo = std::min(lo, bits);
        hi = std::max(hi, bits);
    }

    json results = {
        {"points", profile.size()},
        {"mean_bits", profile.empty() ? 0.0 : sum / double(profile.size())},
        {"min_bits", lo},
        {"max_bits", hi},
        {"profile", std::move(jp)},
        {"k", k},
        {"lambda", lambda},
    };

    CommandOutcome out;
    out.text = "entropy profile: " + std::to_string(profile.size()) +
               " events, mean " + fmt6(results["mean_bits"].get<double>()) + " bits\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- stationarity ---

CommandOutcome cmd_stationarity(const RunManifest& m) {
    auto corpus = load_corpus(require_param(m, "corpus"));
    Tick window = parse_size("window", require_param(m, "window"));
    double tau = parse_real("tau", param_or(m, "tau", "0.05"));

    StationarityReport rep = stationarity_test(corpus, window, tau);
    const char* verdict =
        rep.verdict == Stationarity::NonStationary ? "NonStationary" : "Stationary";

    Table table;
    table.header = {"verdict", "max_divergence_bits", "windows"};
    table.add({verdict, rep.max_divergence, rep.windows});

    json results = {
        {"verdict", verdict},
        {"max_divergence_bits", rep.max_divergence},
        {"windows", rep.windows},
        {"window_ticks", window},
        {"tau", tau},
    };

    CommandOutcome out;
    out.text = std::string(verdict) + ": max window divergence " +
               fmt6(rep.max_divergence) + " bits over " + std::to_string(rep.windows) +
               " windows (tau " + fmt6(tau) + ")\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- logic check ---

CommandOutcome cmd_logic_check(const RunManifest& m) {
    Program prog = parse_program(read_file(require_param(m, "file")));

    Table table;
    table.header = {"index", "formula", "stratified", "internal", "comprehensions"};
    json checks = json::array();
    std::string text;
    for (std::size_t i = 0; i < prog.formulas.size(); ++i) {
        const Formula& f = *prog.formulas[i];
        StratifyResult strat = stratify_formula(f);
        bool internal = is_internal(f, prog.defs);

        json verdicts = json::array();
        std::vector<std::string> verdict_names;
        for (const TermPtr& comp : collect_comprehensions(f)) {
            const char* name = verdict_name(check_comprehension(*comp, prog.defs));
            verdicts.push_back(name);
            verdict_names.push_back(name);
        }

        table.add({i + 1, prog.formula_sources[i], strat.stratified, internal,
                   join_ids(verdict_names, "+")});
        checks.push_back({{"formula", prog.formula_sources[i]},
                          {"stratified", strat.stratified},
                          {"internal", internal},
                          {"comprehensions", std::move(verdicts)}});
        text += std::to_string(i + 1) + ": stratified=" + (strat.stratified ? "yes" : "no") +
                " internal=" + (internal ? "yes" : "no");
        if (!verdict_names.empty()) text += " comprehensions=" + join_ids(verdict_names, "+");
        text += "\n";
    }

    json results = {{"formulas", prog.formulas.size()},
                    {"definitions", prog.defs.size()},
                    {"checks", std::move(checks)}};

    CommandOutcome out;
    out.text = std::move(text);
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- logic transfer ---

CommandOutcome cmd_logic_transfer(const RunManifest& m) {
    Program prog = parse_program(read_file(require_param(m, "file")));

    std::set<std::string> standard;
    std::string spec_list = param_or(m, "standard", "");
    std::string::size_type start = 0;
    while (start < spec_list.size()) {
        auto comma = spec_list.find(',', start);
        if (comma == std::string::npos) comma = spec_list.size();
        std::string name = spec_list.substr(start, comma - start);
        if (!name.empty()) standard.insert(name);
        start = comma + 1;
    }

    Table table;
    table.header = {"index", "formula", "status", "fault", "result"};
    json transfers = json::array();
    std::string text;
    for (std::size_t i = 0; i < prog.formulas.size(); ++i) {
        std::string status, fault, result, detail;
        try {
            FormulaPtr rewritten = apply_transference(*prog.formulas[i], standard, prog.defs);
            status = "ok";
            result = format_formula(*rewritten);
        } catch (const IllegalTransfer& e) {
            status = "illegal-transfer";
            fault = e.fault_name();
            detail = e.what();
        } catch (const PatternMismatch& e) {
            status = "pattern-mismatch";
            detail = e.what();
        }
        table.add({i + 1, prog.formula_sources[i], status, fault, result});
        json row = {{"formula", prog.formula_sources[i]}, {"status", status}};
        if (!fault.empty()) row["fault"] = fault;
        if (!result.empty()) row["result"] = result;
        transfers.push_back(std::move(row));
        text += std::to_string(i + 1) + ": " + status;
        if (!fault.empty()) text += " " + fault;
        if (!result.empty()) text += " " + result;
        if (!detail.empty()) text += " (" + detail + ")";
        text += "\n";
    }

    json results = {{"formulas", prog.formulas.size()},
                    {"standard", json(standard)},
                    {"transfers", std::move(transfers)}};

    CommandOutcome out;
    out.text = std::move(text);
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

// --- demos ---

CommandOutcome demo_garage(const RunManifest& m) {
    GarageScenario scenario = garage_scenario();
    ConditionalModel model = train_model(scenario.corpus, 3, 1.0);
    auto ranked = rank_candidates(model, scenario.trace, "e3", 3);
    auto profile = time_varying_entropy(scenario.trace, model, WindowPolicy{3});

    Table table;
    table.header = {"rank", "cause", "context", "surprisal_bits"};
    for (std::size_t i = 0; i < ranked.size(); ++i)
        table.add({i + 1, ranked[i].cause, join_ids(ranked[i].context, "+"),
                   ranked[i].surprisal});

    const CandidatePair& best = ranked.front();
    json jp = json::array();
    for (auto [tick, bits] : profile) jp.push_back({tick, bits});
    json results = {
        {"event", "e3"},
        {"event_label", scenario.trace.get("e3").label},
        {"cause", best.cause},
        {"cause_label", scenario.trace.get(best.cause).label},
        {"context", best.context},
        {"surprisal_bits", best.surprisal},
        {"corpus_traces", scenario.corpus.size()},
        {"entropy_profile", std::move(jp)},
    };

    CommandOutcome out;
    out.text = "the reply '" + scenario.trace.get("e3").label + "' implies cause '" +
               scenario.trace.get(best.cause).label + "' (surprisal " +
               fmt6(best.surprisal) + " bits, context [" + join_ids(best.context, ", ") +
               "])\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

CommandOutcome demo_receiver(const RunManifest& m) {
    const std::size_t samples = 8;

    ReceiverConfig clean = bpsk_receiver_config(4.0, samples);
    clean.noise_var = 0.0;
    ReceiverRun clean_run = run_receiver(clean, 1000, m.seed);

    const double ebn0_db = 4.0;
    ReceiverConfig noisy = bpsk_receiver_config(ebn0_db, samples);
    ReceiverRun noisy_run = run_receiver(noisy, 10000, m.seed + 1);
    double theory = closed_form_ber(ebn0_db);

    Table table;
    table.header = {"channel", "ebn0_db", "symbols", "errors", "error_rate", "theory"};
    table.add({"noiseless", "", 1000, clean_run.symbol_errors, clean_run.error_rate, 0.0});
    table.add({"awgn", ebn0_db, 10000, noisy_run.symbol_errors, noisy_run.error_rate, theory});

    json results = {
        {"noiseless_errors", clean_run.symbol_errors},
        {"ebn0_db", ebn0_db},
        {"symbols", 10000},
        {"empirical_ber", noisy_run.error_rate},
        {"theoretical_ber", theory},
    };

    CommandOutcome out;
    out.text = "noiseless: " + std::to_string(clean_run.symbol_errors) +
               "/1000 symbol errors\nawgn " + fmt6(ebn0_db) +
               " dB: empirical BER " + fmt6(noisy_run.error_rate) + " vs theory " +
               fmt6(theory) + "\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

CommandOutcome demo_bandit(const RunManifest& m) {
    BanditConfig cfg;
    cfg.arms = 2;
    cfg.payouts = {1.0, 0.0};
    cfg.learning_rate = 0.1;
    cfg.episodes = 500;
    cfg.exploration_epsilon = 0.1;
    cfg.seed = m.seed;
    BanditReport report = run_bandit(cfg, {250, 500});

    // with the gate held shut the table must not move at all
    BanditConfig gated = cfg;
    gated.episodes = 100;
    gated.gate.assign(100, 0.0);
    BanditReport frozen = run_bandit(gated);
    bool frozen_ok = serialize_transfer(frozen.final_gcm.transfer) ==
                     serialize_transfer(build_bandit(gated).transfer);

    Table table;
    table.header = {"arm", "payout", "pulls"};
    for (std::size_t a = 0; a < cfg.arms; ++a)
        table.add({a, cfg.payouts[a], report.pulls[a]});

    json results = {
        {"greedy_arm", report.greedy_arm},
        {"pulls", report.pulls},
        {"episodes", cfg.episodes},
        {"payouts", cfg.payouts},
        {"frozen_when_gated", frozen_ok},
    };

    CommandOutcome out;
    out.text = "after " + std::to_string(cfg.episodes) + " episodes the greedy arm is " +
               std::to_string(report.greedy_arm) + " (pulls: " +
               std::to_string(report.pulls[0]) + "/" + std::to_string(report.pulls[1]) +
               ")\nclosed learning gate leaves the table untouched: " +
               (frozen_ok ? "yes" : "NO") + "\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

CommandOutcome demo_character(const RunManifest& m) {
    CharacterConfig cfg;
    cfg.conditions = {"go"};
    cfg.poses = {
        {"idle", 0.0, 0.0, {1, 0, 0, 0}},
        {"step_l", 0.1, 0.0, {1, 0, 0, 0}},
        {"step_r", 0.1, 0.0, {1, 0, 0, 0}},
    };
    cfg.transitions = {
        {"idle", {"idle", "step_l"}},
        {"step_l", {"step_r", "idle"}},
        {"step_r", {"step_l", "idle"}},
    };
    // root: go ? walk cycle : idle
    cfg.tree = {
        {BehaviorNode::Kind::Condition, "go", {1, 2}, {}, ""},
        {BehaviorNode::Kind::Sequence, "", {3, 4}, {}, ""},
        {BehaviorNode::Kind::Behavior, "", {}, {}, "idle"},
        {BehaviorNode::Kind::Behavior, "", {}, {}, "step_l"},
        {BehaviorNode::Kind::Behavior, "", {}, {}, "step_r"},
    };
    cfg.initial_pose = "idle";
    cfg.seed = m.seed;

    const std::size_t ticks = 12;
    std::vector<std::set<std::string>> conditions(ticks);
    for (std::size_t t = 2; t < 8; ++t) conditions[t] = {"go"};
    auto frames = run_character(cfg, conditions, ticks);

    Table table;
    table.header = {"tick", "pose", "x", "y", "qw", "qx", "qy", "qz"};
    json poses = json::array();
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const PoseOutput& f = frames[t];
        table.add({t, f.pose, f.x, f.y, f.rotation[0], f.rotation[1], f.rotation[2],
                   f.rotation[3]});
        poses.push_back(f.pose);
    }

    json results = {
        {"ticks", frames.size()},
        {"poses", std::move(poses)},
        {"final_x", frames.empty() ? 0.0 : frames.back().x},
        {"final_y", frames.empty() ? 0.0 : frames.back().y},
    };

    CommandOutcome out;
    out.text = "character walked to x=" + fmt6(frames.back().x) + " over " +
               std::to_string(frames.size()) + " ticks\n";
    out.metrics = table.render(m.format);
    out.summary = make_summary(m, std::move(results));
    return out;
}

CommandOutcome cmd_demo(const RunManifest& m) {
    const std::string& name = require_param(m, "name");
    if (name == "garage") return demo_garage(m);
    if (name == "receiver") return demo_receiver(m);
    if (name == "bandit") return demo_bandit(m);
    if (name == "character") return demo_character(m);
    throw ConfigError("unknown demo '" + name +
                      "' (expected garage, receiver, bandit, or character)");
}

}  // namespace

CommandOutcome dispatch(const RunManifest& manifest) {
    if (manifest.format != "csv" && manifest.format != "json")
        throw ConfigError("unknown format '" + manifest.format + "' (expected csv or json)");

    if (manifest.command == "trace-validate") return cmd_trace_validate(manifest);
    if (manifest.command == "gcm-run") return cmd_gcm_run(manifest);
    if (manifest.command == "net-check") return cmd_net_check(manifest);
    if (manifest.command == "infer") return cmd_infer(manifest);
    if (manifest.command == "entropy") return cmd_entropy(manifest);
    if (manifest.command == "stationarity") return cmd_stationarity(manifest);
    if (manifest.command == "logic-check") return cmd_logic_check(manifest);
    if (manifest.command == "logic-transfer") return cmd_logic_transfer(manifest);
    if (manifest.command == "demo") return cmd_demo(manifest);
    throw ConfigError("unknown command '" + manifest.command + "'");
}

std::string write_artifacts(const RunManifest& manifest, const CommandOutcome& outcome,
                            const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);

    auto write = [&](const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path.string());
        out << content;
    };

    fs::path base(dir);
    write(base / "summary.json", outcome.summary);
    if (!outcome.metrics.empty()) {
        const char* name = manifest.format == "json" ? "metrics.json" : "metrics.csv";
        write(base / name, outcome.metrics);
    }
    return (base / "summary.json").string();
}

}  // namespace matic
