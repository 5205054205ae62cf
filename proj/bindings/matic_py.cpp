// Python surface: thin wrappers over the C++ core. Compound inputs (traces,
// corpora, modules, networks) travel as JSON text — the same files the CLI
// reads — so the bindings stay small and the python side needs no mirrored
// type hierarchy.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "matic/agents.hpp"
#include "matic/cognet.hpp"
#include "matic/event_model.hpp"
#include "matic/gcm.hpp"
#include "matic/harness.hpp"
#include "matic/implicature.hpp"
#include "matic/infometrics.hpp"
#include "matic/ist_logic.hpp"

namespace py = pybind11;
using namespace matic;

namespace {

py::dict pair_to_dict(const CandidatePair& pair) {
    py::dict d;
    d["context"] = pair.context;
    d["cause"] = pair.cause;
    d["surprisal_bits"] = pair.surprisal;
    return d;
}

Definitions defs_from(const std::string& program_text) {
    if (program_text.empty()) return {};
    return parse_program(program_text).defs;
}

}  // namespace

PYBIND11_MODULE(_matic, m) {
    m.doc() = "modules, networks, implied causes, and stratified logic";
    m.attr("__version__") = MATIC_VERSION;

    py::register_exception<Error>(m, "MaticError");

    // --- generic runner (same commands as the CLI) ---
    m.def(
        "run",
        [](const std::string& command, const std::map<std::string, std::string>& params,
           std::uint64_t seed, const std::string& format) {
            RunManifest manifest{command, params, seed, format};
            CommandOutcome out = dispatch(manifest);
            py::dict d;
            d["text"] = out.text;
            d["metrics"] = out.metrics;
            d["summary"] = out.summary;
            return d;
        },
        py::arg("command"), py::arg("params") = std::map<std::string, std::string>{},
        py::arg("seed") = 0, py::arg("format") = std::string("csv"),
        "Run one named command; returns its text, metrics, and summary JSON.");

    // --- information measures ---
    m.def(
        "entropy", [](const std::vector<double>& probs) { return entropy(probs); },
        py::arg("probs"), "Shannon entropy in bits of a probability vector.");
    m.def(
        "entropy",
        [](const std::map<std::string, double>& probs) {
            return entropy(SymbolDistribution{probs});
        },
        py::arg("probs"), "Shannon entropy in bits of a symbol distribution.");
    m.def(
        "jensen_shannon",
        [](const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
            return jensen_shannon(SymbolDistribution{a}, SymbolDistribution{b});
        },
        py::arg("a"), py::arg("b"), "Jensen-Shannon divergence in bits.");
    m.def(
        "possibility_project",
        [](const std::map<std::string, double>& probs, const std::set<std::string>& possible) {
            return possibility_project(SymbolDistribution{probs}, possible).probs;
        },
        py::arg("probs"), py::arg("possible"),
        "Restrict a distribution to the possible symbols and renormalize.");
    m.def(
        "stationarity",
        [](const std::string& corpus_json, std::uint64_t window, double tau) {
            auto report = stationarity_test(corpus_from_json_text(corpus_json), window, tau);
            py::dict d;
            d["verdict"] = report.verdict == Stationarity::NonStationary ? "NonStationary"
                                                                         : "Stationary";
            d["max_divergence_bits"] = report.max_divergence;
            d["windows"] = report.windows;
            return d;
        },
        py::arg("corpus_json"), py::arg("window"), py::arg("tau") = 0.05,
        "Windowed drift verdict over a corpus given as JSON text.");

    // --- implied causes ---
    m.def(
        "infer_cause",
        [](const std::string& corpus_json, const std::string& trace_json,
           const std::string& event_id, std::size_t k, double lambda) {
            auto model = train_model(corpus_from_json_text(corpus_json), k, lambda);
            return pair_to_dict(infer_cause(model, trace_from_json_text(trace_json),
                                            event_id, k));
        },
        py::arg("corpus_json"), py::arg("trace_json"), py::arg("event_id"), py::arg("k") = 3,
        py::arg("lambda_") = 1.0,
        "Minimal-surprisal (context, cause) pair for an event in a trace.");
    m.def(
        "rank_candidates",
        [](const std::string& corpus_json, const std::string& trace_json,
           const std::string& event_id, std::size_t k, double lambda) {
            auto model = train_model(corpus_from_json_text(corpus_json), k, lambda);
            py::list out;
            for (const auto& pair :
                 rank_candidates(model, trace_from_json_text(trace_json), event_id, k))
                out.append(pair_to_dict(pair));
            return out;
        },
        py::arg("corpus_json"), py::arg("trace_json"), py::arg("event_id"), py::arg("k") = 3,
        py::arg("lambda_") = 1.0, "Every candidate pair, best first.");
    m.def(
        "entropy_profile",
        [](const std::string& corpus_json, const std::string& trace_json, std::size_t k,
           double lambda) {
            auto model = train_model(corpus_from_json_text(corpus_json), k, lambda);
            return time_varying_entropy(trace_from_json_text(trace_json), model,
                                        WindowPolicy{k});
        },
        py::arg("corpus_json"), py::arg("trace_json"), py::arg("k") = 3,
        py::arg("lambda_") = 1.0, "Per-event (tick, bits) profile along a trace.");

    // --- modules & networks ---
    m.def(
        "run_gcm",
        [](const std::string& gcm_json, const std::string& bundle_json,
           std::optional<std::size_t> ticks) {
            Gcm gcm = gcm_from_json_text(gcm_json);
            InputBundle bundle = input_bundle_from_json_text(bundle_json);
            Signal out = run_gcm(gcm, bundle, ticks.value_or(bundle.n.ticks()));
            std::vector<double> flat;
            flat.reserve(out.ticks());
            for (const auto& v : out.values) flat.push_back(v[0]);
            return flat;
        },
        py::arg("gcm_json"), py::arg("bundle_json"), py::arg("ticks") = std::nullopt,
        "Tick a module over an input bundle; returns the scalar output per tick.");
    m.def(
        "check_network",
        [](const std::string& net_json) {
            Network net = network_from_json_text(net_json);
            net.validate();
            CircularityReport rep = detect_circularity(net);
            py::dict d;
            d["acyclic"] = rep.acyclic;
            if (rep.acyclic) {
                d["order"] = rep.order;
                d["levels"] = stratify_network(net);
            } else {
                d["cycle"] = rep.cycle;
            }
            return d;
        },
        py::arg("net_json"), "Circularity verdict plus levels (acyclic) or a cycle witness.");

    // --- stratified logic ---
    m.def(
        "format_formula", [](const std::string& text) { return format_formula(*parse_formula(text)); },
        py::arg("text"), "Parse a formula and print its canonical form.");
    m.def(
        "check_formula",
        [](const std::string& text, const std::string& defs_program) {
            FormulaPtr f = parse_formula(text);
            Definitions defs = defs_from(defs_program);
            StratifyResult strat = stratify_formula(*f);
            py::dict d;
            d["stratified"] = strat.stratified;
            d["levels"] = strat.levels;
            if (!strat.stratified) d["cycle"] = strat.cycle;
            d["internal"] = is_internal(*f, defs);
            py::list verdicts;
            for (const TermPtr& comp : collect_comprehensions(*f))
                verdicts.append(verdict_name(check_comprehension(*comp, defs)));
            d["comprehensions"] = verdicts;
            return d;
        },
        py::arg("text"), py::arg("defs_program") = std::string(),
        "Stratification, internality, and set-formation verdicts for one formula.");
    m.def(
        "idealise", [](const std::string& text) { return format_formula(*apply_idealisation(*parse_formula(text))); },
        py::arg("text"), "Rewrite a finite-approximation shape to its ideal-element shape.");
    m.def(
        "transfer",
        [](const std::string& text, const std::set<std::string>& standard,
           const std::string& defs_program) {
            return format_formula(
                *apply_transference(*parse_formula(text), standard, defs_from(defs_program)));
        },
        py::arg("text"), py::arg("standard") = std::set<std::string>{},
        py::arg("defs_program") = std::string(),
        "Drop the standardness bound of an internal universal formula.");

    // --- agents ---
    m.def("closed_form_ber", &closed_form_ber, py::arg("ebn0_db"),
          "Theoretical antipodal-signalling bit error rate.");
    m.def(
        "receiver_error_rate",
        [](double ebn0_db, std::size_t symbols, std::uint64_t seed) {
            return run_receiver(bpsk_receiver_config(ebn0_db, 8), symbols, seed).error_rate;
        },
        py::arg("ebn0_db"), py::arg("symbols") = 10000, py::arg("seed") = 0,
        "Empirical two-symbol error rate over an AWGN channel.");
    m.def(
        "bandit_greedy_arm",
        [](const std::vector<double>& payouts, std::size_t episodes, std::uint64_t seed,
           double learning_rate, double epsilon) {
            BanditConfig cfg;
            cfg.arms = payouts.size();
            cfg.payouts = payouts;
            cfg.learning_rate = learning_rate;
            cfg.episodes = episodes;
            cfg.exploration_epsilon = epsilon;
            cfg.seed = seed;
            return run_bandit(cfg).greedy_arm;
        },
        py::arg("payouts"), py::arg("episodes") = 500, py::arg("seed") = 0,
        py::arg("learning_rate") = 0.1, py::arg("epsilon") = 0.1,
        "Greedy arm after gated-reward training.");
    m.def(
        "garage_scenario",
        [] {
            GarageScenario s = garage_scenario();
            py::dict d;
            d["trace"] = trace_to_json_text(s.trace);
            d["corpus"] = corpus_to_json_text(s.corpus);
            return d;
        },
        "The roadside dialogue scenario as JSON text (trace + corpus).");
}
