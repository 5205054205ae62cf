// Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matic/agents.hpp"
#include "matic/cognet.hpp"
#include "matic/errors.hpp"
#include "matic/event_model.hpp"
#include "matic/implicature.hpp"
#include "matic/infometrics.hpp"
#include "matic/ist_logic.hpp"

using namespace matic;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw CheckFailure(msg);
}

std::string scenario(const std::string& name) {
    return std::string(MATIC_SCENARIO_DIR) + "/" + name;
}

Event ev(std::string id, Tick t, std::string label) {
    Event e;
    e.id = std::move(id);
    e.t_start = t;
    e.duration = 1;
    e.label = std::move(label);
    return e;
}

// --- 1: implicature inference vs exhaustive oracle ---

void criterion_oracle_equivalence() {
    std::mt19937_64 rng(0xACCE97);
    const std::vector<std::string> alphabet{"s0", "s1", "s2", "s3"};
    std::uniform_int_distribution<int> pick(0, int(alphabet.size()) - 1);
    std::uniform_int_distribution<int> gap(0, 2);
    std::uniform_int_distribution<int> corpus_events(2, 7);
    std::uniform_int_distribution<int> probe_events(2, 7);  // <= 6 predecessors

    auto random_trace = [&](std::size_t events) {
        Trace tr({alphabet.begin(), alphabet.end()});
        Tick t = 0;
        for (std::size_t i = 0; i < events; ++i) {
            tr.add(ev("e" + std::to_string(i), t, alphabet[std::size_t(pick(rng))]));
            t += 1 + gap(rng);
        }
        return tr;
    };

    for (int round = 0; round < 1000; ++round) {
        std::vector<Trace> corpus;
        for (int i = 0; i < 4; ++i)
            corpus.push_back(random_trace(std::size_t(corpus_events(rng))));
        const std::size_t k = 1 + std::size_t(round % 3);
        const auto model = train_model(corpus, k, 1.0);

        const Trace probe = random_trace(std::size_t(probe_events(rng)));
        const std::string target = probe.events().back().id;
        const auto fast = infer_cause(model, probe, target, k);
        const auto slow = brute_force_oracle(model, probe, target, k);
        require(fast.cause == slow.cause && fast.context == slow.context &&
                    fast.surprisal == slow.surprisal,
                "round " + std::to_string(round) + ": inference disagrees with oracle");
    }
}

// --- 2: semilattice, pseudo-complement, and implication laws ---

void criterion_lattice_laws() {
    for (std::size_t atoms = 0; atoms <= 5; ++atoms) {
        Trace tr({"pre", "post"});
        for (std::size_t i = 0; i < atoms; ++i)
            tr.add(ev("p" + std::to_string(i), Tick(i), "pre"));
        tr.add(ev("y", Tick(atoms), "post"));

        for (std::size_t k = 1; k <= std::max<std::size_t>(atoms, 1); ++k) {
            const auto lat = build_lattice(tr, "y", k);
            const auto& els = lat.elements;
            require(lat.contains(0) && lat.contains(lat.top),
                    "lattice misses a bound");

            for (auto a : els) {
                require(meet(lat, a, a) == a, "meet not idempotent");
                require(meet(lat, a, 0) == 0, "bottom not absorbing");
                require(meet(lat, a, lat.top) == a, "top not neutral");
                for (auto b : els) {
                    const auto ab = meet(lat, a, b);
                    require(lat.contains(ab), "meet left the lattice");
                    require(ab == meet(lat, b, a), "meet not commutative");
                    for (auto c : els)
                        require(meet(lat, ab, c) == meet(lat, a, meet(lat, b, c)),
                                "meet not associative");
                }
            }

            for (auto x : els) {
                const auto pc = pseudo_complement(lat, x);
                require(meet(lat, x, pc) == 0, "x and pc(x) are not disjoint");
                for (auto z : els) {
                    if (z != pc && (z & pc) == pc)
                        require(meet(lat, x, z) != 0,
                                "a strictly larger element is still disjoint");
                }
                if (lat.contains(lat.top & ~x)) {
                    // the set complement is representable: pc is a unique maximum
                    require(pc == (lat.top & ~x), "pc missed the exact complement");
                    for (auto z : els)
                        if (meet(lat, x, z) == 0)
                            require((z & pc) == z, "a disjoint element escapes pc");
                }
            }

            for (auto x : els) {
                for (auto y : els) {
                    const auto h = heyting_implies(lat, x, y);
                    require((meet(lat, x, h) & ~y) == 0, "x ∧ h exceeds y");
                    for (auto z : els)
                        if (z != h && (z & h) == h)
                            require(((x & z) & ~y) != 0,
                                    "a strictly larger implication candidate works");
                    if (lat.contains((~x | y) & lat.top)) {
                        for (auto z : els)
                            if (((x & z) & ~y) == 0)
                                require((z & h) == z, "a solution escapes the implication");
                    }
                }
            }
        }
    }
}

// --- 3: stratification vs exhaustive level search ---

void criterion_stratification_oracle() {
    require(stratify_formula(*parse_formula("x in [x, y]")).stratified,
            "anchor 'x in [x, y]' must be stratified");
    require(!stratify_formula(*parse_formula("x in x")).stratified,
            "anchor 'x in x' must not be stratified");

    std::mt19937_64 rng(0x57247);
    const std::vector<std::string> vars{"a", "b", "c", "d"};
    struct Atom {
        std::size_t l, r;
        bool member;
    };

    for (int round = 0; round < 500; ++round) {
        std::vector<Atom> atoms;
        std::function<FormulaPtr(int)> gen = [&](int depth) -> FormulaPtr {
            if (depth >= 3 || rng() % 3 == 0) {
                Atom a{rng() % vars.size(), rng() % vars.size(), rng() % 3 != 0};
                atoms.push_back(a);
                return a.member ? mk_member(mk_var(vars[a.l]), mk_var(vars[a.r]))
                                : mk_equal(mk_var(vars[a.l]), mk_var(vars[a.r]));
            }
            switch (rng() % 5) {
                case 0: return mk_not(gen(depth + 1));
                case 1: return mk_and(gen(depth + 1), gen(depth + 1));
                case 2: return mk_or(gen(depth + 1), gen(depth + 1));
                case 3: return mk_implies(gen(depth + 1), gen(depth + 1));
                default:
                    return mk_quant(Quantifier::Forall, Modifier::Plain,
                                    vars[rng() % vars.size()], gen(depth + 1));
            }
        };
        const FormulaPtr f = gen(0);
        const auto got = stratify_formula(*f);

        bool feasible = false;
        std::vector<int> levels(vars.size(), 0);
        for (int code = 0; code < 625 && !feasible; ++code) {
            int rest = code;
            for (std::size_t v = 0; v < vars.size(); ++v, rest /= 5) levels[v] = rest % 5;
            feasible = true;
            for (const auto& a : atoms) {
                const int want = levels[a.l] + (a.member ? 1 : 0);
                if (levels[a.r] != want) {
                    feasible = false;
                    break;
                }
            }
        }
        require(got.stratified == feasible,
                "round " + std::to_string(round) + ": checker disagrees with search");
        if (got.stratified)
            for (const auto& a : atoms)
                require(got.levels.at(vars[a.r]) ==
                            got.levels.at(vars[a.l]) + (a.member ? 1 : 0),
                        "returned levels violate a constraint");
    }
}

// --- 4: transference fixtures ---

void criterion_transfer_fixtures() {
    const auto arch = parse_formula("forall^st x . (gt0(x) -> exists n . geq1(n, x))");
    const auto moved = apply_transference(*arch, {});
    require(structurally_equal(
                *moved, *parse_formula("forall x . (gt0(x) -> exists n . geq1(n, x))")),
            "the Archimedean transfer should drop only the guard");
    require(is_internal(*moved), "transferred formula must be internal");

    const auto prog = parse_program("def limited(n) := exists^st r . leq(n, r)\n");
    const auto all_limited = parse_formula("forall^st n . limited(n)");
    try {
        apply_transference(*all_limited, {}, prog.defs);
        require(false, "transferring an external matrix must fail");
    } catch (const IllegalTransfer& e) {
        require(e.fault() == TransferFault::ExternalFormula,
                std::string("expected ExternalFormula, got ") + e.fault_name());
    }
}

// --- 5: entropy closed forms and bounds ---

void criterion_entropy() {
    require(std::abs(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) - 2.0) < 1e-9,
            "uniform-4 entropy is off");
    require(std::abs(entropy(std::vector<double>{0.5, 0.25, 0.25}) - 1.5) < 1e-9,
            "(1/2, 1/4, 1/4) entropy is off");

    std::mt19937_64 rng(0xE27);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 10000; ++round) {
        const std::size_t n = 1 + rng() % 16;
        std::vector<double> probs(n);
        double total = 0.0;
        for (auto& p : probs) total += (p = u(rng) + 1e-12);
        for (auto& p : probs) p /= total;
        const double h = entropy(probs);
        require(h >= 0.0, "negative entropy");
        require(h <= std::log2(double(n)) + 1e-9, "entropy above log2 N");
    }
}

// --- 6: non-stationarity detection across seeds ---

void criterion_stationarity() {
    const std::vector<std::string> alphabet{"w", "x", "y", "z"};
    const std::vector<double> early{0.7, 0.1, 0.1, 0.1};
    const std::vector<double> late{0.1, 0.1, 0.1, 0.7};
    const Tick window = 500;

    auto sample = [&](std::mt19937_64& rng, const std::vector<double>& probs) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double roll = u(rng), acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (roll < acc) return alphabet[i];
        }
        return alphabet.back();
    };
    auto build = [&](std::mt19937_64& rng, bool drift) {
        Trace tr({alphabet.begin(), alphabet.end()});
        for (Tick t = 0; t < 2 * window; ++t) {
            const auto& probs = (drift && t >= window) ? late : early;
            tr.add(ev("e" + std::to_string(t), t, sample(rng, probs)));
        }
        return tr;
    };

    int drift_flagged = 0, control_clean = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 2654435761u + 17);
        const auto drift_report = stationarity_test({build(rng, true)}, window, 0.05);
        if (drift_report.verdict == Stationarity::NonStationary) ++drift_flagged;
        const auto control_report = stationarity_test({build(rng, false)}, window, 0.05);
        if (control_report.verdict == Stationarity::Stationary) ++control_clean;
    }
    require(drift_flagged >= 95, "context switch flagged only " +
                                     std::to_string(drift_flagged) + "/100");
    require(control_clean >= 95,
            "i.i.d. control clean only " + std::to_string(control_clean) + "/100");
}

// --- 7: matched-filter receiver against the closed form ---

void criterion_receiver() {
    auto clean = bpsk_receiver_config(4.0, 8);
    clean.noise_var = 0.0;
    const auto exact = run_receiver(clean, 10000, 99);
    require(exact.decoded == exact.sent, "noiseless decode is not bit-exact");
    require(exact.symbol_errors == 0, "noiseless decode reported errors");

    const std::size_t n = 100000;
    int point = 0;
    for (const double ebn0_db : {0.0, 4.0, 8.0}) {
        const auto start = std::chrono::steady_clock::now();
        const auto run = run_receiver(bpsk_receiver_config(ebn0_db, 8), n,
                                      1000 + std::uint64_t(point));
        const double p = closed_form_ber(ebn0_db);
        const double sigma = std::sqrt(double(n) * p * (1.0 - p));
        const double observed = double(run.symbol_errors);
        require(std::abs(observed - double(n) * p) <= 3.0 * sigma,
                "BER at " + std::to_string(ebn0_db) + " dB: " +
                    std::to_string(observed) + " errors vs expected " +
                    std::to_string(double(n) * p));
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        require(ms < 10000, "Monte Carlo point took " + std::to_string(ms) + " ms");
        ++point;
    }
}

// --- 8: bandit convergence and gate freezing ---

void criterion_bandit() {
    BanditConfig cfg;
    cfg.arms = 2;
    cfg.payouts = {1.0, 0.0};
    cfg.learning_rate = 0.1;
    cfg.episodes = 500;
    cfg.exploration_epsilon = 0.1;
    cfg.optimistic_init = 0.5;

    int converged = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        cfg.seed = seed;
        if (run_bandit(cfg).greedy_arm == 0) ++converged;
    }
    require(converged >= 95,
            "bandit converged on " + std::to_string(converged) + "/100 seeds");

    auto gated = cfg;
    gated.seed = 13;
    gated.gate.assign(gated.episodes, 1.0);
    for (std::size_t e = 100; e < gated.episodes; ++e) gated.gate[e] = 0.0;
    const auto report = run_bandit(gated, {100, 300, 500});
    require(report.snapshots.at(100) == report.snapshots.at(300) &&
                report.snapshots.at(300) == report.snapshots.at(500) &&
                report.snapshots.at(500) == serialize_transfer(report.final_gcm.transfer),
            "table changed after the learning gate closed");
}

// --- 9: circularity detection vs reachability ---

void criterion_circularity() {
    std::mt19937_64 rng(0xC12C);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 500; ++round) {
        const std::size_t n = 2 + rng() % 49;  // up to 50 nodes
        const double density = (round % 2 == 0) ? 1.2 / double(n) : 3.0 / double(n);
        Network net;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "n" + std::to_string(i);
            ids.push_back(id);
            BinaryRuleTable table;
            table.entries = {{{0.0, 1.0}}};
            Gcm g;
            g.transfer = std::move(table);
            net.nodes[id] = g;
        }
        std::set<std::pair<std::string, std::string>> fast_edges;
        for (const auto& a : ids)
            for (const auto& b : ids) {
                if (u(rng) < density) {
                    net.edges.push_back({a, b, rng() % 2 ? PortKind::Excitatory
                                                         : PortKind::Inhibitory});
                    fast_edges.insert({a, b});
                }
                if (u(rng) < 0.02)  // slow feedback never counts
                    net.edges.push_back({a, b, PortKind::Reward});
            }

        const auto report = detect_circularity(net);
        require(report.acyclic == !circular_by_reachability(net),
                "round " + std::to_string(round) + ": detectors disagree");
        if (report.acyclic) {
            const auto levels = stratify_network(net);
            for (const auto& [a, b] : fast_edges)
                require(levels.at(a) < levels.at(b),
                        "levels do not increase along a fast edge");
        } else {
            bool threw = false;
            try {
                stratify_network(net);
            } catch (const CircularSystem&) {
                threw = true;
            }
            require(threw, "stratify accepted a circular network");
            require(report.cycle.size() >= 2 &&
                        report.cycle.front() == report.cycle.back(),
                    "cycle witness malformed");
            for (std::size_t i = 0; i + 1 < report.cycle.size(); ++i)
                require(fast_edges.count({report.cycle[i], report.cycle[i + 1]}) == 1,
                        "cycle witness uses a non-edge");
        }
    }
}

// --- 10: CLI determinism ---

struct CliRun {
    int exit_code = -1;
    std::string out;      // stdout bytes
    std::string summary;  // summary.json bytes
    std::string metrics;  // metrics.<fmt> bytes, empty when absent
};

std::string slurp_or_empty(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliRun run_cli(const std::string& args, const fs::path& outdir) {
    fs::create_directories(outdir);
    const std::string cmd = std::string(MATIC_CLI_PATH) + " --seed 7 --out \"" +
                            outdir.string() + "\" " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    require(pipe != nullptr, "popen failed for: " + cmd);
    CliRun r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.summary = slurp_or_empty(outdir / "summary.json");
    r.metrics = slurp_or_empty(outdir / "metrics.csv");
    if (r.metrics.empty()) r.metrics = slurp_or_empty(outdir / "metrics.json");
    return r;
}

void criterion_cli_determinism() {
    const std::vector<std::pair<std::string, std::string>> invocations = {
        {"trace-validate", "trace validate " + scenario("garage_trace.json")},
        {"gcm-run", "gcm run --gcm " + scenario("gcm_relay.json") + " --inputs " +
                        scenario("gcm_relay_inputs.json")},
        {"net-check", "net check " + scenario("net_pipeline.json")},
        {"net-check-loop", "net check " + scenario("net_loop.json")},
        {"infer", "infer --corpus " + scenario("garage_corpus.json") + " --trace " +
                      scenario("garage_trace.json") + " --event e3"},
        {"entropy", "entropy --trace " + scenario("garage_trace.json") + " --model " +
                        scenario("garage_corpus.json")},
        {"stationarity",
         "stationarity --corpus " + scenario("corpus_drift.json") + " --window 50"},
        {"logic-check", "logic check " + scenario("formulas_check.txt")},
        {"logic-transfer", "logic transfer " + scenario("formulas_transfer.txt")},
        {"demo-garage", "demo garage"},
        {"demo-receiver", "demo receiver"},
        {"demo-bandit", "demo bandit"},
        {"demo-character", "demo character"},
    };

    const fs::path root =
        fs::temp_directory_path() / ("matic-accept-" + std::to_string(::getpid()));
    fs::remove_all(root);
    for (const auto& [name, args] : invocations) {
        const auto first = run_cli(args, root / name / "run1");
        const auto second = run_cli(args, root / name / "run2");
        require(first.exit_code == 0,
                name + " exited with " + std::to_string(first.exit_code));
        require(second.exit_code == 0, name + " rerun exited nonzero");
        require(!first.summary.empty(), name + " wrote no summary.json");
        require(first.summary == second.summary, name + ": summary.json differs");
        require(first.out == second.out, name + ": stdout differs");
        require(first.metrics == second.metrics, name + ": metrics differ");
    }
    fs::remove_all(root);
}

}  // namespace

int main() {
    ::unsetenv("MATIC_LOG");
    struct Criterion {
        const char* name;
        void (*fn)();
        long budget_ms;  // generous stated bound, 0 = none
    };
    const Criterion criteria[] = {
        {"implicature inference == exhaustive oracle (1000 traces)",
         criterion_oracle_equivalence, 30000},
        {"semilattice / pseudo-complement / implication laws (<=5 atoms)",
         criterion_lattice_laws, 10000},
        {"stratification == exhaustive level search (500 formulas)",
         criterion_stratification_oracle, 0},
        {"transference fixtures: Archimedean legal, limited-n illegal",
         criterion_transfer_fixtures, 0},
        {"entropy closed forms and bounds (10^4 distributions)", criterion_entropy, 0},
        {"non-stationarity flagged across 100 seeds", criterion_stationarity, 20000},
        {"matched-filter receiver: exact decode + Monte Carlo BER",
         criterion_receiver, 0},
        {"bandit convergence and gate freezing (100 seeds)", criterion_bandit, 0},
        {"circularity detection == reachability (500 networks)",
         criterion_circularity, 0},
        {"CLI determinism: byte-identical reruns", criterion_cli_determinism, 0},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.fn();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        if (verdict == "PASS" && c.budget_ms > 0 && ms > c.budget_ms) {
            verdict = "FAIL";
            detail = "exceeded " + std::to_string(c.budget_ms) + " ms budget";
            ++failures;
        }
        std::printf("%s %2d/10 %-62s %6ld ms%s%s\n", verdict.c_str(), index, c.name,
                    long(ms), detail.empty() ? "" : "  -- ", detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
