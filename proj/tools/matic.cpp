// Thin command-line front end: argument parsing here, all real work in
// matic::dispatch so tests and the python module drive the same paths.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "matic/errors.hpp"
#include "matic/harness.hpp"

namespace {

bool log_enabled() {
    const char* v = std::getenv("MATIC_LOG");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

int category_exit_code(matic::ErrorCategory cat) {
    switch (cat) {
        case matic::ErrorCategory::Config: return 2;
        case matic::ErrorCategory::Data: return 3;
        case matic::ErrorCategory::Internal: return 4;
    }
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modules, networks, implied causes, and stratified logic"};
    app.require_subcommand(1);

    matic::RunManifest manifest;
    std::string out_dir;
    auto* seed_opt = app.add_option("--seed", manifest.seed, "seed for all randomness");
    app.add_option("--out", out_dir, "directory for summary.json and metrics.csv|json");
    app.add_option("--format", manifest.format, "metrics format: csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string trace_file, corpus_file, gcm_file, inputs_file, net_file, logic_file;
    std::string event_id, demo_name, standard_list;
    std::string k_arg, lambda_arg, ticks_arg, window_arg, tau_arg;

    auto* trace = app.add_subcommand("trace", "trace file operations");
    trace->require_subcommand(1);
    auto* trace_validate = trace->add_subcommand("validate", "load a trace and vet it");
    trace_validate->fallthrough();
    trace_validate->add_option("file", trace_file, "trace JSON file")->required();
    trace_validate->callback([&] {
        manifest.command = "trace-validate";
        manifest.params["trace"] = trace_file;
    });

    auto* gcm = app.add_subcommand("gcm", "single-module operations");
    gcm->require_subcommand(1);
    auto* gcm_run = gcm->add_subcommand("run", "tick a module over an input bundle");
    gcm_run->fallthrough();
    gcm_run->add_option("--gcm", gcm_file, "module config JSON")->required();
    gcm_run->add_option("--inputs", inputs_file, "input bundle JSON")->required();
    gcm_run->add_option("--ticks", ticks_arg, "tick count (default: bundle length)");
    gcm_run->callback([&] {
        manifest.command = "gcm-run";
        manifest.params["gcm"] = gcm_file;
        manifest.params["inputs"] = inputs_file;
        if (!ticks_arg.empty()) manifest.params["ticks"] = ticks_arg;
        if (seed_opt->count() > 0) manifest.params["seed_given"] = "1";
    });

    auto* net = app.add_subcommand("net", "network operations");
    net->require_subcommand(1);
    auto* net_check = net->add_subcommand("check", "circularity and level assignment");
    net_check->fallthrough();
    net_check->add_option("file", net_file, "network JSON file")->required();
    net_check->callback([&] {
        manifest.command = "net-check";
        manifest.params["net"] = net_file;
    });

    auto* infer = app.add_subcommand("infer", "implied cause of an event");
    infer->fallthrough();
    infer->add_option("--corpus", corpus_file, "training corpus JSON")->required();
    infer->add_option("--trace", trace_file, "trace holding the event")->required();
    infer->add_option("--event", event_id, "event id to explain")->required();
    infer->add_option("--k", k_arg, "max context size (default 3)");
    infer->add_option("--lambda", lambda_arg, "smoothing constant (default 1)");
    infer->callback([&] {
        manifest.command = "infer";
        manifest.params["corpus"] = corpus_file;
        manifest.params["trace"] = trace_file;
        manifest.params["event"] = event_id;
        if (!k_arg.empty()) manifest.params["k"] = k_arg;
        if (!lambda_arg.empty()) manifest.params["lambda"] = lambda_arg;
    });

    auto* entropy = app.add_subcommand("entropy", "entropy profile along a trace");
    entropy->fallthrough();
    entropy->add_option("--trace", trace_file, "trace JSON file")->required();
    entropy->add_option("--model", corpus_file, "training corpus JSON")->required();
    entropy->add_option("--k", k_arg, "max context size (default 3)");
    entropy->add_option("--lambda", lambda_arg, "smoothing constant (default 1)");
    entropy->callback([&] {
        manifest.command = "entropy";
        manifest.params["trace"] = trace_file;
        manifest.params["model"] = corpus_file;
        if (!k_arg.empty()) manifest.params["k"] = k_arg;
        if (!lambda_arg.empty()) manifest.params["lambda"] = lambda_arg;
    });

    auto* stationarity = app.add_subcommand("stationarity", "windowed drift verdict");
    stationarity->fallthrough();
    stationarity->add_option("--corpus", corpus_file, "corpus JSON file")->required();
    stationarity->add_option("--window", window_arg, "window length in ticks")->required();
    stationarity->add_option("--tau", tau_arg, "divergence threshold in bits (default 0.05)");
    stationarity->callback([&] {
        manifest.command = "stationarity";
        manifest.params["corpus"] = corpus_file;
        manifest.params["window"] = window_arg;
        if (!tau_arg.empty()) manifest.params["tau"] = tau_arg;
    });

    auto* logic = app.add_subcommand("logic", "formula checks and rewrites");
    logic->require_subcommand(1);
    auto* logic_check =
        logic->add_subcommand("check", "stratification, internality, set formation");
    logic_check->fallthrough();
    logic_check->add_option("file", logic_file, "formula file")->required();
    logic_check->callback([&] {
        manifest.command = "logic-check";
        manifest.params["file"] = logic_file;
    });
    auto* logic_transfer = logic->add_subcommand("transfer", "drop st quantifier bounds");
    logic_transfer->fallthrough();
    logic_transfer->add_option("file", logic_file, "formula file")->required();
    logic_transfer->add_option("--standard", standard_list,
                               "comma-separated parameters declared standard");
    logic_transfer->callback([&] {
        manifest.command = "logic-transfer";
        manifest.params["file"] = logic_file;
        if (!standard_list.empty()) manifest.params["standard"] = standard_list;
    });

    auto* demo = app.add_subcommand("demo", "built-in worked scenarios");
    demo->fallthrough();
    demo->add_option("name", demo_name, "garage | receiver | bandit | character")
        ->required()
        ->check(CLI::IsMember({"garage", "receiver", "bandit", "character"}));
    demo->callback([&] {
        manifest.command = "demo";
        manifest.params["name"] = demo_name;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        matic::CommandOutcome outcome = matic::dispatch(manifest);

        std::cout << outcome.text;
        if (out_dir.empty()) {
            std::cout << outcome.metrics;
        } else {
            std::string summary_path = matic::write_artifacts(manifest, outcome, out_dir);
            if (log_enabled()) std::fprintf(stderr, "matic: wrote %s\n", summary_path.c_str());
        }

        if (log_enabled()) {
            const auto dt = std::chrono::steady_clock::now() - t0;
            const double ms = std::chrono::duration<double, std::milli>(dt).count();
            std::fprintf(stderr, "matic: %s seed=%llu wall=%.3fms\n", manifest.command.c_str(),
                         static_cast<unsigned long long>(manifest.seed), ms);
        }
        return 0;
    } catch (const matic::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return category_exit_code(e.category());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: InternalError: %s\n", e.what());
        return 4;
    }
}
