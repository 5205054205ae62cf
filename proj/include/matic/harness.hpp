#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace matic {

// One resolved invocation: subcommand plus its parameters. All randomness
// used anywhere downstream flows from `seed`.
struct RunManifest {
    std::string command;  // "trace-validate", "gcm-run", "net-check", "infer",
                          // "entropy", "stationarity", "logic-check",
                          // "logic-transfer", "demo"
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::string format = "csv";  // metrics rendering: "csv" or "json"
};

// Everything a run produces. Deterministic byte-for-byte given the manifest:
// no clocks, no OS entropy. The caller owns presentation (stdout, files) and
// timing/logging.
struct CommandOutcome {
    std::string text;     // human-oriented stdout block (may be empty)
    std::string metrics;  // table in the requested format (may be empty)
    std::string summary;  // machine-readable summary JSON, newline-terminated
};

// Throws ConfigError / DataError / InternalError; the CLI maps these to
// exit codes 2 / 3 / 4.
CommandOutcome dispatch(const RunManifest& manifest);

// Writes summary.json plus metrics.csv or metrics.json under dir (created if
// missing). Returns the summary path.
std::string write_artifacts(const RunManifest& manifest, const CommandOutcome& outcome,
                            const std::string& dir);

}  // namespace matic
