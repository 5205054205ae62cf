#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matic/errors.hpp"

namespace matic {

using Tick = std::uint64_t;

// A timed occurrence: starts at t_start and lasts `duration` ticks.
// Events may overlap; ordering constraints are on start times only.
struct Event {
    std::string id;
    Tick t_start = 0;
    Tick duration = 0;
    std::string label;
    std::optional<std::string> agent;

    // Storage order: (t_start, id). Simultaneous events are legal.
    friend bool operator<(const Event& a, const Event& b) {
        if (a.t_start != b.t_start) return a.t_start < b.t_start;
        return a.id < b.id;
    }
    friend bool operator==(const Event& a, const Event& b) { return a.id == b.id; }
};

// A sequence of events with non-decreasing start times.
struct Chain {
    std::vector<Event> events;

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }
};

struct TraceMetadata {
    std::string scenario;
    std::uint64_t seed = 0;
};

// A full scenario history: events kept sorted by (t_start, id).
class Trace {
public:
    Trace() = default;
    Trace(std::set<std::string> alphabet, TraceMetadata meta = {})
        : alphabet_(std::move(alphabet)), meta_(std::move(meta)) {}

    // Inserts keeping sort order; duplicate ids and labels outside the
    // alphabet are rejected.
    void add(Event e);

    const std::vector<Event>& events() const { return events_; }
    const std::set<std::string>& alphabet() const { return alphabet_; }
    const TraceMetadata& metadata() const { return meta_; }

    bool contains(const std::string& id) const;
    const Event& get(const std::string& id) const;  // throws UnknownEvent

private:
    std::set<std::string> alphabet_;
    std::vector<Event> events_;
    TraceMetadata meta_;
};

struct ChainVerdict {
    bool valid = true;
    std::size_t offending_index = 0;  // meaningful when !valid

    static ChainVerdict ok() { return {true, 0}; }
    static ChainVerdict bad(std::size_t i) { return {false, i}; }
};

// Valid iff start times are non-decreasing; throws EmptyChain on empty input.
ChainVerdict validate_chain(std::span<const Event> events);

// How context_of picks predecessors.
struct WindowPolicy {
    std::size_t k = 3;  // keep the k most recent predecessors
};
struct ExplicitPolicy {
    std::vector<std::string> ids;  // exact predecessor ids, kept in time order
};
using ContextPolicy = std::variant<WindowPolicy, ExplicitPolicy>;

// The context y* of y: a chain of events x with t_start(x) <= t_start(y),
// x != y, selected by the policy.
Chain context_of(const Trace& trace, const std::string& event_id,
                 const ContextPolicy& policy);

// All events x != y with t_start(x) <= t_start(y), sorted by (t_start, id).
std::vector<Event> candidate_causes(const Trace& trace, const std::string& event_id);

// JSON round-trip for trace files:
// {"alphabet": [...], "events": [{"id","t","d","label","agent"?}], "metadata"?}
Trace trace_from_json_text(const std::string& text);
Trace load_trace(const std::string& path);
std::string trace_to_json_text(const Trace& trace);

std::vector<Trace> corpus_from_json_text(const std::string& text);
std::vector<Trace> load_corpus(const std::string& path);
std::string corpus_to_json_text(const std::vector<Trace>& corpus);

}  // namespace matic
