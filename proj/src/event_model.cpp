#include "matic/event_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace matic {

using nlohmann::json;

void Trace::add(Event e) {
    if (contains(e.id)) {
        throw DataError("duplicate event id '" + e.id + "' in trace");
    }
    if (!alphabet_.empty() && !alphabet_.count(e.label)) {
        throw DataError("event '" + e.id + "' has label '" + e.label +
                        "' outside the trace alphabet");
    }
    auto pos = std::upper_bound(events_.begin(), events_.end(), e);
    events_.insert(pos, std::move(e));
}

bool Trace::contains(const std::string& id) const {
    return std::any_of(events_.begin(), events_.end(),
                       [&](const Event& e) { return e.id == id; });
}

const Event& Trace::get(const std::string& id) const {
    for (const Event& e : events_) {
        if (e.id == id) return e;
    }
    throw UnknownEvent("event '" + id + "' not in trace");
}

ChainVerdict validate_chain(std::span<const Event> events) {
    if (events.empty()) throw EmptyChain("a chain needs at least one event");
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i - 1].t_start > events[i].t_start) return ChainVerdict::bad(i);
    }
    return ChainVerdict::ok();
}

std::vector<Event> candidate_causes(const Trace& trace, const std::string& event_id) {
    const Event& y = trace.get(event_id);
    std::vector<Event> out;
    for (const Event& x : trace.events()) {
        if (x.id != y.id && x.t_start <= y.t_start) out.push_back(x);
    }
    // trace storage is already (t_start, id) sorted
    return out;
}

Chain context_of(const Trace& trace, const std::string& event_id,
                 const ContextPolicy& policy) {
    const std::vector<Event> pred = candidate_causes(trace, event_id);
    Chain chain;
    if (const auto* w = std::get_if<WindowPolicy>(&policy)) {
        const std::size_t take = std::min(w->k, pred.size());
        chain.events.assign(pred.end() - static_cast<std::ptrdiff_t>(take), pred.end());
    } else {
        const auto& ids = std::get<ExplicitPolicy>(policy).ids;
        for (const std::string& id : ids) {
            const Event& e = trace.get(id);  // throws UnknownEvent
            const bool is_pred = std::any_of(pred.begin(), pred.end(),
                                             [&](const Event& p) { return p.id == id; });
            if (!is_pred) {
                throw DataError("event '" + id + "' is not a predecessor of '" +
                                event_id + "'");
            }
            chain.events.push_back(e);
        }
        std::sort(chain.events.begin(), chain.events.end());
    }
    return chain;
}

namespace {

Event event_from_json(const json& j) {
    Event e;
    e.id = j.at("id").get<std::string>();
    const auto t = j.at("t").get<std::int64_t>();
    const auto d = j.at("d").get<std::int64_t>();
    if (t < 0 || d < 0) {
        throw DataError("event '" + e.id + "': ticks must be non-negative");
    }
    e.t_start = static_cast<Tick>(t);
    e.duration = static_cast<Tick>(d);
    e.label = j.at("label").get<std::string>();
    if (j.contains("agent") && !j.at("agent").is_null()) {
        e.agent = j.at("agent").get<std::string>();
    }
    return e;
}

json event_to_json(const Event& e) {
    json j{{"id", e.id},
           {"t", e.t_start},
           {"d", e.duration},
           {"label", e.label}};
    if (e.agent) j["agent"] = *e.agent;
    return j;
}

Trace trace_from_json(const json& j) {
    if (!j.is_object()) throw DataError("trace file: expected a JSON object");
    try {
        std::set<std::string> alphabet;
        for (const auto& s : j.at("alphabet")) alphabet.insert(s.get<std::string>());
        TraceMetadata meta;
        if (j.contains("metadata")) {
            const auto& m = j.at("metadata");
            meta.scenario = m.value("scenario", std::string{});
            meta.seed = m.value("seed", std::uint64_t{0});
        }
        Trace trace(std::move(alphabet), meta);
        for (const auto& ej : j.at("events")) trace.add(event_from_json(ej));
        return trace;
    } catch (const json::exception& e) {
        throw DataError(std::string("bad trace: ") + e.what());
    }
}

json trace_to_json(const Trace& t) {
    json j;
    j["alphabet"] = t.alphabet();
    j["events"] = json::array();
    for (const Event& e : t.events()) j["events"].push_back(event_to_json(e));
    j["metadata"] = {{"scenario", t.metadata().scenario}, {"seed", t.metadata().seed}};
    return j;
}

json parse_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError(std::string(what) + ": malformed JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Trace trace_from_json_text(const std::string& text) {
    return trace_from_json(parse_text(text, "trace"));
}

Trace load_trace(const std::string& path) { return trace_from_json_text(slurp(path)); }

std::string trace_to_json_text(const Trace& trace) {
    return trace_to_json(trace).dump(2);
}

std::vector<Trace> corpus_from_json_text(const std::string& text) {
    const json j = parse_text(text, "corpus");
    if (!j.is_array()) throw DataError("corpus file: expected a JSON array of traces");
    std::vector<Trace> out;
    out.reserve(j.size());
    for (const auto& tj : j) out.push_back(trace_from_json(tj));
    return out;
}

std::vector<Trace> load_corpus(const std::string& path) {
    return corpus_from_json_text(slurp(path));
}

std::string corpus_to_json_text(const std::vector<Trace>& corpus) {
    json arr = json::array();
    for (const Trace& t : corpus) arr.push_back(trace_to_json(t));
    return arr.dump(2);
}

}  // namespace matic
