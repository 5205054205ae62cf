#include "matic/gcm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace matic {

using nlohmann::json;

void Signal::push(std::vector<double> v) {
    if (values.empty() && dim == 0) dim = v.size();
    if (v.size() != dim)
        throw ArityMismatch("signal vector has dim " + std::to_string(v.size()) +
                            ", expected " + std::to_string(dim));
    values.push_back(std::move(v));
}

void Signal::validate() const {
    for (const auto& v : values) {
        if (v.size() != dim)
            throw DataError("ragged signal: vector of dim " + std::to_string(v.size()) +
                            " in signal of dim " + std::to_string(dim));
        for (double x : v)
            if (!std::isfinite(x)) throw DataError("non-finite signal sample");
    }
}

namespace {

void validate_transfer(const TransferFn& fn, const Ports& ports) {
    if (const auto* rt = std::get_if<BinaryRuleTable>(&fn)) {
        if (rt->arity > 20) throw ConfigError("rule table arity too large");
        if (rt->entries.size() != (std::size_t{1} << rt->arity))
            throw ConfigError("rule table must be total: expected " +
                              std::to_string(std::size_t{1} << rt->arity) + " entries, got " +
                              std::to_string(rt->entries.size()));
        if (ports.n != rt->arity)
            throw ConfigError("rule table arity " + std::to_string(rt->arity) +
                              " does not match excitatory port count " + std::to_string(ports.n));
        for (const auto& entry : rt->entries) {
            if (entry.empty()) throw ConfigError("empty rule table entry");
            double total = 0.0;
            for (const auto& opt : entry) {
                if (!std::isfinite(opt.value)) throw ConfigError("non-finite rule table value");
                if (!(opt.prob >= 0.0)) throw ConfigError("negative rule option probability");
                total += opt.prob;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw ConfigError("rule option probabilities must sum to 1");
        }
    } else if (const auto* bank = std::get_if<MatchedFilterBank>(&fn)) {
        if (bank->templates.empty()) throw ConfigError("matched filter bank needs a template");
        const std::size_t len = bank->templates.front().size();
        if (len == 0) throw ConfigError("empty matched filter template");
        for (const auto& t : bank->templates) {
            if (t.size() != len) throw ConfigError("matched filter templates must share length");
            for (double x : t)
                if (!std::isfinite(x)) throw ConfigError("non-finite template sample");
        }
        if (ports.n != len)
            throw ConfigError("matched filter length " + std::to_string(len) +
                              " does not match excitatory port count " + std::to_string(ports.n));
    } else {
        const auto& tab = std::get<TabulatedNonlinear>(fn);
        if (tab.values.size() < 2) throw ConfigError("tabulated nonlinearity needs >= 2 values");
        if (!(tab.x_min < tab.x_max)) throw ConfigError("tabulated nonlinearity needs x_min < x_max");
        for (double x : tab.values)
            if (!std::isfinite(x)) throw ConfigError("non-finite tabulated value");
        if (ports.n == 0) throw ConfigError("tabulated nonlinearity needs an excitatory port");
    }
}

}  // namespace

void Gcm::validate() const {
    validate_transfer(transfer, ports);
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var))
        throw ConfigError("noise_var must be finite and non-negative");
    if (slow_period == 0) throw ConfigError("slow_period must be positive");
    if (std::holds_alternative<GatedRewardUpdate>(metabolic)) {
        const auto* rt = std::get_if<BinaryRuleTable>(&transfer);
        if (!rt)
            throw ConfigError("gated reward update requires a binary rule table transfer");
        if (ports.r != rt->entries.size())
            throw ConfigError("gated reward update needs one reward line per table entry: " +
                              std::to_string(rt->entries.size()) + " entries, " +
                              std::to_string(ports.r) + " reward ports");
        if (ports.l == 0) throw ConfigError("gated reward update needs a learning-gate port");
        const double lr = std::get<GatedRewardUpdate>(metabolic).learning_rate;
        if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning_rate must be positive");
        for (const auto& entry : rt->entries)
            if (entry.size() != 1)
                throw ConfigError("gated reward update requires deterministic table entries");
    }
}

namespace {

void check_dim(const char* port, std::size_t got, std::size_t want) {
    if (got != want)
        throw ArityMismatch(std::string(port) + " input has dim " + std::to_string(got) +
                            ", expected " + std::to_string(want));
}

double transfer_response(const Gcm& gcm, const std::vector<double>& n, Rng& rng) {
    if (const auto* rt = std::get_if<BinaryRuleTable>(&gcm.transfer)) {
        std::size_t index = 0;
        for (std::size_t i = 0; i < n.size(); ++i)
            if (n[i] != 0.0) index |= std::size_t{1} << i;
        const auto& entry = rt->entries[index];
        if (entry.size() == 1) return entry.front().value;
        double u = rng.next_double();
        for (const auto& opt : entry) {
            if (u < opt.prob) return opt.value;
            u -= opt.prob;
        }
        return entry.back().value;  // guard against accumulated rounding
    }
    if (const auto* bank = std::get_if<MatchedFilterBank>(&gcm.transfer)) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& t : bank->templates) {
            double dot = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) dot += t[i] * n[i];
            best = std::max(best, dot);
        }
        return best;
    }
    const auto& tab = std::get<TabulatedNonlinear>(gcm.transfer);
    double x = 0.0;
    for (double v : n) x += v;
    if (x <= tab.x_min) return tab.values.front();
    if (x >= tab.x_max) return tab.values.back();
    const double span = tab.x_max - tab.x_min;
    const double pos = (x - tab.x_min) / span * double(tab.values.size() - 1);
    const std::size_t lo = std::min<std::size_t>(std::size_t(pos), tab.values.size() - 2);
    const double frac = pos - double(lo);
    return tab.values[lo] * (1.0 - frac) + tab.values[lo + 1] * frac;
}

}  // namespace

double step_fast(const Gcm& gcm, const std::vector<double>& p,
                 const std::vector<double>& n, Rng& rng) {
    check_dim("inhibitory", p.size(), gcm.ports.p);
    check_dim("excitatory", n.size(), gcm.ports.n);
    bool vetoed = std::any_of(p.begin(), p.end(), [](double v) { return v != 0.0; });
    double out = vetoed ? 0.0 : transfer_response(gcm, n, rng);
    if (gcm.noise_var > 0.0) out += std::sqrt(gcm.noise_var) * rng.next_gaussian();
    return out;
}

Gcm step_slow(const Gcm& gcm, const std::vector<double>& l,
              const std::vector<double>& r) {
    check_dim("learning-gate", l.size(), gcm.ports.l);
    check_dim("reward", r.size(), gcm.ports.r);
    if (std::holds_alternative<Frozen>(gcm.metabolic)) return gcm;
    bool open = std::any_of(l.begin(), l.end(), [](double v) { return v != 0.0; });
    if (!open) return gcm;
    Gcm next = gcm;
    auto& rt = std::get<BinaryRuleTable>(next.transfer);
    const double lr = std::get<GatedRewardUpdate>(gcm.metabolic).learning_rate;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0.0) continue;
        double& v = rt.entries[i].front().value;
        v += lr * (r[i] - v);
    }
    return next;
}

Signal run_gcm(const Gcm& gcm, const InputBundle& inputs, std::size_t ticks) {
    gcm.validate();
    for (const Signal* s : {&inputs.p, &inputs.n, &inputs.r, &inputs.l}) {
        s->validate();
        if (s->ticks() < ticks)
            throw LengthMismatch("input signal covers " + std::to_string(s->ticks()) +
                                 " ticks, need " + std::to_string(ticks));
    }
    Gcm state = gcm;
    Rng rng(gcm.rng_seed);
    Signal out;
    out.dim = 1;
    for (std::size_t t = 0; t < ticks; ++t) {
        double o = step_fast(state, inputs.p.values[t], inputs.n.values[t], rng);
        out.values.push_back({o});
        if ((t + 1) % state.slow_period == 0)
            state = step_slow(state, inputs.l.values[t], inputs.r.values[t]);
    }
    return out;
}

// --- JSON forms ---

namespace {

json transfer_to_json(const TransferFn& fn) {
    json j;
    if (const auto* rt = std::get_if<BinaryRuleTable>(&fn)) {
        j["kind"] = "binary_rule_table";
        json entries = json::array();
        for (const auto& entry : rt->entries) {
            if (entry.size() == 1 && entry.front().prob == 1.0) {
                entries.push_back(entry.front().value);
            } else {
                json opts = json::array();
                for (const auto& opt : entry) opts.push_back({opt.value, opt.prob});
                entries.push_back(opts);
            }
        }
        j["parameters"] = {{"arity", rt->arity}, {"entries", entries}};
    } else if (const auto* bank = std::get_if<MatchedFilterBank>(&fn)) {
        j["kind"] = "matched_filter_bank";
        j["parameters"] = {{"templates", bank->templates}};
    } else {
        const auto& tab = std::get<TabulatedNonlinear>(fn);
        j["kind"] = "tabulated_nonlinear";
        j["parameters"] = {{"x_min", tab.x_min}, {"x_max", tab.x_max}, {"values", tab.values}};
    }
    return j;
}

TransferFn transfer_from_json(const std::string& kind, const json& params) {
    if (kind == "binary_rule_table") {
        BinaryRuleTable rt;
        rt.arity = params.at("arity").get<std::size_t>();
        for (const auto& e : params.at("entries")) {
            std::vector<RuleOption> entry;
            if (e.is_number()) {
                entry.push_back({e.get<double>(), 1.0});
            } else if (e.is_array()) {
                for (const auto& opt : e) {
                    if (!opt.is_array() || opt.size() != 2)
                        throw DataError("rule option must be a [value, prob] pair");
                    entry.push_back({opt.at(0).get<double>(), opt.at(1).get<double>()});
                }
            } else {
                throw DataError("rule table entry must be a number or an option list");
            }
            rt.entries.push_back(std::move(entry));
        }
        return rt;
    }
    if (kind == "matched_filter_bank") {
        MatchedFilterBank bank;
        bank.templates = params.at("templates").get<std::vector<std::vector<double>>>();
        return bank;
    }
    if (kind == "tabulated_nonlinear") {
        TabulatedNonlinear tab;
        tab.x_min = params.at("x_min").get<double>();
        tab.x_max = params.at("x_max").get<double>();
        tab.values = params.at("values").get<std::vector<double>>();
        return tab;
    }
    throw DataError("unknown transfer kind: " + kind);
}

json metabolic_to_json(const MetabolicFn& fn) {
    if (std::holds_alternative<Frozen>(fn)) return {{"kind", "frozen"}};
    return {{"kind", "gated_reward_update"},
            {"learning_rate", std::get<GatedRewardUpdate>(fn).learning_rate}};
}

MetabolicFn metabolic_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "frozen") return Frozen{};
    if (kind == "gated_reward_update") {
        GatedRewardUpdate g;
        if (j.contains("learning_rate")) g.learning_rate = j.at("learning_rate").get<double>();
        return g;
    }
    throw DataError("unknown metabolic kind: " + kind);
}

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

Signal signal_from_json(const json& j) {
    Signal s;
    if (!j.is_array()) throw DataError("signal must be an array of tick vectors");
    for (const auto& v : j) {
        if (v.is_number()) {
            s.push({v.get<double>()});
        } else {
            s.push(v.get<std::vector<double>>());
        }
    }
    s.validate();
    return s;
}

json signal_to_json(const Signal& s) {
    json j = json::array();
    for (const auto& v : s.values) j.push_back(v);
    return j;
}

}  // namespace

std::string serialize_transfer(const TransferFn& fn) { return transfer_to_json(fn).dump(); }

std::string gcm_to_json_text(const Gcm& gcm) {
    json j = transfer_to_json(gcm.transfer);
    j["metabolic"] = metabolic_to_json(gcm.metabolic);
    j["ports"] = {{"p", gcm.ports.p}, {"n", gcm.ports.n}, {"r", gcm.ports.r}, {"l", gcm.ports.l}};
    j["noise_var"] = gcm.noise_var;
    j["seed"] = gcm.rng_seed;
    j["slow_period"] = gcm.slow_period;
    return j.dump(2);
}

Gcm gcm_from_json_text(const std::string& text) {
    json j = parse_text(text, "module config");
    Gcm gcm;
    try {
        gcm.transfer = transfer_from_json(j.at("kind").get<std::string>(), j.at("parameters"));
        if (j.contains("metabolic")) gcm.metabolic = metabolic_from_json(j.at("metabolic"));
        const auto& ports = j.at("ports");
        gcm.ports.p = ports.value("p", 0);
        gcm.ports.n = ports.value("n", 0);
        gcm.ports.r = ports.value("r", 0);
        gcm.ports.l = ports.value("l", 0);
        gcm.noise_var = j.value("noise_var", 0.0);
        gcm.rng_seed = j.value("seed", std::uint64_t{0});
        gcm.slow_period = j.value("slow_period", std::uint64_t{10});
    } catch (const json::exception& e) {
        throw DataError(std::string("bad module config: ") + e.what());
    }
    gcm.validate();
    return gcm;
}

Gcm load_gcm(const std::string& path) { return gcm_from_json_text(slurp(path)); }

Signal signal_from_json_text(const std::string& text) {
    return signal_from_json(parse_text(text, "signal"));
}

std::string signal_to_json_text(const Signal& s) { return signal_to_json(s).dump(); }

InputBundle input_bundle_from_json_text(const std::string& text) {
    json j = parse_text(text, "input bundle");
    InputBundle b;
    try {
        std::size_t ticks = 0;
        bool any = false;
        for (auto [name, sig] : {std::pair<const char*, Signal*>{"p", &b.p},
                                 {"n", &b.n},
                                 {"r", &b.r},
                                 {"l", &b.l}}) {
            if (!j.contains(name)) continue;
            *sig = signal_from_json(j.at(name));
            if (any && sig->ticks() != ticks)
                throw LengthMismatch("input signals must cover the same tick count");
            ticks = sig->ticks();
            any = true;
        }
        // absent ports default to zero-dim signals over the shared tick count
        for (Signal* sig : {&b.p, &b.n, &b.r, &b.l})
            if (sig->ticks() == 0 && sig->dim == 0)
                sig->values.assign(ticks, {});
    } catch (const json::exception& e) {
        throw DataError(std::string("bad input bundle: ") + e.what());
    }
    return b;
}

InputBundle load_input_bundle(const std::string& path) {
    return input_bundle_from_json_text(slurp(path));
}

}  // namespace matic
