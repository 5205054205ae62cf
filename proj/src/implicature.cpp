#include "matic/implicature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "matic/errors.hpp"

namespace matic {

namespace {

constexpr char kSigSep = '\x1f';  // unit separator; labels are free text

std::size_t popcount(std::uint64_t x) { return std::size_t(std::popcount(x)); }

// Lowest-mask subset of `mask` with exactly `size` bits: the lowest set bits.
std::uint64_t lowest_bits(std::uint64_t mask, std::size_t size) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < size; ++i) {
        std::uint64_t bit = mask & (~mask + 1);
        out |= bit;
        mask ^= bit;
    }
    return out;
}

}  // namespace

bool ImplicatureLattice::contains(std::uint64_t mask) const {
    return std::binary_search(elements.begin(), elements.end(), mask);
}

std::vector<std::string> ImplicatureLattice::ids_of(std::uint64_t mask) const {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < atom_ids.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) ids.push_back(atom_ids[i]);
    return ids;
}

ImplicatureLattice build_lattice(const Trace& trace, const std::string& y_id,
                                 std::size_t max_context_size) {
    ImplicatureLattice lat;
    lat.max_context_size = max_context_size;
    const auto atoms = candidate_causes(trace, y_id);  // throws UnknownEvent
    if (atoms.size() > 63)
        throw ConfigError("lattice supports at most 63 atoms, got " +
                          std::to_string(atoms.size()));
    for (const Event& e : atoms) lat.atom_ids.push_back(e.id);
    lat.top = atoms.empty() ? 0 : (std::uint64_t{1} << atoms.size()) - 1;

    // All subsets of size <= k, built as combinations of increasing bit index.
    const std::size_t limit = std::min(max_context_size, atoms.size());
    std::vector<std::uint64_t> stack{0};
    lat.elements.push_back(0);
    // breadth grows by appending a higher bit to each mask of the prior size
    for (std::size_t size = 1; size <= limit; ++size) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t base : stack) {
            const std::size_t first =
                base == 0 ? 0 : std::size_t(64 - std::countl_zero(base));
            for (std::size_t i = first; i < atoms.size(); ++i)
                next.push_back(base | (std::uint64_t{1} << i));
        }
        lat.elements.insert(lat.elements.end(), next.begin(), next.end());
        stack = std::move(next);
    }
    if (!lat.contains(lat.top) || lat.elements.empty()) lat.elements.push_back(lat.top);
    std::sort(lat.elements.begin(), lat.elements.end());
    lat.elements.erase(std::unique(lat.elements.begin(), lat.elements.end()),
                       lat.elements.end());
    return lat;
}

std::uint64_t meet(const ImplicatureLattice& lat, std::uint64_t a, std::uint64_t b) {
    if (!lat.contains(a) || !lat.contains(b))
        throw DataError("meet operand is not a lattice element");
    return a & b;
}

namespace {

// Return c when representable, else its largest representable subset
// (ties resolved toward the lowest mask).
std::uint64_t truncate_into(const ImplicatureLattice& lat, std::uint64_t c) {
    if (lat.contains(c)) return c;
    const std::size_t size = std::min(lat.max_context_size, popcount(c));
    return lowest_bits(c, size);
}

}  // namespace

std::uint64_t pseudo_complement(const ImplicatureLattice& lat, std::uint64_t x) {
    if (!lat.contains(x)) throw DataError("pseudo-complement of a non-element");
    return truncate_into(lat, lat.top & ~x);
}

std::uint64_t heyting_implies(const ImplicatureLattice& lat, std::uint64_t x,
                              std::uint64_t y) {
    if (!lat.contains(x) || !lat.contains(y))
        throw DataError("implication over non-elements");
    return truncate_into(lat, (~x | y) & lat.top);
}

// --- conditional model ---

void ConditionalModel::observe_triple(const std::string& sig, const std::string& cause,
                                      const std::string& outcome) {
    ++triple_[sig][cause][outcome];
}

void ConditionalModel::observe_pair(const std::string& sig, const std::string& outcome) {
    ++pair_[sig][outcome];
}

void ConditionalModel::add_symbols(const std::set<std::string>& symbols) {
    alphabet_.insert(symbols.begin(), symbols.end());
}

std::uint64_t ConditionalModel::triple_count(const std::string& sig,
                                             const std::string& cause,
                                             const std::string& outcome) const {
    auto s = triple_.find(sig);
    if (s == triple_.end()) return 0;
    auto c = s->second.find(cause);
    if (c == s->second.end()) return 0;
    auto o = c->second.find(outcome);
    return o == c->second.end() ? 0 : o->second;
}

std::uint64_t ConditionalModel::triple_total(const std::string& sig,
                                             const std::string& cause) const {
    auto s = triple_.find(sig);
    if (s == triple_.end()) return 0;
    auto c = s->second.find(cause);
    if (c == s->second.end()) return 0;
    std::uint64_t total = 0;
    for (const auto& [_, n] : c->second) total += n;
    return total;
}

std::uint64_t ConditionalModel::pair_count(const std::string& sig,
                                           const std::string& outcome) const {
    auto s = pair_.find(sig);
    if (s == pair_.end()) return 0;
    auto o = s->second.find(outcome);
    return o == s->second.end() ? 0 : o->second;
}

std::uint64_t ConditionalModel::pair_total(const std::string& sig) const {
    auto s = pair_.find(sig);
    if (s == pair_.end()) return 0;
    std::uint64_t total = 0;
    for (const auto& [_, n] : s->second) total += n;
    return total;
}

std::map<std::string, double> ConditionalModel::conditional_distribution(
    const std::string& sig) const {
    if (!trained()) throw UntrainedModel("conditional distribution of an untrained model");
    const double n = double(alphabet_.size());
    const double total = double(pair_total(sig));
    std::map<std::string, double> probs;
    const double denom = total + lambda * n;
    for (const auto& label : alphabet_) {
        if (denom == 0.0) {
            probs[label] = 1.0 / n;  // unsmoothed, unseen context: uniform
        } else {
            probs[label] = (double(pair_count(sig, label)) + lambda) / denom;
        }
    }
    return probs;
}

std::set<std::string> ConditionalModel::possibility_set(const std::string& sig) const {
    if (!trained()) throw UntrainedModel("possibility set of an untrained model");
    auto s = pair_.find(sig);
    if (s == pair_.end() || s->second.empty()) return alphabet_;  // unseen: anything goes
    std::set<std::string> possible;
    for (const auto& [label, n] : s->second)
        if (n > 0) possible.insert(label);
    return possible;
}

std::string context_signature(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    std::string sig;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) sig += kSigSep;
        sig += labels[i];
    }
    return sig;
}

namespace {

// All index combinations of size <= k from [0, n), in increasing order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> picked;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        fn(picked);
        if (picked.size() == k) return;
        for (std::size_t i = start; i < n; ++i) {
            picked.push_back(i);
            self(self, i + 1);
            picked.pop_back();
        }
    };
    rec(rec, 0);
}

std::string signature_of(const std::vector<const Event*>& atoms,
                         const std::vector<std::size_t>& picked) {
    std::vector<std::string> labels;
    labels.reserve(picked.size());
    for (std::size_t i : picked) labels.push_back(atoms[i]->label);
    return context_signature(std::move(labels));
}

}  // namespace

ConditionalModel train_model(const std::vector<Trace>& corpus, std::size_t k,
                             double lambda) {
    if (!(lambda >= 0.0)) throw ConfigError("smoothing constant must be non-negative");
    ConditionalModel model;
    model.lambda = lambda;
    model.max_context_size = k;
    for (const Trace& trace : corpus) {
        model.add_symbols(trace.alphabet());
        for (const Event& y : trace.events()) {
            const auto causes = candidate_causes(trace, y.id);
            std::vector<const Event*> atoms;
            for (const Event& e : causes) atoms.push_back(&e);
            // context/outcome pairs: every subset of the predecessors
            for_each_subset(atoms.size(), k, [&](const std::vector<std::size_t>& picked) {
                model.observe_pair(signature_of(atoms, picked), y.label);
            });
            // (context, cause, outcome) triples: cause drawn from the rest
            for (std::size_t c = 0; c < atoms.size(); ++c) {
                std::vector<const Event*> rest;
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    if (i != c) rest.push_back(atoms[i]);
                for_each_subset(rest.size(), k, [&](const std::vector<std::size_t>& picked) {
                    model.observe_triple(signature_of(rest, picked), atoms[c]->label,
                                         y.label);
                });
            }
        }
    }
    return model;
}

namespace {

double smoothed_surprisal(const ConditionalModel& model, const std::string& sig,
                          const std::string& cause_label, const std::string& outcome) {
    const double n = double(model.alphabet().size());
    const double count = double(model.triple_count(sig, cause_label, outcome));
    const double total = double(model.triple_total(sig, cause_label));
    const double p = (count + model.lambda) / (total + model.lambda * n);
    return -std::log2(p);
}

struct ResolvedPair {
    std::vector<std::string> context_ids;  // canonical (t_start, id) order
    std::string cause_id;
    Tick cause_t = 0;
    double surprisal = 0.0;
};

// The published tie-break: surprisal, then smaller context, earlier cause,
// lexicographic cause id, lexicographic context ids.
bool better(const ResolvedPair& a, const ResolvedPair& b) {
    if (a.surprisal != b.surprisal) return a.surprisal < b.surprisal;
    if (a.context_ids.size() != b.context_ids.size())
        return a.context_ids.size() < b.context_ids.size();
    if (a.cause_t != b.cause_t) return a.cause_t < b.cause_t;
    if (a.cause_id != b.cause_id) return a.cause_id < b.cause_id;
    return a.context_ids < b.context_ids;
}

CandidatePair to_pair(const ResolvedPair& r) {
    CandidatePair out;
    out.context = r.context_ids;
    out.cause = r.cause_id;
    out.surprisal = r.surprisal;
    return out;
}

void require_scorable(const ConditionalModel& model, const Trace& trace,
                      const std::string& y_id) {
    if (!model.trained()) throw UntrainedModel("model has no training corpus");
    const Event& y = trace.get(y_id);  // throws UnknownEvent
    if (!model.alphabet().count(y.label))
        throw UntrainedModel("label '" + y.label + "' is outside the trained alphabet");
}

}  // namespace

double score_candidate(const ConditionalModel& model, const Trace& trace,
                       const std::string& y_id,
                       const std::vector<std::string>& context_ids,
                       const std::string& cause_id) {
    require_scorable(model, trace, y_id);
    const Event& y = trace.get(y_id);
    const Event& cause = trace.get(cause_id);
    if (cause.id == y.id || cause.t_start > y.t_start)
        throw DataError("cause '" + cause_id + "' does not precede '" + y_id + "'");
    std::vector<std::string> labels;
    for (const auto& id : context_ids) {
        const Event& e = trace.get(id);
        if (e.id == y.id || e.t_start > y.t_start)
            throw DataError("context event '" + id + "' does not precede '" + y_id + "'");
        if (e.id == cause_id) throw DataError("cause '" + cause_id + "' inside its context");
        labels.push_back(e.label);
    }
    return smoothed_surprisal(model, context_signature(std::move(labels)), cause.label,
                              y.label);
}

namespace {

template <typename Visit>
void enumerate_pairs(const ConditionalModel& model, const Trace& trace,
                     const std::string& y_id, std::size_t k, Visit&& visit) {
    require_scorable(model, trace, y_id);
    const Event& y = trace.get(y_id);
    const auto causes = candidate_causes(trace, y_id);
    if (causes.empty()) throw NoCandidates("event '" + y_id + "' has no predecessors");
    std::vector<const Event*> atoms;
    for (const Event& e : causes) atoms.push_back(&e);
    for (std::size_t c = 0; c < atoms.size(); ++c) {
        std::vector<const Event*> rest;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (i != c) rest.push_back(atoms[i]);
        for_each_subset(rest.size(), k, [&](const std::vector<std::size_t>& picked) {
            ResolvedPair pair;
            std::vector<std::string> labels;
            for (std::size_t i : picked) {
                pair.context_ids.push_back(rest[i]->id);
                labels.push_back(rest[i]->label);
            }
            pair.cause_id = atoms[c]->id;
            pair.cause_t = atoms[c]->t_start;
            pair.surprisal = smoothed_surprisal(model, context_signature(std::move(labels)),
                                                atoms[c]->label, y.label);
            visit(std::move(pair));
        });
    }
}

}  // namespace

CandidatePair infer_cause(const ConditionalModel& model, const Trace& trace,
                          const std::string& y_id, std::size_t k) {
    bool found = false;
    ResolvedPair best;
    enumerate_pairs(model, trace, y_id, k, [&](ResolvedPair pair) {
        if (!found || better(pair, best)) {
            best = std::move(pair);
            found = true;
        }
    });
    return to_pair(best);
}

CandidatePair brute_force_oracle(const ConditionalModel& model, const Trace& trace,
                                 const std::string& y_id, std::size_t k) {
    // Deliberately separate path from infer_cause: bitmask subset walk,
    // longhand probability arithmetic, explicit selection scan.
    require_scorable(model, trace, y_id);
    const Event& y = trace.get(y_id);
    std::vector<const Event*> preds;
    for (const Event& e : trace.events())
        if (e.id != y.id && e.t_start <= y.t_start) preds.push_back(&e);
    if (preds.empty()) throw NoCandidates("event '" + y_id + "' has no predecessors");
    if (preds.size() > 25)
        throw ConfigError("oracle enumeration capped at 25 predecessors");

    struct Row {
        std::vector<const Event*> context;
        const Event* cause;
        double surprisal;
    };
    std::vector<Row> rows;
    const double n_sym = double(model.alphabet().size());
    for (const Event* cause : preds) {
        std::vector<const Event*> rest;
        for (const Event* e : preds)
            if (e != cause) rest.push_back(e);
        const std::uint64_t limit = std::uint64_t{1} << rest.size();
        for (std::uint64_t mask = 0; mask < limit; ++mask) {
            if (popcount(mask) > k) continue;
            Row row;
            row.cause = cause;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (!(mask & (std::uint64_t{1} << i))) continue;
                row.context.push_back(rest[i]);
                labels.push_back(rest[i]->label);
            }
            std::sort(labels.begin(), labels.end());
            std::string sig;
            for (std::size_t i = 0; i < labels.size(); ++i)
                sig += (i ? std::string(1, kSigSep) : std::string()) + labels[i];
            const double count = double(model.triple_count(sig, cause->label, y.label));
            const double total = double(model.triple_total(sig, cause->label));
            row.surprisal = -std::log2((count + model.lambda) / (total + model.lambda * n_sym));
            rows.push_back(std::move(row));
        }
    }

    auto context_ids = [](const Row& r) {
        std::vector<std::string> ids;
        for (const Event* e : r.context) ids.push_back(e->id);
        return ids;
    };
    std::size_t winner = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Row& a = rows[i];
        const Row& b = rows[winner];
        bool take = false;
        if (a.surprisal < b.surprisal) {
            take = true;
        } else if (a.surprisal == b.surprisal) {
            if (a.context.size() < b.context.size()) {
                take = true;
            } else if (a.context.size() == b.context.size()) {
                if (a.cause->t_start < b.cause->t_start) {
                    take = true;
                } else if (a.cause->t_start == b.cause->t_start) {
                    if (a.cause->id < b.cause->id) {
                        take = true;
                    } else if (a.cause->id == b.cause->id) {
                        take = context_ids(a) < context_ids(b);
                    }
                }
            }
        }
        if (take) winner = i;
    }
    CandidatePair out;
    out.context = context_ids(rows[winner]);
    out.cause = rows[winner].cause->id;
    out.surprisal = rows[winner].surprisal;
    return out;
}

std::vector<CandidatePair> rank_candidates(const ConditionalModel& model,
                                           const Trace& trace, const std::string& y_id,
                                           std::size_t k) {
    std::vector<ResolvedPair> all;
    enumerate_pairs(model, trace, y_id, k, [&](ResolvedPair pair) {
        all.push_back(std::move(pair));
    });
    std::sort(all.begin(), all.end(), better);
    std::vector<CandidatePair> out;
    out.reserve(all.size());
    for (const auto& r : all) out.push_back(to_pair(r));
    return out;
}

}  // namespace matic
