#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "matic/event_model.hpp"

namespace matic {

// Bounded meet-semilattice over the events preceding some event y: all
// subsets of the atoms up to max_context_size, plus top (all atoms) and
// bottom (the empty set). Elements are bitmasks over atom_ids, which are in
// canonical (t_start, id) order. Meet is set intersection and stays closed
// because intersections never grow.
struct ImplicatureLattice {
    std::vector<std::string> atom_ids;
    std::vector<std::uint64_t> elements;  // sorted, includes 0 and top
    std::uint64_t top = 0;
    std::size_t max_context_size = 3;

    bool contains(std::uint64_t mask) const;
    std::vector<std::string> ids_of(std::uint64_t mask) const;
};

ImplicatureLattice build_lattice(const Trace& trace, const std::string& y_id,
                                 std::size_t max_context_size = 3);

std::uint64_t meet(const ImplicatureLattice& lat, std::uint64_t a, std::uint64_t b);

// Largest element disjoint from x: the set complement of x within the atoms,
// truncated (largest size, then lowest mask) when the complement itself is
// not representable.
std::uint64_t pseudo_complement(const ImplicatureLattice& lat, std::uint64_t x);

// Largest element z with meet(x, z) <= y; the relative pseudo-complement
// (complement of x) ∪ (x ∩ y), truncated the same way.
std::uint64_t heyting_implies(const ImplicatureLattice& lat, std::uint64_t x,
                              std::uint64_t y);

// A (context, cause) hypothesis for y's implied cause, scored in bits.
struct CandidatePair {
    std::vector<std::string> context;  // event ids, canonical order
    std::string cause;                 // event id, not in context
    double surprisal = 0.0;
};

// Empirical conditional model: occurrence counts of (context signature,
// cause label, outcome label) triples over a training corpus, with Laplace
// smoothing. Also keeps (signature, outcome) pair counts so conditional
// distributions and possibility sets can be read off for any realized
// context. A signature is the sorted multiset of context labels.
class ConditionalModel {
  public:
    double lambda = 1.0;
    std::size_t max_context_size = 3;

    bool trained() const { return !alphabet_.empty(); }
    const std::set<std::string>& alphabet() const { return alphabet_; }

    void observe_triple(const std::string& sig, const std::string& cause,
                        const std::string& outcome);
    void observe_pair(const std::string& sig, const std::string& outcome);
    void add_symbols(const std::set<std::string>& symbols);

    std::uint64_t triple_count(const std::string& sig, const std::string& cause,
                               const std::string& outcome) const;
    std::uint64_t triple_total(const std::string& sig, const std::string& cause) const;
    std::uint64_t pair_count(const std::string& sig, const std::string& outcome) const;
    std::uint64_t pair_total(const std::string& sig) const;

    // Smoothed distribution over the alphabet given a realized context.
    std::map<std::string, double> conditional_distribution(const std::string& sig) const;
    // Labels actually emitted after this context; full alphabet when unseen.
    std::set<std::string> possibility_set(const std::string& sig) const;

  private:
    std::set<std::string> alphabet_;
    std::map<std::string, std::map<std::string, std::map<std::string, std::uint64_t>>> triple_;
    std::map<std::string, std::map<std::string, std::uint64_t>> pair_;
};

// Canonical signature of a set of context labels (order-insensitive).
std::string context_signature(std::vector<std::string> labels);

// Count every (context ≤ k, cause, outcome) triple across the corpus, plus
// (context, outcome) pairs for every context subset of each event's
// predecessors.
ConditionalModel train_model(const std::vector<Trace>& corpus, std::size_t k = 3,
                             double lambda = 1.0);

// Surprisal of y's label given the pair's context signature and cause label:
// −log2 of the Laplace-smoothed conditional probability.
double score_candidate(const ConditionalModel& model, const Trace& trace,
                       const std::string& y_id,
                       const std::vector<std::string>& context_ids,
                       const std::string& cause_id);

// Minimal-surprisal pair over every (context ≤ k, cause) combination; ties
// broken by smaller context, earlier cause t_start, lexicographic cause id,
// then lexicographic context ids.
CandidatePair infer_cause(const ConditionalModel& model, const Trace& trace,
                          const std::string& y_id, std::size_t k = 3);

// Independent exhaustive enumeration with the same contract; the reference
// answer infer_cause is checked against.
CandidatePair brute_force_oracle(const ConditionalModel& model, const Trace& trace,
                                 const std::string& y_id, std::size_t k = 3);

// Every candidate pair, best first under the infer_cause order.
std::vector<CandidatePair> rank_candidates(const ConditionalModel& model,
                                           const Trace& trace, const std::string& y_id,
                                           std::size_t k = 3);

}  // namespace matic
