#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matic/errors.hpp"

namespace matic {

// --- abstract syntax ---
//
// Surface syntax (ASCII): variables are identifiers (primes allowed, x');
// terms are variables, set literals [a, b], comprehensions {x | phi}, and
// applications A(y); atoms are `t in t`, `t = t`, st(t), and relation
// applications; connectives not/and/or/->; quantifiers forall/exists with
// optional ^st or ^stfin modifier, body after '.'. Definition lines:
// `def name(x, y) := phi`.

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Term {
    enum class Kind { Var, SetLiteral, Comprehension, App };
    Kind kind = Kind::Var;
    std::string name;           // Var name, App symbol
    std::vector<TermPtr> args;  // SetLiteral members, App arguments
    std::string bound;          // Comprehension variable
    FormulaPtr body;            // Comprehension formula
};

enum class Quantifier { Forall, Exists };
enum class Modifier { Plain, St, StFin };

struct Formula {
    enum class Kind { Member, Equal, Rel, St, Not, And, Or, Implies, Quant };
    Kind kind = Kind::Rel;
    TermPtr lhs, rhs;           // Member, Equal; St uses lhs
    std::string name;           // Rel symbol
    std::vector<TermPtr> args;  // Rel arguments
    FormulaPtr child;           // Not, Quant body
    FormulaPtr left, right;     // And, Or, Implies
    Quantifier quant = Quantifier::Forall;
    Modifier modifier = Modifier::Plain;
    std::string var;            // Quant variable
};

// node builders
TermPtr mk_var(std::string name);
TermPtr mk_set_literal(std::vector<TermPtr> members);
TermPtr mk_comprehension(std::string var, FormulaPtr body);
TermPtr mk_app(std::string name, std::vector<TermPtr> args);
FormulaPtr mk_member(TermPtr lhs, TermPtr rhs);
FormulaPtr mk_equal(TermPtr lhs, TermPtr rhs);
FormulaPtr mk_rel(std::string name, std::vector<TermPtr> args);
FormulaPtr mk_st(TermPtr arg);
FormulaPtr mk_not(FormulaPtr child);
FormulaPtr mk_and(FormulaPtr left, FormulaPtr right);
FormulaPtr mk_or(FormulaPtr left, FormulaPtr right);
FormulaPtr mk_implies(FormulaPtr left, FormulaPtr right);
FormulaPtr mk_quant(Quantifier q, Modifier m, std::string var, FormulaPtr body);

// Named relation definitions, expanded during internality checks and
// finite-model evaluation.
struct Definition {
    std::vector<std::string> params;
    FormulaPtr body;
};
using Definitions = std::map<std::string, Definition>;

// --- parsing & printing ---

FormulaPtr parse_formula(const std::string& text);  // throws SyntaxError
TermPtr parse_term(const std::string& text);

// A program is definition lines plus formula lines (one per line; blank
// lines and '#' comments skipped).
struct Program {
    Definitions defs;
    std::vector<FormulaPtr> formulas;
    std::vector<std::string> formula_sources;  // original text per formula
};
Program parse_program(const std::string& text);

std::string format_term(const Term& t);
std::string format_formula(const Formula& f);

// --- structural queries ---

bool structurally_equal(const Term& a, const Term& b);
bool structurally_equal(const Formula& a, const Formula& b);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Term& t);
std::vector<TermPtr> collect_comprehensions(const Formula& f);
TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement);

// --- stratification ---
//
// Solve level constraints: x in y forces level(y) = level(x) + 1, x = y
// forces equality, set literals and comprehensions sit one level above
// their members / bound variable. Variables are keyed by name.

struct StratifyResult {
    bool stratified = false;
    std::map<std::string, int> levels;  // variable -> level, min 0 per component
    std::vector<std::string> cycle;     // violating chain when not stratified
};

StratifyResult stratify_formula(const Formula& f);
StratifyResult stratify_term(const Term& t);

// --- internality & comprehension legality ---

// Internal: free of st(.) and of st/stfin quantifier modifiers, after
// expanding definitions.
bool is_internal(const Formula& f, const Definitions& defs = {});
bool is_internal(const Term& t, const Definitions& defs = {});

enum class ComprehensionVerdict { Legal, IllegalSetFormation, NotStratified };
const char* verdict_name(ComprehensionVerdict v);

// Legal iff the body is stratified and internal; stratification failures
// take precedence.
ComprehensionVerdict check_comprehension(const Term& comprehension,
                                         const Definitions& defs = {});

// --- the three rewrite principles ---

// forall^stfin y' . exists x . forall y . y in A(y')
//   ==>  exists x . forall^st y . y in A(y)
FormulaPtr apply_idealisation(const Formula& f);

// {z | z in X and z in Y}; certified legal. X = Y collapses to {z | z in X}.
TermPtr apply_selection(const TermPtr& X, const TermPtr& Y,
                        const Definitions& defs = {});

// forall^st y . A(y)  ==>  forall y . A(y), provided A is internal and every
// free parameter is declared standard.
FormulaPtr apply_transference(const Formula& f,
                              const std::set<std::string>& standard_params,
                              const Definitions& defs = {});

// --- finite models ---

struct FiniteModel {
    std::set<std::string> universe;
    std::set<std::string> standard_mark;                          // subset of universe
    std::set<std::pair<std::string, std::string>> membership;     // (member, container)
    std::string zero;                                             // denotes the empty set
    std::map<std::string, std::set<std::vector<std::string>>> relations;
    std::map<std::string, std::map<std::vector<std::string>, std::string>> functions;

    void validate() const;
    std::set<std::string> members_of(const std::string& element) const;
};

using Env = std::map<std::string, std::string>;

// Structural recursion; plain quantifiers range over the universe, st and
// stfin over the standard mark (every element of a finite model is finite).
bool eval_finite_model(const Formula& f, const FiniteModel& m, Env env = {},
                       const Definitions& defs = {});

using ElementSet = std::set<std::string>;
using Family = std::set<ElementSet>;

// { a ∪ {x} | a ∈ A, x ∈ universe, x ∉ a }
Family incremental_set(const Family& A, const FiniteModel& m);

// Contains the empty set and is closed under single increments.
bool is_inductive(const Family& A, const FiniteModel& m);

// Least element (by id) outside the standard mark; AllStandard if none.
std::string nonstandard_witness(const FiniteModel& m);

}  // namespace matic
