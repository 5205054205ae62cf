#include <algorithm>
#include <deque>
#include <map>

#include "matic/ist_logic.hpp"

namespace matic {

// --- stratification ---
//
// Levels are solved as difference constraints: each membership atom is an
// edge of weight +1 (container one level up), each equality an edge of
// weight 0, set literals and comprehensions sit one level above their
// members / bound variable. Compound terms are keyed by their printed form,
// so structurally identical terms (which denote the same set) share a node.
// Variables are keyed globally by name.

namespace {

struct ConstraintGraph {
    struct Arc {
        std::string to;
        int diff;  // level(to) - level(from)
    };
    std::map<std::string, std::vector<Arc>> adjacency;
    std::set<std::string> variables;

    void key(const std::string& k) { adjacency[k]; }

    void link(const std::string& from, const std::string& to, int diff) {
        adjacency[from].push_back({to, diff});
        adjacency[to].push_back({from, -diff});
    }
};

std::string gather_term(const Term& t, ConstraintGraph& g);

void gather_formula(const Formula& f, ConstraintGraph& g) {
    switch (f.kind) {
        case Formula::Kind::Member:
            g.link(gather_term(*f.lhs, g), gather_term(*f.rhs, g), 1);
            return;
        case Formula::Kind::Equal:
            g.link(gather_term(*f.lhs, g), gather_term(*f.rhs, g), 0);
            return;
        case Formula::Kind::Rel:
            for (const auto& arg : f.args) gather_term(*arg, g);
            return;
        case Formula::Kind::St:
            gather_term(*f.lhs, g);
            return;
        case Formula::Kind::Not:
            gather_formula(*f.child, g);
            return;
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
            gather_formula(*f.left, g);
            gather_formula(*f.right, g);
            return;
        case Formula::Kind::Quant:
            g.variables.insert(f.var);
            g.key(f.var);
            gather_formula(*f.child, g);
            return;
    }
}

std::string gather_term(const Term& t, ConstraintGraph& g) {
    switch (t.kind) {
        case Term::Kind::Var:
            g.variables.insert(t.name);
            g.key(t.name);
            return t.name;
        case Term::Kind::SetLiteral: {
            const std::string key = format_term(t);
            g.key(key);
            for (const auto& member : t.args)
                g.link(gather_term(*member, g), key, 1);
            return key;
        }
        case Term::Kind::Comprehension: {
            const std::string key = format_term(t);
            g.key(key);
            g.variables.insert(t.bound);
            g.key(t.bound);
            g.link(t.bound, key, 1);
            gather_formula(*t.body, g);
            return key;
        }
        case Term::Kind::App: {
            const std::string key = format_term(t);
            g.key(key);
            for (const auto& arg : t.args) gather_term(*arg, g);
            return key;
        }
    }
    return t.name;
}

StratifyResult solve(const ConstraintGraph& g) {
    StratifyResult result;
    std::map<std::string, int> level;
    std::map<std::string, std::string> parent;

    auto chain_to_root = [&](std::string k) {
        std::vector<std::string> chain{k};
        while (true) {
            auto it = parent.find(chain.back());
            if (it == parent.end() || it->second.empty()) break;
            chain.push_back(it->second);
        }
        return chain;
    };

    for (const auto& [root, _] : g.adjacency) {
        if (level.count(root)) continue;
        level[root] = 0;
        parent[root] = "";
        std::vector<std::string> component{root};
        std::deque<std::string> queue{root};
        while (!queue.empty()) {
            const std::string u = queue.front();
            queue.pop_front();
            for (const auto& arc : g.adjacency.at(u)) {
                const int want = level.at(u) + arc.diff;
                auto it = level.find(arc.to);
                if (it == level.end()) {
                    level[arc.to] = want;
                    parent[arc.to] = u;
                    component.push_back(arc.to);
                    queue.push_back(arc.to);
                } else if (it->second != want) {
                    // inconsistent: splice the two tree paths into a cycle
                    result.stratified = false;
                    const auto from_u = chain_to_root(u);
                    const auto from_v = chain_to_root(arc.to);
                    std::set<std::string> u_anc(from_u.begin(), from_u.end());
                    std::string lca;
                    for (const auto& k : from_v)
                        if (u_anc.count(k)) {
                            lca = k;
                            break;
                        }
                    for (const auto& k : from_u) {
                        result.cycle.push_back(k);
                        if (k == lca) break;
                    }
                    std::vector<std::string> down;
                    for (const auto& k : from_v) {
                        if (k == lca) break;
                        down.push_back(k);
                    }
                    std::reverse(down.begin(), down.end());
                    result.cycle.insert(result.cycle.end(), down.begin(), down.end());
                    result.cycle.push_back(result.cycle.front());
                    return result;
                }
            }
        }
        int low = level.at(component.front());
        for (const auto& k : component) low = std::min(low, level.at(k));
        for (const auto& k : component) level.at(k) -= low;
    }

    result.stratified = true;
    for (const auto& v : g.variables) result.levels[v] = level.at(v);
    return result;
}

}  // namespace

StratifyResult stratify_formula(const Formula& f) {
    ConstraintGraph g;
    gather_formula(f, g);
    return solve(g);
}

StratifyResult stratify_term(const Term& t) {
    ConstraintGraph g;
    gather_term(t, g);
    return solve(g);
}

// --- internality ---

namespace {

bool internal_term(const Term& t, const Definitions& defs, std::set<std::string>& stack);

bool internal_formula(const Formula& f, const Definitions& defs,
                      std::set<std::string>& stack) {
    switch (f.kind) {
        case Formula::Kind::St:
            return false;
        case Formula::Kind::Member:
        case Formula::Kind::Equal:
            return internal_term(*f.lhs, defs, stack) && internal_term(*f.rhs, defs, stack);
        case Formula::Kind::Rel: {
            for (const auto& arg : f.args)
                if (!internal_term(*arg, defs, stack)) return false;
            auto it = defs.find(f.name);
            if (it == defs.end()) return true;
            if (!stack.insert(f.name).second)
                throw ConfigError("recursive definition of '" + f.name + "'");
            const bool ok = internal_formula(*it->second.body, defs, stack);
            stack.erase(f.name);
            return ok;
        }
        case Formula::Kind::Not:
            return internal_formula(*f.child, defs, stack);
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
            return internal_formula(*f.left, defs, stack) &&
                   internal_formula(*f.right, defs, stack);
        case Formula::Kind::Quant:
            if (f.modifier != Modifier::Plain) return false;
            return internal_formula(*f.child, defs, stack);
    }
    return true;
}

bool internal_term(const Term& t, const Definitions& defs, std::set<std::string>& stack) {
    switch (t.kind) {
        case Term::Kind::Var:
            return true;
        case Term::Kind::App:
        case Term::Kind::SetLiteral:
            for (const auto& arg : t.args)
                if (!internal_term(*arg, defs, stack)) return false;
            return true;
        case Term::Kind::Comprehension:
            return internal_formula(*t.body, defs, stack);
    }
    return true;
}

}  // namespace

bool is_internal(const Formula& f, const Definitions& defs) {
    std::set<std::string> stack;
    return internal_formula(f, defs, stack);
}

bool is_internal(const Term& t, const Definitions& defs) {
    std::set<std::string> stack;
    return internal_term(t, defs, stack);
}

// --- comprehension legality ---

const char* verdict_name(ComprehensionVerdict v) {
    switch (v) {
        case ComprehensionVerdict::Legal: return "Legal";
        case ComprehensionVerdict::IllegalSetFormation: return "IllegalSetFormation";
        case ComprehensionVerdict::NotStratified: return "NotStratified";
    }
    return "?";
}

ComprehensionVerdict check_comprehension(const Term& comprehension,
                                         const Definitions& defs) {
    if (comprehension.kind != Term::Kind::Comprehension)
        throw DataError("check_comprehension expects a {x | ...} term");
    if (!stratify_term(comprehension).stratified)
        return ComprehensionVerdict::NotStratified;
    if (!is_internal(comprehension, defs))
        return ComprehensionVerdict::IllegalSetFormation;
    return ComprehensionVerdict::Legal;
}

// --- the three rewrite principles ---

FormulaPtr apply_idealisation(const Formula& f) {
    auto mismatch = [](const std::string& why) -> FormulaPtr {
        throw PatternMismatch("idealisation expects forall^stfin y' . exists x . "
                              "forall y . y in A(y'): " + why);
    };
    if (f.kind != Formula::Kind::Quant || f.quant != Quantifier::Forall ||
        f.modifier != Modifier::StFin)
        return mismatch("outer quantifier is not forall^stfin");
    const std::string& y_seen = f.var;
    const Formula& ex = *f.child;
    if (ex.kind != Formula::Kind::Quant || ex.quant != Quantifier::Exists ||
        ex.modifier != Modifier::Plain)
        return mismatch("second quantifier is not a plain exists");
    const std::string& x = ex.var;
    const Formula& all = *ex.child;
    if (all.kind != Formula::Kind::Quant || all.quant != Quantifier::Forall ||
        all.modifier != Modifier::Plain)
        return mismatch("third quantifier is not a plain forall");
    const std::string& y = all.var;
    const Formula& matrix = *all.child;
    if (matrix.kind != Formula::Kind::Member)
        return mismatch("matrix is not a membership atom");
    if (matrix.lhs->kind != Term::Kind::Var || matrix.lhs->name != y)
        return mismatch("membership subject is not the inner bound variable");
    if (y == x || y_seen == x)
        return mismatch("context variable collides with a bound variable");

    const TermPtr target = substitute(matrix.rhs, y_seen, mk_var(y));
    return mk_quant(Quantifier::Exists, Modifier::Plain, x,
                    mk_quant(Quantifier::Forall, Modifier::St, y,
                             mk_member(mk_var(y), target)));
}

TermPtr apply_selection(const TermPtr& X, const TermPtr& Y, const Definitions& defs) {
    if (!is_internal(*X, defs))
        throw IllegalSetFormation("selection source X is external: " + format_term(*X));
    if (!is_internal(*Y, defs))
        throw IllegalSetFormation("selection source Y is external: " + format_term(*Y));
    auto used = free_vars(*X);
    const auto also = free_vars(*Y);
    used.insert(also.begin(), also.end());
    std::string z = "z";
    while (used.count(z)) z += "'";

    FormulaPtr body = structurally_equal(*X, *Y)
                          ? mk_member(mk_var(z), X)
                          : mk_and(mk_member(mk_var(z), X), mk_member(mk_var(z), Y));
    TermPtr comp = mk_comprehension(z, std::move(body));
    const auto verdict = check_comprehension(*comp, defs);
    if (verdict != ComprehensionVerdict::Legal)
        throw IllegalSetFormation("selection result " + format_term(*comp) +
                                  " is not a legal set: " + verdict_name(verdict));
    return comp;
}

FormulaPtr apply_transference(const Formula& f,
                              const std::set<std::string>& standard_params,
                              const Definitions& defs) {
    if (f.kind != Formula::Kind::Quant || f.quant != Quantifier::Forall ||
        f.modifier != Modifier::St)
        throw PatternMismatch("transference expects forall^st y . A(y), got: " +
                              format_formula(f));
    if (!is_internal(*f.child, defs))
        throw IllegalTransfer(TransferFault::ExternalFormula,
                              "the matrix of " + format_formula(f) + " is external");
    auto params = free_vars(*f.child);
    params.erase(f.var);
    for (const auto& p : params)
        if (!standard_params.count(p))
            throw IllegalTransfer(TransferFault::NonStandardParameter,
                                  "parameter '" + p + "' is not declared standard");
    return mk_quant(Quantifier::Forall, Modifier::Plain, f.var, f.child);
}

}  // namespace matic
