#include <algorithm>

#include "matic/ist_logic.hpp"

namespace matic {

void FiniteModel::validate() const {
    for (const auto& s : standard_mark)
        if (!universe.count(s))
            throw ConfigError("standard mark '" + s + "' is outside the universe");
    for (const auto& [member, container] : membership)
        if (!universe.count(member) || !universe.count(container))
            throw ConfigError("membership pair (" + member + ", " + container +
                              ") leaves the universe");
    if (!zero.empty() && !universe.count(zero))
        throw ConfigError("zero element '" + zero + "' is outside the universe");
}

std::set<std::string> FiniteModel::members_of(const std::string& element) const {
    std::set<std::string> out;
    for (const auto& [member, container] : membership)
        if (container == element) out.insert(member);
    return out;
}

namespace {

std::string eval_term(const Term& t, const FiniteModel& m, const Env& env,
                      const Definitions& defs);

bool eval_formula(const Formula& f, const FiniteModel& m, Env& env,
                  const Definitions& defs) {
    switch (f.kind) {
        case Formula::Kind::Member: {
            const auto lhs = eval_term(*f.lhs, m, env, defs);
            const auto rhs = eval_term(*f.rhs, m, env, defs);
            return m.membership.count({lhs, rhs}) > 0;
        }
        case Formula::Kind::Equal:
            return eval_term(*f.lhs, m, env, defs) == eval_term(*f.rhs, m, env, defs);
        case Formula::Kind::St:
            return m.standard_mark.count(eval_term(*f.lhs, m, env, defs)) > 0;
        case Formula::Kind::Rel: {
            std::vector<std::string> tuple;
            tuple.reserve(f.args.size());
            for (const auto& arg : f.args) tuple.push_back(eval_term(*arg, m, env, defs));
            auto def = defs.find(f.name);
            if (def != defs.end()) {
                if (def->second.params.size() != tuple.size())
                    throw DataError("'" + f.name + "' expects " +
                                    std::to_string(def->second.params.size()) +
                                    " arguments, got " + std::to_string(tuple.size()));
                Env inner;  // definitions are closed terms over their parameters
                for (std::size_t i = 0; i < tuple.size(); ++i)
                    inner[def->second.params[i]] = tuple[i];
                return eval_formula(*def->second.body, m, inner, defs);
            }
            auto rel = m.relations.find(f.name);
            if (rel == m.relations.end())
                throw DataError("no interpretation for relation '" + f.name + "'");
            return rel->second.count(tuple) > 0;
        }
        case Formula::Kind::Not:
            return !eval_formula(*f.child, m, env, defs);
        case Formula::Kind::And:
            return eval_formula(*f.left, m, env, defs) &&
                   eval_formula(*f.right, m, env, defs);
        case Formula::Kind::Or:
            return eval_formula(*f.left, m, env, defs) ||
                   eval_formula(*f.right, m, env, defs);
        case Formula::Kind::Implies:
            return !eval_formula(*f.left, m, env, defs) ||
                   eval_formula(*f.right, m, env, defs);
        case Formula::Kind::Quant: {
            // st and stfin both range over the standard mark: every element
            // of a finite model is finite
            const auto& domain =
                f.modifier == Modifier::Plain ? m.universe : m.standard_mark;
            auto saved = env.find(f.var) != env.end()
                             ? std::optional<std::string>(env.at(f.var))
                             : std::nullopt;
            bool result = f.quant == Quantifier::Forall;
            for (const auto& element : domain) {
                env[f.var] = element;
                const bool here = eval_formula(*f.child, m, env, defs);
                if (f.quant == Quantifier::Forall && !here) {
                    result = false;
                    break;
                }
                if (f.quant == Quantifier::Exists && here) {
                    result = true;
                    break;
                }
            }
            if (saved) {
                env[f.var] = *saved;
            } else {
                env.erase(f.var);
            }
            return result;
        }
    }
    throw InternalError("unhandled formula kind");
}

std::string eval_term(const Term& t, const FiniteModel& m, const Env& env,
                      const Definitions& defs) {
    switch (t.kind) {
        case Term::Kind::Var: {
            auto it = env.find(t.name);
            if (it == env.end())
                throw UnboundVariable("variable '" + t.name + "' is unbound");
            return it->second;
        }
        case Term::Kind::App: {
            std::vector<std::string> tuple;
            tuple.reserve(t.args.size());
            for (const auto& arg : t.args) tuple.push_back(eval_term(*arg, m, env, defs));
            auto fn = m.functions.find(t.name);
            if (fn == m.functions.end())
                throw DataError("no interpretation for function '" + t.name + "'");
            auto val = fn->second.find(tuple);
            if (val == fn->second.end())
                throw DataError("function '" + t.name + "' undefined on given arguments");
            return val->second;
        }
        case Term::Kind::SetLiteral: {
            std::set<std::string> want;
            for (const auto& member : t.args) want.insert(eval_term(*member, m, env, defs));
            for (const auto& element : m.universe)
                if (m.members_of(element) == want) return element;
            throw DataError("no element of the model denotes " + format_term(t));
        }
        case Term::Kind::Comprehension: {
            std::set<std::string> want;
            Env inner = env;
            for (const auto& element : m.universe) {
                inner[t.bound] = element;
                if (eval_formula(*t.body, m, inner, defs)) want.insert(element);
            }
            for (const auto& element : m.universe)
                if (m.members_of(element) == want) return element;
            throw DataError("no element of the model denotes " + format_term(t));
        }
    }
    throw InternalError("unhandled term kind");
}

}  // namespace

bool eval_finite_model(const Formula& f, const FiniteModel& m, Env env,
                       const Definitions& defs) {
    m.validate();
    return eval_formula(f, m, env, defs);
}

Family incremental_set(const Family& A, const FiniteModel& m) {
    for (const auto& a : A)
        for (const auto& x : a)
            if (!m.universe.count(x))
                throw DataError("family member contains '" + x +
                                "', which is outside the universe");
    Family out;
    for (const auto& a : A) {
        for (const auto& x : m.universe) {
            if (a.count(x)) continue;
            ElementSet grown = a;
            grown.insert(x);
            out.insert(std::move(grown));
        }
    }
    return out;
}

bool is_inductive(const Family& A, const FiniteModel& m) {
    if (!A.count(ElementSet{})) return false;  // 0, read as the empty set
    for (const auto& a : A) {
        const auto grown = incremental_set(Family{a}, m);
        for (const auto& g : grown)
            if (!A.count(g)) return false;
    }
    return true;
}

std::string nonstandard_witness(const FiniteModel& m) {
    m.validate();
    for (const auto& element : m.universe)  // std::set: ascending by id
        if (!m.standard_mark.count(element)) return element;
    throw AllStandard("every element of the universe is marked standard");
}

}  // namespace matic
