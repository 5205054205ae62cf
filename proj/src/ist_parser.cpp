#include <cctype>
#include <sstream>

#include "matic/ist_logic.hpp"

namespace matic {

TermPtr mk_var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr mk_set_literal(std::vector<TermPtr> members) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::SetLiteral;
    t->args = std::move(members);
    return t;
}

TermPtr mk_comprehension(std::string var, FormulaPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Comprehension;
    t->bound = std::move(var);
    t->body = std::move(body);
    return t;
}

TermPtr mk_app(std::string name, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::App;
    t->name = std::move(name);
    t->args = std::move(args);
    return t;
}

namespace {

// shared_ptr<Formula> with mutation access during construction
std::shared_ptr<Formula> mk_mut(Formula::Kind kind) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    return f;
}

}  // namespace

FormulaPtr mk_member(TermPtr lhs, TermPtr rhs) {
    auto f = mk_mut(Formula::Kind::Member);
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

FormulaPtr mk_equal(TermPtr lhs, TermPtr rhs) {
    auto f = mk_mut(Formula::Kind::Equal);
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

FormulaPtr mk_rel(std::string name, std::vector<TermPtr> args) {
    auto f = mk_mut(Formula::Kind::Rel);
    f->name = std::move(name);
    f->args = std::move(args);
    return f;
}

FormulaPtr mk_st(TermPtr arg) {
    auto f = mk_mut(Formula::Kind::St);
    f->lhs = std::move(arg);
    return f;
}

FormulaPtr mk_not(FormulaPtr child) {
    auto f = mk_mut(Formula::Kind::Not);
    f->child = std::move(child);
    return f;
}

namespace {

FormulaPtr mk_binary(Formula::Kind kind, FormulaPtr left, FormulaPtr right) {
    auto f = mk_mut(kind);
    f->left = std::move(left);
    f->right = std::move(right);
    return f;
}

}  // namespace

FormulaPtr mk_and(FormulaPtr l, FormulaPtr r) { return mk_binary(Formula::Kind::And, std::move(l), std::move(r)); }
FormulaPtr mk_or(FormulaPtr l, FormulaPtr r) { return mk_binary(Formula::Kind::Or, std::move(l), std::move(r)); }
FormulaPtr mk_implies(FormulaPtr l, FormulaPtr r) { return mk_binary(Formula::Kind::Implies, std::move(l), std::move(r)); }

FormulaPtr mk_quant(Quantifier q, Modifier m, std::string var, FormulaPtr body) {
    auto f = mk_mut(Formula::Kind::Quant);
    f->quant = q;
    f->modifier = m;
    f->var = std::move(var);
    f->child = std::move(body);
    return f;
}

// --- lexing ---

namespace {

enum class Tok {
    Ident, Forall, Exists, In, Equals, And, Or, Not, St, Def, Assign,
    Arrow, Dot, Comma, Pipe, LParen, RParen, LBracket, RBracket,
    LBrace, RBrace, End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Modifier modifier = Modifier::Plain;  // for Forall/Exists
    std::size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t pos) const {
        throw SyntaxError(msg + " at column " + std::to_string(pos + 1) + " in '" +
                          text_ + "'");
    }

  private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        current_ = Token{};
        current_.pos = i_;
        if (i_ >= text_.size()) return;
        const char c = text_[i_];
        auto single = [&](Tok kind) {
            current_.kind = kind;
            current_.text = std::string(1, c);
            ++i_;
        };
        switch (c) {
            case '=': return single(Tok::Equals);
            case '.': return single(Tok::Dot);
            case ',': return single(Tok::Comma);
            case '|': return single(Tok::Pipe);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case '-':
                if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
                    current_.kind = Tok::Arrow;
                    current_.text = "->";
                    i_ += 2;
                    return;
                }
                fail("stray '-'", i_);
            case ':':
                if (i_ + 1 < text_.size() && text_[i_ + 1] == '=') {
                    current_.kind = Tok::Assign;
                    current_.text = ":=";
                    i_ += 2;
                    return;
                }
                fail("stray ':'", i_);
            default: break;
        }
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            fail(std::string("unexpected character '") + c + "'", i_);
        std::size_t start = i_;
        while (i_ < text_.size()) {
            const char k = text_[i_];
            if (std::isalnum(static_cast<unsigned char>(k)) || k == '_' || k == '\'') {
                ++i_;
            } else {
                break;
            }
        }
        current_.text = text_.substr(start, i_ - start);
        if (current_.text == "in") current_.kind = Tok::In;
        else if (current_.text == "and") current_.kind = Tok::And;
        else if (current_.text == "or") current_.kind = Tok::Or;
        else if (current_.text == "not") current_.kind = Tok::Not;
        else if (current_.text == "st") current_.kind = Tok::St;
        else if (current_.text == "def") current_.kind = Tok::Def;
        else if (current_.text == "forall" || current_.text == "exists") {
            current_.kind = current_.text == "forall" ? Tok::Forall : Tok::Exists;
            if (i_ < text_.size() && text_[i_] == '^') {
                ++i_;
                std::size_t mstart = i_;
                while (i_ < text_.size() &&
                       std::isalpha(static_cast<unsigned char>(text_[i_])))
                    ++i_;
                const std::string mod = text_.substr(mstart, i_ - mstart);
                if (mod == "st") current_.modifier = Modifier::St;
                else if (mod == "stfin") current_.modifier = Modifier::StFin;
                else fail("unknown quantifier modifier '^" + mod + "'", mstart);
            }
        } else {
            current_.kind = Tok::Ident;
        }
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_;
};

// --- recursive descent ---

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr formula() {
        auto f = implies();
        expect(Tok::End, "end of formula");
        return f;
    }

    TermPtr whole_term() {
        auto t = term();
        expect(Tok::End, "end of term");
        return t;
    }

    // def name(x, y) := body
    std::pair<std::string, Definition> definition() {
        expect(Tok::Def, "'def'");
        const Token name = expect(Tok::Ident, "definition name");
        Definition d;
        expect(Tok::LParen, "'('");
        if (lex_.peek().kind != Tok::RParen) {
            d.params.push_back(expect(Tok::Ident, "parameter name").text);
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                d.params.push_back(expect(Tok::Ident, "parameter name").text);
            }
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Assign, "':='");
        d.body = implies();
        expect(Tok::End, "end of definition");
        return {name.text, std::move(d)};
    }

    bool at_def() const { return lex_.peek().kind == Tok::Def; }

  private:
    Token expect(Tok kind, const char* what) {
        if (lex_.peek().kind != kind)
            lex_.fail(std::string("expected ") + what + ", found '" +
                          (lex_.peek().kind == Tok::End ? "<end>" : lex_.peek().text) + "'",
                      lex_.peek().pos);
        return lex_.take();
    }

    FormulaPtr implies() {
        auto left = disjunct();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.take();
            return mk_implies(std::move(left), implies());  // right associative
        }
        return left;
    }

    FormulaPtr disjunct() {
        auto f = conjunct();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            f = mk_or(std::move(f), conjunct());
        }
        return f;
    }

    FormulaPtr conjunct() {
        auto f = unary();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            f = mk_and(std::move(f), unary());
        }
        return f;
    }

    FormulaPtr unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Not) {
            lex_.take();
            return mk_not(unary());
        }
        if (t.kind == Tok::Forall || t.kind == Tok::Exists) {
            const Token q = lex_.take();
            const Token var = expect(Tok::Ident, "bound variable");
            expect(Tok::Dot, "'.'");
            return mk_quant(q.kind == Tok::Forall ? Quantifier::Forall : Quantifier::Exists,
                            q.modifier, var.text, implies());
        }
        if (t.kind == Tok::LParen) {
            lex_.take();
            auto f = implies();
            expect(Tok::RParen, "')'");
            return f;
        }
        return atom();
    }

    FormulaPtr atom() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::St) {
            lex_.take();
            expect(Tok::LParen, "'('");
            auto arg = term();
            expect(Tok::RParen, "')'");
            return mk_st(std::move(arg));
        }
        auto lhs = term();
        if (lex_.peek().kind == Tok::In) {
            lex_.take();
            return mk_member(std::move(lhs), term());
        }
        if (lex_.peek().kind == Tok::Equals) {
            lex_.take();
            return mk_equal(std::move(lhs), term());
        }
        // a bare application in formula position is a relation atom
        if (lhs->kind == Term::Kind::App)
            return mk_rel(lhs->name, lhs->args);
        lex_.fail("expected 'in', '=', or a relation application", lex_.peek().pos);
    }

    TermPtr term() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident) {
            const Token name = lex_.take();
            if (lex_.peek().kind == Tok::LParen) {
                lex_.take();
                std::vector<TermPtr> args;
                if (lex_.peek().kind != Tok::RParen) {
                    args.push_back(term());
                    while (lex_.peek().kind == Tok::Comma) {
                        lex_.take();
                        args.push_back(term());
                    }
                }
                expect(Tok::RParen, "')'");
                return mk_app(name.text, std::move(args));
            }
            return mk_var(name.text);
        }
        if (t.kind == Tok::LBracket) {
            lex_.take();
            std::vector<TermPtr> members;
            if (lex_.peek().kind != Tok::RBracket) {
                members.push_back(term());
                while (lex_.peek().kind == Tok::Comma) {
                    lex_.take();
                    members.push_back(term());
                }
            }
            expect(Tok::RBracket, "']'");
            return mk_set_literal(std::move(members));
        }
        if (t.kind == Tok::LBrace) {
            lex_.take();
            const Token var = expect(Tok::Ident, "comprehension variable");
            expect(Tok::Pipe, "'|'");
            auto body = implies();
            expect(Tok::RBrace, "'}'");
            return mk_comprehension(var.text, std::move(body));
        }
        lex_.fail("expected a term", t.pos);
    }

    Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).formula(); }

TermPtr parse_term(const std::string& text) { return Parser(text).whole_term(); }

Program parse_program(const std::string& text) {
    Program prog;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        Parser parser(line);
        if (parser.at_def()) {
            auto [name, def] = parser.definition();
            if (prog.defs.count(name)) throw SyntaxError("redefinition of '" + name + "'");
            prog.defs.emplace(std::move(name), std::move(def));
        } else {
            prog.formulas.push_back(parse_formula(line));
            const auto last = line.find_last_not_of(" \t\r\n");
            prog.formula_sources.push_back(line.substr(first, last - first + 1));
        }
    }
    return prog;
}

// --- printing ---

namespace {

int precedence(Formula::Kind kind) {
    switch (kind) {
        // a quantifier body extends as far right as it can, so the node binds
        // as loosely as an implication
        case Formula::Kind::Quant: return 1;
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        default: return 4;
    }
}

void print_formula(const Formula& f, std::ostream& os, int parent_prec);

void print_term(const Term& t, std::ostream& os) {
    switch (t.kind) {
        case Term::Kind::Var:
            os << t.name;
            return;
        case Term::Kind::App: {
            os << t.name << '(';
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) os << ", ";
                print_term(*t.args[i], os);
            }
            os << ')';
            return;
        }
        case Term::Kind::SetLiteral: {
            os << '[';
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) os << ", ";
                print_term(*t.args[i], os);
            }
            os << ']';
            return;
        }
        case Term::Kind::Comprehension:
            os << '{' << t.bound << " | ";
            print_formula(*t.body, os, 0);
            os << '}';
            return;
    }
}

const char* modifier_suffix(Modifier m) {
    switch (m) {
        case Modifier::Plain: return "";
        case Modifier::St: return "^st";
        case Modifier::StFin: return "^stfin";
    }
    return "";
}

void print_formula(const Formula& f, std::ostream& os, int parent_prec) {
    const int prec = precedence(f.kind);
    const bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (f.kind) {
        case Formula::Kind::Member:
            print_term(*f.lhs, os);
            os << " in ";
            print_term(*f.rhs, os);
            break;
        case Formula::Kind::Equal:
            print_term(*f.lhs, os);
            os << " = ";
            print_term(*f.rhs, os);
            break;
        case Formula::Kind::Rel: {
            os << f.name << '(';
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (i) os << ", ";
                print_term(*f.args[i], os);
            }
            os << ')';
            break;
        }
        case Formula::Kind::St:
            os << "st(";
            print_term(*f.lhs, os);
            os << ')';
            break;
        case Formula::Kind::Not:
            os << "not ";
            print_formula(*f.child, os, 4);
            break;
        case Formula::Kind::And:
            print_formula(*f.left, os, 3);
            os << " and ";
            print_formula(*f.right, os, 4);
            break;
        case Formula::Kind::Or:
            print_formula(*f.left, os, 2);
            os << " or ";
            print_formula(*f.right, os, 3);
            break;
        case Formula::Kind::Implies:
            print_formula(*f.left, os, 2);
            os << " -> ";
            print_formula(*f.right, os, 1);
            break;
        case Formula::Kind::Quant:
            os << (f.quant == Quantifier::Forall ? "forall" : "exists")
               << modifier_suffix(f.modifier) << ' ' << f.var << " . ";
            print_formula(*f.child, os, 1);
            break;
    }
    if (parens) os << ')';
}

}  // namespace

std::string format_term(const Term& t) {
    std::ostringstream os;
    print_term(t, os);
    return os.str();
}

std::string format_formula(const Formula& f) {
    std::ostringstream os;
    print_formula(f, os, 0);
    return os.str();
}

// --- structural queries ---

bool structurally_equal(const Term& a, const Term& b) {
    if (a.kind != b.kind || a.name != b.name || a.bound != b.bound ||
        a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    if (bool(a.body) != bool(b.body)) return false;
    return !a.body || structurally_equal(*a.body, *b.body);
}

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.name != b.name || a.var != b.var ||
        a.quant != b.quant || a.modifier != b.modifier ||
        a.args.size() != b.args.size())
        return false;
    auto both = [](const auto& x, const auto& y, auto&& cmp) {
        if (bool(x) != bool(y)) return false;
        return !x || cmp(*x, *y);
    };
    auto term_eq = [](const Term& x, const Term& y) { return structurally_equal(x, y); };
    auto formula_eq = [](const Formula& x, const Formula& y) {
        return structurally_equal(x, y);
    };
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return both(a.lhs, b.lhs, term_eq) && both(a.rhs, b.rhs, term_eq) &&
           both(a.child, b.child, formula_eq) && both(a.left, b.left, formula_eq) &&
           both(a.right, b.right, formula_eq);
}

namespace {

void free_vars_term(const Term& t, std::set<std::string>& bound,
                    std::set<std::string>& out);

void free_vars_formula(const Formula& f, std::set<std::string>& bound,
                       std::set<std::string>& out) {
    for (const auto& arg : f.args) free_vars_term(*arg, bound, out);
    if (f.lhs) free_vars_term(*f.lhs, bound, out);
    if (f.rhs) free_vars_term(*f.rhs, bound, out);
    if (f.left) free_vars_formula(*f.left, bound, out);
    if (f.right) free_vars_formula(*f.right, bound, out);
    if (f.kind == Formula::Kind::Quant) {
        const bool fresh = bound.insert(f.var).second;
        free_vars_formula(*f.child, bound, out);
        if (fresh) bound.erase(f.var);
    } else if (f.child) {
        free_vars_formula(*f.child, bound, out);
    }
}

void free_vars_term(const Term& t, std::set<std::string>& bound,
                    std::set<std::string>& out) {
    switch (t.kind) {
        case Term::Kind::Var:
            if (!bound.count(t.name)) out.insert(t.name);
            return;
        case Term::Kind::App:
        case Term::Kind::SetLiteral:
            for (const auto& arg : t.args) free_vars_term(*arg, bound, out);
            return;
        case Term::Kind::Comprehension: {
            const bool fresh = bound.insert(t.bound).second;
            free_vars_formula(*t.body, bound, out);
            if (fresh) bound.erase(t.bound);
            return;
        }
    }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_formula(f, bound, out);
    return out;
}

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> bound, out;
    free_vars_term(t, bound, out);
    return out;
}

namespace {

void collect_comp_term(const TermPtr& t, std::vector<TermPtr>& out);

void collect_comp_formula(const Formula& f, std::vector<TermPtr>& out) {
    for (const auto& arg : f.args) collect_comp_term(arg, out);
    if (f.lhs) collect_comp_term(f.lhs, out);
    if (f.rhs) collect_comp_term(f.rhs, out);
    if (f.child) collect_comp_formula(*f.child, out);
    if (f.left) collect_comp_formula(*f.left, out);
    if (f.right) collect_comp_formula(*f.right, out);
}

void collect_comp_term(const TermPtr& t, std::vector<TermPtr>& out) {
    if (t->kind == Term::Kind::Comprehension) {
        out.push_back(t);
        collect_comp_formula(*t->body, out);
        return;
    }
    for (const auto& arg : t->args) collect_comp_term(arg, out);
}

}  // namespace

std::vector<TermPtr> collect_comprehensions(const Formula& f) {
    std::vector<TermPtr> out;
    collect_comp_formula(f, out);
    return out;
}

TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement) {
    switch (t->kind) {
        case Term::Kind::Var:
            return t->name == var ? replacement : t;
        case Term::Kind::App:
        case Term::Kind::SetLiteral: {
            std::vector<TermPtr> args;
            args.reserve(t->args.size());
            bool changed = false;
            for (const auto& arg : t->args) {
                args.push_back(substitute(arg, var, replacement));
                changed = changed || args.back() != arg;
            }
            if (!changed) return t;
            return t->kind == Term::Kind::App ? mk_app(t->name, std::move(args))
                                              : mk_set_literal(std::move(args));
        }
        case Term::Kind::Comprehension:
            // the bound variable shadows; formula-level substitution is not
            // needed by the rewrite rules we implement
            return t;
    }
    return t;
}

}  // namespace matic
