#include "qplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace qplan {

namespace {

// ---------------------------------------------------------------------------
// S-expression reader

struct SExpr {
    // Leaf when children is empty and symbol non-empty; a genuinely empty
    // list has is_list = true.
    bool is_list = false;
    std::string symbol;
    std::vector<SExpr> children;
    int line = 0, column = 0;
};

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line = 1, column = 1;

    void advance() {
        if (text[pos] == '\n') { line++; column = 1; }
        else column++;
        pos++;
    }
    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n') advance();
            } else if (std::isspace((unsigned char)c)) {
                advance();
            } else {
                break;
            }
        }
    }
    bool done() { skip_ws(); return pos >= text.size(); }

    SExpr read() {
        skip_ws();
        if (pos >= text.size())
            throw ParseError("unexpected end of input", line, column);
        SExpr e;
        e.line = line;
        e.column = column;
        if (text[pos] == '(') {
            advance();
            e.is_list = true;
            while (true) {
                skip_ws();
                if (pos >= text.size())
                    throw ParseError("missing ')'", e.line, e.column);
                if (text[pos] == ')') { advance(); break; }
                e.children.push_back(read());
            }
            return e;
        }
        if (text[pos] == ')')
            throw ParseError("unexpected ')'", line, column);
        while (pos < text.size() && !std::isspace((unsigned char)text[pos]) &&
               text[pos] != '(' && text[pos] != ')' && text[pos] != ';') {
            e.symbol += (char)std::tolower((unsigned char)text[pos]);
            advance();
        }
        return e;
    }
};

SExpr read_single(std::string_view text) {
    Lexer lex{text};
    SExpr e = lex.read();
    if (!lex.done())
        throw ParseError("trailing input after top-level form", lex.line, lex.column);
    return e;
}

const std::string& symbol_of(const SExpr& e, const char* what) {
    if (e.is_list)
        throw ParseError(std::string("expected ") + what + ", got a list",
                         e.line, e.column);
    return e.symbol;
}

[[noreturn]] void unsupported(const SExpr& e, const std::string& feature) {
    throw ParseError("unsupported feature: " + feature, e.line, e.column);
}

// Heads we recognize as PDDL constructs outside the supported subset.
void check_supported_head(const SExpr& e, const std::string& head) {
    if (head == "when") unsupported(e, "conditional effects (when)");
    if (head == "forall") unsupported(e, "universal quantification (forall)");
    if (head == "exists") unsupported(e, "existential quantification (exists)");
    if (head == "or") unsupported(e, "disjunction (or)");
    if (head == "imply") unsupported(e, "implication (imply)");
    if (head == "oneof") unsupported(e, "nondeterministic effects (oneof)");
    if (head == "increase" || head == "decrease" || head == "assign" ||
        head == "scale-up" || head == "scale-down")
        unsupported(e, "numeric fluents (" + head + ")");
}

// "a b - t c - u d" style list with optional type annotations.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items,
                                        size_t begin = 0) {
    std::vector<TypedName> out;
    std::vector<size_t> pending;
    for (size_t i = begin; i < items.size(); i++) {
        const std::string& s = symbol_of(items[i], "a name");
        if (s == "-") {
            if (i + 1 >= items.size())
                throw ParseError("dangling '-' in typed list", items[i].line,
                                 items[i].column);
            const std::string& type = symbol_of(items[++i], "a type name");
            for (size_t j : pending) out[j].type = type;
            pending.clear();
        } else {
            pending.push_back(out.size());
            out.push_back(TypedName{s, std::nullopt});
        }
    }
    return out;
}

AstLiteral parse_literal(const SExpr& e) {
    if (!e.is_list || e.children.empty())
        throw ParseError("expected a literal", e.line, e.column);
    const std::string& head = symbol_of(e.children[0], "a predicate name");
    check_supported_head(e, head);
    AstLiteral lit;
    const SExpr* atom = &e;
    if (head == "not") {
        if (e.children.size() != 2)
            throw ParseError("'not' takes exactly one argument", e.line, e.column);
        lit.negated = true;
        atom = &e.children[1];
        if (!atom->is_list || atom->children.empty())
            throw ParseError("expected an atom under 'not'", atom->line, atom->column);
        check_supported_head(*atom, symbol_of(atom->children[0], "a predicate name"));
    }
    lit.predicate = symbol_of(atom->children[0], "a predicate name");
    for (size_t i = 1; i < atom->children.size(); i++)
        lit.args.push_back(symbol_of(atom->children[i], "an argument"));
    return lit;
}

// A flat conjunction: either (and lit...) or a single literal.
std::vector<AstLiteral> parse_conjunction(const SExpr& e) {
    if (!e.is_list)
        throw ParseError("expected a condition", e.line, e.column);
    if (!e.children.empty() && !e.children[0].is_list &&
        e.children[0].symbol == "and") {
        std::vector<AstLiteral> out;
        for (size_t i = 1; i < e.children.size(); i++)
            out.push_back(parse_literal(e.children[i]));
        return out;
    }
    if (e.children.empty()) return {};  // "()" treated as an empty conjunction
    return {parse_literal(e)};
}

const SExpr& expect_list(const SExpr& e, const char* what) {
    if (!e.is_list)
        throw ParseError(std::string("expected ") + what, e.line, e.column);
    return e;
}

}  // namespace

DomainAst parse_domain(std::string_view text) {
    SExpr top = read_single(text);
    expect_list(top, "(define ...)");
    if (top.children.empty() || top.children[0].is_list ||
        top.children[0].symbol != "define")
        throw ParseError("expected (define (domain ...) ...)", top.line, top.column);
    if (top.children.size() < 2 || !top.children[1].is_list ||
        top.children[1].children.size() != 2 ||
        symbol_of(top.children[1].children[0], "'domain'") != "domain")
        throw ParseError("expected (domain <name>)", top.line, top.column);

    DomainAst d;
    d.name = symbol_of(top.children[1].children[1], "a domain name");
    for (size_t i = 2; i < top.children.size(); i++) {
        const SExpr& sec = expect_list(top.children[i], "a domain section");
        if (sec.children.empty())
            throw ParseError("empty domain section", sec.line, sec.column);
        const std::string& head = symbol_of(sec.children[0], "a section keyword");
        if (head == ":requirements") {
            for (size_t j = 1; j < sec.children.size(); j++) {
                const std::string& req = symbol_of(sec.children[j], "a requirement");
                if (req == ":conditional-effects")
                    unsupported(sec.children[j], "conditional effects (:conditional-effects)");
                if (req == ":adl") unsupported(sec.children[j], "ADL (:adl)");
                if (req == ":durative-actions")
                    unsupported(sec.children[j], "durative actions (:durative-actions)");
                d.requirements.push_back(req);
            }
        } else if (head == ":types") {
            auto types = parse_typed_list(sec.children, 1);
            d.types.insert(d.types.end(), types.begin(), types.end());
        } else if (head == ":constants") {
            auto cs = parse_typed_list(sec.children, 1);
            d.constants.insert(d.constants.end(), cs.begin(), cs.end());
        } else if (head == ":predicates") {
            for (size_t j = 1; j < sec.children.size(); j++) {
                const SExpr& p = expect_list(sec.children[j], "a predicate declaration");
                if (p.children.empty())
                    throw ParseError("empty predicate declaration", p.line, p.column);
                PredicateDecl decl;
                decl.name = symbol_of(p.children[0], "a predicate name");
                decl.params = parse_typed_list(p.children, 1);
                d.predicates.push_back(std::move(decl));
            }
        } else if (head == ":action") {
            if (sec.children.size() < 2)
                throw ParseError("action without a name", sec.line, sec.column);
            ActionDecl act;
            act.name = symbol_of(sec.children[1], "an action name");
            for (size_t j = 2; j + 1 < sec.children.size(); j += 2) {
                const std::string& key = symbol_of(sec.children[j], "an action keyword");
                const SExpr& val = sec.children[j + 1];
                if (key == ":parameters") {
                    act.params = parse_typed_list(expect_list(val, "a parameter list").children);
                } else if (key == ":precondition") {
                    act.precondition = parse_conjunction(val);
                } else if (key == ":effect") {
                    act.effect = parse_conjunction(val);
                } else {
                    unsupported(sec.children[j], "action field " + key);
                }
            }
            d.actions.push_back(std::move(act));
        } else if (head == ":functions") {
            unsupported(sec, "numeric functions (:functions)");
        } else if (head == ":derived") {
            unsupported(sec, "derived predicates (:derived)");
        } else {
            unsupported(sec, "domain section " + head);
        }
    }
    return d;
}

ProblemAst parse_problem(std::string_view text) {
    SExpr top = read_single(text);
    expect_list(top, "(define ...)");
    if (top.children.empty() || top.children[0].is_list ||
        top.children[0].symbol != "define")
        throw ParseError("expected (define (problem ...) ...)", top.line, top.column);
    if (top.children.size() < 2 || !top.children[1].is_list ||
        top.children[1].children.size() != 2 ||
        symbol_of(top.children[1].children[0], "'problem'") != "problem")
        throw ParseError("expected (problem <name>)", top.line, top.column);

    ProblemAst p;
    p.name = symbol_of(top.children[1].children[1], "a problem name");
    for (size_t i = 2; i < top.children.size(); i++) {
        const SExpr& sec = expect_list(top.children[i], "a problem section");
        if (sec.children.empty())
            throw ParseError("empty problem section", sec.line, sec.column);
        const std::string& head = symbol_of(sec.children[0], "a section keyword");
        if (head == ":domain") {
            if (sec.children.size() != 2)
                throw ParseError("expected (:domain <name>)", sec.line, sec.column);
            p.domain = symbol_of(sec.children[1], "a domain name");
        } else if (head == ":objects") {
            auto objs = parse_typed_list(sec.children, 1);
            p.objects.insert(p.objects.end(), objs.begin(), objs.end());
        } else if (head == ":init") {
            for (size_t j = 1; j < sec.children.size(); j++)
                p.init.push_back(parse_literal(sec.children[j]));
        } else if (head == ":goal") {
            if (sec.children.size() != 2)
                throw ParseError("expected (:goal <condition>)", sec.line, sec.column);
            p.goal = parse_conjunction(sec.children[1]);
        } else if (head == ":metric") {
            unsupported(sec, "optimization metric (:metric)");
        } else {
            unsupported(sec, "problem section " + head);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Pretty-printing (canonical form; reparses to an equal AST)

namespace {

void print_typed_list(std::ostream& os, const std::vector<TypedName>& names) {
    bool first = true;
    for (const TypedName& n : names) {
        if (!first) os << " ";
        first = false;
        os << n.name;
        if (n.type) os << " - " << *n.type;
    }
}

void print_literal(std::ostream& os, const AstLiteral& lit) {
    if (lit.negated) os << "(not ";
    os << "(" << lit.predicate;
    for (const std::string& a : lit.args) os << " " << a;
    os << ")";
    if (lit.negated) os << ")";
}

void print_conjunction(std::ostream& os, const std::vector<AstLiteral>& lits) {
    os << "(and";
    for (const AstLiteral& l : lits) {
        os << " ";
        print_literal(os, l);
    }
    os << ")";
}

}  // namespace

std::string print_domain(const DomainAst& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        os << "  (:requirements";
        for (const std::string& r : d.requirements) os << " " << r;
        os << ")\n";
    }
    if (!d.types.empty()) {
        os << "  (:types ";
        print_typed_list(os, d.types);
        os << ")\n";
    }
    if (!d.constants.empty()) {
        os << "  (:constants ";
        print_typed_list(os, d.constants);
        os << ")\n";
    }
    os << "  (:predicates";
    for (const PredicateDecl& p : d.predicates) {
        os << " (" << p.name;
        for (const TypedName& t : p.params) {
            os << " " << t.name;
            if (t.type) os << " - " << *t.type;
        }
        os << ")";
    }
    os << ")\n";
    for (const ActionDecl& a : d.actions) {
        os << "  (:action " << a.name << "\n   :parameters (";
        print_typed_list(os, a.params);
        os << ")\n   :precondition ";
        print_conjunction(os, a.precondition);
        os << "\n   :effect ";
        print_conjunction(os, a.effect);
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const ProblemAst& p) {
    std::ostringstream os;
    os << "(define (problem " << p.name << ")\n";
    os << "  (:domain " << p.domain << ")\n";
    if (!p.objects.empty()) {
        os << "  (:objects ";
        print_typed_list(os, p.objects);
        os << ")\n";
    }
    os << "  (:init";
    for (const AstLiteral& l : p.init) {
        os << " ";
        print_literal(os, l);
    }
    os << ")\n  (:goal ";
    print_conjunction(os, p.goal);
    os << "))\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Compilation to PlanningTask

namespace {

struct TypeTable {
    // type -> declared supertype (if any)
    std::map<std::string, std::optional<std::string>> super;
    std::vector<std::string> order;  // first-seen order

    void add(const std::string& t, std::optional<std::string> sup = std::nullopt) {
        if (t == "object") return;
        if (!super.count(t)) {
            super[t] = std::nullopt;
            order.push_back(t);
        }
        if (sup && *sup != "object") {
            add(*sup);
            super[t] = sup;
        }
    }
    // t plus all its (declared) supertypes, excluding "object".
    std::vector<std::string> closure(const std::string& t) const {
        std::vector<std::string> out;
        std::optional<std::string> cur = t;
        while (cur && *cur != "object") {
            if (std::find(out.begin(), out.end(), *cur) != out.end()) break;
            out.push_back(*cur);
            auto it = super.find(*cur);
            cur = it == super.end() ? std::nullopt : it->second;
        }
        return out;
    }
};

}  // namespace

PlanningTask compile_task(const DomainAst& domain, const ProblemAst& problem) {
    if (!problem.domain.empty() && problem.domain != domain.name)
        throw CompileError("problem references domain '" + problem.domain +
                           "' but domain is named '" + domain.name + "'");

    PlanningTask task;
    Signature& sig = task.signature;

    // Object universe: domain constants first, then problem objects.
    std::map<std::string, ObjectId> object_ids;
    std::vector<std::vector<std::string>> object_types;  // declared types per object
    auto add_object = [&](const TypedName& n) {
        auto it = object_ids.find(n.name);
        if (it == object_ids.end()) {
            object_ids[n.name] = sig.num_objects();
            sig.objects.push_back(n.name);
            object_types.emplace_back();
        }
        if (n.type)
            object_types[object_ids[n.name]].push_back(*n.type);
    };
    for (const TypedName& c : domain.constants) add_object(c);
    for (const TypedName& o : problem.objects) add_object(o);

    TypeTable types;
    for (const TypedName& t : domain.types) types.add(t.name, t.type);
    for (const auto& tl : object_types)
        for (const std::string& t : tl) types.add(t);
    for (const ActionDecl& a : domain.actions)
        for (const TypedName& p : a.params)
            if (p.type) types.add(*p.type);

    // Predicates: declared first, then one static predicate per type,
    // then '=' if equality is used anywhere.
    std::map<std::string, PredicateId> predicate_ids;
    auto add_predicate = [&](const std::string& name, int arity) {
        if (predicate_ids.count(name))
            throw CompileError("duplicate predicate declaration: " + name);
        predicate_ids[name] = sig.num_predicates();
        sig.predicates.push_back(name);
        sig.predicate_arity.push_back(arity);
    };
    for (const PredicateDecl& p : domain.predicates)
        add_predicate(p.name, (int)p.params.size());
    for (const std::string& t : types.order) {
        if (predicate_ids.count(t))
            throw CompileError("type name clashes with a predicate: " + t);
        add_predicate(t, 1);
    }
    bool uses_equality = false;
    for (const ActionDecl& a : domain.actions)
        for (const auto* lits : {&a.precondition, &a.effect})
            for (const AstLiteral& l : *lits)
                if (l.predicate == "=") uses_equality = true;
    if (uses_equality) {
        task.equality_predicate = sig.num_predicates();
        add_predicate("=", 2);
    }

    // Actions.
    for (const ActionDecl& decl : domain.actions) {
        if (sig.action_index(decl.name))
            throw CompileError("duplicate action declaration: " + decl.name);
        ActionSchema schema;
        schema.name = sig.num_actions();
        schema.arity = (int)decl.params.size();
        sig.actions.push_back(decl.name);
        sig.action_arity.push_back(schema.arity);

        std::map<std::string, int> param_ids;
        for (int j = 0; j < schema.arity; j++) {
            const std::string& pn = decl.params[j].name;
            if (pn.empty() || pn[0] != '?')
                throw CompileError("action parameter must start with '?': " + pn +
                                   " in " + decl.name);
            if (param_ids.count(pn))
                throw CompileError("duplicate parameter " + pn + " in " + decl.name);
            param_ids[pn] = j;
        }

        auto resolve_term = [&](const std::string& arg) -> Term {
            if (!arg.empty() && arg[0] == '?') {
                auto it = param_ids.find(arg);
                if (it == param_ids.end())
                    throw CompileError("undeclared parameter " + arg + " in " +
                                       decl.name);
                return Term::param(it->second);
            }
            auto it = object_ids.find(arg);
            if (it == object_ids.end())
                throw CompileError("undeclared constant " + arg + " in " + decl.name);
            return Term::constant(it->second);
        };

        auto resolve_atom = [&](const AstLiteral& lit) -> Atom {
            auto it = predicate_ids.find(lit.predicate);
            if (it == predicate_ids.end())
                throw CompileError("undeclared predicate " + lit.predicate + " in " +
                                   decl.name);
            Atom atom;
            atom.predicate = it->second;
            if ((int)lit.args.size() != sig.predicate_arity[atom.predicate])
                throw CompileError("arity mismatch for " + lit.predicate + " in " +
                                   decl.name);
            for (const std::string& a : lit.args)
                atom.args.push_back(resolve_term(a));
            return atom;
        };

        for (const AstLiteral& lit : decl.precondition) {
            if (lit.predicate == "=") {
                if (lit.args.size() != 2)
                    throw CompileError("'=' takes two arguments in " + decl.name);
                schema.equalities.push_back(EqualityConstraint{
                    resolve_term(lit.args[0]), resolve_term(lit.args[1]),
                    !lit.negated});
            } else if (lit.negated) {
                schema.pre_neg.push_back(resolve_atom(lit));
            } else {
                schema.pre_pos.push_back(resolve_atom(lit));
            }
        }
        for (const AstLiteral& lit : decl.effect) {
            if (lit.predicate == "=")
                throw CompileError("'=' cannot appear in effects (" + decl.name + ")");
            if (lit.negated) schema.eff_neg.push_back(resolve_atom(lit));
            else schema.eff_pos.push_back(resolve_atom(lit));
        }
        for (const Atom& atom : schema.eff_pos)
            if (std::find(schema.eff_neg.begin(), schema.eff_neg.end(), atom) !=
                schema.eff_neg.end())
                throw CompileError("atom is both a positive and a negative effect of " +
                                   decl.name);

        // Typed parameters become static membership preconditions.
        for (int j = 0; j < schema.arity; j++) {
            if (!decl.params[j].type || *decl.params[j].type == "object") continue;
            Atom atom;
            atom.predicate = predicate_ids.at(*decl.params[j].type);
            atom.args.push_back(Term::param(j));
            schema.pre_pos.push_back(std::move(atom));
        }
        task.schemas.push_back(std::move(schema));
    }

    // Init: ground positive literals; type memberships are added for an
    // object's declared types and all their supertypes.
    auto ground_literal = [&](const AstLiteral& lit, const char* where) -> Fluent {
        auto it = predicate_ids.find(lit.predicate);
        if (it == predicate_ids.end())
            throw CompileError("undeclared predicate " + lit.predicate + " in " + where);
        if (lit.predicate == "=")
            throw CompileError(std::string("'=' is not allowed in ") + where);
        Fluent f;
        f.predicate = it->second;
        if ((int)lit.args.size() != sig.predicate_arity[f.predicate])
            throw CompileError("arity mismatch for " + lit.predicate + " in " + where);
        for (const std::string& a : lit.args) {
            auto oit = object_ids.find(a);
            if (oit == object_ids.end())
                throw CompileError("undeclared object " + a + " in " + where);
            f.objects.push_back(oit->second);
        }
        return f;
    };
    for (const AstLiteral& lit : problem.init) {
        if (lit.negated) continue;  // closed world: redundant
        task.init.insert(ground_literal(lit, "init"));
    }
    for (ObjectId o = 0; o < sig.num_objects(); o++)
        for (const std::string& t : object_types[o])
            for (const std::string& tc : types.closure(t))
                task.init.insert(Fluent{predicate_ids.at(tc), {o}});

    for (const AstLiteral& lit : problem.goal) {
        Fluent f = ground_literal(lit, "goal");
        (lit.negated ? task.goal_neg : task.goal_pos).insert(std::move(f));
    }
    for (const Fluent& f : task.goal_pos)
        if (task.goal_neg.count(f))
            throw CompileError("goal requires a fluent both positively and negatively");

    task.static_predicates = detect_static_predicates(task);
    task.check();
    return task;
}

}  // namespace qplan
