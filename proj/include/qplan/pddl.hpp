#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qplan/task.hpp"

namespace qplan {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(std::string msg, int line, int column)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line(line), column(column) {}
};

struct CompileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A name with an optional type annotation (from "?x - t" or "obj - t").
struct TypedName {
    std::string name;
    std::optional<std::string> type;
    bool operator==(const TypedName&) const = default;
};

// A possibly negated predicate application with symbolic arguments
// (variables keep their leading '?').
struct AstLiteral {
    bool negated = false;
    std::string predicate;
    std::vector<std::string> args;
    bool operator==(const AstLiteral&) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const PredicateDecl&) const = default;
};

struct ActionDecl {
    std::string name;
    std::vector<TypedName> params;
    std::vector<AstLiteral> precondition;  // flat conjunction
    std::vector<AstLiteral> effect;        // flat conjunction
    bool operator==(const ActionDecl&) const = default;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypedName> types;  // type name with optional supertype
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionDecl> actions;
    bool operator==(const DomainAst&) const = default;
};

struct ProblemAst {
    std::string name;
    std::string domain;
    std::vector<TypedName> objects;
    std::vector<AstLiteral> init;
    std::vector<AstLiteral> goal;  // flat conjunction, literals may be negated
    bool operator==(const ProblemAst&) const = default;
};

DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text);

// Pretty-printers; parse(print(ast)) == ast.
std::string print_domain(const DomainAst& d);
std::string print_problem(const ProblemAst& p);

// Normalizes a domain/problem pair into a PlanningTask: positional
// parameter renaming, types as static unary predicates, constants merged
// into the object universe, (= ...) literals routed to parameter
// equality constraints.
PlanningTask compile_task(const DomainAst& domain, const ProblemAst& problem);

}  // namespace qplan
