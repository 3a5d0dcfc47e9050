#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace qplan;

TEST_CASE("domain parsing covers listing-style input") {
    DomainAst d = parse_domain(
        support::read_file(support::data_path("blocksworld-domain.pddl")));
    CHECK(d.name == "blocksworld");
    REQUIRE(d.predicates.size() == 3);
    CHECK(d.predicates[0].name == "clear");
    CHECK(d.predicates[2].params.size() == 2);
    REQUIRE(d.actions.size() == 2);
    CHECK(d.actions[0].name == "unstack");
    CHECK(d.actions[0].params ==
          std::vector<TypedName>{{"?x1", {}}, {"?x2", {}}});
    CHECK(d.actions[0].precondition.size() == 2);
    CHECK(d.actions[0].effect.size() == 3);
    CHECK(d.actions[0].effect[0] ==
          AstLiteral{true, "on", {"?x1", "?x2"}});
}

TEST_CASE("problem parsing") {
    ProblemAst p = parse_problem(
        support::read_file(support::data_path("blocksworld-problem.pddl")));
    CHECK(p.name == "bw-rand-2");
    CHECK(p.domain == "blocksworld");
    CHECK(p.objects.size() == 2);
    CHECK(p.init.size() == 3);
    CHECK(p.goal == std::vector<AstLiteral>{{false, "on", {"b1", "b2"}}});
}

TEST_CASE("symbols are case-insensitive, comments are skipped") {
    DomainAst d = parse_domain(R"(
(define (domain Mixed) ; a comment
  (:predicates (P ?X))           ; another
  (:action Act :parameters (?X) :precondition (P ?X) :effect (not (P ?X))))
)");
    CHECK(d.name == "mixed");
    CHECK(d.predicates[0].name == "p");
    CHECK(d.actions[0].precondition[0].args == std::vector<std::string>{"?x"});
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_domain("(define (domain x)\n  (:predicates (p ?x)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_domain("define (domain x))"), ParseError);
}

TEST_CASE("unsupported features are named") {
    CHECK_THROWS_WITH_AS(
        parse_domain(R"((define (domain x) (:predicates (p))
          (:action a :parameters () :precondition (p)
           :effect (when (p) (not (p))))))"),
        doctest::Contains("conditional effects"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_domain(R"((define (domain x) (:predicates (p))
          (:action a :parameters (?x) :precondition (forall (?y) (p))
           :effect (p))))"),
        doctest::Contains("forall"), ParseError);
    CHECK_THROWS_AS(
        parse_domain("(define (domain x) (:functions (cost)))"), ParseError);
}

TEST_CASE("printer round-trips the asts") {
    DomainAst d = parse_domain(
        support::read_file(support::data_path("blocksworld-domain.pddl")));
    ProblemAst p = parse_problem(
        support::read_file(support::data_path("blocksworld-problem.pddl")));
    CHECK(parse_domain(print_domain(d)) == d);
    CHECK(parse_problem(print_problem(p)) == p);
}

TEST_CASE("compile_task normalizes listing blocksworld") {
    PlanningTask t = support::load_blocksworld();
    CHECK_NOTHROW(t.check());
    const ActionSchema& stack = t.schemas[1];
    CHECK(stack.pre_pos.size() == 3);
    CHECK(stack.eff_neg.size() == 2);
    CHECK(stack.eff_pos == std::vector<Atom>{{2, {Term::param(0), Term::param(1)}}});
}

TEST_CASE("typed parameters become static type preconditions") {
    DomainAst d = parse_domain(R"(
(define (domain typed)
  (:requirements :strips :typing)
  (:types vehicle place - object car - vehicle)
  (:predicates (at ?v - vehicle ?p - place))
  (:action drive
    :parameters (?c - car ?from ?to - place)
    :precondition (at ?c ?from)
    :effect (and (not (at ?c ?from)) (at ?c ?to)))))");
    ProblemAst p = parse_problem(R"(
(define (problem t1) (:domain typed)
  (:objects c1 - car p1 p2 - place)
  (:init (at c1 p1))
  (:goal (at c1 p2))))");
    PlanningTask t = compile_task(d, p);

    // Declared predicates first, then the type predicates in first-seen order.
    CHECK(t.signature.predicates ==
          std::vector<std::string>{"at", "vehicle", "place", "car"});
    for (PredicateId tp : {1, 2, 3}) CHECK(t.is_static(tp));

    // drive gains one type precondition per typed parameter.
    const ActionSchema& drive = t.schemas[0];
    REQUIRE(drive.pre_pos.size() == 4);
    CHECK(drive.pre_pos[1] == Atom{3, {Term::param(0)}});  // car(?c)
    CHECK(drive.pre_pos[2] == Atom{2, {Term::param(1)}});  // place(?from)

    // Type closure in the initial state: c1 is both a car and a vehicle.
    ObjectId c1 = *t.signature.object_index("c1");
    CHECK(t.init.count(Fluent{3, {c1}}) == 1);
    CHECK(t.init.count(Fluent{1, {c1}}) == 1);
    CHECK(t.init.count(Fluent{2, {c1}}) == 0);
}

TEST_CASE("equality literals become parameter constraints") {
    DomainAst d = parse_domain(R"(
(define (domain eq)
  (:requirements :strips :equality)
  (:predicates (p ?x))
  (:action swap
    :parameters (?a ?b)
    :precondition (and (p ?a) (not (= ?a ?b)))
    :effect (and (p ?b) (not (p ?a))))))");
    ProblemAst p = parse_problem(R"(
(define (problem e1) (:domain eq)
  (:objects o1 o2) (:init (p o1)) (:goal (p o2))))");
    PlanningTask t = compile_task(d, p);

    REQUIRE(t.equality_predicate.has_value());
    const ActionSchema& swap = t.schemas[0];
    REQUIRE(swap.equalities.size() == 1);
    CHECK(swap.equalities[0] ==
          EqualityConstraint{Term::param(0), Term::param(1), false});
    CHECK(swap.pre_pos.size() == 1);  // the (= ...) is not an atom

    // Equality predicates never occur in states.
    for (const Fluent& f : enumerate_fluents(t))
        CHECK_FALSE(t.is_equality(f.predicate));
}

TEST_CASE("compile errors") {
    DomainAst d = parse_domain(
        "(define (domain x) (:predicates (p ?a)) "
        "(:action a :parameters (?x) :precondition (p ?x) :effect (p ?x ?x)))");
    ProblemAst p = parse_problem(
        "(define (problem y) (:domain x) (:objects o) (:init) (:goal (p o)))");
    CHECK_THROWS_AS(compile_task(d, p), CompileError);  // arity mismatch

    DomainAst d2 = parse_domain(
        "(define (domain x) (:predicates (p ?a)) "
        "(:action a :parameters (?x ?y) :precondition (p ?x) "
        ":effect (= ?x ?y)))");
    CHECK_THROWS_AS(compile_task(d2, p), CompileError);  // = in effects

    ProblemAst p2 = parse_problem(
        "(define (problem y) (:domain x) (:objects o) (:init) (:goal (q o)))");
    DomainAst d3 = parse_domain("(define (domain x) (:predicates (p ?a)))");
    CHECK_THROWS_AS(compile_task(d3, p2), CompileError);  // unknown predicate
}
