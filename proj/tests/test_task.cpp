#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace qplan;

TEST_CASE("signature bit widths") {
    Signature sig;
    CHECK(Signature::bits_for(0) == 0);
    CHECK(Signature::bits_for(1) == 0);
    CHECK(Signature::bits_for(2) == 1);
    CHECK(Signature::bits_for(3) == 2);
    CHECK(Signature::bits_for(4) == 2);
    CHECK(Signature::bits_for(5) == 3);
    CHECK(Signature::bits_for(8) == 3);
    CHECK(Signature::bits_for(9) == 4);

    PlanningTask bw = support::load_blocksworld();
    CHECK(bw.signature.action_bit_width() == 1);   // two actions
    CHECK(bw.signature.object_bit_width() == 1);   // two objects
    CHECK(bw.signature.max_action_arity() == 2);
    CHECK(bw.max_predicate_arity() == 2);
}

TEST_CASE("blocksworld task shape") {
    PlanningTask bw = support::load_blocksworld();
    CHECK(bw.signature.predicates == std::vector<std::string>{"clear", "ontable", "on"});
    CHECK(bw.signature.actions == std::vector<std::string>{"unstack", "stack"});
    CHECK(bw.signature.objects == std::vector<std::string>{"b1", "b2"});
    CHECK(bw.static_predicates.empty());
    CHECK_FALSE(bw.equality_predicate.has_value());

    ObjectId b1 = 0, b2 = 1;
    PredicateId clear = 0, ontable = 1, on = 2;
    CHECK(bw.init == std::set<Fluent>{{ontable, {b1}}, {on, {b2, b1}}, {clear, {b2}}});
    CHECK(bw.goal_pos == std::set<Fluent>{{on, {b1, b2}}});
    CHECK(bw.goal_neg.empty());
}

TEST_CASE("fluent enumeration is lexicographic and skips equality") {
    PlanningTask bw = support::load_blocksworld();
    std::vector<Fluent> fl = enumerate_fluents(bw);
    CHECK(fl.size() == 8);  // 2 + 2 + 4
    CHECK(count_fluents(bw) == 8);
    CHECK(fl.front() == Fluent{0, {0}});       // clear(b1)
    CHECK(fl.back() == Fluent{2, {1, 1}});     // on(b2,b2)
    CHECK(std::is_sorted(fl.begin(), fl.end()));

    // Pretend "on" were equality: it must disappear from the enumeration.
    PlanningTask eq = bw;
    eq.equality_predicate = 2;
    CHECK(enumerate_fluents(eq).size() == 4);
    CHECK(count_fluents(eq) == 4);
    CHECK(eq.max_predicate_arity() == 1);
}

TEST_CASE("ground_schema substitutes parameters") {
    PlanningTask bw = support::load_blocksworld();
    const ActionSchema& unstack = bw.schemas[0];
    std::vector<ObjectId> args{1, 0};  // unstack(b2, b1)
    CHECK(ground_schema(AtomSet::PrePos, unstack, bw, args) ==
          std::set<Fluent>{{0, {1}}, {2, {1, 0}}});   // clear(b2), on(b2,b1)
    CHECK(ground_schema(AtomSet::EffPos, unstack, bw, args) ==
          std::set<Fluent>{{1, {1}}, {0, {0}}});      // ontable(b2), clear(b1)
    CHECK(ground_schema(AtomSet::EffNeg, unstack, bw, args) ==
          std::set<Fluent>{{2, {1, 0}}});             // on(b2,b1)

    std::vector<ObjectId> wrong{0};
    CHECK_THROWS_AS(ground_schema(AtomSet::PrePos, unstack, bw, wrong), TaskError);
}

TEST_CASE("static predicate detection") {
    PlanningTask bw = support::load_blocksworld();
    CHECK(detect_static_predicates(bw).empty());

    // Drop "clear" from every effect: it becomes static.
    PlanningTask t = bw;
    for (ActionSchema& s : t.schemas) {
        std::erase_if(s.eff_pos, [](const Atom& a) { return a.predicate == 0; });
        std::erase_if(s.eff_neg, [](const Atom& a) { return a.predicate == 0; });
    }
    CHECK(detect_static_predicates(t) == std::set<PredicateId>{0});
    t.static_predicates = {0};
    CHECK_NOTHROW(t.check());
}

TEST_CASE("check rejects malformed tasks") {
    PlanningTask bw = support::load_blocksworld();

    PlanningTask bad = bw;
    bad.init.insert(Fluent{2, {0}});  // on with arity 1
    CHECK_THROWS_AS(bad.check(), TaskError);

    bad = bw;
    bad.schemas[0].eff_neg.push_back(bad.schemas[0].eff_pos[0]);
    CHECK_THROWS_AS(bad.check(), TaskError);

    bad = bw;
    bad.schemas[1].pre_pos.push_back(Atom{0, {Term::param(5)}});
    CHECK_THROWS_AS(bad.check(), TaskError);

    bad = bw;
    bad.goal_pos.insert(Fluent{0, {0}});
    bad.goal_neg.insert(Fluent{0, {0}});
    CHECK_THROWS_AS(bad.check(), TaskError);

    bad = bw;
    bad.static_predicates = {1};
    CHECK_THROWS_AS(bad.check(), TaskError);
}
