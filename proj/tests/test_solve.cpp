#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qplan/qbf.hpp"
#include "qplan/qbf_encoder.hpp"
#include "qplan/solve.hpp"
#include "support.hpp"

using namespace qplan;

namespace {

// Truth-table SAT reference for small clause sets.
bool brute_force_sat(int num_vars, const std::vector<std::vector<int>>& clauses) {
    for (std::uint64_t m = 0; m < (1ull << num_vars); m++) {
        bool ok = true;
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int l : cl) {
                bool v = (m >> (std::abs(l) - 1)) & 1;
                if (v == (l > 0)) sat = true;
            }
            if (!sat) { ok = false; break; }
        }
        if (ok) return true;
    }
    return false;
}

bool model_satisfies(const std::map<int, bool>& model,
                     const std::vector<std::vector<int>>& clauses) {
    for (const auto& cl : clauses) {
        bool sat = false;
        for (int l : cl)
            if (model.at(std::abs(l)) == (l > 0)) sat = true;
        if (!sat) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("dpll handles the easy shapes") {
    CHECK(solve_clauses(0, {}).verdict == Verdict::True);
    CHECK(solve_clauses(1, {{}}).verdict == Verdict::False);
    CHECK(solve_clauses(1, {{1}, {-1}}).verdict == Verdict::False);
    CHECK(solve_clauses(2, {{1, -1}, {2}}).verdict == Verdict::True);  // tautology
    CHECK(solve_clauses(2, {{1, 1, 2}, {-1, -1}}).verdict == Verdict::True);

    SolveResult r = solve_clauses(3, {{1, 2}, {-1, 3}, {-2, -3}});
    REQUIRE(r.verdict == Verdict::True);
    CHECK(model_satisfies(r.witness, {{1, 2}, {-1, 3}, {-2, -3}}));
    CHECK(r.witness.size() == 3);  // full model
}

TEST_CASE("dpll agrees with the truth table on random 3-cnf") {
    std::mt19937 rng(11);
    for (int round = 0; round < 200; round++) {
        int n = 2 + (int)(rng() % 9);            // up to 10 variables
        int m = 1 + (int)(rng() % (3 * n));
        std::vector<std::vector<int>> clauses;
        for (int i = 0; i < m; i++) {
            std::vector<int> cl;
            int len = 1 + (int)(rng() % 3);
            for (int j = 0; j < len; j++) {
                int v = 1 + (int)(rng() % n);
                cl.push_back(rng() % 2 ? v : -v);
            }
            clauses.push_back(std::move(cl));
        }
        bool expect = brute_force_sat(n, clauses);
        SolveResult r = solve_clauses(n, clauses);
        REQUIRE(r.verdict == (expect ? Verdict::True : Verdict::False));
        if (expect) CHECK(model_satisfies(r.witness, clauses));
    }
}

TEST_CASE("dpll decision budget yields unknown") {
    // Pigeonhole PHP(6,5) is hard for plain DPLL; a tiny budget must trip.
    int holes = 5, pigeons = 6;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    std::vector<std::vector<int>> clauses;
    for (int p = 0; p < pigeons; p++) {
        std::vector<int> at_least;
        for (int h = 0; h < holes; h++) at_least.push_back(var(p, h));
        clauses.push_back(at_least);
    }
    for (int h = 0; h < holes; h++)
        for (int p = 0; p < pigeons; p++)
            for (int q = p + 1; q < pigeons; q++)
                clauses.push_back({-var(p, h), -var(q, h)});
    DpllOptions tiny;
    tiny.max_decisions = 5;
    SolveResult r = solve_clauses(pigeons * holes, clauses, tiny);
    CHECK(r.verdict == Verdict::Unknown);
    CHECK(r.diagnostic.find("budget") != std::string::npos);
}

TEST_CASE("qbf evaluation agrees with the recursive semantics") {
    std::mt19937 rng(23);
    for (int round = 0; round < 150; round++) {
        QbfProblem prob;
        int n = 2 + (int)(rng() % 6);  // up to 8 prefix variables
        std::vector<GateRef> vars;
        for (int i = 0; i < n; i++)
            vars.push_back(prob.circuit.add_var("v" + std::to_string(i)));
        // Random prefix of 1-3 variable blocks.
        std::size_t at = 0;
        while (at < vars.size()) {
            QuantBlock b;
            b.universal = rng() % 2;
            std::size_t len = 1 + rng() % 3;
            while (at < vars.size() && b.vars.size() < len) b.vars.push_back(vars[at++]);
            prob.blocks.push_back(std::move(b));
        }
        // Random matrix.
        std::vector<GateRef> pool = vars;
        for (int g = 0; g < 12; g++) {
            GateRef x = pool[rng() % pool.size()], y = pool[rng() % pool.size()];
            switch (rng() % 3) {
                case 0: pool.push_back(prob.circuit.make_and({x, y})); break;
                case 1: pool.push_back(prob.circuit.make_or({x, y})); break;
                default: pool.push_back(prob.circuit.make_not(x)); break;
            }
        }
        prob.root = pool.back();

        bool expect = support::naive_qbf_eval(prob);
        SolveResult r = evaluate_qbf(prob);
        REQUIRE(r.verdict == (expect ? Verdict::True : Verdict::False));

        // A true formula's witness must make the remainder true for every
        // universal assignment: re-check with the outer block substituted.
        if (expect && !prob.blocks.empty() && !prob.blocks[0].universal &&
            r.verdict == Verdict::True) {
            QbfProblem fixed = prob;
            std::vector<GateRef> units;
            for (GateRef g : fixed.blocks[0].vars) {
                int id = fixed.circuit.gate(g).var + 1;
                REQUIRE(r.witness.count(id));
                units.push_back(r.witness.at(id) ? g : fixed.circuit.make_not(g));
            }
            units.push_back(fixed.root);
            fixed.root = fixed.circuit.make_and(units);
            CHECK(support::naive_qbf_eval(fixed));
        }
    }
}

TEST_CASE("qbf evaluation budget") {
    QbfProblem prob;
    QuantBlock forall{true, {}};
    for (int i = 0; i < 20; i++)
        forall.vars.push_back(prob.circuit.add_var("u" + std::to_string(i)));
    prob.root = prob.circuit.make_or({forall.vars[0], prob.circuit.make_not(forall.vars[0])});
    prob.blocks.push_back(forall);
    QbfEvalOptions opts;
    opts.max_universal_bits = 10;
    CHECK(evaluate_qbf(prob, opts).verdict == Verdict::Unknown);
}

TEST_CASE("qdimacs parsing round-trips through the evaluator") {
    // forall x exists y. (x <-> y): true.
    std::string text =
        "c example\np cnf 2 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 0\n";
    QbfProblem prob = parse_qdimacs(text);
    CHECK(evaluate_qbf(prob).verdict == Verdict::True);

    // exists y forall x. (x <-> y): false.
    std::string text2 = "p cnf 2 2\ne 2 0\na 1 0\n1 -2 0\n-1 2 0\n";
    CHECK(evaluate_qbf(parse_qdimacs(text2)).verdict == Verdict::False);

    CHECK_THROWS_AS(parse_qdimacs("p cnf x\n"), QbfParseError);
}

TEST_CASE("qcir parsing round-trips emitted encodings") {
    PlanningTask bw = support::load_blocksworld();
    for (int k : {0, 1, 2}) {
        QbfEncoding enc = encode_qbf(bw, k);
        QbfProblem reparsed = parse_qcir(emit_qcir(enc));
        SolveResult direct = evaluate_qbf(enc);
        SolveResult round = evaluate_qbf(reparsed);
        CHECK(direct.verdict == round.verdict);
    }
    CHECK_THROWS_AS(parse_qcir("#QCIR-G14\noutput(g1)\n"), QbfParseError);
}

TEST_CASE("external solver protocol") {
    PlanningTask bw = support::load_blocksworld();
    QbfEncoding enc = encode_qbf(bw, 2);

    SolveResult t = run_external_qbf("/dev/null",
                                     {support::fixture_path("mock_true.sh")}, {});
    REQUIRE(t.verdict == Verdict::True);
    CHECK(t.witness == std::map<int, bool>{{1, false}, {2, true}, {3, false},
                                           {4, true}, {5, false}, {6, true}});

    CHECK(run_external_qbf("/dev/null", {support::fixture_path("mock_false.sh")}, {})
              .verdict == Verdict::False);

    SolveResult g = run_external_qbf(
        "/dev/null", {support::fixture_path("mock_garbage.sh")}, {});
    CHECK(g.verdict == Verdict::Unknown);
    CHECK_FALSE(g.diagnostic.empty());

    SolveResult missing = run_external_qbf("/dev/null", {"/no/such/solver"}, {});
    CHECK(missing.verdict == Verdict::Unknown);

    ExternalOptions timeout;
    timeout.timeout_seconds = 0.2;
    SolveResult slow =
        run_external_qbf("/dev/null", {"/bin/sh", "-c", "sleep 5"}, timeout);
    CHECK(slow.verdict == Verdict::Unknown);
    CHECK(slow.diagnostic.find("timed out") != std::string::npos);
}

TEST_CASE("command templates") {
    CHECK(solver_command_from_template("solver --in {file} -v", "a.qdimacs") ==
          std::vector<std::string>{"solver", "--in", "a.qdimacs", "-v"});
    CHECK(solver_command_from_template("solver", "a.qdimacs") ==
          std::vector<std::string>{"solver", "a.qdimacs"});
}

TEST_CASE("plan decoding") {
    PlanningTask bw = support::load_blocksworld();
    QbfEncoding enc = encode_qbf(bw, 2);
    VariableLayout layout = enc.plan_layout();

    std::map<int, bool> witness{{1, false}, {2, true}, {3, false},
                                {4, true},  {5, false}, {6, true}};
    Plan plan = decode_plan(witness, layout, bw);
    REQUIRE(plan.length() == 2);
    CHECK(plan.steps[0] == PlanStep{0, {1, 0}});  // unstack b2 b1
    CHECK(plan.steps[1] == PlanStep{1, {0, 1}});  // stack b1 b2

    std::map<int, bool> partial{{1, false}};
    CHECK_THROWS_AS(decode_plan(partial, layout, bw), MalformedWitnessError);
}
