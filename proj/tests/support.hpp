#pragma once

// Shared helpers for the test suites: fixture loading, task generators and
// small brute-force reference implementations used as oracles.

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qplan/pddl.hpp"
#include "qplan/qbf.hpp"
#include "qplan/task.hpp"

#ifndef QPLAN_TEST_DIR
#define QPLAN_TEST_DIR "."
#endif

namespace support {

inline std::string data_path(const std::string& name) {
    return std::string(QPLAN_TEST_DIR) + "/data/" + name;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(QPLAN_TEST_DIR) + "/fixtures/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline qplan::PlanningTask load_task(const std::string& domain_file,
                                     const std::string& problem_file) {
    qplan::DomainAst d = qplan::parse_domain(read_file(data_path(domain_file)));
    qplan::ProblemAst p = qplan::parse_problem(read_file(data_path(problem_file)));
    return qplan::compile_task(d, p);
}

inline qplan::PlanningTask load_blocksworld() {
    return load_task("blocksworld-domain.pddl", "blocksworld-problem.pddl");
}

// Blocks-world with n blocks stacked as one tower (b1 at the bottom),
// goal: reverse the top two blocks. Used for size-growth measurements.
inline qplan::PlanningTask make_blocksworld(int n) {
    std::ostringstream prob;
    prob << "(define (problem bw-" << n << ") (:domain blocksworld)\n(:objects";
    for (int i = 1; i <= n; i++) prob << " b" << i;
    prob << ")\n(:init (ontable b1) (clear b" << n << ")";
    for (int i = 1; i < n; i++) prob << " (on b" << i + 1 << " b" << i << ")";
    prob << ")\n(:goal (and (on b" << n - 1 << " b" << n << "))))\n";
    qplan::DomainAst d =
        qplan::parse_domain(read_file(data_path("blocksworld-domain.pddl")));
    qplan::ProblemAst p = qplan::parse_problem(prob.str());
    return qplan::compile_task(d, p);
}

// Random task within the micro envelope: <= 3 predicates of arity <= 2,
// <= 2 actions of arity <= 2, <= 3 objects. Built directly on the task
// model so degenerate corners (arity 0, empty effects, statics) appear.
inline qplan::PlanningTask random_micro_task(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    qplan::PlanningTask task;
    auto& sig = task.signature;
    int num_objects = pick(1, 3);
    for (int o = 0; o < num_objects; o++)
        sig.objects.push_back("o" + std::to_string(o + 1));
    int num_preds = pick(1, 3);
    for (int p = 0; p < num_preds; p++) {
        sig.predicates.push_back("p" + std::to_string(p + 1));
        sig.predicate_arity.push_back(pick(0, 2));
    }
    int num_actions = pick(1, 2);
    for (int a = 0; a < num_actions; a++) {
        sig.actions.push_back("act" + std::to_string(a + 1));
        sig.action_arity.push_back(pick(0, 2));
    }

    auto random_atom = [&](int arity_of_action) {
        qplan::Atom atom;
        atom.predicate = pick(0, num_preds - 1);
        for (int j = 0; j < sig.predicate_arity[atom.predicate]; j++) {
            if (arity_of_action > 0 && pick(0, 3) > 0)
                atom.args.push_back(qplan::Term::param(pick(0, arity_of_action - 1)));
            else
                atom.args.push_back(qplan::Term::constant(pick(0, num_objects - 1)));
        }
        return atom;
    };
    for (qplan::ActionId a = 0; a < num_actions; a++) {
        qplan::ActionSchema s;
        s.name = a;
        s.arity = sig.action_arity[a];
        for (int n = pick(0, 2); n > 0; n--) s.pre_pos.push_back(random_atom(s.arity));
        for (int n = pick(0, 1); n > 0; n--) s.pre_neg.push_back(random_atom(s.arity));
        for (int n = pick(1, 2); n > 0; n--) s.eff_pos.push_back(random_atom(s.arity));
        for (int n = pick(0, 2); n > 0; n--) {
            qplan::Atom atom = random_atom(s.arity);
            if (std::find(s.eff_pos.begin(), s.eff_pos.end(), atom) ==
                s.eff_pos.end())
                s.eff_neg.push_back(atom);
        }
        task.schemas.push_back(std::move(s));
    }

    std::vector<qplan::Fluent> fluents = qplan::enumerate_fluents(task);
    for (const qplan::Fluent& f : fluents)
        if (pick(0, 2) == 0) task.init.insert(f);
    for (const qplan::Fluent& f : fluents) {
        int roll = pick(0, 7);
        if (roll == 0) task.goal_pos.insert(f);
        else if (roll == 1) task.goal_neg.insert(f);
    }
    task.static_predicates = qplan::detect_static_predicates(task);
    task.check();
    return task;
}

// Reference QBF semantics: recurse over the prefix one variable at a time
// and evaluate the matrix at the leaves. Exponential; keep inputs small.
inline bool naive_qbf_eval(const qplan::QbfProblem& prob) {
    struct PrefixVar {
        int var;
        bool universal;
    };
    std::vector<PrefixVar> prefix;
    std::vector<char> listed(prob.circuit.num_vars(), 0);
    for (const qplan::QuantBlock& b : prob.blocks)
        for (qplan::GateRef g : b.vars) listed[prob.circuit.gate(g).var] = 1;
    for (int v = 0; v < prob.circuit.num_vars(); v++)
        if (!listed[v]) prefix.push_back({v, false});
    for (const qplan::QuantBlock& b : prob.blocks)
        for (qplan::GateRef g : b.vars)
            prefix.push_back({prob.circuit.gate(g).var, b.universal});

    std::vector<bool> values(prob.circuit.num_vars(), false);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == prefix.size()) return prob.circuit.eval(prob.root, values);
        for (bool bit : {false, true}) {
            values[prefix[i].var] = bit;
            bool sub = self(self, i + 1);
            if (prefix[i].universal && !sub) return false;
            if (!prefix[i].universal && sub) return true;
        }
        return prefix[i].universal;
    };
    return rec(rec, 0);
}

}  // namespace support
