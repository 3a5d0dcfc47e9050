#include "qplan/plan_tools.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qplan {

std::string print_plan(const PlanningTask& task, const Plan& plan) {
    std::ostringstream os;
    for (const PlanStep& step : plan.steps) {
        os << "(" << task.signature.actions[step.action];
        for (ObjectId o : step.args) os << " " << task.signature.objects[o];
        os << ")\n";
    }
    return os.str();
}

Plan parse_plan(const PlanningTask& task, const std::string& text) {
    Plan plan;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        lineno++;
        std::string::size_type semi = line.find(';');
        if (semi != std::string::npos) line.erase(semi);
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> words;
        while (ls >> tok) words.push_back(tok);
        if (words.empty()) continue;
        if (words.front().front() == '(') words.front().erase(0, 1);
        if (!words.empty() && words.front().empty()) words.erase(words.begin());
        if (!words.empty() && words.back().back() == ')')
            words.back().pop_back();
        if (words.empty() || words.front().empty())
            throw TaskError("plan line " + std::to_string(lineno) +
                            ": expected (action obj...)");
        for (std::string& w : words)
            for (char& ch : w) ch = (char)std::tolower((unsigned char)ch);
        auto a = task.signature.action_index(words[0]);
        if (!a) throw TaskError("plan line " + std::to_string(lineno) +
                                ": unknown action " + words[0]);
        PlanStep step;
        step.action = *a;
        for (std::size_t i = 1; i < words.size(); i++) {
            auto o = task.signature.object_index(words[i]);
            if (!o) throw TaskError("plan line " + std::to_string(lineno) +
                                    ": unknown object " + words[i]);
            step.args.push_back(*o);
        }
        if ((int)step.args.size() != task.signature.action_arity[step.action])
            throw TaskError("plan line " + std::to_string(lineno) + ": " +
                            words[0] + " takes " +
                            std::to_string(task.signature.action_arity[step.action]) +
                            " arguments, got " + std::to_string(step.args.size()));
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

State initial_state(const PlanningTask& task) { return task.init; }

bool goal_satisfied(const PlanningTask& task, const State& s) {
    for (const Fluent& f : task.goal_pos)
        if (!s.count(f)) return false;
    for (const Fluent& f : task.goal_neg)
        if (s.count(f)) return false;
    return true;
}

namespace {

ObjectId resolve(const Term& t, const std::vector<ObjectId>& args) {
    return t.kind == Term::Param ? args[t.index] : t.index;
}

}  // namespace

std::optional<State> apply(const PlanningTask& task, const State& s,
                           const PlanStep& step) {
    if (step.action < 0 || step.action >= task.signature.num_actions())
        return std::nullopt;
    const ActionSchema& schema = task.schemas[step.action];
    if ((int)step.args.size() != schema.arity) return std::nullopt;
    for (ObjectId o : step.args)
        if (o < 0 || o >= task.signature.num_objects()) return std::nullopt;

    for (const EqualityConstraint& eq : schema.equalities) {
        bool same = resolve(eq.lhs, step.args) == resolve(eq.rhs, step.args);
        if (same != eq.positive) return std::nullopt;
    }
    std::set<Fluent> pre_pos =
        ground_schema(AtomSet::PrePos, schema, task, step.args);
    for (const Fluent& f : pre_pos) {
        if (task.is_equality(f.predicate)) continue;  // handled via equalities
        if (!s.count(f)) return std::nullopt;
    }
    std::set<Fluent> pre_neg =
        ground_schema(AtomSet::PreNeg, schema, task, step.args);
    for (const Fluent& f : pre_neg)
        if (s.count(f)) return std::nullopt;

    // Schematic add/delete sets are disjoint, but repeated arguments can
    // ground them onto the same fluent; such a step has contradictory
    // effects and is inapplicable (matching the transition constraints).
    std::set<Fluent> add = ground_schema(AtomSet::EffPos, schema, task, step.args);
    std::set<Fluent> del = ground_schema(AtomSet::EffNeg, schema, task, step.args);
    for (const Fluent& f : add)
        if (del.count(f)) return std::nullopt;

    State next = s;
    for (const Fluent& f : del) next.erase(f);
    for (const Fluent& f : add) next.insert(f);
    return next;
}

ValidationResult validate_plan(const PlanningTask& task, const Plan& plan) {
    ValidationResult res;
    res.trace.push_back(initial_state(task));
    for (std::size_t i = 0; i < plan.steps.size(); i++) {
        std::optional<State> next = apply(task, res.trace.back(), plan.steps[i]);
        if (!next) {
            res.failed_step = (int)i;
            res.reason = "step " + std::to_string(i + 1) + " (" +
                         task.signature.actions[plan.steps[i].action] +
                         ") is not applicable";
            res.trace.clear();
            return res;
        }
        res.trace.push_back(std::move(*next));
    }
    if (!goal_satisfied(task, res.trace.back())) {
        res.reason = "goal not satisfied in the final state";
        res.trace.clear();
        return res;
    }
    res.valid = true;
    return res;
}

namespace {

// Successor enumeration: every schema with every applicable argument tuple.
void for_each_successor(
    const PlanningTask& task, const State& s,
    const std::function<void(const PlanStep&, const State&)>& fn) {
    for (ActionId a = 0; a < task.signature.num_actions(); a++) {
        const ActionSchema& schema = task.schemas[a];
        std::vector<ObjectId> args(schema.arity, 0);
        while (true) {
            PlanStep step{a, args};
            if (std::optional<State> next = apply(task, s, step))
                fn(step, *next);
            int j = schema.arity - 1;
            while (j >= 0 && ++args[j] == task.signature.num_objects())
                args[j--] = 0;
            if (j < 0) break;
        }
    }
}

}  // namespace

OracleResult exact_k_oracle(const PlanningTask& task, int k,
                            const OracleOptions& opts) {
    OracleResult res;
    State init = initial_state(task);
    if (k == 0) {
        res.verdict = goal_satisfied(task, init) ? Verdict::True : Verdict::False;
        if (res.verdict == Verdict::True) res.plan = Plan{};
        return res;
    }

    // Layer d holds the states reachable in exactly d steps; parents allow
    // plan reconstruction.
    struct Node {
        State state;
        int parent = -1;  // index into previous layer
        PlanStep via;
    };
    std::vector<std::vector<Node>> layers(1);
    layers[0].push_back({init, -1, {}});
    std::uint64_t budget = opts.max_states;

    for (int d = 0; d < k; d++) {
        std::set<State> seen;
        std::vector<Node> next_layer;
        for (std::size_t pi = 0; pi < layers[d].size(); pi++) {
            res.expanded++;
            for_each_successor(
                task, layers[d][pi].state,
                [&](const PlanStep& step, const State& ns) {
                    if (!seen.insert(ns).second) return;
                    next_layer.push_back({ns, (int)pi, step});
                });
            if (res.expanded + next_layer.size() > budget) {
                res.verdict = Verdict::Unknown;
                return res;
            }
        }
        if (next_layer.empty()) {
            res.verdict = Verdict::False;
            return res;
        }
        layers.push_back(std::move(next_layer));
    }

    for (std::size_t ni = 0; ni < layers[k].size(); ni++) {
        if (!goal_satisfied(task, layers[k][ni].state)) continue;
        Plan plan;
        int d = k, idx = (int)ni;
        while (d > 0) {
            plan.steps.push_back(layers[d][idx].via);
            idx = layers[d][idx].parent;
            d--;
        }
        std::reverse(plan.steps.begin(), plan.steps.end());
        res.verdict = Verdict::True;
        res.plan = std::move(plan);
        return res;
    }
    res.verdict = Verdict::False;
    return res;
}

namespace {

// One horizon with the selected backend; witness decoded on True.
SolveResult solve_horizon(const PlanningTask& task, int k,
                          const FindPlanOptions& opts, VariableLayout& layout) {
    switch (opts.backend) {
        case Backend::SatInternal: {
            CnfEncoding cnf = encode_sat(task, k, opts.sat);
            layout = cnf.layout;
            return solve_cnf(cnf, opts.dpll);
        }
        case Backend::QbfInternal: {
            QbfEncoding enc = encode_qbf(task, k);
            layout = enc.plan_layout();
            return evaluate_qbf(enc, opts.qbf);
        }
        case Backend::QbfExternal: {
            QbfEncoding enc = encode_qbf(task, k);
            layout = enc.plan_layout();
            return solve_qbf_external(enc, opts.solver_command, opts.external);
        }
    }
    return {};
}

}  // namespace

FindPlanResult find_plan(const PlanningTask& task, const FindPlanOptions& opts) {
    FindPlanResult res;
    if (opts.k_step <= 0) throw std::invalid_argument("k_step must be positive");
    for (int k = opts.k_start; k <= opts.k_max; k += opts.k_step) {
        res.k = k;
        VariableLayout layout;
        SolveResult sr;
        try {
            sr = solve_horizon(task, k, opts, layout);
        } catch (const SizeGuardError& e) {
            res.verdict = Verdict::Unknown;
            res.diagnostic = e.what();
            return res;
        }
        if (sr.verdict == Verdict::True) {
            res.verdict = Verdict::True;
            res.plan = decode_plan(sr.witness, layout, task);
            return res;
        }
        if (sr.verdict == Verdict::Unknown) {
            res.verdict = Verdict::Unknown;
            res.diagnostic = sr.diagnostic.empty() ? "horizon " + std::to_string(k) +
                                                         " undecided"
                                                   : sr.diagnostic;
            return res;
        }
        res.refuted.push_back(k);
    }
    res.verdict = Verdict::False;
    return res;
}

}  // namespace qplan
