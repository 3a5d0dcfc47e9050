#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qplan/plan.hpp"
#include "qplan/sat_encoder.hpp"
#include "qplan/solve.hpp"
#include "qplan/task.hpp"

namespace qplan {

using State = std::set<Fluent>;

State initial_state(const PlanningTask& task);
bool goal_satisfied(const PlanningTask& task, const State& s);

// Applies one step; nullopt when the action is inapplicable (failed
// precondition or equality constraint, arity/index out of range).
// Effects are delete-before-add.
std::optional<State> apply(const PlanningTask& task, const State& s,
                           const PlanStep& step);

struct ValidationResult {
    bool valid = false;
    int failed_step = -1;      // 0-based; -1 when valid or goal failure
    std::string reason;
    std::vector<State> trace;  // states s_0..s_n for a valid plan
};

// Replays the plan from the initial state and checks the goal at the end.
ValidationResult validate_plan(const PlanningTask& task, const Plan& plan);

struct OracleOptions {
    std::uint64_t max_states = 10'000'000;  // visited (state, parity) budget
};

struct OracleResult {
    Verdict verdict = Verdict::Unknown;  // True: some plan of length exactly k
    std::optional<Plan> plan;
    std::uint64_t expanded = 0;
};

// Layered breadth-first search for a plan of length exactly k (states may
// repeat, so this is length-parity reachability, not shortest path).
OracleResult exact_k_oracle(const PlanningTask& task, int k,
                            const OracleOptions& opts = {});

enum class Backend { SatInternal, QbfInternal, QbfExternal };

struct FindPlanOptions {
    Backend backend = Backend::SatInternal;
    int k_start = 0;
    int k_step = 1;
    int k_max = 20;
    std::string solver_command;  // QbfExternal template, {file} placeholder
    SatEncodeOptions sat;
    DpllOptions dpll;
    QbfEvalOptions qbf;
    ExternalOptions external;
};

struct FindPlanResult {
    Verdict verdict = Verdict::Unknown;  // True: plan found at some horizon
    std::optional<Plan> plan;
    int k = -1;                       // horizon of the answer (plan or last tried)
    std::vector<int> refuted;         // horizons proven to have no plan
    std::string diagnostic;
};

// Iterative deepening over horizons k_start, k_start+k_step, ... <= k_max.
// Verdict False means every tried horizon was refuted; Unknown means some
// horizon could not be decided.
FindPlanResult find_plan(const PlanningTask& task, const FindPlanOptions& opts);

}  // namespace qplan
