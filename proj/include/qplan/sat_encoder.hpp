#pragma once

#include <cstdint>
#include <map>

#include "qplan/circuit.hpp"
#include "qplan/task.hpp"

namespace qplan {

struct SizeGuardError : std::runtime_error {
    std::uint64_t projected;
    explicit SizeGuardError(std::uint64_t projected)
        : std::runtime_error("grounded SAT encoding refused: projected " +
                             std::to_string(projected) +
                             " clauses exceed the configured cap"),
          projected(projected) {}
};

// Variable placement for the grounded encoding at horizon k: action and
// parameter bit vectors per step i < k, one variable per fluent per step
// 0..k. References are Circuit var gates.
struct SatLayout {
    int k = 0;
    int sigma = 0, gamma = 0, phat = 0;
    std::vector<BitVector> action;                 // [i]
    std::vector<std::vector<BitVector>> param;     // [i][j]
    std::vector<std::vector<GateRef>> fluent_var;  // [i][fluent index]
    std::vector<Fluent> fluents;
    std::map<Fluent, int> fluent_index;

    VariableLayout plan_layout() const;
};

SatLayout make_sat_layout(Circuit& c, const PlanningTask& task, int k);

GateRef encode_initial_sat(Circuit& c, const PlanningTask& task,
                           const SatLayout& layout);
GateRef encode_goal_sat(Circuit& c, const PlanningTask& task,
                        const SatLayout& layout, int k);
// Disjunction over grounded actions whose Phi-set contains the fluent.
GateRef encode_grounded_action_constraint(Circuit& c, const PlanningTask& task,
                                          const SatLayout& layout,
                                          const Fluent& fluent, AtomSet phi,
                                          int i);
// Five-part proposition constraint conjoined over all fluents.
GateRef encode_transition_sat(Circuit& c, const PlanningTask& task,
                              const SatLayout& layout, int i);
// Excludes binary codes beyond |A| and |O|; shared with the QBF encoder.
GateRef encode_rc(Circuit& c, const BitVector& action,
                  std::span<const BitVector> params, int num_actions,
                  int num_objects);
// Parameter (in)equality constraints from (= ...) preconditions, guarded
// by the action code; shared with the QBF encoder.
GateRef encode_equality_constraints(Circuit& c, const PlanningTask& task,
                                    const BitVector& action,
                                    std::span<const BitVector> params);

struct SatEncodeOptions {
    std::uint64_t clause_cap = 50'000'000;
};

std::uint64_t projected_sat_clauses(const PlanningTask& task, int k);

CnfEncoding encode_sat(const PlanningTask& task, int k,
                       const SatEncodeOptions& opts = {});

}  // namespace qplan
