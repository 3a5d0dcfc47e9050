#pragma once

#include <map>

#include "qplan/qbf.hpp"
#include "qplan/task.hpp"

namespace qplan {

// Variable placement for the ungrounded encoding: shared plan bits as in
// the SAT layout, universal object-combination bit vectors y_j, and one
// predicate variable per (timestep, non-static predicate) plus a single
// timeless variable per static predicate. Equality gets no variable.
struct QbfLayout {
    int k = 0;
    int sigma = 0, gamma = 0, phat = 0, vhat = 0;
    std::vector<BitVector> action;              // [i]
    std::vector<std::vector<BitVector>> param;  // [i][j]
    std::vector<BitVector> universal;           // [j], j < vhat
    std::vector<std::vector<GateRef>> q;        // [i][non-static column]
    std::vector<GateRef> q_static;              // [static column]
    std::map<PredicateId, int> nonstatic_column;
    std::map<PredicateId, int> static_column;

    GateRef q_var(PredicateId p, int i) const;
    bool timeless(PredicateId p) const { return static_column.count(p) > 0; }
};

struct QbfEncoding {
    Circuit circuit;
    GateRef root = 0;
    std::vector<GateRef> plan_block;       // outer existential
    std::vector<GateRef> universal_block;  // forall
    std::vector<GateRef> predicate_block;  // inner existential
    QbfLayout layout;

    // Non-auxiliary variable count: k(sigma + phat*gamma) + vhat*gamma
    // + (k+1)|P_ns| + |P_s|.
    int num_vars() const { return (int)(plan_block.size() + universal_block.size() +
                                        predicate_block.size()); }
    VariableLayout plan_layout() const;  // 1-based variable ids
    QbfProblem to_problem() const;
};

QbfLayout make_qbf_layout(Circuit& c, const PlanningTask& task, int k);

GateRef encode_initial_qbf(Circuit& c, const PlanningTask& task,
                           const QbfLayout& layout);
GateRef encode_goal_qbf(Circuit& c, const PlanningTask& task,
                        const QbfLayout& layout, int k);
GateRef encode_ungrounded_action_constraint(Circuit& c, const PlanningTask& task,
                                            const QbfLayout& layout,
                                            PredicateId p, AtomSet phi, int i);
GateRef encode_transition_qbf(Circuit& c, const PlanningTask& task,
                              const QbfLayout& layout, int i);

QbfEncoding encode_qbf(const PlanningTask& task, int k);

std::string emit_qcir(const QbfEncoding& enc);
std::string to_qdimacs(const QbfEncoding& enc);

// Tseitin of the matrix with the encoding's variable order; auxiliaries
// are placed after the inner existential block.
CnfEncoding qbf_matrix_cnf(const QbfEncoding& enc);

}  // namespace qplan
