#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qplan/circuit.hpp"
#include "qplan/plan.hpp"
#include "qplan/qbf.hpp"
#include "qplan/qbf_encoder.hpp"

namespace qplan {

enum class Verdict { True, False, Unknown };

struct SolveStats {
    long decisions = 0;
    long propagations = 0;
};

struct SolveResult {
    Verdict verdict = Verdict::Unknown;
    // Assignment of outermost-existential variables (1-based ids); present
    // only when verdict is True.
    std::map<int, bool> witness;
    SolveStats stats;
    std::string diagnostic;
};

struct DpllOptions {
    long max_decisions = 50'000'000;
};

// Complete DPLL with watched-literal unit propagation and a pure-literal
// preprocessing pass. On SAT the witness is a full model.
SolveResult solve_clauses(int num_vars, const std::vector<std::vector<int>>& clauses,
                          const DpllOptions& opts = {});
SolveResult solve_cnf(const CnfEncoding& cnf, const DpllOptions& opts = {});

struct QbfEvalOptions {
    // Expansion limit: total universal bits across all universal blocks.
    int max_universal_bits = 18;
    DpllOptions dpll;
};

// Expansion-based evaluation: universal blocks are instantiated for every
// assignment (inner existentials copied per branch), the resulting
// propositional formula goes to DPLL. Witness covers the variables
// outside any universal scope.
SolveResult evaluate_qbf(const QbfProblem& prob, const QbfEvalOptions& opts = {});
SolveResult evaluate_qbf(const QbfEncoding& enc, const QbfEvalOptions& opts = {});

struct ExternalOptions {
    double timeout_seconds = 0;  // 0: no timeout
};

// Runs an external QDIMACS solver (exit 10 = true, 20 = false, "V"/"v"
// certificate lines) on an encoding file.
SolveResult run_external_qbf(const std::string& qdimacs_path,
                             const std::vector<std::string>& command,
                             const ExternalOptions& opts = {});

// Substitutes {file} in a whitespace-separated command template; the path
// is appended when the template has no placeholder.
std::vector<std::string> solver_command_from_template(const std::string& tmpl,
                                                      const std::string& path);

// Encodes, writes a temp file, runs the external solver. When the solver
// reports true without a usable certificate, the plan bits are recovered
// by self-reduction (re-solving with prefixes of the witness fixed as
// unit clauses).
SolveResult solve_qbf_external(const QbfEncoding& enc,
                               const std::string& command_template,
                               const ExternalOptions& opts = {});

struct MalformedWitnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads the plan bits (LSB first) out of a solver witness. Decoded action
// or object indices beyond the signature indicate a solver/layout
// mismatch and raise MalformedWitnessError.
Plan decode_plan(const std::map<int, bool>& witness, const VariableLayout& layout,
                 const PlanningTask& task);

}  // namespace qplan
