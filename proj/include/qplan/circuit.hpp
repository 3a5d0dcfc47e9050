#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qplan {

using GateRef = std::uint32_t;

enum class GateKind : std::uint8_t { True, False, Var, And, Or, Not };

struct Gate {
    GateKind kind;
    std::vector<GateRef> operands;  // references to earlier gates only
    int var = -1;                   // input index, for Var gates
};

// DAG of and/or/not gates over named boolean variables. Gates are created
// through the make_* functions, which constant-fold and deduplicate
// structurally identical nodes; references are stable and topologically
// ordered by construction.
class Circuit {
public:
    Circuit();

    GateRef true_gate() const { return 0; }
    GateRef false_gate() const { return 1; }

    GateRef add_var(std::string name);
    GateRef make_not(GateRef a);
    GateRef make_and(std::vector<GateRef> ops);
    GateRef make_or(std::vector<GateRef> ops);
    GateRef make_implies(GateRef a, GateRef b) { return make_or({make_not(a), b}); }
    // 1-bit XNOR built from and/or/not.
    GateRef make_iff(GateRef a, GateRef b);

    int num_vars() const { return (int)var_gates_.size(); }
    std::size_t num_gates() const { return gates_.size(); }
    const Gate& gate(GateRef g) const { return gates_[g]; }
    GateRef var_gate(int v) const { return var_gates_[v]; }
    const std::string& var_name(int v) const { return var_names_[v]; }

    bool eval(GateRef root, const std::vector<bool>& var_values) const;

private:
    GateRef intern(Gate g);

    std::vector<Gate> gates_;
    std::vector<GateRef> var_gates_;
    std::vector<std::string> var_names_;
    std::map<std::pair<GateKind, std::vector<GateRef>>, GateRef> cache_;
};

// Ordered variable references forming a binary number, LSB first. Width 0
// is allowed when the encoded index set is a singleton.
struct BitVector {
    std::vector<GateRef> bits;

    int width() const { return (int)bits.size(); }
};

// Gate true iff the bit vector spells idx.
GateRef eq_const(Circuit& c, const BitVector& v, std::uint64_t idx);
// Gate true iff both vectors agree bit-wise; widths must match.
GateRef eq_vars(Circuit& c, const BitVector& u, const BitVector& v);
// Gate true iff the unsigned value of v is below n (n >= 1).
GateRef lt_const(Circuit& c, const BitVector& v, std::uint64_t n);

// Maps plan variables (action bits and parameter bits per timestep) to
// 1-based CNF/QBF variable ids, LSB first. Carrier for witness decoding.
struct VariableLayout {
    int k = 0;
    int sigma = 0, gamma = 0, phat = 0;
    std::vector<std::vector<int>> action_bits;               // [i] -> var ids
    std::vector<std::vector<std::vector<int>>> param_bits;   // [i][j] -> var ids

    // "c action <i> bits <v...>" / "c param <i> <j> bits <v...>" lines.
    std::string comment_lines() const;
};

struct CnfEncoding {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    VariableLayout layout;
    int num_original_vars = 0;      // circuit inputs; auxiliaries follow
    std::vector<int> aux_vars;      // Tseitin variables, innermost block
};

// Tseitin transformation: variable ids 1..num_vars() follow the circuit's
// input order; one auxiliary per reachable and/or gate, both polarities,
// root asserted as a unit.
CnfEncoding tseitin(const Circuit& c, GateRef root);

// "p cnf" header plus clauses, preceded by layout comment lines.
std::string emit_dimacs(const CnfEncoding& cnf);

}  // namespace qplan
