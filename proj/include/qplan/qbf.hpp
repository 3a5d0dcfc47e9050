#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qplan/circuit.hpp"

namespace qplan {

// A prenex QBF over a circuit matrix: quantifier blocks of circuit input
// variables, outermost first. Inputs not listed in any block are treated
// as outermost existentials.
struct QuantBlock {
    bool universal = false;
    std::vector<GateRef> vars;  // Var gate references
};

struct QbfProblem {
    Circuit circuit;
    GateRef root = 0;
    std::vector<QuantBlock> blocks;
};

struct QbfParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// QCIR-G14 reader for prenex and/or circuits (negation via '-').
QbfProblem parse_qcir(const std::string& text);

// QDIMACS reader; the clause matrix becomes an and-of-ors circuit.
QbfProblem parse_qdimacs(const std::string& text);

}  // namespace qplan
