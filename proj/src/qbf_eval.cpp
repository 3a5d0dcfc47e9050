#include "qplan/solve.hpp"

namespace qplan {

namespace {

// Rebuilds src's cone of root inside dst, mapping each src input through
// var_map (a dst gate: shared variable, fresh copy, or constant).
GateRef translate(const Circuit& src, GateRef root,
                  const std::vector<GateRef>& var_map, Circuit& dst) {
    std::vector<GateRef> out(root + 1, 0);
    for (GateRef g = 0; g <= root; g++) {
        const Gate& gate = src.gate(g);
        switch (gate.kind) {
            case GateKind::True: out[g] = dst.true_gate(); break;
            case GateKind::False: out[g] = dst.false_gate(); break;
            case GateKind::Var: out[g] = var_map[gate.var]; break;
            case GateKind::Not: out[g] = dst.make_not(out[gate.operands[0]]); break;
            case GateKind::And:
            case GateKind::Or: {
                std::vector<GateRef> ops;
                ops.reserve(gate.operands.size());
                for (GateRef o : gate.operands) ops.push_back(out[o]);
                out[g] = gate.kind == GateKind::And ? dst.make_and(std::move(ops))
                                                    : dst.make_or(std::move(ops));
                break;
            }
        }
    }
    return out[root];
}

struct Expander {
    const QbfProblem& src;
    const std::vector<QuantBlock>& blocks;
    Circuit dst;
    std::vector<GateRef> var_map;  // src var index -> dst gate
    int copies = 0;

    // Conjunction of all universal instantiations of blocks[bi..].
    GateRef expand(std::size_t bi) {
        if (bi == blocks.size()) {
            copies++;
            return translate(src.circuit, src.root, var_map, dst);
        }
        const QuantBlock& block = blocks[bi];
        if (!block.universal) {
            // Inner existentials get a fresh copy per enclosing branch.
            for (GateRef g : block.vars) {
                int v = src.circuit.gate(g).var;
                var_map[v] = dst.add_var(src.circuit.var_name(v) + "#" +
                                         std::to_string(copies));
            }
            return expand(bi + 1);
        }
        std::size_t n = block.vars.size();
        std::vector<GateRef> conj;
        for (std::uint64_t bits = 0; bits < (1ull << n); bits++) {
            for (std::size_t j = 0; j < n; j++) {
                int v = src.circuit.gate(block.vars[j]).var;
                var_map[v] = (bits >> j) & 1 ? dst.true_gate() : dst.false_gate();
            }
            conj.push_back(expand(bi + 1));
        }
        return dst.make_and(std::move(conj));
    }
};

}  // namespace

SolveResult evaluate_qbf(const QbfProblem& prob, const QbfEvalOptions& opts) {
    SolveResult res;

    // Unlisted inputs count as outermost existentials.
    std::vector<char> listed(prob.circuit.num_vars(), 0);
    for (const QuantBlock& b : prob.blocks)
        for (GateRef g : b.vars) listed[prob.circuit.gate(g).var] = 1;
    std::vector<QuantBlock> blocks;
    {
        QuantBlock free_block{false, {}};
        for (int v = 0; v < prob.circuit.num_vars(); v++)
            if (!listed[v]) free_block.vars.push_back(prob.circuit.var_gate(v));
        if (!free_block.vars.empty()) blocks.push_back(std::move(free_block));
    }
    blocks.insert(blocks.end(), prob.blocks.begin(), prob.blocks.end());

    std::size_t universal_bits = 0;
    for (const QuantBlock& b : blocks)
        if (b.universal) universal_bits += b.vars.size();
    if (universal_bits > (std::size_t)opts.max_universal_bits) {
        res.diagnostic = "universal expansion budget exceeded (" +
                         std::to_string(universal_bits) + " universal bits)";
        return res;
    }

    // Variables outside any universal scope are shared across all branches
    // and form the witness.
    std::size_t first_universal = 0;
    while (first_universal < blocks.size() && !blocks[first_universal].universal)
        first_universal++;

    Expander ex{prob, blocks, Circuit(), {}, 0};
    ex.var_map.assign(prob.circuit.num_vars(), 0);
    std::vector<std::pair<int, int>> outer;  // (src var id 1-based, dst var index)
    for (std::size_t bi = 0; bi < first_universal; bi++) {
        for (GateRef g : blocks[bi].vars) {
            int v = prob.circuit.gate(g).var;
            ex.var_map[v] = ex.dst.add_var(prob.circuit.var_name(v));
            outer.emplace_back(v + 1, ex.dst.gate(ex.var_map[v]).var);
        }
    }
    GateRef root = ex.expand(first_universal);

    CnfEncoding cnf = tseitin(ex.dst, root);
    SolveResult sat = solve_clauses(cnf.num_vars, cnf.clauses, opts.dpll);
    res.stats = sat.stats;
    if (sat.verdict == Verdict::Unknown) {
        res.diagnostic = sat.diagnostic;
        return res;
    }
    res.verdict = sat.verdict == Verdict::True ? Verdict::True : Verdict::False;
    if (res.verdict == Verdict::True)
        for (auto [src_id, dst_var] : outer)
            res.witness[src_id] = sat.witness.at(dst_var + 1);
    return res;
}

SolveResult evaluate_qbf(const QbfEncoding& enc, const QbfEvalOptions& opts) {
    return evaluate_qbf(enc.to_problem(), opts);
}

}  // namespace qplan
