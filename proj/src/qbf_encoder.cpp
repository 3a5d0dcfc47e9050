#include "qplan/qbf_encoder.hpp"

#include <cctype>
#include <sstream>

#include "qplan/sat_encoder.hpp"

namespace qplan {

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name)
        out += std::isalnum((unsigned char)ch) ? ch : '_';
    return out;
}

}  // namespace

GateRef QbfLayout::q_var(PredicateId p, int i) const {
    auto st = static_column.find(p);
    if (st != static_column.end()) return q_static[st->second];
    return q[i][nonstatic_column.at(p)];
}

QbfLayout make_qbf_layout(Circuit& c, const PlanningTask& task, int k) {
    QbfLayout l;
    l.k = k;
    l.sigma = task.signature.action_bit_width();
    l.gamma = task.signature.object_bit_width();
    l.phat = task.signature.max_action_arity();
    l.vhat = task.max_predicate_arity();
    for (int i = 0; i < k; i++) {
        BitVector a;
        for (int b = 0; b < l.sigma; b++)
            a.bits.push_back(c.add_var("a_" + std::to_string(i) + "_b" + std::to_string(b)));
        l.action.push_back(std::move(a));
        l.param.emplace_back();
        for (int j = 0; j < l.phat; j++) {
            BitVector x;
            for (int b = 0; b < l.gamma; b++)
                x.bits.push_back(c.add_var("x_" + std::to_string(i) + "_" +
                                           std::to_string(j + 1) + "_b" +
                                           std::to_string(b)));
            l.param.back().push_back(std::move(x));
        }
    }
    for (int j = 0; j < l.vhat; j++) {
        BitVector y;
        for (int b = 0; b < l.gamma; b++)
            y.bits.push_back(c.add_var("y_" + std::to_string(j + 1) + "_b" +
                                       std::to_string(b)));
        l.universal.push_back(std::move(y));
    }
    for (int i = 0; i <= k; i++) {
        l.q.emplace_back();
        for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
            if (task.is_equality(p) || task.is_static(p)) continue;
            if (i == 0) l.nonstatic_column[p] = (int)l.q.back().size();
            l.q.back().push_back(c.add_var("q_" + std::to_string(i) + "_" +
                                           sanitize(task.signature.predicates[p])));
        }
    }
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p) || !task.is_static(p)) continue;
        l.static_column[p] = (int)l.q_static.size();
        l.q_static.push_back(
            c.add_var("q_" + sanitize(task.signature.predicates[p])));
    }
    return l;
}

// OR over the fluents of p in the given set, each matching the universal
// object variables against the fluent's objects.
static GateRef match_fluents(Circuit& c, const QbfLayout& layout, PredicateId p,
                             const std::set<Fluent>& fluents) {
    std::vector<GateRef> disj;
    for (const Fluent& f : fluents) {
        if (f.predicate != p) continue;
        std::vector<GateRef> conj;
        for (int j = 0; j < (int)f.objects.size(); j++)
            conj.push_back(eq_const(c, layout.universal[j], f.objects[j]));
        disj.push_back(c.make_and(std::move(conj)));
    }
    return c.make_or(std::move(disj));
}

GateRef encode_initial_qbf(Circuit& c, const PlanningTask& task,
                           const QbfLayout& layout) {
    std::vector<GateRef> conj;
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p)) continue;
        conj.push_back(c.make_iff(match_fluents(c, layout, p, task.init),
                                  layout.q_var(p, 0)));
    }
    return c.make_and(std::move(conj));
}

GateRef encode_goal_qbf(Circuit& c, const PlanningTask& task,
                        const QbfLayout& layout, int k) {
    std::vector<GateRef> conj;
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p)) continue;
        GateRef pos = match_fluents(c, layout, p, task.goal_pos);
        GateRef neg = match_fluents(c, layout, p, task.goal_neg);
        if (pos != c.false_gate())
            conj.push_back(c.make_implies(pos, layout.q_var(p, k)));
        if (neg != c.false_gate())
            conj.push_back(c.make_implies(neg, c.make_not(layout.q_var(p, k))));
    }
    return c.make_and(std::move(conj));
}

GateRef encode_ungrounded_action_constraint(Circuit& c, const PlanningTask& task,
                                            const QbfLayout& layout,
                                            PredicateId p, AtomSet phi, int i) {
    std::vector<GateRef> disj;
    for (const ActionSchema& schema : task.schemas) {
        std::vector<GateRef> occurrences;
        for (const Atom& atom : schema.atoms(phi)) {
            if (atom.predicate != p) continue;
            std::vector<GateRef> conj;
            for (int j = 0; j < (int)atom.args.size(); j++) {
                const Term& t = atom.args[j];
                if (t.kind == Term::Param)
                    conj.push_back(eq_vars(c, layout.param[i][t.index],
                                           layout.universal[j]));
                else
                    conj.push_back(eq_const(c, layout.universal[j], t.index));
            }
            occurrences.push_back(c.make_and(std::move(conj)));
        }
        if (occurrences.empty()) continue;
        disj.push_back(c.make_and({eq_const(c, layout.action[i], schema.name),
                                   c.make_or(std::move(occurrences))}));
    }
    return c.make_or(std::move(disj));
}

GateRef encode_transition_qbf(Circuit& c, const PlanningTask& task,
                              const QbfLayout& layout, int i) {
    std::vector<GateRef> conj;
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p)) continue;
        GateRef pre_pos = encode_ungrounded_action_constraint(c, task, layout, p,
                                                              AtomSet::PrePos, i);
        GateRef pre_neg = encode_ungrounded_action_constraint(c, task, layout, p,
                                                              AtomSet::PreNeg, i);
        if (task.is_static(p)) {
            // One timeless variable; no effects, no frame.
            GateRef q = layout.q_var(p, 0);
            if (pre_pos != c.false_gate()) conj.push_back(c.make_implies(pre_pos, q));
            if (pre_neg != c.false_gate())
                conj.push_back(c.make_implies(pre_neg, c.make_not(q)));
            continue;
        }
        GateRef eff_pos = encode_ungrounded_action_constraint(c, task, layout, p,
                                                              AtomSet::EffPos, i);
        GateRef eff_neg = encode_ungrounded_action_constraint(c, task, layout, p,
                                                              AtomSet::EffNeg, i);
        GateRef now = layout.q_var(p, i);
        GateRef next = layout.q_var(p, i + 1);
        conj.push_back(c.make_implies(pre_pos, now));
        conj.push_back(c.make_implies(pre_neg, c.make_not(now)));
        conj.push_back(c.make_implies(eff_pos, next));
        conj.push_back(c.make_implies(eff_neg, c.make_not(next)));
        conj.push_back(c.make_or({c.make_iff(now, next), eff_pos, eff_neg}));
    }
    // Equality preconditions constrain action parameters directly,
    // independent of the universal variables.
    conj.push_back(encode_equality_constraints(c, task, layout.action[i],
                                               layout.param[i]));
    return c.make_and(std::move(conj));
}

VariableLayout QbfEncoding::plan_layout() const {
    VariableLayout out;
    out.k = layout.k;
    out.sigma = layout.sigma;
    out.gamma = layout.gamma;
    out.phat = layout.phat;
    for (int i = 0; i < layout.k; i++) {
        std::vector<int> abits;
        for (GateRef g : layout.action[i].bits)
            abits.push_back(circuit.gate(g).var + 1);
        out.action_bits.push_back(std::move(abits));
        out.param_bits.emplace_back();
        for (int j = 0; j < layout.phat; j++) {
            std::vector<int> xbits;
            for (GateRef g : layout.param[i][j].bits)
                xbits.push_back(circuit.gate(g).var + 1);
            out.param_bits.back().push_back(std::move(xbits));
        }
    }
    return out;
}

QbfProblem QbfEncoding::to_problem() const {
    QbfProblem prob;
    prob.circuit = circuit;
    prob.root = root;
    prob.blocks.push_back({false, plan_block});
    prob.blocks.push_back({true, universal_block});
    prob.blocks.push_back({false, predicate_block});
    return prob;
}

QbfEncoding encode_qbf(const PlanningTask& task, int k) {
    QbfEncoding enc;
    Circuit& c = enc.circuit;
    enc.layout = make_qbf_layout(c, task, k);
    const QbfLayout& l = enc.layout;

    for (int i = 0; i < k; i++) {
        for (GateRef g : l.action[i].bits) enc.plan_block.push_back(g);
        for (int j = 0; j < l.phat; j++)
            for (GateRef g : l.param[i][j].bits) enc.plan_block.push_back(g);
    }
    for (const BitVector& y : l.universal)
        for (GateRef g : y.bits) enc.universal_block.push_back(g);
    for (const auto& step : l.q)
        for (GateRef g : step) enc.predicate_block.push_back(g);
    for (GateRef g : l.q_static) enc.predicate_block.push_back(g);

    std::vector<GateRef> conj;
    conj.push_back(encode_initial_qbf(c, task, l));
    conj.push_back(encode_goal_qbf(c, task, l, k));
    for (int i = 0; i < k; i++) conj.push_back(encode_transition_qbf(c, task, l, i));
    for (int i = 0; i < k; i++)
        conj.push_back(encode_rc(c, l.action[i], l.param[i],
                                 task.signature.num_actions(),
                                 task.signature.num_objects()));
    enc.root = c.make_and(std::move(conj));
    return enc;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

// Renders a gate operand as a QCIR literal; gate_name holds the assigned
// g<N> names for and/or gates.
std::string qcir_literal(const Circuit& c, GateRef g,
                         const std::vector<std::string>& gate_name) {
    const Gate& gate = c.gate(g);
    if (gate.kind == GateKind::Not)
        return "-" + qcir_literal(c, gate.operands[0], gate_name);
    if (gate.kind == GateKind::Var) return c.var_name(gate.var);
    return gate_name[g];
}

void qcir_block(std::ostringstream& os, const Circuit& c, const char* quant,
                const std::vector<GateRef>& vars) {
    if (vars.empty()) return;
    os << quant << "(";
    for (size_t i = 0; i < vars.size(); i++) {
        if (i) os << ", ";
        os << c.var_name(c.gate(vars[i]).var);
    }
    os << ")\n";
}

}  // namespace

std::string emit_qcir(const QbfEncoding& enc) {
    const Circuit& c = enc.circuit;
    std::ostringstream os;
    os << "#QCIR-G14\n";
    qcir_block(os, c, "exists", enc.plan_block);
    qcir_block(os, c, "forall", enc.universal_block);
    qcir_block(os, c, "exists", enc.predicate_block);

    std::vector<char> reachable(enc.root + 1, 0);
    reachable[enc.root] = 1;
    for (GateRef g = enc.root + 1; g-- > 0;) {
        if (!reachable[g]) continue;
        for (GateRef o : c.gate(g).operands) reachable[o] = 1;
    }
    std::vector<std::string> gate_name(enc.root + 1);
    int next = 1;
    for (GateRef g = 0; g <= enc.root; g++) {
        const Gate& gate = c.gate(g);
        if (!reachable[g]) continue;
        if (gate.kind == GateKind::And || gate.kind == GateKind::Or ||
            gate.kind == GateKind::True || gate.kind == GateKind::False)
            gate_name[g] = "g" + std::to_string(next++);
    }
    os << "output(" << qcir_literal(c, enc.root, gate_name) << ")\n";
    for (GateRef g = 0; g <= enc.root; g++) {
        if (!reachable[g] || gate_name[g].empty()) continue;
        const Gate& gate = c.gate(g);
        // Constants appear only as the root of degenerate encodings.
        const char* op = (gate.kind == GateKind::Or || gate.kind == GateKind::False)
                             ? "or" : "and";
        os << gate_name[g] << " = " << op << "(";
        for (size_t i = 0; i < gate.operands.size(); i++) {
            if (i) os << ", ";
            os << qcir_literal(c, gate.operands[i], gate_name);
        }
        os << ")\n";
    }
    return os.str();
}

CnfEncoding qbf_matrix_cnf(const QbfEncoding& enc) {
    CnfEncoding cnf = tseitin(enc.circuit, enc.root);
    cnf.layout = enc.plan_layout();
    return cnf;
}

std::string to_qdimacs(const QbfEncoding& enc) {
    CnfEncoding cnf = qbf_matrix_cnf(enc);
    const Circuit& c = enc.circuit;
    std::ostringstream os;
    os << cnf.layout.comment_lines();
    os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";

    auto ids = [&](const std::vector<GateRef>& vars) {
        std::vector<int> out;
        for (GateRef g : vars) out.push_back(c.gate(g).var + 1);
        return out;
    };
    std::vector<int> outer = ids(enc.plan_block);
    std::vector<int> inner = ids(enc.predicate_block);
    inner.insert(inner.end(), cnf.aux_vars.begin(), cnf.aux_vars.end());
    if (enc.universal_block.empty()) {
        // No universals: a single existential block is still valid QDIMACS.
        outer.insert(outer.end(), inner.begin(), inner.end());
        inner.clear();
    }
    auto quant_line = [&](char q, const std::vector<int>& vars) {
        if (vars.empty()) return;
        os << q;
        for (int v : vars) os << " " << v;
        os << " 0\n";
    };
    quant_line('e', outer);
    quant_line('a', ids(enc.universal_block));
    quant_line('e', inner);
    for (const auto& clause : cnf.clauses) {
        for (int l : clause) os << l << " ";
        os << "0\n";
    }
    return os.str();
}

}  // namespace qplan
