#include "qplan/sat_encoder.hpp"

#include <string>

namespace qplan {

namespace {

std::string fluent_name(const PlanningTask& task, const Fluent& f) {
    std::string s = task.signature.predicates[f.predicate];
    for (ObjectId o : f.objects) s += "_" + task.signature.objects[o];
    return s;
}

// Odometer over object tuples of the given arity.
bool next_tuple(std::vector<ObjectId>& tuple, int num_objects) {
    int j = (int)tuple.size() - 1;
    while (j >= 0 && tuple[j] == num_objects - 1) tuple[j--] = 0;
    if (j < 0) return false;
    tuple[j]++;
    return true;
}

}  // namespace

VariableLayout SatLayout::plan_layout() const {
    VariableLayout out;
    out.k = k;
    out.sigma = sigma;
    out.gamma = gamma;
    out.phat = phat;
    for (int i = 0; i < k; i++) {
        std::vector<int> abits;
        for (GateRef g : action[i].bits) abits.push_back((int)g);  // fixed below
        out.action_bits.push_back(abits);
        out.param_bits.emplace_back();
        for (int j = 0; j < phat; j++) {
            std::vector<int> xbits;
            for (GateRef g : param[i][j].bits) xbits.push_back((int)g);
            out.param_bits.back().push_back(xbits);
        }
    }
    return out;
}

SatLayout make_sat_layout(Circuit& c, const PlanningTask& task, int k) {
    SatLayout l;
    l.k = k;
    l.sigma = task.signature.action_bit_width();
    l.gamma = task.signature.object_bit_width();
    l.phat = task.signature.max_action_arity();
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
    l.fluents = enumerate_fluents(task);
    for (int f = 0; f < (int)l.fluents.size(); f++)
        l.fluent_index[l.fluents[f]] = f;
    for (int i = 0; i <= k; i++) {
        l.fluent_var.emplace_back();
        for (const Fluent& f : l.fluents)
            l.fluent_var.back().push_back(
                c.add_var("b_" + std::to_string(i) + "_" + fluent_name(task, f)));
    }
    return l;
}

GateRef encode_initial_sat(Circuit& c, const PlanningTask& task,
                           const SatLayout& layout) {
    std::vector<GateRef> conj;
    for (int f = 0; f < (int)layout.fluents.size(); f++) {
        GateRef v = layout.fluent_var[0][f];
        conj.push_back(task.init.count(layout.fluents[f]) ? v : c.make_not(v));
    }
    return c.make_and(std::move(conj));
}

GateRef encode_goal_sat(Circuit& c, const PlanningTask& task,
                        const SatLayout& layout, int k) {
    std::vector<GateRef> conj;
    for (const Fluent& f : task.goal_pos)
        conj.push_back(layout.fluent_var[k][layout.fluent_index.at(f)]);
    for (const Fluent& f : task.goal_neg)
        conj.push_back(c.make_not(layout.fluent_var[k][layout.fluent_index.at(f)]));
    return c.make_and(std::move(conj));
}

GateRef encode_grounded_action_constraint(Circuit& c, const PlanningTask& task,
                                          const SatLayout& layout,
                                          const Fluent& fluent, AtomSet phi,
                                          int i) {
    std::vector<GateRef> disj;
    int num_objects = task.signature.num_objects();
    for (const ActionSchema& schema : task.schemas) {
        if (schema.atoms(phi).empty()) continue;
        std::vector<ObjectId> tuple(schema.arity, 0);
        if (schema.arity > 0 && num_objects == 0) continue;
        do {
            auto grounded = ground_schema(phi, schema, task, tuple);
            if (!grounded.count(fluent)) continue;
            std::vector<GateRef> conj{eq_const(c, layout.action[i], schema.name)};
            for (int j = 0; j < schema.arity; j++)
                conj.push_back(eq_const(c, layout.param[i][j], tuple[j]));
            disj.push_back(c.make_and(std::move(conj)));
        } while (next_tuple(tuple, num_objects));
    }
    return c.make_or(std::move(disj));
}

GateRef encode_transition_sat(Circuit& c, const PlanningTask& task,
                              const SatLayout& layout, int i) {
    std::vector<GateRef> conj;
    for (int f = 0; f < (int)layout.fluents.size(); f++) {
        const Fluent& fluent = layout.fluents[f];
        GateRef now = layout.fluent_var[i][f];
        GateRef next = layout.fluent_var[i + 1][f];
        GateRef pre_pos = encode_grounded_action_constraint(c, task, layout, fluent,
                                                            AtomSet::PrePos, i);
        GateRef pre_neg = encode_grounded_action_constraint(c, task, layout, fluent,
                                                            AtomSet::PreNeg, i);
        GateRef eff_pos = encode_grounded_action_constraint(c, task, layout, fluent,
                                                            AtomSet::EffPos, i);
        GateRef eff_neg = encode_grounded_action_constraint(c, task, layout, fluent,
                                                            AtomSet::EffNeg, i);
        conj.push_back(c.make_implies(pre_pos, now));
        conj.push_back(c.make_implies(pre_neg, c.make_not(now)));
        conj.push_back(c.make_implies(eff_pos, next));
        conj.push_back(c.make_implies(eff_neg, c.make_not(next)));
        conj.push_back(c.make_or({c.make_iff(now, next), eff_pos, eff_neg}));
    }
    return c.make_and(std::move(conj));
}

GateRef encode_rc(Circuit& c, const BitVector& action,
                  std::span<const BitVector> params, int num_actions,
                  int num_objects) {
    std::vector<GateRef> conj;
    if (num_actions > 0) conj.push_back(lt_const(c, action, num_actions));
    if (num_objects > 0)
        for (const BitVector& x : params) conj.push_back(lt_const(c, x, num_objects));
    return c.make_and(std::move(conj));
}

GateRef encode_equality_constraints(Circuit& c, const PlanningTask& task,
                                    const BitVector& action,
                                    std::span<const BitVector> params) {
    std::vector<GateRef> conj;
    for (const ActionSchema& schema : task.schemas) {
        if (schema.equalities.empty()) continue;
        GateRef guard = eq_const(c, action, schema.name);
        for (const EqualityConstraint& eq : schema.equalities) {
            GateRef body;
            if (eq.lhs.kind == Term::Param && eq.rhs.kind == Term::Param) {
                body = eq_vars(c, params[eq.lhs.index], params[eq.rhs.index]);
            } else if (eq.lhs.kind == Term::Param || eq.rhs.kind == Term::Param) {
                const Term& p = eq.lhs.kind == Term::Param ? eq.lhs : eq.rhs;
                const Term& k = eq.lhs.kind == Term::Param ? eq.rhs : eq.lhs;
                body = eq_const(c, params[p.index], k.index);
            } else {
                body = eq.lhs.index == eq.rhs.index ? c.true_gate() : c.false_gate();
            }
            if (!eq.positive) body = c.make_not(body);
            conj.push_back(c.make_implies(guard, body));
        }
    }
    return c.make_and(std::move(conj));
}

std::uint64_t projected_sat_clauses(const PlanningTask& task, int k) {
    const Signature& sig = task.signature;
    long double per_step = 0;
    int sigma = sig.action_bit_width(), gamma = sig.object_bit_width();
    for (const ActionSchema& schema : task.schemas) {
        long double tuples = 1;
        for (int j = 0; j < schema.arity; j++) tuples *= sig.num_objects();
        std::size_t atoms = schema.pre_pos.size() + schema.pre_neg.size() +
                            schema.eff_pos.size() + schema.eff_neg.size();
        per_step += tuples * (long double)atoms *
                    (sigma + (long double)schema.arity * gamma + 2);
    }
    long double fluents = (long double)count_fluents(task);
    long double total = (long double)k * per_step + (fluents * (k + 1)) * 3;
    if (total > 1e19) return UINT64_MAX;
    return (std::uint64_t)total;
}

CnfEncoding encode_sat(const PlanningTask& task, int k,
                       const SatEncodeOptions& opts) {
    std::uint64_t projected = projected_sat_clauses(task, k);
    if (projected > opts.clause_cap) throw SizeGuardError(projected);

    Circuit c;
    SatLayout layout = make_sat_layout(c, task, k);
    std::vector<GateRef> conj;
    conj.push_back(encode_initial_sat(c, task, layout));
    conj.push_back(encode_goal_sat(c, task, layout, k));
    for (int i = 0; i < k; i++) {
        conj.push_back(encode_transition_sat(c, task, layout, i));
        conj.push_back(encode_rc(c, layout.action[i], layout.param[i],
                                 task.signature.num_actions(),
                                 task.signature.num_objects()));
        conj.push_back(encode_equality_constraints(c, task, layout.action[i],
                                                   layout.param[i]));
    }
    GateRef root = c.make_and(std::move(conj));

    CnfEncoding cnf = tseitin(c, root);
    cnf.layout = layout.plan_layout();
    // Circuit var indices are 0-based; CNF ids are 1-based.
    for (auto& step : cnf.layout.action_bits)
        for (int& v : step) v = (int)c.gate((GateRef)v).var + 1;
    for (auto& step : cnf.layout.param_bits)
        for (auto& p : step)
            for (int& v : p) v = (int)c.gate((GateRef)v).var + 1;
    return cnf;
}

}  // namespace qplan
