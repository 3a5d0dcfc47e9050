#include "qplan/task.hpp"

#include <algorithm>
#include <cmath>

namespace qplan {

static std::optional<int> find_name(const std::vector<std::string>& names,
                                    const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return (int)(it - names.begin());
}

std::optional<PredicateId> Signature::predicate_index(const std::string& name) const {
    return find_name(predicates, name);
}
std::optional<ActionId> Signature::action_index(const std::string& name) const {
    return find_name(actions, name);
}
std::optional<ObjectId> Signature::object_index(const std::string& name) const {
    return find_name(objects, name);
}

int Signature::bits_for(int count) {
    int bits = 0;
    while ((1 << bits) < count) bits++;
    return bits;
}

int Signature::max_action_arity() const {
    int m = 0;
    for (int a : action_arity) m = std::max(m, a);
    return m;
}

const std::vector<Atom>& ActionSchema::atoms(AtomSet s) const {
    switch (s) {
        case AtomSet::PrePos: return pre_pos;
        case AtomSet::PreNeg: return pre_neg;
        case AtomSet::EffPos: return eff_pos;
        case AtomSet::EffNeg: return eff_neg;
    }
    throw TaskError("bad atom set selector");
}

int PlanningTask::max_predicate_arity() const {
    int m = 0;
    for (PredicateId p = 0; p < signature.num_predicates(); p++) {
        if (is_equality(p)) continue;
        m = std::max(m, signature.predicate_arity[p]);
    }
    return m;
}

static void check_fluent(const PlanningTask& task, const Fluent& f,
                         const char* where) {
    const auto& sig = task.signature;
    if (f.predicate < 0 || f.predicate >= sig.num_predicates())
        throw TaskError(std::string("bad predicate index in ") + where);
    if ((int)f.objects.size() != sig.predicate_arity[f.predicate])
        throw TaskError(std::string("fluent arity mismatch in ") + where);
    for (ObjectId o : f.objects)
        if (o < 0 || o >= sig.num_objects())
            throw TaskError(std::string("bad object index in ") + where);
}

static void check_atom(const PlanningTask& task, const Atom& atom,
                       const ActionSchema& schema) {
    const auto& sig = task.signature;
    if (atom.predicate < 0 || atom.predicate >= sig.num_predicates())
        throw TaskError("bad predicate index in schema body");
    if ((int)atom.args.size() != sig.predicate_arity[atom.predicate])
        throw TaskError("atom arity mismatch in schema " +
                        sig.actions[schema.name]);
    for (const Term& t : atom.args) {
        if (t.kind == Term::Param) {
            if (t.index < 0 || t.index >= schema.arity)
                throw TaskError("parameter index out of range in schema " +
                                sig.actions[schema.name]);
        } else if (t.index < 0 || t.index >= sig.num_objects()) {
            throw TaskError("constant index out of range in schema " +
                            sig.actions[schema.name]);
        }
    }
}

void PlanningTask::check() const {
    const auto& sig = signature;
    if ((int)sig.predicate_arity.size() != sig.num_predicates() ||
        (int)sig.action_arity.size() != sig.num_actions())
        throw TaskError("signature arity table size mismatch");
    if ((int)schemas.size() != sig.num_actions())
        throw TaskError("schema count differs from action count");
    for (ActionId a = 0; a < (int)schemas.size(); a++) {
        const ActionSchema& s = schemas[a];
        if (s.name != a) throw TaskError("schema order differs from declaration order");
        if (s.arity != sig.action_arity[a])
            throw TaskError("schema arity differs from signature");
        for (AtomSet sel : {AtomSet::PrePos, AtomSet::PreNeg, AtomSet::EffPos,
                            AtomSet::EffNeg})
            for (const Atom& atom : s.atoms(sel)) check_atom(*this, atom, s);
        for (const Atom& atom : s.eff_pos)
            if (std::find(s.eff_neg.begin(), s.eff_neg.end(), atom) != s.eff_neg.end())
                throw TaskError("atom occurs in both positive and negative effects of " +
                                sig.actions[a]);
        for (const EqualityConstraint& eq : s.equalities)
            for (const Term& t : {eq.lhs, eq.rhs})
                if (t.kind == Term::Param && (t.index < 0 || t.index >= s.arity))
                    throw TaskError("equality parameter out of range in " +
                                    sig.actions[a]);
    }
    for (const Fluent& f : init) check_fluent(*this, f, "init");
    for (const Fluent& f : goal_pos) check_fluent(*this, f, "goal");
    for (const Fluent& f : goal_neg) check_fluent(*this, f, "goal");
    for (const Fluent& f : goal_pos)
        if (goal_neg.count(f))
            throw TaskError("fluent required both positive and negative in goal");
    if (static_predicates != detect_static_predicates(*this))
        throw TaskError("stored static-predicate set disagrees with recomputation");
}

std::uint64_t count_fluents(const PlanningTask& task) {
    std::uint64_t total = 0;
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p)) continue;
        std::uint64_t n = 1;
        for (int j = 0; j < task.signature.predicate_arity[p]; j++)
            n *= (std::uint64_t)task.signature.num_objects();
        total += n;
    }
    return total;
}

std::vector<Fluent> enumerate_fluents(const PlanningTask& task) {
    std::vector<Fluent> out;
    int num_objects = task.signature.num_objects();
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++) {
        if (task.is_equality(p)) continue;
        int arity = task.signature.predicate_arity[p];
        std::vector<ObjectId> tuple(arity, 0);
        if (arity > 0 && num_objects == 0) continue;
        while (true) {
            out.push_back(Fluent{p, tuple});
            int j = arity - 1;
            while (j >= 0 && tuple[j] == num_objects - 1) tuple[j--] = 0;
            if (j < 0) break;
            tuple[j]++;
        }
    }
    return out;
}

std::set<Fluent> ground_schema(AtomSet phi, const ActionSchema& schema,
                               const PlanningTask& task,
                               std::span<const ObjectId> objs) {
    if ((int)objs.size() != schema.arity)
        throw TaskError("object tuple length differs from schema arity");
    std::set<Fluent> out;
    for (const Atom& atom : schema.atoms(phi)) {
        Fluent f;
        f.predicate = atom.predicate;
        f.objects.reserve(atom.args.size());
        for (const Term& t : atom.args)
            f.objects.push_back(t.kind == Term::Param ? objs[t.index] : t.index);
        out.insert(std::move(f));
    }
    return out;
}

std::set<PredicateId> detect_static_predicates(const PlanningTask& task) {
    std::vector<bool> in_effect(task.signature.num_predicates(), false);
    for (const ActionSchema& s : task.schemas) {
        for (const Atom& atom : s.eff_pos) in_effect[atom.predicate] = true;
        for (const Atom& atom : s.eff_neg) in_effect[atom.predicate] = true;
    }
    std::set<PredicateId> out;
    for (PredicateId p = 0; p < task.signature.num_predicates(); p++)
        if (!in_effect[p]) out.insert(p);
    return out;
}

}  // namespace qplan
