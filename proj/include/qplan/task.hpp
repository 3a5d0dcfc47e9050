#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qplan {

using PredicateId = int;
using ActionId = int;
using ObjectId = int;

// Thrown when a task violates a structural invariant (arity mismatch,
// contradictory effects, malformed fluent).
struct TaskError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Names and arities of predicates, actions and objects. Declaration order
// is stable and determines the integer indices used everywhere else,
// including the binary encodings.
struct Signature {
    std::vector<std::string> predicates;
    std::vector<std::string> actions;
    std::vector<std::string> objects;
    std::vector<int> predicate_arity;  // indexed by PredicateId
    std::vector<int> action_arity;     // indexed by ActionId

    int num_predicates() const { return (int)predicates.size(); }
    int num_actions() const { return (int)actions.size(); }
    int num_objects() const { return (int)objects.size(); }

    std::optional<PredicateId> predicate_index(const std::string& name) const;
    std::optional<ActionId> action_index(const std::string& name) const;
    std::optional<ObjectId> object_index(const std::string& name) const;

    // sigma: bits needed to address an action name (0 when there is at most one).
    int action_bit_width() const { return bits_for(num_actions()); }
    // gamma: bits needed to address an object.
    int object_bit_width() const { return bits_for(num_objects()); }
    // p-hat: maximum action arity.
    int max_action_arity() const;

    static int bits_for(int count);
};

// An argument of a schematic atom: either the j-th action parameter
// (0-based internally) or a concrete object.
struct Term {
    enum Kind { Param, Const };
    Kind kind;
    int index;

    static Term param(int j) { return {Param, j}; }
    static Term constant(ObjectId o) { return {Const, o}; }
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

// A predicate applied to (possibly schematic) arguments.
struct Atom {
    PredicateId predicate;
    std::vector<Term> args;

    bool operator==(const Atom&) const = default;
    auto operator<=>(const Atom&) const = default;
};

// A grounded atom: predicate applied to concrete objects.
struct Fluent {
    PredicateId predicate;
    std::vector<ObjectId> objects;

    bool operator==(const Fluent&) const = default;
    auto operator<=>(const Fluent&) const = default;
};

// (In)equality constraint between two action parameters or a parameter and
// a constant, coming from (= ...) literals in preconditions. These never
// become fluents; both encoders translate them to bit-vector comparisons.
struct EqualityConstraint {
    Term lhs;
    Term rhs;
    bool positive;  // false for (not (= ...))

    bool operator==(const EqualityConstraint&) const = default;
};

// Selects one of the four atom sets of a schema.
enum class AtomSet { PrePos, PreNeg, EffPos, EffNeg };

struct ActionSchema {
    ActionId name;
    int arity;
    std::vector<Atom> pre_pos, pre_neg, eff_pos, eff_neg;
    std::vector<EqualityConstraint> equalities;

    const std::vector<Atom>& atoms(AtomSet s) const;
};

struct PlanningTask {
    Signature signature;
    std::vector<ActionSchema> schemas;  // indexed by ActionId
    std::set<Fluent> init;
    std::set<Fluent> goal_pos, goal_neg;
    std::set<PredicateId> static_predicates;
    std::optional<PredicateId> equality_predicate;

    bool is_static(PredicateId p) const { return static_predicates.count(p) > 0; }
    bool is_equality(PredicateId p) const {
        return equality_predicate && *equality_predicate == p;
    }
    // v-hat: maximum predicate arity, excluding the equality predicate
    // (equality never touches the universal object variables).
    int max_predicate_arity() const;
    // Checks all structural invariants; throws TaskError on violation.
    void check() const;
};

// All fluents p(o...) in lexicographic (predicate, objects) order.
// The equality predicate, if any, is excluded: its truth is determined by
// its arguments and it never appears in a state.
std::vector<Fluent> enumerate_fluents(const PlanningTask& task);

// Total count of the above without materializing the list.
std::uint64_t count_fluents(const PlanningTask& task);

// ground(Phi, op, objs): substitute the object tuple for the schema's
// parameters in the selected atom set. Const args pass through unchanged.
std::set<Fluent> ground_schema(AtomSet phi, const ActionSchema& schema,
                               const PlanningTask& task,
                               std::span<const ObjectId> objs);

// Predicates absent from every schema's effects.
std::set<PredicateId> detect_static_predicates(const PlanningTask& task);

}  // namespace qplan
