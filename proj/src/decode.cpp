#include "qplan/solve.hpp"

namespace qplan {

namespace {

std::uint64_t read_bits(const std::map<int, bool>& witness,
                        const std::vector<int>& vars) {
    std::uint64_t value = 0;
    for (std::size_t b = 0; b < vars.size(); b++) {
        auto it = witness.find(vars[b]);
        if (it == witness.end())
            throw MalformedWitnessError("witness is missing variable " +
                                        std::to_string(vars[b]));
        if (it->second) value |= 1ull << b;
    }
    return value;
}

}  // namespace

Plan decode_plan(const std::map<int, bool>& witness, const VariableLayout& layout,
                 const PlanningTask& task) {
    Plan plan;
    for (int i = 0; i < layout.k; i++) {
        std::uint64_t a = read_bits(witness, layout.action_bits[i]);
        if (a >= (std::uint64_t)task.signature.num_actions())
            throw MalformedWitnessError("step " + std::to_string(i) +
                                        " decodes to action index " +
                                        std::to_string(a) + ", but only " +
                                        std::to_string(task.signature.num_actions()) +
                                        " actions exist");
        PlanStep step;
        step.action = (ActionId)a;
        int arity = task.signature.action_arity[step.action];
        for (int j = 0; j < arity; j++) {
            std::uint64_t o = read_bits(witness, layout.param_bits[i][j]);
            if (o >= (std::uint64_t)task.signature.num_objects())
                throw MalformedWitnessError(
                    "step " + std::to_string(i) + " parameter " +
                    std::to_string(j + 1) + " decodes to object index " +
                    std::to_string(o) + ", but only " +
                    std::to_string(task.signature.num_objects()) + " objects exist");
            step.args.push_back((ObjectId)o);
        }
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

}  // namespace qplan
