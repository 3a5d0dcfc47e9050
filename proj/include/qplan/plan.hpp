#pragma once

#include <string>
#include <vector>

#include "qplan/task.hpp"

namespace qplan {

struct PlanStep {
    ActionId action;
    std::vector<ObjectId> args;
    bool operator==(const PlanStep&) const = default;
};

struct Plan {
    std::vector<PlanStep> steps;
    bool operator==(const Plan&) const = default;
    int length() const { return (int)steps.size(); }
};

// One action per line: "(name obj1 obj2 ...)", lowercase.
std::string print_plan(const PlanningTask& task, const Plan& plan);
Plan parse_plan(const PlanningTask& task, const std::string& text);

}  // namespace qplan
