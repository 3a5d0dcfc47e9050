#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qplan/pddl.hpp"
#include "qplan/plan_tools.hpp"
#include "qplan/qbf_encoder.hpp"
#include "qplan/sat_encoder.hpp"
#include "qplan/solve.hpp"

namespace py = pybind11;
using namespace qplan;

namespace {

PlanningTask load_task(const std::string& domain_text,
                       const std::string& problem_text) {
    return compile_task(parse_domain(domain_text), parse_problem(problem_text));
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        default: return "unknown";
    }
}

Backend backend_from_name(const std::string& name) {
    if (name == "sat-internal") return Backend::SatInternal;
    if (name == "qbf-internal") return Backend::QbfInternal;
    if (name == "qbf-external") return Backend::QbfExternal;
    throw py::value_error("unknown backend: " + name);
}

py::dict solve(const PlanningTask& task, const std::string& backend, int k_start,
               int k_step, int k_max, const std::string& solver_cmd,
               double timeout) {
    FindPlanOptions opts;
    opts.backend = backend_from_name(backend);
    opts.k_start = k_start;
    opts.k_step = k_step;
    opts.k_max = k_max;
    opts.solver_command = solver_cmd;
    opts.external.timeout_seconds = timeout;
    FindPlanResult res = find_plan(task, opts);

    py::dict out;
    out["verdict"] = verdict_name(res.verdict);
    out["k"] = res.k;
    out["refuted"] = res.refuted;
    out["plan"] = res.plan ? py::object(py::str(print_plan(task, *res.plan)))
                           : py::object(py::none());
    out["diagnostic"] = res.diagnostic;
    return out;
}

py::dict oracle(const PlanningTask& task, int k, std::uint64_t max_states) {
    OracleOptions opts;
    opts.max_states = max_states;
    OracleResult res = exact_k_oracle(task, k, opts);
    py::dict out;
    out["verdict"] = verdict_name(res.verdict);
    out["plan"] = res.plan ? py::object(py::str(print_plan(task, *res.plan)))
                           : py::object(py::none());
    out["expanded"] = res.expanded;
    return out;
}

py::dict validate(const PlanningTask& task, const std::string& plan_text) {
    ValidationResult res = validate_plan(task, parse_plan(task, plan_text));
    py::dict out;
    out["valid"] = res.valid;
    out["failed_step"] = res.failed_step;
    out["reason"] = res.reason;
    return out;
}

py::dict stats(const PlanningTask& task, int k) {
    py::dict out;
    QbfEncoding qbf = encode_qbf(task, k);
    out["qbf_vars"] = qbf.num_vars();
    out["qbf_plan"] = qbf.plan_block.size();
    out["qbf_universal"] = qbf.universal_block.size();
    out["qbf_predicate"] = qbf.predicate_block.size();
    out["qbf_gates"] = qbf.circuit.num_gates();
    CnfEncoding sat = encode_sat(task, k);
    out["sat_vars"] = sat.num_vars;
    out["sat_original_vars"] = sat.num_original_vars;
    out["sat_clauses"] = sat.clauses.size();
    return out;
}

}  // namespace

PYBIND11_MODULE(_qplan, m) {
    m.doc() = "Bounded planning via SAT and QBF encodings";

    py::class_<PlanningTask>(m, "PlanningTask")
        .def_property_readonly(
            "predicates",
            [](const PlanningTask& t) { return t.signature.predicates; })
        .def_property_readonly(
            "actions", [](const PlanningTask& t) { return t.signature.actions; })
        .def_property_readonly(
            "objects", [](const PlanningTask& t) { return t.signature.objects; })
        .def_property_readonly("static_predicates", [](const PlanningTask& t) {
            std::vector<std::string> out;
            for (PredicateId p : t.static_predicates)
                out.push_back(t.signature.predicates[p]);
            return out;
        });

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<CompileError>(m, "CompileError");
    py::register_exception<TaskError>(m, "TaskError");
    py::register_exception<SizeGuardError>(m, "SizeGuardError");

    m.def("load_task", &load_task, py::arg("domain"), py::arg("problem"),
          "Parse PDDL texts and compile them into a planning task.");
    m.def(
        "encode_sat",
        [](const PlanningTask& t, int k, std::uint64_t cap) {
            return emit_dimacs(encode_sat(t, k, SatEncodeOptions{cap}));
        },
        py::arg("task"), py::arg("k"), py::arg("clause_cap") = 50'000'000ull,
        "Grounded DIMACS CNF for horizon k.");
    m.def(
        "encode_qbf_qcir",
        [](const PlanningTask& t, int k) { return emit_qcir(encode_qbf(t, k)); },
        py::arg("task"), py::arg("k"), "Ungrounded QCIR-G14 encoding.");
    m.def(
        "encode_qbf_qdimacs",
        [](const PlanningTask& t, int k) { return to_qdimacs(encode_qbf(t, k)); },
        py::arg("task"), py::arg("k"), "Ungrounded QDIMACS encoding.");
    m.def("solve", &solve, py::arg("task"), py::arg("backend") = "sat-internal",
          py::arg("k_start") = 0, py::arg("k_step") = 1, py::arg("k_max") = 20,
          py::arg("solver_cmd") = "", py::arg("timeout") = 0.0,
          "Iterative-deepening plan search; returns verdict/plan/refuted.");
    m.def("oracle", &oracle, py::arg("task"), py::arg("k"),
          py::arg("max_states") = 10'000'000ull,
          "Breadth-first search for a plan of length exactly k.");
    m.def("validate", &validate, py::arg("task"), py::arg("plan"),
          "Replay a plan text against the task.");
    m.def("stats", &stats, py::arg("task"), py::arg("k"),
          "Encoding size statistics at horizon k.");
}
