#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qplan/pddl.hpp"
#include "qplan/plan_tools.hpp"
#include "qplan/qbf_encoder.hpp"
#include "qplan/sat_encoder.hpp"
#include "qplan/solve.hpp"

namespace {

constexpr int kExitFound = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

qplan::PlanningTask load_task(const std::string& domain_path,
                              const std::string& problem_path) {
    qplan::DomainAst dom = qplan::parse_domain(read_file(domain_path));
    qplan::ProblemAst prob = qplan::parse_problem(read_file(problem_path));
    return qplan::compile_task(dom, prob);
}

qplan::Backend parse_backend(const std::string& name) {
    if (name == "sat-internal") return qplan::Backend::SatInternal;
    if (name == "qbf-internal") return qplan::Backend::QbfInternal;
    if (name == "qbf-external") return qplan::Backend::QbfExternal;
    throw CLI::ValidationError("--backend", "unknown backend " + name);
}

// Strips a trailing .qcir/.qdimacs/.cnf so --out works as a base path.
std::string base_path(const std::string& out) {
    for (const char* ext : {".qcir", ".qdimacs", ".cnf"}) {
        std::string e = ext;
        if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0)
            return out.substr(0, out.size() - e.size());
    }
    return out;
}

struct Options {
    std::string domain, problem, plan_path;
    std::string out;
    std::string backend = "sat-internal";
    std::string solver_cmd;
    int k = -1;
    int k_start = 0, k_step = 1, k_max = 20;
    double timeout = 0;
    std::uint64_t clause_cap = 50'000'000;
};

int cmd_encode_sat(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    int k = opt.k < 0 ? 0 : opt.k;
    qplan::SatEncodeOptions enc_opts{opt.clause_cap};
    qplan::CnfEncoding cnf = qplan::encode_sat(task, k, enc_opts);
    std::string base = base_path(opt.out.empty() ? "plan_k" + std::to_string(k)
                                                 : opt.out);
    write_file(base + ".cnf", qplan::emit_dimacs(cnf));
    write_file(base + ".layout", cnf.layout.comment_lines());
    std::cout << "k=" << k << " variables=" << cnf.num_vars
              << " original_variables=" << cnf.num_original_vars
              << " auxiliary_variables=" << cnf.aux_vars.size()
              << " clauses=" << cnf.clauses.size() << "\n"
              << "wrote " << base << ".cnf\n";
    return kExitFound;
}

int cmd_encode_qbf(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    int k = opt.k < 0 ? 0 : opt.k;
    qplan::QbfEncoding enc = qplan::encode_qbf(task, k);
    std::string base = base_path(opt.out.empty() ? "plan_k" + std::to_string(k)
                                                 : opt.out);
    write_file(base + ".qcir", qplan::emit_qcir(enc));
    write_file(base + ".qdimacs", qplan::to_qdimacs(enc));
    write_file(base + ".layout", enc.plan_layout().comment_lines());
    std::cout << "k=" << k << " plan_variables=" << enc.plan_block.size()
              << " universal_variables=" << enc.universal_block.size()
              << " predicate_variables=" << enc.predicate_block.size()
              << " gates=" << enc.circuit.num_gates() << "\n"
              << "wrote " << base << ".qcir, " << base << ".qdimacs\n";
    return kExitFound;
}

int cmd_solve(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    qplan::FindPlanOptions fp;
    fp.backend = parse_backend(opt.backend);
    if (opt.k >= 0) {
        fp.k_start = fp.k_max = opt.k;
    } else {
        fp.k_start = opt.k_start;
        fp.k_step = opt.k_step;
        fp.k_max = opt.k_max;
    }
    fp.sat.clause_cap = opt.clause_cap;
    fp.external.timeout_seconds = opt.timeout;
    fp.solver_command = opt.solver_cmd;
    if (fp.solver_command.empty())
        if (const char* env = std::getenv("QPLAN_QBF_SOLVER"))
            fp.solver_command = env;
    if (fp.backend == qplan::Backend::QbfExternal && fp.solver_command.empty()) {
        std::cerr << "qplan: --backend qbf-external needs --solver-cmd or "
                     "QPLAN_QBF_SOLVER\n";
        return kExitUsage;
    }

    qplan::FindPlanResult res = qplan::find_plan(task, fp);
    for (int k : res.refuted)
        std::cout << "horizon " << k << ": no plan (refuted)\n";
    if (res.verdict == qplan::Verdict::True) {
        qplan::ValidationResult val = qplan::validate_plan(task, *res.plan);
        if (!val.valid) {
            std::cerr << "qplan: decoded plan failed validation: " << val.reason
                      << "\n";
            return kExitUnknown;
        }
        std::string text = qplan::print_plan(task, *res.plan);
        std::cout << "plan of length " << res.plan->length() << " at horizon "
                  << res.k << ":\n" << text;
        if (!opt.out.empty()) {
            write_file(opt.out, text);
            std::cout << "wrote " << opt.out << "\n";
        }
        return kExitFound;
    }
    if (res.verdict == qplan::Verdict::False) {
        std::cout << "no plan of length <= " << opt.k_max
                  << " (exact-k semantics, step " << fp.k_step << ")\n";
        return kExitRefuted;
    }
    std::cerr << "qplan: undecided at horizon " << res.k << ": "
              << res.diagnostic << "\n";
    return kExitUnknown;
}

int cmd_validate(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    qplan::Plan plan = qplan::parse_plan(task, read_file(opt.plan_path));
    qplan::ValidationResult res = qplan::validate_plan(task, plan);
    if (res.valid) {
        std::cout << "plan valid (" << plan.length() << " steps)\n";
        return kExitFound;
    }
    std::cout << "plan invalid: " << res.reason << "\n";
    return kExitRefuted;
}

int cmd_oracle(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    int k = opt.k < 0 ? 0 : opt.k;
    qplan::OracleResult res = qplan::exact_k_oracle(task, k);
    if (res.verdict == qplan::Verdict::True) {
        std::cout << "plan of length exactly " << k << " exists:\n"
                  << qplan::print_plan(task, *res.plan);
        return kExitFound;
    }
    if (res.verdict == qplan::Verdict::False) {
        std::cout << "no plan of length exactly " << k << "\n";
        return kExitRefuted;
    }
    std::cout << "oracle budget exhausted after " << res.expanded
              << " expansions\n";
    return kExitUnknown;
}

int cmd_stats(const Options& opt) {
    qplan::PlanningTask task = load_task(opt.domain, opt.problem);
    int lo = opt.k >= 0 ? opt.k : opt.k_start;
    int hi = opt.k >= 0 ? opt.k : opt.k_max;
    std::ostringstream csv;
    csv << "k,qbf_vars,qbf_plan,qbf_universal,qbf_predicate,qbf_gates,qbf_bytes,"
           "sat_vars,sat_clauses,sat_bytes,sat_refused\n";
    for (int k = lo; k <= hi; k += opt.k_step) {
        qplan::QbfEncoding qbf = qplan::encode_qbf(task, k);
        std::size_t qbf_bytes = qplan::emit_qcir(qbf).size();
        std::cout << "k=" << k << " qbf_vars=" << qbf.num_vars()
                  << " qbf_plan=" << qbf.plan_block.size()
                  << " qbf_universal=" << qbf.universal_block.size()
                  << " qbf_predicate=" << qbf.predicate_block.size()
                  << " qbf_gates=" << qbf.circuit.num_gates()
                  << " qbf_bytes=" << qbf_bytes;
        csv << k << "," << qbf.num_vars() << "," << qbf.plan_block.size() << ","
            << qbf.universal_block.size() << "," << qbf.predicate_block.size()
            << "," << qbf.circuit.num_gates() << "," << qbf_bytes << ",";
        try {
            qplan::CnfEncoding sat =
                qplan::encode_sat(task, k, qplan::SatEncodeOptions{opt.clause_cap});
            std::size_t sat_bytes = qplan::emit_dimacs(sat).size();
            std::cout << " sat_vars=" << sat.num_vars
                      << " sat_clauses=" << sat.clauses.size()
                      << " sat_bytes=" << sat_bytes << "\n";
            csv << sat.num_vars << "," << sat.clauses.size() << "," << sat_bytes
                << ",0\n";
        } catch (const qplan::SizeGuardError& e) {
            std::cout << " sat=refused projected_clauses=" << e.projected << "\n";
            csv << ",,," << "1\n";
        }
    }
    if (!opt.out.empty()) {
        write_file(opt.out, csv.str());
        std::cout << "wrote " << opt.out << "\n";
    }
    return kExitFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PDDL-to-SAT/QBF bounded planner"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool need_problem = true) {
        sub->add_option("--domain", opt.domain, "domain PDDL file")->required();
        if (need_problem)
            sub->add_option("--problem", opt.problem, "problem PDDL file")
                ->required();
    };
    auto add_krange = [&](CLI::App* sub) {
        sub->add_option("--k-start", opt.k_start, "first horizon");
        sub->add_option("--k-step", opt.k_step, "horizon increment")
            ->check(CLI::PositiveNumber);
        sub->add_option("--k-max", opt.k_max, "last horizon");
    };

    CLI::App* enc_sat = app.add_subcommand("encode-sat",
                                           "write the grounded DIMACS encoding");
    add_common(enc_sat);
    enc_sat->add_option("-k,--k", opt.k, "horizon")->required();
    enc_sat->add_option("--out", opt.out, "output base path");
    enc_sat->add_option("--sat-clause-cap", opt.clause_cap, "size-guard limit");

    CLI::App* enc_qbf = app.add_subcommand(
        "encode-qbf", "write the ungrounded QCIR and QDIMACS encodings");
    add_common(enc_qbf);
    enc_qbf->add_option("-k,--k", opt.k, "horizon")->required();
    enc_qbf->add_option("--out", opt.out, "output base path");

    CLI::App* solve = app.add_subcommand("solve", "find a plan by horizon sweep");
    add_common(solve);
    solve->add_option("-k,--k", opt.k, "single horizon (overrides the sweep)");
    add_krange(solve);
    solve->add_option("--backend", opt.backend,
                      "sat-internal | qbf-internal | qbf-external");
    solve->add_option("--solver-cmd", opt.solver_cmd,
                      "external QDIMACS solver command, {file} placeholder");
    solve->add_option("--timeout", opt.timeout, "external solver timeout (s)");
    solve->add_option("--out", opt.out, "plan output file");
    solve->add_option("--sat-clause-cap", opt.clause_cap, "size-guard limit");

    CLI::App* validate = app.add_subcommand("validate", "replay a plan file");
    add_common(validate);
    validate->add_option("--plan", opt.plan_path, "plan file")->required();

    CLI::App* oracle = app.add_subcommand("oracle",
                                          "exact-horizon breadth-first search");
    add_common(oracle);
    oracle->add_option("-k,--k", opt.k, "horizon")->required();

    CLI::App* stats = app.add_subcommand("stats", "encoding sizes over a k-range");
    add_common(stats);
    stats->add_option("-k,--k", opt.k, "single horizon");
    add_krange(stats);
    stats->add_option("--out", opt.out, "CSV output file");
    stats->add_option("--sat-clause-cap", opt.clause_cap, "size-guard limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (enc_sat->parsed()) return cmd_encode_sat(opt);
        if (enc_qbf->parsed()) return cmd_encode_qbf(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (validate->parsed()) return cmd_validate(opt);
        if (oracle->parsed()) return cmd_oracle(opt);
        if (stats->parsed()) return cmd_stats(opt);
    } catch (const qplan::ParseError& e) {
        std::cerr << "qplan: " << e.what() << "\n";
        return kExitInput;
    } catch (const qplan::CompileError& e) {
        std::cerr << "qplan: " << e.what() << "\n";
        return kExitInput;
    } catch (const qplan::TaskError& e) {
        std::cerr << "qplan: " << e.what() << "\n";
        return kExitInput;
    } catch (const qplan::SizeGuardError& e) {
        std::cerr << "qplan: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "qplan: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
