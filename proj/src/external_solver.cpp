#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qplan/solve.hpp"

namespace qplan {

namespace {

struct RunOutcome {
    bool ran = false;
    bool timed_out = false;
    int exit_code = -1;
    std::string output;
    std::string error;
};

RunOutcome run_process(const std::vector<std::string>& argv, double timeout_seconds) {
    RunOutcome out;
    if (argv.empty()) {
        out.error = "empty command";
        return out;
    }
    int fds[2];
    if (pipe(fds) != 0) {
        out.error = "pipe() failed";
        return out;
    }
    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        out.error = "fork() failed";
        return out;
    }
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        std::vector<char*> args;
        for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }
    close(fds[1]);

    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration<double>(timeout_seconds);
    char buf[4096];
    while (true) {
        int wait_ms = -1;
        if (timeout_seconds > 0) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                            deadline - std::chrono::steady_clock::now())
                            .count();
            if (left <= 0) {
                out.timed_out = true;
                kill(pid, SIGKILL);
                break;
            }
            wait_ms = (int)left;
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int pr = poll(&pfd, 1, wait_ms);
        if (pr == 0) continue;  // re-check deadline
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        ssize_t n = read(fds[0], buf, sizeof(buf));
        if (n <= 0) break;
        out.output.append(buf, (size_t)n);
    }
    close(fds[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    out.ran = true;
    if (WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
    return out;
}

}  // namespace

std::vector<std::string> solver_command_from_template(const std::string& tmpl,
                                                      const std::string& path) {
    std::vector<std::string> argv;
    std::istringstream is(tmpl);
    std::string tok;
    bool substituted = false;
    while (is >> tok) {
        std::string::size_type at;
        while ((at = tok.find("{file}")) != std::string::npos) {
            tok.replace(at, 6, path);
            substituted = true;
        }
        argv.push_back(tok);
    }
    if (!substituted) argv.push_back(path);
    return argv;
}

SolveResult run_external_qbf(const std::string& qdimacs_path,
                             const std::vector<std::string>& command,
                             const ExternalOptions& opts) {
    SolveResult res;
    std::vector<std::string> argv = command;
    bool has_path = false;
    for (const std::string& a : argv)
        if (a == qdimacs_path) has_path = true;
    if (!has_path) argv.push_back(qdimacs_path);

    RunOutcome run = run_process(argv, opts.timeout_seconds);
    if (!run.ran || run.timed_out) {
        res.diagnostic = run.timed_out ? "external solver timed out" : run.error;
        return res;
    }
    if (run.exit_code == 127) {
        res.diagnostic = "external solver not found: " + argv[0];
        return res;
    }
    if (run.exit_code == 10) {
        res.verdict = Verdict::True;
    } else if (run.exit_code == 20) {
        res.verdict = Verdict::False;
        return res;
    } else {
        res.diagnostic = "unrecognized solver exit code " +
                         std::to_string(run.exit_code) + "; output: " + run.output;
        return res;
    }

    // Optional certificate: "V <lit> ... [0]" / "v ..." lines.
    std::istringstream is(run.output);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head != "V" && head != "v") continue;
        long lit;
        while (ls >> lit && lit != 0)
            res.witness[(int)std::labs(lit)] = lit > 0;
    }
    return res;
}

namespace {

// Patches a QDIMACS text with extra unit clauses (header count adjusted).
std::string qdimacs_with_units(const std::string& text,
                               const std::vector<int>& units) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("p cnf ", 0) == 0) {
            std::istringstream ls(line.substr(6));
            long vars, clauses;
            ls >> vars >> clauses;
            os << "p cnf " << vars << " " << clauses + (long)units.size() << "\n";
        } else {
            os << line << "\n";
        }
    }
    for (int u : units) os << u << " 0\n";
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        char tmpl[] = "/tmp/qplan_XXXXXX";
        int fd = mkstemp(tmpl);
        if (fd < 0) throw std::runtime_error("mkstemp failed");
        path = tmpl;
        (void)!write(fd, contents.data(), contents.size());
        close(fd);
    }
    ~TempFile() { unlink(path.c_str()); }
};

}  // namespace

SolveResult solve_qbf_external(const QbfEncoding& enc,
                               const std::string& command_template,
                               const ExternalOptions& opts) {
    std::string text = to_qdimacs(enc);
    SolveResult res;
    {
        TempFile f(text);
        res = run_external_qbf(f.path,
                               solver_command_from_template(command_template, f.path),
                               opts);
    }
    if (res.verdict != Verdict::True) return res;

    // Outer plan variables, in decoding order.
    std::vector<int> plan_vars;
    VariableLayout layout = enc.plan_layout();
    for (int i = 0; i < layout.k; i++) {
        for (int v : layout.action_bits[i]) plan_vars.push_back(v);
        for (const auto& p : layout.param_bits[i])
            for (int v : p) plan_vars.push_back(v);
    }
    bool covered = true;
    for (int v : plan_vars)
        if (!res.witness.count(v)) covered = false;
    if (covered) return res;

    // No usable certificate: recover the plan bits by self-reduction,
    // fixing one outer variable at a time with unit clauses.
    std::vector<int> units;
    for (int v : plan_vars) {
        if (res.witness.count(v)) {
            units.push_back(res.witness.at(v) ? v : -v);
            continue;
        }
        units.push_back(v);
        SolveResult probe;
        {
            TempFile f(qdimacs_with_units(text, units));
            probe = run_external_qbf(
                f.path, solver_command_from_template(command_template, f.path), opts);
        }
        if (probe.verdict == Verdict::Unknown) {
            probe.diagnostic = "self-reduction failed: " + probe.diagnostic;
            return probe;
        }
        if (probe.verdict == Verdict::False) units.back() = -v;
        res.witness[v] = probe.verdict == Verdict::True;
    }
    return res;
}

}  // namespace qplan
