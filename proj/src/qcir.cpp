#include <cctype>
#include <map>
#include <sstream>

#include "qplan/qbf.hpp"

namespace qplan {

namespace {

std::vector<std::string> split_args(const std::string& inside, const char* where) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : inside) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    for (const std::string& s : out)
        if (s.empty()) throw QbfParseError(std::string("empty argument in ") + where);
    return out;
}

// "head(args)" -> {head, inside}; returns false if the line has no '('.
bool split_call(const std::string& line, std::string& head, std::string& inside) {
    auto open = line.find('(');
    auto close = line.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return false;
    head = line.substr(0, open);
    while (!head.empty() && std::isspace((unsigned char)head.back())) head.pop_back();
    while (!head.empty() && std::isspace((unsigned char)head.front())) head.erase(0, 1);
    inside = line.substr(open + 1, close - open - 1);
    return true;
}

}  // namespace

QbfProblem parse_qcir(const std::string& text) {
    QbfProblem prob;
    std::map<std::string, GateRef> names;

    auto var_ref = [&](const std::string& name) -> GateRef {
        auto it = names.find(name);
        if (it != names.end()) return it->second;
        GateRef g = prob.circuit.add_var(name);
        names[name] = g;
        return g;
    };
    auto literal = [&](std::string tok) -> GateRef {
        bool neg = false;
        while (!tok.empty() && tok[0] == '-') {
            neg = !neg;
            tok = tok.substr(1);
        }
        if (tok.empty()) throw QbfParseError("bare '-' literal in qcir");
        GateRef g = var_ref(tok);
        return neg ? prob.circuit.make_not(g) : g;
    };

    std::istringstream is(text);
    std::string line;
    bool have_output = false;
    std::string output_tok;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;

        std::string head, inside;
        auto eq = line.find('=');
        std::string lhs = line.substr(0, eq == std::string::npos ? 0 : eq);
        while (!lhs.empty() && std::isspace((unsigned char)lhs.back())) lhs.pop_back();
        while (!lhs.empty() && std::isspace((unsigned char)lhs.front())) lhs = lhs.substr(1);

        if (eq != std::string::npos && !lhs.empty() && lhs.find('(') == std::string::npos) {
            // Gate definition: name = and(...)/or(...)
            if (!split_call(line.substr(eq + 1), head, inside))
                throw QbfParseError("malformed gate definition: " + line);
            std::vector<GateRef> ops;
            for (const std::string& tok : split_args(inside, "gate definition"))
                ops.push_back(literal(tok));
            GateRef g;
            if (head == "and") g = prob.circuit.make_and(std::move(ops));
            else if (head == "or") g = prob.circuit.make_or(std::move(ops));
            else throw QbfParseError("unsupported qcir gate type: " + head);
            if (names.count(lhs))
                throw QbfParseError("redefinition of " + lhs);
            names[lhs] = g;
            continue;
        }
        if (!split_call(line, head, inside))
            throw QbfParseError("malformed qcir line: " + line);
        if (head == "exists" || head == "forall") {
            QuantBlock block;
            block.universal = head == "forall";
            for (const std::string& tok : split_args(inside, head.c_str())) {
                if (names.count(tok))
                    throw QbfParseError("variable quantified twice: " + tok);
                block.vars.push_back(var_ref(tok));
            }
            prob.blocks.push_back(std::move(block));
        } else if (head == "output") {
            output_tok = inside;
            have_output = true;
        } else if (head == "free") {
            for (const std::string& tok : split_args(inside, "free")) var_ref(tok);
        } else {
            throw QbfParseError("unsupported qcir line: " + line);
        }
    }
    if (!have_output) throw QbfParseError("qcir file has no output(...) line");
    // The output may name a gate defined after the output line was read;
    // resolve it last.
    {
        std::string tok = output_tok;
        bool neg = false;
        while (!tok.empty() && tok[0] == '-') {
            neg = !neg;
            tok = tok.substr(1);
        }
        while (!tok.empty() && std::isspace((unsigned char)tok.back())) tok.pop_back();
        while (!tok.empty() && std::isspace((unsigned char)tok.front())) tok = tok.substr(1);
        auto it = names.find(tok);
        if (it == names.end())
            throw QbfParseError("undefined output " + output_tok);
        prob.root = neg ? prob.circuit.make_not(it->second) : it->second;
    }
    return prob;
}

QbfProblem parse_qdimacs(const std::string& text) {
    QbfProblem prob;
    std::istringstream is(text);
    std::string line;
    int num_vars = -1;
    std::vector<GateRef> var_gate;
    std::vector<GateRef> clause_gates;
    std::vector<GateRef> current;
    std::vector<char> quantified;

    auto var = [&](int v) -> GateRef {
        if (v < 1 || v > num_vars)
            throw QbfParseError("literal out of range: " + std::to_string(v));
        return var_gate[v - 1];
    };

    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string fmt;
            int clauses;
            if (!(ls >> fmt >> num_vars >> clauses) || fmt != "cnf")
                throw QbfParseError("malformed problem line: " + line);
            for (int v = 1; v <= num_vars; v++)
                var_gate.push_back(prob.circuit.add_var(std::to_string(v)));
            quantified.assign(num_vars, 0);
            continue;
        }
        if (num_vars < 0) throw QbfParseError("clause before problem line");
        if (tok == "e" || tok == "a") {
            QuantBlock block;
            block.universal = tok == "a";
            int v;
            while (ls >> v && v != 0) {
                if (quantified[v - 1])
                    throw QbfParseError("variable quantified twice: " + std::to_string(v));
                quantified[v - 1] = 1;
                block.vars.push_back(var(v));
            }
            prob.blocks.push_back(std::move(block));
            continue;
        }
        int l = std::stoi(tok);
        while (true) {
            if (l == 0) {
                clause_gates.push_back(prob.circuit.make_or(current));
                current.clear();
            } else {
                GateRef g = var(std::abs(l));
                current.push_back(l > 0 ? g : prob.circuit.make_not(g));
            }
            if (!(ls >> l)) break;
        }
    }
    if (!current.empty()) clause_gates.push_back(prob.circuit.make_or(current));
    // Free variables are outermost existentials.
    std::vector<GateRef> free_vars;
    for (int v = 1; v <= num_vars; v++)
        if (!quantified[v - 1]) free_vars.push_back(var_gate[v - 1]);
    if (!free_vars.empty())
        prob.blocks.insert(prob.blocks.begin(), QuantBlock{false, std::move(free_vars)});
    prob.root = prob.circuit.make_and(std::move(clause_gates));
    return prob;
}

}  // namespace qplan
