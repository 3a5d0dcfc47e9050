#include "qplan/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qplan {

Circuit::Circuit() {
    gates_.push_back(Gate{GateKind::True, {}, -1});
    gates_.push_back(Gate{GateKind::False, {}, -1});
}

GateRef Circuit::add_var(std::string name) {
    GateRef g = (GateRef)gates_.size();
    gates_.push_back(Gate{GateKind::Var, {}, (int)var_gates_.size()});
    var_gates_.push_back(g);
    var_names_.push_back(std::move(name));
    return g;
}

GateRef Circuit::intern(Gate g) {
    auto key = std::make_pair(g.kind, g.operands);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    GateRef ref = (GateRef)gates_.size();
    gates_.push_back(std::move(g));
    cache_.emplace(std::move(key), ref);
    return ref;
}

GateRef Circuit::make_not(GateRef a) {
    const Gate& g = gates_[a];
    if (g.kind == GateKind::True) return false_gate();
    if (g.kind == GateKind::False) return true_gate();
    if (g.kind == GateKind::Not) return g.operands[0];
    return intern(Gate{GateKind::Not, {a}, -1});
}

GateRef Circuit::make_and(std::vector<GateRef> ops) {
    std::vector<GateRef> kept;
    for (GateRef o : ops) {
        if (o == true_gate()) continue;
        if (o == false_gate()) return false_gate();
        if (std::find(kept.begin(), kept.end(), o) == kept.end()) kept.push_back(o);
    }
    if (kept.empty()) return true_gate();
    if (kept.size() == 1) return kept[0];
    std::sort(kept.begin(), kept.end());
    return intern(Gate{GateKind::And, std::move(kept), -1});
}

GateRef Circuit::make_or(std::vector<GateRef> ops) {
    std::vector<GateRef> kept;
    for (GateRef o : ops) {
        if (o == false_gate()) continue;
        if (o == true_gate()) return true_gate();
        if (std::find(kept.begin(), kept.end(), o) == kept.end()) kept.push_back(o);
    }
    if (kept.empty()) return false_gate();
    if (kept.size() == 1) return kept[0];
    std::sort(kept.begin(), kept.end());
    return intern(Gate{GateKind::Or, std::move(kept), -1});
}

GateRef Circuit::make_iff(GateRef a, GateRef b) {
    return make_or({make_and({a, b}), make_and({make_not(a), make_not(b)})});
}

bool Circuit::eval(GateRef root, const std::vector<bool>& var_values) const {
    std::vector<char> value(root + 1, 0);
    for (GateRef g = 0; g <= root; g++) {
        const Gate& gate = gates_[g];
        switch (gate.kind) {
            case GateKind::True: value[g] = 1; break;
            case GateKind::False: value[g] = 0; break;
            case GateKind::Var: value[g] = var_values[gate.var] ? 1 : 0; break;
            case GateKind::Not: value[g] = !value[gate.operands[0]]; break;
            case GateKind::And: {
                char v = 1;
                for (GateRef o : gate.operands) v &= value[o];
                value[g] = v;
                break;
            }
            case GateKind::Or: {
                char v = 0;
                for (GateRef o : gate.operands) v |= value[o];
                value[g] = v;
                break;
            }
        }
    }
    return value[root];
}

GateRef eq_const(Circuit& c, const BitVector& v, std::uint64_t idx) {
    if (v.width() < 64 && idx >= (1ull << v.width()))
        throw std::out_of_range("eq_const: index not representable in bit vector");
    std::vector<GateRef> conj;
    for (int b = 0; b < v.width(); b++)
        conj.push_back((idx >> b) & 1 ? v.bits[b] : c.make_not(v.bits[b]));
    return c.make_and(std::move(conj));
}

GateRef eq_vars(Circuit& c, const BitVector& u, const BitVector& v) {
    if (u.width() != v.width())
        throw std::invalid_argument("eq_vars: width mismatch");
    std::vector<GateRef> conj;
    for (int b = 0; b < u.width(); b++)
        conj.push_back(c.make_iff(u.bits[b], v.bits[b]));
    return c.make_and(std::move(conj));
}

GateRef lt_const(Circuit& c, const BitVector& v, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("lt_const: bound must be positive");
    if (v.width() >= 64 || n >= (1ull << v.width())) return c.true_gate();
    // v < n  <=>  some bit b has n_b=1, v_b=0 and all higher bits agree.
    std::vector<GateRef> disj;
    for (int b = v.width() - 1; b >= 0; b--) {
        if (!((n >> b) & 1)) continue;
        std::vector<GateRef> conj{c.make_not(v.bits[b])};
        for (int h = b + 1; h < v.width(); h++)
            conj.push_back((n >> h) & 1 ? v.bits[h] : c.make_not(v.bits[h]));
        disj.push_back(c.make_and(std::move(conj)));
    }
    return c.make_or(std::move(disj));
}

std::string VariableLayout::comment_lines() const {
    std::ostringstream os;
    for (int i = 0; i < k; i++) {
        os << "c action " << i << " bits";
        for (int v : action_bits[i]) os << " " << v;
        os << "\n";
        for (int j = 0; j < phat; j++) {
            os << "c param " << i << " " << (j + 1) << " bits";
            for (int v : param_bits[i][j]) os << " " << v;
            os << "\n";
        }
    }
    return os.str();
}

CnfEncoding tseitin(const Circuit& c, GateRef root) {
    CnfEncoding out;
    out.num_original_vars = c.num_vars();
    out.num_vars = c.num_vars();

    // Reachable and/or gates get auxiliaries, in gate order.
    std::vector<char> reachable(root + 1, 0);
    reachable[root] = 1;
    for (GateRef g = root + 1; g-- > 0;) {
        if (!reachable[g]) continue;
        for (GateRef o : c.gate(g).operands) reachable[o] = 1;
    }

    std::vector<int> lit(root + 1, 0);
    for (GateRef g = 0; g <= root; g++) {
        if (!reachable[g]) continue;
        const Gate& gate = c.gate(g);
        switch (gate.kind) {
            case GateKind::Var:
                lit[g] = gate.var + 1;
                break;
            case GateKind::Not:
                lit[g] = -lit[gate.operands[0]];
                break;
            case GateKind::And:
            case GateKind::Or: {
                int t = ++out.num_vars;
                out.aux_vars.push_back(t);
                lit[g] = t;
                std::vector<int> big{gate.kind == GateKind::And ? t : -t};
                for (GateRef o : gate.operands) {
                    if (gate.kind == GateKind::And) {
                        out.clauses.push_back({-t, lit[o]});
                        big.push_back(-lit[o]);
                    } else {
                        out.clauses.push_back({t, -lit[o]});
                        big.push_back(lit[o]);
                    }
                }
                out.clauses.push_back(std::move(big));
                break;
            }
            case GateKind::True:
            case GateKind::False:
                break;  // only possible as root
        }
    }

    const Gate& r = c.gate(root);
    if (r.kind == GateKind::True) {
        // no constraint
    } else if (r.kind == GateKind::False) {
        out.clauses.push_back({});
    } else {
        out.clauses.push_back({lit[root]});
    }
    return out;
}

std::string emit_dimacs(const CnfEncoding& cnf) {
    std::ostringstream os;
    os << cnf.layout.comment_lines();
    os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (const auto& clause : cnf.clauses) {
        for (int l : clause) os << l << " ";
        os << "0\n";
    }
    return os.str();
}

}  // namespace qplan
