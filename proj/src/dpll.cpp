#include <algorithm>
#include <numeric>

#include "qplan/solve.hpp"

namespace qplan {

namespace {

inline int lit_index(int lit) {
    int v = lit > 0 ? lit : -lit;
    return 2 * (v - 1) + (lit < 0 ? 1 : 0);
}

struct Dpll {
    int num_vars;
    std::vector<std::vector<int>> clauses;
    std::vector<std::vector<int>> watchers;  // literal index -> clause ids
    std::vector<signed char> val;            // 1-based; 0 unassigned
    std::vector<int> trail;
    std::size_t prop_head = 0;
    struct Level {
        std::size_t trail_size;
        int lit;
        bool flipped;
    };
    std::vector<Level> levels;
    std::vector<int> branch_order;  // vars by occurrence count, descending
    std::vector<signed char> phase;
    SolveStats stats;

    explicit Dpll(int n) : num_vars(n), watchers(2 * n), val(n + 1, 0) {}

    bool assign(int lit) {  // false on conflict with current value
        int v = std::abs(lit);
        signed char s = lit > 0 ? 1 : -1;
        if (val[v] != 0) return val[v] == s;
        val[v] = s;
        trail.push_back(lit);
        return true;
    }
    signed char value_of(int lit) const {
        signed char v = val[std::abs(lit)];
        return lit > 0 ? v : (signed char)-v;
    }

    // Returns false on conflict.
    bool propagate() {
        while (prop_head < trail.size()) {
            int falsified = -trail[prop_head++];
            stats.propagations++;
            std::vector<int>& watch = watchers[lit_index(falsified)];
            std::size_t keep = 0;
            for (std::size_t w = 0; w < watch.size(); w++) {
                int ci = watch[w];
                std::vector<int>& cl = clauses[ci];
                if (cl[0] == falsified) std::swap(cl[0], cl[1]);
                // cl[1] == falsified now
                if (value_of(cl[0]) == 1) {
                    watch[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t j = 2; j < cl.size(); j++) {
                    if (value_of(cl[j]) != -1) {
                        std::swap(cl[1], cl[j]);
                        watchers[lit_index(cl[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                watch[keep++] = ci;
                if (value_of(cl[0]) == -1) {
                    // Conflict: restore untraversed watchers.
                    for (std::size_t r = w + 1; r < watch.size(); r++)
                        watch[keep++] = watch[r];
                    watch.resize(keep);
                    return false;
                }
                if (!assign(cl[0])) {
                    for (std::size_t r = w + 1; r < watch.size(); r++)
                        watch[keep++] = watch[r];
                    watch.resize(keep);
                    return false;
                }
            }
            watch.resize(keep);
        }
        return true;
    }

    void undo_to(std::size_t n) {
        while (trail.size() > n) {
            val[std::abs(trail.back())] = 0;
            trail.pop_back();
        }
        prop_head = trail.size();
    }
};

}  // namespace

SolveResult solve_clauses(int num_vars, const std::vector<std::vector<int>>& input,
                          const DpllOptions& opts) {
    SolveResult res;

    // Pure-literal elimination to fixpoint, via occurrence counts.
    std::vector<signed char> forced(num_vars + 1, 0);
    std::vector<char> satisfied(input.size(), 0);
    {
        std::vector<long> occ(2 * num_vars, 0);
        std::vector<std::vector<int>> occ_clauses(2 * num_vars);
        for (std::size_t i = 0; i < input.size(); i++)
            for (int l : input[i]) {
                occ[lit_index(l)]++;
                occ_clauses[lit_index(l)].push_back((int)i);
            }
        std::vector<int> queue;
        for (int v = 1; v <= num_vars; v++) {
            bool pos = occ[lit_index(v)] > 0, neg = occ[lit_index(-v)] > 0;
            if (pos != neg) queue.push_back(pos ? v : -v);
        }
        while (!queue.empty()) {
            int pure = queue.back();
            queue.pop_back();
            int v = std::abs(pure);
            if (forced[v] != 0) continue;
            if (occ[lit_index(pure)] == 0 || occ[lit_index(-pure)] != 0) continue;
            forced[v] = pure > 0 ? 1 : -1;
            for (int ci : occ_clauses[lit_index(pure)]) {
                if (satisfied[ci]) continue;
                satisfied[ci] = 1;
                for (int l : input[ci]) {
                    int li = lit_index(l);
                    if (--occ[li] == 0 && occ[lit_index(-l)] > 0 &&
                        forced[std::abs(l)] == 0)
                        queue.push_back(-l);
                }
            }
        }
    }

    Dpll d(num_vars);
    std::vector<int> units;
    for (std::size_t i = 0; i < input.size(); i++) {
        if (satisfied[i]) continue;
        std::vector<int> cl;
        for (int l : input[i])
            if (forced[std::abs(l)] == 0) cl.push_back(l);
        std::sort(cl.begin(), cl.end(),
                  [](int a, int b) {
                      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b)
                                                        : a < b;
                  });
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        bool tautology = false;
        for (std::size_t j = 0; j + 1 < cl.size(); j++)
            if (cl[j] == -cl[j + 1]) { tautology = true; break; }
        if (tautology) continue;
        if (cl.empty()) {
            res.verdict = Verdict::False;
            return res;
        }
        if (cl.size() == 1) {
            units.push_back(cl[0]);
            continue;
        }
        int ci = (int)d.clauses.size();
        d.clauses.push_back(std::move(cl));
        d.watchers[lit_index(d.clauses[ci][0])].push_back(ci);
        d.watchers[lit_index(d.clauses[ci][1])].push_back(ci);
    }
    for (int u : units) {
        if (!d.assign(u)) {
            res.verdict = Verdict::False;
            return res;
        }
    }

    // Deterministic branch order: occurrence count descending, index ascending.
    std::vector<long> count(num_vars + 1, 0);
    std::vector<long> pos_count(num_vars + 1, 0);
    for (const auto& cl : d.clauses)
        for (int l : cl) {
            count[std::abs(l)]++;
            if (l > 0) pos_count[std::abs(l)]++;
        }
    d.branch_order.resize(num_vars);
    std::iota(d.branch_order.begin(), d.branch_order.end(), 1);
    std::stable_sort(d.branch_order.begin(), d.branch_order.end(),
                     [&](int a, int b) { return count[a] > count[b]; });
    d.phase.assign(num_vars + 1, 0);
    for (int v = 1; v <= num_vars; v++)
        d.phase[v] = 2 * pos_count[v] >= count[v] ? 1 : -1;

    std::size_t next_branch = 0;
    while (true) {
        if (!d.propagate()) {
            while (!d.levels.empty() && d.levels.back().flipped) {
                d.undo_to(d.levels.back().trail_size);
                d.levels.pop_back();
            }
            if (d.levels.empty()) {
                res.verdict = Verdict::False;
                res.stats = d.stats;
                return res;
            }
            auto& lvl = d.levels.back();
            d.undo_to(lvl.trail_size);
            lvl.lit = -lvl.lit;
            lvl.flipped = true;
            d.assign(lvl.lit);
            next_branch = 0;
            continue;
        }
        int var = 0;
        while (next_branch < d.branch_order.size()) {
            int v = d.branch_order[next_branch];
            if (d.val[v] == 0 && count[v] > 0) { var = v; break; }
            next_branch++;
        }
        if (var == 0) break;  // all constrained variables assigned
        if (++d.stats.decisions > opts.max_decisions) {
            res.verdict = Verdict::Unknown;
            res.diagnostic = "decision budget exhausted";
            res.stats = d.stats;
            return res;
        }
        int lit = d.phase[var] > 0 ? var : -var;
        d.levels.push_back({d.trail.size(), lit, false});
        d.assign(lit);
    }

    res.verdict = Verdict::True;
    for (int v = 1; v <= num_vars; v++) {
        if (forced[v] != 0) res.witness[v] = forced[v] > 0;
        else res.witness[v] = d.val[v] > 0;  // unconstrained vars default false
    }
    res.stats = d.stats;
    return res;
}

SolveResult solve_cnf(const CnfEncoding& cnf, const DpllOptions& opts) {
    return solve_clauses(cnf.num_vars, cnf.clauses, opts);
}

}  // namespace qplan
