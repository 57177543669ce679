// Static analyses over a machine net: nullability of states/nonterminals,
// Ini sets, candidate closure, and left-recursion detection.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "netparse/basics.hpp"
#include "netparse/machine.hpp"

namespace netparse {

/// Candidates grouped by state: state → nonempty look-ahead set.
using CandidateSet = std::map<StateId, SymbolSet>;

/// Results of the nullability and Ini fixpoints.
struct AnalysisTables {
    SymbolSet nullable_nonterminals;
    std::map<StateId, bool> nullable_states;  ///< L(q) nullable
    std::map<StateId, SymbolSet> ini;         ///< Ini(L(q))

    bool nullable(const StateId& q) const { return nullable_states.at(q); }
    bool nullable(const Symbol& a) const {
        return nullable_nonterminals.count(a) != 0;
    }
    const SymbolSet& initials(const StateId& q) const { return ini.at(q); }
};

/// Least fixpoint of: q nullable iff q final, or q —B→ r with both B and r
/// nullable. A nonterminal is nullable iff its initial state is.
inline AnalysisTables compute_nullable(const MachineNet& net) {
    AnalysisTables t;
    std::vector<StateId> states = net.states();
    for (const StateId& q : states) t.nullable_states[q] = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const StateId& q : states) {
            if (t.nullable_states[q]) continue;
            bool value = net.is_final(q);
            if (!value) {
                for (const auto& [x, r] : net.out_edges(q)) {
                    if (!net.is_nonterminal(x)) continue;
                    if (t.nullable_states.at({x, 0}) &&
                        t.nullable_states.at({q.owner, r})) {
                        value = true;
                        break;
                    }
                }
            }
            if (value) {
                t.nullable_states[q] = true;
                changed = true;
            }
        }
    }
    for (const auto& [name, m] : net.machines)
        if (t.nullable_states.at({name, 0}))
            t.nullable_nonterminals.insert(name);
    return t;
}

/// Least fixpoint of the Ini clauses: a ∈ Ini(q) if q —a→ r; or q —B→ r and
/// a ∈ Ini(0_B); or q —B→ r with B nullable and a ∈ Ini(r).
/// Includes the nullability tables (computed first).
inline AnalysisTables compute_ini(const MachineNet& net) {
    AnalysisTables t = compute_nullable(net);
    std::vector<StateId> states = net.states();
    for (const StateId& q : states) t.ini[q];  // default-init every entry
    bool changed = true;
    while (changed) {
        changed = false;
        for (const StateId& q : states) {
            SymbolSet& mine = t.ini[q];
            size_t before = mine.size();
            for (const auto& [x, r] : net.out_edges(q)) {
                if (!net.is_nonterminal(x)) {
                    mine.insert(x);
                    continue;
                }
                const SymbolSet& callee = t.ini[{x, 0}];
                mine.insert(callee.begin(), callee.end());
                if (t.nullable(x)) {
                    const SymbolSet& rest = t.ini[{q.owner, r}];
                    mine.insert(rest.begin(), rest.end());
                }
            }
            if (mine.size() != before) changed = true;
        }
    }
    return t;
}

/// Ini(L(r)·π): first terminals of the concatenation of L(r) with any
/// look-ahead continuation π.
inline SymbolSet ini_with_lookahead(const AnalysisTables& t, const StateId& r,
                                    const SymbolSet& pi) {
    SymbolSet out = t.initials(r);
    if (t.nullable(r)) out.insert(pi.begin(), pi.end());
    return out;
}

/// Candidate closure: least fixpoint adding ⟨0_B, b⟩ for every candidate
/// ⟨q, π⟩ with q —B→ r and b ∈ Ini(L(r)·π). Equal states merge by
/// look-ahead union.
inline CandidateSet closure(const CandidateSet& c, const MachineNet& net,
                            const AnalysisTables& t) {
    CandidateSet out = c;
    bool changed = true;
    while (changed) {
        changed = false;
        // Snapshot keys: we may insert while iterating.
        std::vector<StateId> keys;
        keys.reserve(out.size());
        for (const auto& [q, pi] : out) keys.push_back(q);
        for (const StateId& q : keys) {
            SymbolSet pi = out.at(q);
            for (const auto& [x, r] : net.out_edges(q)) {
                if (!net.is_nonterminal(x)) continue;
                SymbolSet add = ini_with_lookahead(t, {q.owner, r}, pi);
                SymbolSet& la = out[{x, 0}];
                size_t before = la.size();
                la.insert(add.begin(), add.end());
                if (la.size() != before) changed = true;
            }
        }
    }
    return out;
}

/// A cycle of initial states witnessing left recursion, e.g. [0_E, 0_E] for
/// a direct self-loop (first == last).
using LeftRecursionCycle = std::vector<StateId>;

/// Edges of the left-recursion graph: 0_A → 0_B iff some path
/// 0_A —A_1→ … —A_k→ q —B→ r exists with every A_i nullable.
inline std::map<StateId, std::set<StateId>> left_recursion_graph(
    const MachineNet& net, const AnalysisTables& t) {
    std::map<StateId, std::set<StateId>> graph;
    for (const auto& [name, m] : net.machines) {
        StateId root{name, 0};
        graph[root];
        // States reachable from 0_A via nullable-nonterminal edges only.
        std::set<StateId> frontier{root}, seen{root};
        while (!frontier.empty()) {
            std::set<StateId> next;
            for (const StateId& q : frontier)
                for (const auto& [x, r] : net.out_edges(q)) {
                    if (!net.is_nonterminal(x)) continue;
                    graph[root].insert({x, 0});
                    StateId rs{q.owner, r};
                    if (t.nullable(x) && !seen.count(rs)) {
                        seen.insert(rs);
                        next.insert(rs);
                    }
                }
            frontier = std::move(next);
        }
    }
    return graph;
}

/// Returns a witness cycle of initial states if the net is left-recursive,
/// else nothing.
inline std::optional<LeftRecursionCycle> detect_left_recursion(
    const MachineNet& net, const AnalysisTables& t) {
    auto graph = left_recursion_graph(net, t);
    // DFS with an explicit path to report the cycle found first.
    std::map<StateId, int> color;  // 0 white, 1 on path, 2 done
    std::vector<StateId> path;
    std::optional<LeftRecursionCycle> found;

    auto dfs = [&](auto&& self, const StateId& u) -> void {
        if (found) return;
        color[u] = 1;
        path.push_back(u);
        for (const StateId& v : graph[u]) {
            if (found) break;
            if (color[v] == 1) {
                LeftRecursionCycle cycle;
                auto it = std::find(path.begin(), path.end(), v);
                cycle.assign(it, path.end());
                cycle.push_back(v);  // close the cycle
                found = cycle;
            } else if (color[v] == 0) {
                self(self, v);
            }
        }
        path.pop_back();
        color[u] = 2;
    };
    for (const auto& [u, ignored] : graph) {
        if (found) break;
        if (color[u] == 0) dfs(dfs, u);
    }
    return found;
}

}  // namespace netparse
