// Machines and machine nets: compile right-part regular expressions to DFAs
// (position automaton + subset construction), canonicalize and normalize them,
// assemble the per-nonterminal net, and derive the right-linearized grammar.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netparse/basics.hpp"
#include "netparse/grammar.hpp"

namespace netparse {

/// One deterministic finite machine. States are 0..num_states-1; `initial`
/// is 0 except transiently between construction steps.
struct Machine {
    Symbol owner;
    int num_states = 0;
    int initial = 0;
    std::set<int> finals;
    std::map<int, std::map<Symbol, int>> delta;

    std::optional<int> target(int state, const Symbol& x) const {
        auto row = delta.find(state);
        if (row == delta.end()) return std::nullopt;
        auto it = row->second.find(x);
        if (it == row->second.end()) return std::nullopt;
        return it->second;
    }

    bool is_final(int state) const { return finals.count(state) != 0; }

    const std::map<Symbol, int>& out_edges(int state) const {
        static const std::map<Symbol, int> kEmpty;
        auto row = delta.find(state);
        return row == delta.end() ? kEmpty : row->second;
    }
};

/// The grammar's executable form: one normalized machine per nonterminal.
struct MachineNet {
    Symbol axiom;
    SymbolSet terminals;
    std::map<Symbol, Machine> machines;

    bool is_nonterminal(const Symbol& x) const {
        return machines.count(x) != 0;
    }
    const Machine& machine_of(const Symbol& a) const {
        return machines.at(a);
    }
    const Machine& machine_of(const StateId& q) const {
        return machines.at(q.owner);
    }

    bool is_final(const StateId& q) const {
        return machine_of(q).is_final(q.index);
    }
    std::optional<StateId> target(const StateId& q, const Symbol& x) const {
        auto t = machine_of(q).target(q.index, x);
        if (!t) return std::nullopt;
        return StateId{q.owner, *t};
    }
    const std::map<Symbol, int>& out_edges(const StateId& q) const {
        return machine_of(q).out_edges(q.index);
    }

    /// All states in deterministic order (machines alphabetic, indices asc).
    std::vector<StateId> states() const {
        std::vector<StateId> out;
        for (const auto& [name, m] : machines)
            for (int s = 0; s < m.num_states; ++s)
                out.push_back({name, s});
        return out;
    }
};

/// Right-linearized grammar over net states: p → X r (X terminal or 0_B) for
/// every edge, and p → ε for every final p.
struct RlSymbol {
    bool is_state = false;
    Symbol terminal;  ///< set iff !is_state
    StateId state;    ///< set iff is_state (always an initial or suffix state)

    std::string str() const { return is_state ? state.str() : terminal; }
    friend auto operator<=>(const RlSymbol&, const RlSymbol&) = default;
};

struct RlRule {
    StateId lhs;
    std::vector<RlSymbol> rhs;  ///< empty (ε) or exactly [X, r]
};

struct RightLinearizedGrammar {
    StateId axiom;  ///< 0_S
    SymbolSet terminals;
    std::vector<RlRule> rules;
};

namespace detail {

// Position-automaton data for one regular expression: positions 1..n carry
// symbols; follow(p) is the usual Glushkov follow relation.
struct Positions {
    std::vector<Symbol> sym;             // 1-based; sym[0] unused
    bool nullable = false;
    std::set<int> first, last;
    std::map<int, std::set<int>> follow;
};

struct PosInfo {
    bool nullable;
    std::set<int> first, last;
};

inline PosInfo collect_positions(const RegexAst& ast, Positions& out) {
    switch (ast.kind) {
        case RegexAst::Kind::Epsilon:
            return {true, {}, {}};
        case RegexAst::Kind::Sym: {
            out.sym.push_back(ast.symbol);
            int p = static_cast<int>(out.sym.size()) - 1;
            return {false, {p}, {p}};
        }
        case RegexAst::Kind::Star: {
            PosInfo c = collect_positions(ast.children[0], out);
            for (int p : c.last) out.follow[p].insert(c.first.begin(),
                                                      c.first.end());
            return {true, c.first, c.last};
        }
        case RegexAst::Kind::Union: {
            PosInfo acc{false, {}, {}};
            for (const auto& child : ast.children) {
                PosInfo c = collect_positions(child, out);
                acc.nullable = acc.nullable || c.nullable;
                acc.first.insert(c.first.begin(), c.first.end());
                acc.last.insert(c.last.begin(), c.last.end());
            }
            return acc;
        }
        case RegexAst::Kind::Concat: {
            PosInfo acc{true, {}, {}};
            for (const auto& child : ast.children) {
                PosInfo c = collect_positions(child, out);
                for (int p : acc.last)
                    out.follow[p].insert(c.first.begin(), c.first.end());
                if (acc.nullable)
                    acc.first.insert(c.first.begin(), c.first.end());
                if (c.nullable)
                    acc.last.insert(c.last.begin(), c.last.end());
                else
                    acc.last = c.last;
                acc.nullable = acc.nullable && c.nullable;
            }
            return acc;
        }
    }
    return {true, {}, {}};  // unreachable
}

inline Positions build_positions(const RegexAst& ast) {
    Positions pos;
    pos.sym.push_back("");  // make positions 1-based
    PosInfo top = collect_positions(ast, pos);
    pos.nullable = top.nullable;
    pos.first = std::move(top.first);
    pos.last = std::move(top.last);
    return pos;
}

// Merge every non-initial final state that has no outgoing edge into one.
// These states are pairwise indistinguishable; the reference drawings always
// show them merged, so this is the default canonical shape.
inline void merge_dead_end_finals(Machine& m) {
    std::vector<int> dead;
    for (int f : m.finals)
        if (f != m.initial && m.out_edges(f).empty()) dead.push_back(f);
    if (dead.size() < 2) return;
    int keep = dead.front();
    std::set<int> drop(dead.begin() + 1, dead.end());
    for (auto& [s, row] : m.delta)
        for (auto& [x, t] : row)
            if (drop.count(t)) t = keep;
    for (int d : drop) m.finals.erase(d);
    // State ids are compacted by the renumbering pass; just drop the rows.
    for (int d : drop) m.delta.erase(d);
}

// Depth-first preorder renumbering from the initial state, exploring edges
// in symbol order: terminals (lexicographic) first, then nonterminals
// (lexicographic). This reproduces the conventional state numbering of the
// reference drawings (e.g. 0_T —a→ 3_T with the '('-path numbered first).
// Unreachable states are dropped. The initial state becomes 0.
inline Machine renumber_dfs(const Machine& m, const SymbolSet& terminals) {
    std::map<int, int> id;
    auto visit = [&](auto&& self, int s) -> void {
        id.emplace(s, static_cast<int>(id.size()));
        const auto& row = m.out_edges(s);
        std::vector<std::pair<Symbol, int>> terms, nonterms;
        for (const auto& [x, t] : row)
            (terminals.count(x) ? terms : nonterms).emplace_back(x, t);
        for (const auto& [x, t] : terms)
            if (!id.count(t)) self(self, t);
        for (const auto& [x, t] : nonterms)
            if (!id.count(t)) self(self, t);
    };
    visit(visit, m.initial);
    Machine out;
    out.owner = m.owner;
    out.num_states = static_cast<int>(id.size());
    out.initial = 0;
    for (int f : m.finals)
        if (id.count(f)) out.finals.insert(id.at(f));
    for (const auto& [s, row] : m.delta) {
        if (!id.count(s)) continue;
        for (const auto& [x, t] : row) out.delta[id.at(s)][x] = id.at(t);
    }
    return out;
}

// Moore partition refinement; missing transitions go to an implicit sink.
inline Machine minimize_moore(const Machine& m) {
    SymbolSet alphabet;
    for (const auto& [s, row] : m.delta)
        for (const auto& [x, t] : row) alphabet.insert(x);

    std::map<int, int> cls;
    for (int s = 0; s < m.num_states; ++s) cls[s] = m.is_final(s) ? 1 : 0;
    for (;;) {
        // Signature: own class plus the class (or -1) reached per symbol.
        std::map<std::vector<int>, int> sig_ids;
        std::map<int, int> next;
        for (int s = 0; s < m.num_states; ++s) {
            std::vector<int> sig{cls.at(s)};
            for (const auto& x : alphabet) {
                auto t = m.target(s, x);
                sig.push_back(t ? cls.at(*t) : -1);
            }
            auto [it, ignore] =
                sig_ids.emplace(sig, static_cast<int>(sig_ids.size()));
            next[s] = it->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }

    Machine out;
    out.owner = m.owner;
    std::set<int> classes;
    for (auto& [s, c] : cls) classes.insert(c);
    out.num_states = static_cast<int>(classes.size());
    out.initial = cls.at(m.initial);
    for (int f : m.finals) out.finals.insert(cls.at(f));
    for (const auto& [s, row] : m.delta)
        for (const auto& [x, t] : row) out.delta[cls.at(s)][x] = cls.at(t);
    return out;
}

}  // namespace detail

/// Ensure no edge reenters the initial state: if one does, add a fresh
/// initial state copying all outgoing edges of the old one (which stays,
/// final iff it was). Language-preserving; idempotent.
inline Machine normalize_machine(const Machine& m) {
    bool reentered = false;
    for (const auto& [s, row] : m.delta)
        for (const auto& [x, t] : row)
            if (t == m.initial) reentered = true;
    if (!reentered) return m;
    Machine out = m;
    int fresh = out.num_states++;
    out.delta[fresh] = out.out_edges(m.initial);
    if (out.is_final(m.initial)) out.finals.insert(fresh);
    out.initial = fresh;
    return out;
}

/// Compile one rule's regular expression to a deterministic reduced machine:
/// position automaton (Berry–Sethi) + subset construction, followed by the
/// dead-end-final canonicalization. States are renumbered breadth-first with
/// edges explored in symbol order (terminals first, both lexicographic).
inline Machine regex_to_machine(const Symbol& owner, const RegexAst& ast,
                                const SymbolSet& terminals) {
    detail::Positions pos = detail::build_positions(ast);

    Machine m;
    m.owner = owner;
    m.num_states = 1;  // state 0 = subset-construction start
    if (pos.nullable) m.finals.insert(0);

    std::map<std::set<int>, int> ids;
    std::queue<std::pair<int, std::set<int>>> work;
    auto expand = [&](int from, const std::set<int>& position_set) {
        std::map<Symbol, std::set<int>> by_symbol;
        for (int p : position_set) {
            auto fit = pos.follow.find(p);
            if (fit == pos.follow.end()) continue;
            for (int q : fit->second) by_symbol[pos.sym[q]].insert(q);
        }
        for (const auto& [x, targets] : by_symbol) {
            auto [it, fresh] = ids.emplace(targets, m.num_states);
            if (fresh) {
                ++m.num_states;
                bool final = std::any_of(
                    targets.begin(), targets.end(),
                    [&](int q) { return pos.last.count(q) != 0; });
                if (final) m.finals.insert(it->second);
                work.emplace(it->second, targets);
            }
            m.delta[from][x] = it->second;
        }
    };
    // The start behaves like a position set whose follow set is `first`.
    {
        std::map<Symbol, std::set<int>> by_symbol;
        for (int q : pos.first) by_symbol[pos.sym[q]].insert(q);
        for (const auto& [x, targets] : by_symbol) {
            auto [it, fresh] = ids.emplace(targets, m.num_states);
            if (fresh) {
                ++m.num_states;
                bool final = std::any_of(
                    targets.begin(), targets.end(),
                    [&](int q) { return pos.last.count(q) != 0; });
                if (final) m.finals.insert(it->second);
                work.emplace(it->second, targets);
            }
            m.delta[0][x] = it->second;
        }
    }
    while (!work.empty()) {
        auto [id, set] = work.front();
        work.pop();
        expand(id, set);
    }

    detail::merge_dead_end_finals(m);
    return detail::renumber_dfs(m, terminals);
}

/// Build the machine net: one machine per nonterminal, each compiled,
/// optionally minimized (Moore), then normalized and renumbered.
inline MachineNet build_net(const Grammar& g, bool minimize = false) {
    MachineNet net;
    net.axiom = g.axiom;
    net.terminals = g.terminals;
    for (const auto& [name, ast] : g.rules) {
        Machine m = regex_to_machine(name, ast, g.terminals);
        if (minimize) m = detail::minimize_moore(m);
        m = normalize_machine(m);
        net.machines[name] = detail::renumber_dfs(m, g.terminals);
    }
    return net;
}

/// Derive the right-linearized grammar Ĝ: nonterminals are the net states,
/// the axiom is 0_S, with p → X r per edge (X = 0_B for nonterminal labels)
/// and p → ε per final state.
inline RightLinearizedGrammar right_linearize(const MachineNet& net) {
    RightLinearizedGrammar rl;
    rl.axiom = {net.axiom, 0};
    rl.terminals = net.terminals;
    for (const StateId& p : net.states()) {
        for (const auto& [x, t] : net.out_edges(p)) {
            RlSymbol head;
            if (net.is_nonterminal(x))
                head = {true, {}, StateId{x, 0}};
            else
                head = {false, x, {}};
            rl.rules.push_back(
                {p, {head, RlSymbol{true, {}, StateId{p.owner, t}}}});
        }
        if (net.is_final(p)) rl.rules.push_back({p, {}});
    }
    return rl;
}

}  // namespace netparse
