// Classical canonical LR(1) construction and conflict check for BNF
// grammars. Used as reference semantics on right-linearized grammars to
// validate the bottom-up determinism check, so it deliberately shares no
// analysis code with the net-based modules.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netparse/basics.hpp"
#include "netparse/machine.hpp"

namespace netparse {

struct BnfGrammar {
    Symbol axiom;
    SymbolSet terminals;
    SymbolSet nonterminals;
    std::vector<std::pair<Symbol, std::vector<Symbol>>> rules;
};

/// Encode a right-linearized grammar as plain BNF: each net state becomes a
/// nonterminal named by its display form ("3_T").
inline BnfGrammar to_bnf(const RightLinearizedGrammar& rl) {
    BnfGrammar g;
    g.axiom = rl.axiom.str();
    g.terminals = rl.terminals;
    for (const RlRule& r : rl.rules) {
        g.nonterminals.insert(r.lhs.str());
        std::vector<Symbol> rhs;
        for (const RlSymbol& s : r.rhs) rhs.push_back(s.str());
        g.rules.emplace_back(r.lhs.str(), std::move(rhs));
    }
    for (const Symbol& t : g.terminals)
        if (g.nonterminals.count(t))
            throw PreconditionError("terminal '" + t +
                                    "' collides with a state name");
    return g;
}

struct Lr1Item {
    int rule;
    size_t dot;
    Symbol lookahead;
    friend auto operator<=>(const Lr1Item&, const Lr1Item&) = default;
};

using Lr1MState = std::set<Lr1Item>;

struct Lr1Automaton {
    enum class Class { Initial, Intermediate, Sink };

    BnfGrammar grammar;
    std::vector<Lr1MState> mstates;
    std::map<std::pair<int, Symbol>, int> gotos;
    std::vector<Class> classes;  ///< Sink = every item has the dot at the end
};

namespace detail {

struct FirstTables {
    SymbolSet nullable;
    std::map<Symbol, SymbolSet> first;
};

inline FirstTables bnf_first(const BnfGrammar& g) {
    FirstTables t;
    for (const Symbol& a : g.nonterminals) t.first[a];
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [lhs, rhs] : g.rules) {
            SymbolSet& f = t.first[lhs];
            size_t before = f.size();
            bool all_nullable = true;
            for (const Symbol& s : rhs) {
                if (g.terminals.count(s)) {
                    f.insert(s);
                    all_nullable = false;
                    break;
                }
                const SymbolSet& fs = t.first.at(s);
                f.insert(fs.begin(), fs.end());
                if (!t.nullable.count(s)) {
                    all_nullable = false;
                    break;
                }
            }
            if (f.size() != before) changed = true;
            if (all_nullable && !t.nullable.count(lhs)) {
                t.nullable.insert(lhs);
                changed = true;
            }
        }
    }
    return t;
}

// FIRST of the string rhs[from..] followed by the look-ahead terminal.
inline SymbolSet first_of_suffix(const BnfGrammar& g, const FirstTables& t,
                                 const std::vector<Symbol>& rhs, size_t from,
                                 const Symbol& la) {
    SymbolSet out;
    for (size_t i = from; i < rhs.size(); ++i) {
        const Symbol& s = rhs[i];
        if (g.terminals.count(s)) {
            out.insert(s);
            return out;
        }
        const SymbolSet& f = t.first.at(s);
        out.insert(f.begin(), f.end());
        if (!t.nullable.count(s)) return out;
    }
    out.insert(la);
    return out;
}

inline Lr1MState lr1_closure(const BnfGrammar& g, const FirstTables& t,
                             Lr1MState items) {
    std::vector<Lr1Item> work(items.begin(), items.end());
    while (!work.empty()) {
        Lr1Item it = work.back();
        work.pop_back();
        const auto& [lhs, rhs] = g.rules[it.rule];
        if (it.dot >= rhs.size() || !g.nonterminals.count(rhs[it.dot]))
            continue;
        SymbolSet las =
            first_of_suffix(g, t, rhs, it.dot + 1, it.lookahead);
        for (int r = 0; r < (int)g.rules.size(); ++r) {
            if (g.rules[r].first != rhs[it.dot]) continue;
            for (const Symbol& b : las) {
                Lr1Item fresh{r, 0, b};
                if (items.insert(fresh).second) work.push_back(fresh);
            }
        }
    }
    return items;
}

}  // namespace detail

/// Canonical LR(1) collection, numbered in breadth-first discovery order
/// (symbols sorted). The initial m-state is the closure of the axiom's rules
/// with end-marker look-ahead (no augmentation rule is added).
inline Lr1Automaton build_lr1_pilot(const BnfGrammar& g) {
    Lr1Automaton a;
    a.grammar = g;
    detail::FirstTables t = detail::bnf_first(g);

    Lr1MState seed;
    for (int r = 0; r < (int)g.rules.size(); ++r)
        if (g.rules[r].first == g.axiom) seed.insert({r, 0, kEndMarker});
    std::map<Lr1MState, int> ids;

    auto intern = [&](Lr1MState s) {
        auto [it, fresh] = ids.emplace(std::move(s), (int)a.mstates.size());
        if (fresh) a.mstates.push_back(it->first);
        return it->second;
    };
    intern(detail::lr1_closure(g, t, std::move(seed)));

    for (int i = 0; i < (int)a.mstates.size(); ++i) {
        // Collect shiftable symbols in deterministic order.
        std::map<Symbol, Lr1MState> kernels;
        Lr1MState I = a.mstates[i];  // copy: vector may reallocate
        for (const Lr1Item& it : I) {
            const auto& rhs = g.rules[it.rule].second;
            if (it.dot < rhs.size())
                kernels[rhs[it.dot]].insert(
                    {it.rule, it.dot + 1, it.lookahead});
        }
        for (auto& [x, kernel] : kernels)
            a.gotos[{i, x}] =
                intern(detail::lr1_closure(g, t, std::move(kernel)));
    }

    for (int i = 0; i < (int)a.mstates.size(); ++i) {
        bool all_complete = true;
        for (const Lr1Item& it : a.mstates[i])
            if (it.dot < g.rules[it.rule].second.size()) all_complete = false;
        a.classes.push_back(all_complete
                                ? Lr1Automaton::Class::Sink
                                : (i == 0 ? Lr1Automaton::Class::Initial
                                          : Lr1Automaton::Class::Intermediate));
    }
    return a;
}

struct Lr1ShiftReduce {
    int mstate;
    int rule;       ///< the completed rule
    Symbol symbol;  ///< look-ahead that is also shiftable
};
struct Lr1ReduceReduce {
    int mstate;
    int rule_a, rule_b;
    Symbol symbol;  ///< shared look-ahead
};
struct Lr1ConflictReport {
    std::vector<Lr1ShiftReduce> shift_reduce;
    std::vector<Lr1ReduceReduce> reduce_reduce;
    bool empty() const {
        return shift_reduce.empty() && reduce_reduce.empty();
    }
};

inline Lr1ConflictReport check_lr1(const Lr1Automaton& a) {
    Lr1ConflictReport report;
    const BnfGrammar& g = a.grammar;
    for (int i = 0; i < (int)a.mstates.size(); ++i) {
        SymbolSet shiftable;
        // rule -> look-aheads of its completed items in this m-state
        std::map<int, SymbolSet> reduces;
        for (const Lr1Item& it : a.mstates[i]) {
            const auto& rhs = g.rules[it.rule].second;
            if (it.dot < rhs.size()) {
                if (g.terminals.count(rhs[it.dot]))
                    shiftable.insert(rhs[it.dot]);
            } else {
                reduces[it.rule].insert(it.lookahead);
            }
        }
        for (const auto& [rule, las] : reduces)
            for (const Symbol& la : las)
                if (shiftable.count(la))
                    report.shift_reduce.push_back({i, rule, la});
        for (auto ra = reduces.begin(); ra != reduces.end(); ++ra)
            for (auto rb = std::next(ra); rb != reduces.end(); ++rb)
                for (const Symbol& la : ra->second)
                    if (rb->second.count(la))
                        report.reduce_reduce.push_back(
                            {i, ra->first, rb->first, la});
    }
    return report;
}

}  // namespace netparse
