// The shift-reduce controller: pilot DFA over m-states, convergence
// classification, the three-clause deterministic-parsability check, the
// single-transition property, and kernel-merging into the compact pilot.
#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "netparse/analysis.hpp"
#include "netparse/basics.hpp"
#include "netparse/machine.hpp"

namespace netparse {

/// A macro-state: candidates grouped by state. The base part holds the
/// non-initial states, the closure part the initial ones.
struct MState {
    CandidateSet candidates;

    CandidateSet base() const {
        CandidateSet out;
        for (const auto& [q, la] : candidates)
            if (!q.is_initial()) out.emplace(q, la);
        return out;
    }
    CandidateSet closure_part() const {
        CandidateSet out;
        for (const auto& [q, la] : candidates)
            if (q.is_initial()) out.emplace(q, la);
        return out;
    }
    std::set<StateId> kernel() const {
        std::set<StateId> out;
        for (const auto& [q, la] : candidates) out.insert(q);
        return out;
    }

    friend bool operator==(const MState& a, const MState& b) {
        return a.candidates == b.candidates;
    }
};

/// A pilot edge whose source has two or more candidates reaching the same
/// state on the same symbol.
struct ConvergentEdge {
    int mstate;
    Symbol symbol;
    StateId target;
    std::vector<StateId> sources;  ///< >= 2 distinct source states
};

struct Pilot {
    std::vector<MState> mstates;  ///< index = m-state id; 0 = initial
    int initial = 0;
    std::map<std::pair<int, Symbol>, int> theta;
    std::vector<ConvergentEdge> convergent_edges;
    /// For compact pilots: merged_from[i] = ids of the source pilot's
    /// m-states collapsed into compact m-state i. Empty otherwise.
    std::vector<std::vector<int>> merged_from;

    std::optional<int> next(int mstate, const Symbol& x) const {
        auto it = theta.find({mstate, x});
        if (it == theta.end()) return std::nullopt;
        return it->second;
    }
    bool is_convergent(int mstate, const Symbol& x) const {
        for (const auto& e : convergent_edges)
            if (e.mstate == mstate && e.symbol == x) return true;
        return false;
    }
};

/// Conflict diagnostics; an empty report means the net is deterministically
/// parsable with one token of look-ahead (bottom-up).
struct ShiftReduceConflict {
    int mstate;
    StateId final_state;
    SymbolSet overlap;  ///< look-ahead ∩ shiftable terminals
};
struct ReduceReduceConflict {
    int mstate;
    StateId a, b;
    SymbolSet overlap;
};
struct ConvergenceConflict {
    int mstate;
    Symbol symbol;
    StateId a, b;        ///< converging source states
    SymbolSet overlap;   ///< their overlapping look-aheads
};
struct ConflictReport {
    std::vector<ShiftReduceConflict> shift_reduce;
    std::vector<ReduceReduceConflict> reduce_reduce;
    std::vector<ConvergenceConflict> convergence;

    bool empty() const {
        return shift_reduce.empty() && reduce_reduce.empty() &&
               convergence.empty();
    }
};

struct StpViolation {
    int mstate;
    Symbol symbol;
    StateId a, b;  ///< two candidates shifting on the same symbol
};

/// Result of shifting an m-state under one symbol: candidates merged by
/// look-ahead union, plus the pre-merge sources per target state (needed to
/// classify convergence and to chain stack candidates at parse time).
struct ShiftResult {
    CandidateSet merged;
    std::map<StateId, std::vector<std::pair<StateId, SymbolSet>>> sources;
};

inline ShiftResult shift_candidates(const MState& I, const Symbol& x,
                                    const MachineNet& net) {
    ShiftResult out;
    for (const auto& [p, la] : I.candidates) {
        auto r = net.target(p, x);
        if (!r) continue;
        out.merged[*r].insert(la.begin(), la.end());
        out.sources[*r].emplace_back(p, la);
    }
    return out;
}

/// Symbols on which any candidate of I can shift, terminals first, each
/// group lexicographic — the exploration order of the pilot construction.
inline std::vector<Symbol> shiftable_symbols(const MState& I,
                                             const MachineNet& net) {
    SymbolSet terms, nonterms;
    for (const auto& [q, la] : I.candidates)
        for (const auto& [x, t] : net.out_edges(q))
            (net.is_nonterminal(x) ? nonterms : terms).insert(x);
    std::vector<Symbol> out(terms.begin(), terms.end());
    out.insert(out.end(), nonterms.begin(), nonterms.end());
    return out;
}

/// Build the pilot: I_0 = closure(⟨0_S, ⊣⟩), then the worklist closure of
/// shift-and-close. M-state identity is exact candidate-set equality;
/// numbering follows FIFO discovery with symbols in shiftable_symbols order.
inline Pilot build_pilot(const MachineNet& net, const AnalysisTables& t) {
    Pilot p;
    std::map<CandidateSet, int> ids;

    auto intern = [&](CandidateSet cs) {
        auto [it, fresh] = ids.emplace(std::move(cs), (int)p.mstates.size());
        if (fresh) p.mstates.push_back(MState{it->first});
        return it->second;
    };

    CandidateSet seed{{StateId{net.axiom, 0}, SymbolSet{kEndMarker}}};
    intern(closure(seed, net, t));

    for (int i = 0; i < (int)p.mstates.size(); ++i) {
        MState I = p.mstates[i];  // copy: p.mstates may reallocate
        for (const Symbol& x : shiftable_symbols(I, net)) {
            ShiftResult shifted = shift_candidates(I, x, net);
            int j = intern(closure(shifted.merged, net, t));
            p.theta[{i, x}] = j;
            for (const auto& [target, srcs] : shifted.sources)
                if (srcs.size() >= 2) {
                    ConvergentEdge e{i, x, target, {}};
                    for (const auto& [src, la] : srcs)
                        e.sources.push_back(src);
                    p.convergent_edges.push_back(std::move(e));
                }
        }
    }
    return p;
}

/// Check the three determinism clauses: no shift-reduce conflict, no
/// reduce-reduce conflict, no convergent edge with overlapping look-aheads.
inline ConflictReport check_elr1(const Pilot& p, const MachineNet& net) {
    ConflictReport report;
    for (int i = 0; i < (int)p.mstates.size(); ++i) {
        const MState& I = p.mstates[i];
        SymbolSet shiftable;
        for (const auto& [q, la] : I.candidates)
            for (const auto& [x, t] : net.out_edges(q))
                if (!net.is_nonterminal(x)) shiftable.insert(x);

        std::vector<std::pair<StateId, const SymbolSet*>> finals;
        for (const auto& [q, la] : I.candidates)
            if (net.is_final(q)) finals.emplace_back(q, &la);

        for (const auto& [q, la] : finals) {
            SymbolSet overlap;
            for (const Symbol& a : *la)
                if (shiftable.count(a)) overlap.insert(a);
            if (!overlap.empty())
                report.shift_reduce.push_back({i, q, overlap});
        }
        for (size_t a = 0; a < finals.size(); ++a)
            for (size_t b = a + 1; b < finals.size(); ++b) {
                SymbolSet overlap;
                for (const Symbol& s : *finals[a].second)
                    if (finals[b].second->count(s)) overlap.insert(s);
                if (!overlap.empty())
                    report.reduce_reduce.push_back(
                        {i, finals[a].first, finals[b].first, overlap});
            }
    }
    for (const ConvergentEdge& e : p.convergent_edges) {
        const CandidateSet& cs = p.mstates[e.mstate].candidates;
        for (size_t a = 0; a < e.sources.size(); ++a)
            for (size_t b = a + 1; b < e.sources.size(); ++b) {
                const SymbolSet& la = cs.at(e.sources[a]);
                const SymbolSet& lb = cs.at(e.sources[b]);
                SymbolSet overlap;
                for (const Symbol& s : la)
                    if (lb.count(s)) overlap.insert(s);
                if (!overlap.empty())
                    report.convergence.push_back({e.mstate, e.symbol,
                                                  e.sources[a], e.sources[b],
                                                  overlap});
            }
    }
    return report;
}

/// Single-transition property: no m-state has two candidates with
/// transitions on the same symbol. Returns the first violation found.
inline std::optional<StpViolation> check_stp(const Pilot& p,
                                             const MachineNet& net) {
    for (int i = 0; i < (int)p.mstates.size(); ++i) {
        std::map<Symbol, StateId> seen;
        for (const auto& [q, la] : p.mstates[i].candidates)
            for (const auto& [x, t] : net.out_edges(q)) {
                auto [it, fresh] = seen.emplace(x, q);
                if (!fresh) return StpViolation{i, x, it->second, q};
            }
    }
    return std::nullopt;
}

/// Merge kernel-identical m-states (look-aheads unioned, edges redirected).
/// Only sound under the single-transition property, which is a checked
/// precondition. The result records the merged classes in `merged_from`.
inline Pilot compact_pilot(const Pilot& p, const MachineNet& net) {
    if (auto v = check_stp(p, net))
        throw PreconditionError(
            "compact_pilot requires the single-transition property; "
            "m-state I_" + std::to_string(v->mstate) + " shifts '" +
            v->symbol + "' from both " + v->a.str() + " and " + v->b.str());

    // Partition by kernel.
    std::map<std::set<StateId>, int> classes;
    std::vector<int> cls(p.mstates.size());
    for (size_t i = 0; i < p.mstates.size(); ++i) {
        auto [it, fresh] = classes.emplace(p.mstates[i].kernel(),
                                           (int)classes.size());
        cls[i] = it->second;
    }
    int n = (int)classes.size();

    std::vector<MState> merged(n);
    std::vector<std::vector<int>> members(n);
    for (size_t i = 0; i < p.mstates.size(); ++i) {
        members[cls[i]].push_back((int)i);
        for (const auto& [q, la] : p.mstates[i].candidates)
            merged[cls[i]].candidates[q].insert(la.begin(), la.end());
    }

    // Kernel-identical m-states must have kernel-identical successors; this
    // holds by construction of the pilot, so class-level edges are functions.
    std::map<std::pair<int, Symbol>, int> theta;
    for (const auto& [key, j] : p.theta) {
        auto [i, x] = key;
        auto [it, fresh] = theta.emplace(std::make_pair(cls[i], x), cls[j]);
        if (!fresh && it->second != cls[j])
            throw PreconditionError(
                "kernel partition is not a congruence of the pilot graph");
    }

    // Renumber classes breadth-first from the initial class, terminals first.
    Pilot out;
    std::map<int, int> order;
    std::queue<int> work;
    order[cls[p.initial]] = 0;
    work.push(cls[p.initial]);
    while (!work.empty()) {
        int c = work.front();
        work.pop();
        const MState& I = merged[c];
        for (const Symbol& x : shiftable_symbols(I, net)) {
            int d = theta.at({c, x});
            if (!order.count(d)) {
                order[d] = (int)order.size();
                work.push(d);
            }
        }
    }
    out.mstates.resize(order.size());
    out.merged_from.resize(order.size());
    for (const auto& [c, id] : order) {
        out.mstates[id] = merged[c];
        out.merged_from[id] = members[c];
    }
    for (const auto& [key, d] : theta) {
        auto [c, x] = key;
        if (order.count(c)) out.theta[{order.at(c), x}] = order.at(d);
    }
    // Under the single-transition property no edge can be convergent.
    return out;
}

}  // namespace netparse
