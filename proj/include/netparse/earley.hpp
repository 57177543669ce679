// Tabular (Earley-style) recognition over machine nets, without look-ahead,
// plus syntax-tree extraction for non-ambiguous grammars.
#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netparse/basics.hpp"
#include "netparse/machine.hpp"
#include "netparse/parse_common.hpp"

namespace netparse {

/// ⟨state, origin⟩: the machine activation started right after position j.
using EarleyPair = std::pair<StateId, int>;

/// One element E[i] of the vector: a set of pairs with recorded insertion
/// order (for reproducible traces and worklist processing).
struct EarleyElement {
    std::set<EarleyPair> pairs;
    std::vector<EarleyPair> order;

    bool add(const EarleyPair& p) {
        if (!pairs.insert(p).second) return false;
        order.push_back(p);
        return true;
    }
    bool contains(const EarleyPair& p) const { return pairs.count(p) != 0; }
    bool empty() const { return pairs.empty(); }
};

struct EarleyVector {
    std::vector<EarleyElement> e;  ///< E[0..n]
    std::vector<Symbol> input;
};

/// Closure + nonterminal shift on E[i], repeated until no pair is added:
///  - closure: ⟨p, j⟩ ∈ E[i] with p —X→ q (X nonterminal) adds ⟨0_X, i⟩;
///  - nonterminal shift: ⟨f, j⟩ ∈ E[i] with f final in machine X, and a
///    caller ⟨p, l⟩ ∈ E[j] with p —X→ q, adds ⟨q, l⟩.
inline void completion(EarleyVector& E, int i, const MachineNet& net) {
    EarleyElement& elem = E.e[i];
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t idx = 0; idx < elem.order.size(); ++idx) {
            EarleyPair cur = elem.order[idx];
            const auto& [p, j] = cur;
            for (const auto& [x, r] : net.out_edges(p))
                if (net.is_nonterminal(x))
                    changed |= elem.add({StateId{x, 0}, i});
            if (net.is_final(p)) {
                const Symbol& X = p.owner;
                const EarleyElement& origin = E.e[j];
                for (size_t c = 0; c < origin.order.size(); ++c) {
                    const auto& [caller, l] = origin.order[c];
                    auto q = net.target(caller, X);
                    if (q) changed |= elem.add({*q, l});
                }
            }
        }
    }
}

/// E[i] += {⟨q, j⟩ : ⟨p, j⟩ ∈ E[i−1], δ(p, x_i) = q}.
inline void terminal_shift(EarleyVector& E, int i, const MachineNet& net) {
    const Symbol& x = E.input[i - 1];
    for (const EarleyPair& pr : E.e[i - 1].order) {
        auto q = net.target(pr.first, x);
        if (q) E.e[i].add({*q, pr.second});
    }
}

/// Run the tabular analysis; accepted iff ⟨f, 0⟩ ∈ E[n] for a final state f
/// of the axiom's machine. Stops early once an element stays empty.
inline std::pair<bool, EarleyVector> earley_recognize(
    const MachineNet& net, const std::vector<Symbol>& tokens) {
    int n = static_cast<int>(tokens.size());
    EarleyVector E;
    E.input = tokens;
    E.e.resize(n + 1);
    E.e[0].add({StateId{net.axiom, 0}, 0});
    completion(E, 0, net);
    for (int i = 1; i <= n; ++i) {
        if (E.e[i - 1].empty()) break;
        terminal_shift(E, i, net);
        completion(E, i, net);
    }
    bool accepted = false;
    const Machine& axiom = net.machine_of(net.axiom);
    for (int f : axiom.finals)
        if (E.e[n].contains({StateId{net.axiom, f}, 0})) accepted = true;
    return {accepted, std::move(E)};
}

/// More than one way to rebuild the tree: the grammar (or this input) is
/// ambiguous, which tree extraction does not support.
struct AmbiguityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rebuild the syntax tree for X ⇒+ x_{j+1} … x_i given ⟨f, j⟩ ∈ E[i] with
/// f final in machine X. Children are recovered right-to-left by undoing
/// terminal shifts (guard a) and nonterminal shifts (guard b); if more than
/// one (guard, witness) combination applies at any step, the input is
/// ambiguous and an AmbiguityError is thrown.
inline SyntaxTree build_tree(const Symbol& X, const StateId& f, int j, int i,
                             const EarleyVector& E, const MachineNet& net) {
    std::vector<SyntaxTree> children;
    StateId q = f;
    int k = i;
    while (!(q.owner == X && q.is_initial())) {
        struct Witness {
            bool terminal;
            StateId p;
            // guard (b) only:
            Symbol callee;
            StateId final_state;
            int h;
        };
        std::vector<Witness> found;

        // Guard (a): q was entered by scanning x_k from some ⟨p, j⟩ ∈ E[k-1].
        if (k - 1 >= j) {
            const Symbol& xk = E.input[k - 1];
            for (const EarleyPair& pr : E.e[k - 1].order) {
                if (pr.second != j || pr.first.owner != X) continue;
                auto t = net.target(pr.first, xk);
                if (t && *t == q) found.push_back({true, pr.first, {}, {}, 0});
            }
        }
        // Guard (b): q was entered by a nonterminal shift over Y, completed
        // at k with some ⟨e, h⟩ ∈ E[k] (e final in M_Y) and ⟨p, j⟩ ∈ E[h].
        for (const EarleyPair& pr : E.e[k].order) {
            const auto& [e, h] = pr;
            if (h < j || h > k) continue;
            const Symbol& Y = e.owner;
            if (!net.is_final(e)) continue;
            // Skip the degenerate self-witness (no progress possible).
            if (Y == X && e == f && h == j && k == i) continue;
            for (const EarleyPair& caller : E.e[h].order) {
                if (caller.second != j || caller.first.owner != X) continue;
                auto t = net.target(caller.first, Y);
                if (t && *t == q)
                    found.push_back({false, caller.first, Y, e, h});
            }
        }

        if (found.empty())
            throw PreconditionError("tree reconstruction found no witness at "
                                    "position " + std::to_string(k));
        if (found.size() > 1)
            throw AmbiguityError(
                "ambiguous input: " + std::to_string(found.size()) +
                " distinct reconstructions at position " + std::to_string(k) +
                " while rebuilding " + X);

        const Witness& w = found.front();
        if (w.terminal) {
            children.insert(children.begin(),
                            SyntaxTree::make_leaf(E.input[k - 1]));
            q = w.p;
            k = k - 1;
        } else {
            children.insert(
                children.begin(),
                build_tree(w.callee, w.final_state, w.h, k, E, net));
            q = w.p;
            k = w.h;
        }
    }
    return SyntaxTree::make_node(X, std::move(children));
}

/// Full parse via the tabular engine: recognize, then rebuild the tree from
/// the accepting pair.
inline ParseOutcome parse_earley(const MachineNet& net,
                                 const std::vector<Symbol>& tokens) {
    ParseOutcome out;
    auto [accepted, E] = earley_recognize(net, tokens);
    int n = static_cast<int>(tokens.size());
    for (int i = 0; i <= n; ++i) {
        std::string line = "E[" + std::to_string(i) + "]:";
        for (const EarleyPair& pr : E.e[i].order)
            line += " ⟨" + pr.first.str() + "," + std::to_string(pr.second) +
                    "⟩";
        out.trace.push_back(line);
    }
    if (!accepted) {
        // Report the first empty element (or the end) as the error point.
        size_t bad = tokens.size();
        for (size_t i = 0; i < E.e.size(); ++i)
            if (E.e[i].empty()) {
                bad = i == 0 ? 0 : i - 1;
                break;
            }
        out.error = ParseError{bad, {}};
        return out;
    }
    const Machine& axiom = net.machine_of(net.axiom);
    std::vector<StateId> accepting;
    for (int f : axiom.finals)
        if (E.e[n].contains({StateId{net.axiom, f}, 0}))
            accepting.push_back({net.axiom, f});
    if (accepting.size() > 1)
        throw AmbiguityError("ambiguous input: " +
                             std::to_string(accepting.size()) +
                             " accepting final states");
    out.accepted = true;
    out.tree = build_tree(net.axiom, accepting.front(), 0, n, E, net);
    return out;
}

}  // namespace netparse
