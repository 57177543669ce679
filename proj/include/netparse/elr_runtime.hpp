// Bottom-up parse engines driven by a pilot: the cid-chained stack automaton
// and the vector-stack variant. Both emit the syntax tree and the ordered
// reduction sequence (a reversed rightmost derivation).
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "netparse/analysis.hpp"
#include "netparse/basics.hpp"
#include "netparse/machine.hpp"
#include "netparse/parse_common.hpp"
#include "netparse/pilot.hpp"

namespace netparse {

/// A stack candidate. `link` disambiguates handle recovery:
///  - cid engine: 0-based position of the source candidate in the element
///    below, or -1 (⊥) iff the state is initial;
///  - vector engine: 0-based stack position of the element holding the
///    machine's initial activation (own position for closure candidates).
struct StackCandidate {
    StateId state;
    SymbolSet lookahead;
    int link;
};

struct StackElem {
    int mstate;  ///< pilot m-state this element mirrors
    std::vector<StackCandidate> cands;
};

namespace detail {

enum class ElrMode { Cid, Vector };

struct ElrStack {
    std::vector<StackElem> elems;
    // Grammar symbols and their trees, interleaved: syms[i] sits between
    // elems[i] and elems[i+1].
    std::vector<Symbol> syms;
    std::vector<SyntaxTree> trees;
};

inline std::string describe_elem(const StackElem& e) {
    std::string out = "I" + std::to_string(e.mstate) + "{";
    bool first = true;
    for (const auto& c : e.cands) {
        if (!first) out += " ";
        first = false;
        out += c.state.str();
        out += c.link < 0 ? "#⊥" : "#" + std::to_string(c.link + 1);
    }
    return out + "}";
}

// Push the element reached by shifting X from the current top: base
// candidates first (one per source candidate with a transition, unmerged, in
// source order), then the pilot m-state's closure candidates (state-sorted).
inline void elr_shift(ElrStack& st, const Pilot& pilot, const MachineNet& net,
                      ElrMode mode, const Symbol& x, SyntaxTree tree,
                      std::vector<std::string>& trace) {
    const StackElem& top = st.elems.back();
    int j = *pilot.next(top.mstate, x);

    StackElem next{j, {}};
    int new_pos = static_cast<int>(st.elems.size());
    for (size_t i = 0; i < top.cands.size(); ++i) {
        const StackCandidate& c = top.cands[i];
        auto r = net.target(c.state, x);
        if (!r) continue;
        int link = mode == ElrMode::Cid ? static_cast<int>(i) : c.link;
        next.cands.push_back({*r, c.lookahead, link});
    }
    for (const auto& [q, la] : pilot.mstates[j].candidates) {
        if (!q.is_initial()) continue;
        int link = mode == ElrMode::Cid ? -1 : new_pos;
        next.cands.push_back({q, la, link});
    }
    trace.push_back("shift " + x + ": I" + std::to_string(top.mstate) +
                    " -> I" + std::to_string(j) +
                    (pilot.is_convergent(top.mstate, x) ? " (convergent)"
                                                        : "") +
                    "  " + describe_elem(next));
    st.syms.push_back(x);
    st.trees.push_back(std::move(tree));
    st.elems.push_back(std::move(next));
}

inline ParseOutcome parse_elr_impl(const Pilot& pilot, const MachineNet& net,
                                   const std::vector<Symbol>& tokens,
                                   ElrMode mode) {
    ParseOutcome out;
    ElrStack st;

    // J_0: the initial m-state's candidates, ⊥-linked (they are all initial).
    StackElem j0{pilot.initial, {}};
    for (const auto& [q, la] : pilot.mstates[pilot.initial].candidates)
        j0.cands.push_back({q, la, mode == ElrMode::Cid ? -1 : 0});
    st.elems.push_back(std::move(j0));
    out.trace.push_back("init  " + describe_elem(st.elems.back()));

    size_t ip = 0;
    auto current = [&]() -> const Symbol& {
        return ip < tokens.size() ? tokens[ip] : kEndMarker;
    };

    auto syntax_error = [&]() {
        const StackElem& top = st.elems.back();
        ParseError err{ip, {}};
        for (const Symbol& a : net.terminals)
            if (pilot.next(top.mstate, a)) err.expected.insert(a);
        for (const auto& c : top.cands)
            if (net.is_final(c.state))
                err.expected.insert(c.lookahead.begin(), c.lookahead.end());
        out.error = err;
        out.trace.push_back("error at token " + std::to_string(ip) +
                            ", expected " + join_symbols(err.expected));
    };

    for (;;) {
        const Symbol& a = current();
        StackElem& top = st.elems.back();

        // Reduction move: the (unique) final stack candidate with a ∈ ρ.
        const StackCandidate* chosen = nullptr;
        for (const auto& c : top.cands) {
            if (!net.is_final(c.state) || !c.lookahead.count(a)) continue;
            if (chosen)
                throw PreconditionError(
                    "two enabled reductions on '" + a + "': " +
                    chosen->state.str() + " and " + c.state.str() +
                    " (pilot not conflict-free)");
            chosen = &c;
        }

        if (chosen) {
            Symbol A = chosen->state.owner;
            SyntaxTree node;
            Reduction red;
            red.nonterminal = A;
            bool initial_candidate =
                mode == ElrMode::Cid
                    ? chosen->link < 0
                    : chosen->link == static_cast<int>(st.elems.size()) - 1;
            if (initial_candidate) {
                // ε ⤳ A: nothing is popped.
                node = SyntaxTree::make_node(A, {});
            } else {
                size_t h;  // stack position of the machine's activation
                if (mode == ElrMode::Vector) {
                    h = static_cast<size_t>(chosen->link);
                } else {
                    // Walk the cid chain down to the ⊥-linked candidate.
                    size_t k = st.elems.size() - 1;
                    int link = chosen->link;
                    while (link >= 0) {
                        --k;
                        link = st.elems[k].cands[link].link;
                    }
                    h = k;
                }
                std::vector<SyntaxTree> kids(st.trees.begin() + h,
                                             st.trees.end());
                red.handle.assign(st.syms.begin() + h, st.syms.end());
                node = SyntaxTree::make_node(A, std::move(kids));
                st.elems.resize(h + 1);
                st.syms.resize(h);
                st.trees.resize(h);
            }
            out.trace.push_back("reduce " + red.str());
            out.reductions.push_back(std::move(red));

            if (A == net.axiom && st.elems.size() == 1 && a == kEndMarker) {
                out.accepted = true;
                out.tree = std::move(node);
                out.trace.push_back("accept");
                return out;
            }
            if (!pilot.next(st.elems.back().mstate, A)) {
                syntax_error();
                return out;
            }
            elr_shift(st, pilot, net, mode, A, std::move(node), out.trace);
            continue;
        }

        if (a != kEndMarker && pilot.next(top.mstate, a)) {
            elr_shift(st, pilot, net, mode, a, SyntaxTree::make_leaf(a),
                      out.trace);
            ++ip;
            continue;
        }

        syntax_error();
        return out;
    }
}

}  // namespace detail

/// Shift-reduce parse with candidate-identifier back-links (handle found by
/// walking the cid chain). Requires a conflict-free pilot.
inline ParseOutcome parse_elr_cid(const Pilot& pilot, const MachineNet& net,
                                  const std::vector<Symbol>& tokens) {
    return detail::parse_elr_impl(pilot, net, tokens, detail::ElrMode::Cid);
}

/// Vector-stack variant: candidates carry the absolute stack position of
/// their machine's activation, so reductions pop directly to it.
inline ParseOutcome parse_elr_vector(const Pilot& pilot,
                                     const MachineNet& net,
                                     const std::vector<Symbol>& tokens) {
    return detail::parse_elr_impl(pilot, net, tokens,
                                  detail::ElrMode::Vector);
}

}  // namespace netparse
