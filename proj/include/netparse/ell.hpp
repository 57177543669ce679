// Top-down machinery: prospect/guide fixpoint, the parser control-flow graph
// (PCFG), the ELL(1) condition checked through two independent routes, the
// pointerless bottom-up parser, the predictive parser with left-derivation
// output, and recursive-descent pseudo-code emission.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netparse/analysis.hpp"
#include "netparse/basics.hpp"
#include "netparse/elr_runtime.hpp"
#include "netparse/machine.hpp"
#include "netparse/parse_common.hpp"
#include "netparse/pilot.hpp"

namespace netparse {

/// A call edge q ⇢ 0_B of the PCFG, generated by a nonterminal shift
/// q —B→ r of the net; enabled when the next token is in the guide set.
struct CallEdge {
    StateId from;
    Symbol callee;
    StateId return_state;
    SymbolSet guide;
};

/// Parser control-flow graph: the net's states and shift edges plus call
/// edges with guide sets, and prospect sets on all states (used on finals).
struct Pcfg {
    std::map<StateId, SymbolSet> prospect;
    std::vector<CallEdge> call_edges;
    int iterations = 0;  ///< sweeps until the combined fixpoint stabilized

    const CallEdge* find_call(const StateId& from, const Symbol& callee) const {
        for (const auto& e : call_edges)
            if (e.from == from && e.callee == callee) return &e;
        return nullptr;
    }
};

/// Least fixpoint of the prospect and guide equations, computed directly on
/// the net (no pilot needed). Seeds: π(0_S) = {⊣}, everything else empty.
///  - shift rule: every edge p —X→ q propagates π(p) into π(q);
///  - call rule: every edge q —A→ r adds Ini(L(r)) ∪ (Nullable(r) ? π(q) : ∅)
///    into π(0_A);
///  - guide(q ⇢ 0_B), for q —B→ r: Ini(L(0_B)), plus Ini(L(r)) if B nullable,
///    plus π(r) if B and L(r) are both nullable, plus guide(0_B ⇢ 0_C) of
///    every call edge leaving 0_B.
inline Pcfg fixpoint_prospect_guide(const MachineNet& net,
                                    const AnalysisTables& t) {
    Pcfg f;
    std::vector<StateId> states = net.states();
    for (const StateId& q : states) f.prospect[q];
    f.prospect[{net.axiom, 0}].insert(kEndMarker);

    // Materialize the call edges (guides start empty).
    std::map<std::pair<StateId, Symbol>, size_t> call_index;
    for (const StateId& q : states)
        for (const auto& [x, r] : net.out_edges(q)) {
            if (!net.is_nonterminal(x)) continue;
            call_index[{q, x}] = f.call_edges.size();
            f.call_edges.push_back({q, x, StateId{q.owner, r}, {}});
        }

    auto add = [](SymbolSet& into, const SymbolSet& from, bool& changed) {
        size_t before = into.size();
        into.insert(from.begin(), from.end());
        if (into.size() != before) changed = true;
    };

    for (;;) {
        bool changed = false;
        ++f.iterations;
        for (const StateId& q : states) {
            for (const auto& [x, ri] : net.out_edges(q)) {
                StateId r{q.owner, ri};
                add(f.prospect[r], f.prospect[q], changed);
                if (!net.is_nonterminal(x)) continue;
                // Call rule for the callee's initial state.
                add(f.prospect[{x, 0}], t.initials(r), changed);
                if (t.nullable(r))
                    add(f.prospect[{x, 0}], f.prospect[q], changed);
                // Guide equations for the call edge q ⇢ 0_x.
                SymbolSet& g = f.call_edges[call_index.at({q, x})].guide;
                add(g, t.initials({x, 0}), changed);
                if (t.nullable(x)) {
                    add(g, t.initials(r), changed);
                    if (t.nullable(r)) add(g, f.prospect[r], changed);
                }
                for (const auto& [y, s] : net.out_edges({x, 0}))
                    if (net.is_nonterminal(y))
                        add(g, f.call_edges[call_index.at({StateId{x, 0}, y})]
                                   .guide,
                            changed);
            }
        }
        if (!changed) break;
    }
    return f;
}

/// Assemble the PCFG (prospects on finals, guides on call edges).
inline Pcfg build_pcfg(const MachineNet& net, const AnalysisTables& t) {
    return fixpoint_prospect_guide(net, t);
}

/// Test oracle: prospect of each final state computed the other way, as the
/// union of its look-aheads over all compact-pilot m-states.
inline std::map<StateId, SymbolSet> prospect_from_compact_pilot(
    const Pilot& compact, const MachineNet& net) {
    std::map<StateId, SymbolSet> out;
    for (const auto& I : compact.mstates)
        for (const auto& [q, la] : I.candidates)
            if (net.is_final(q)) out[q].insert(la.begin(), la.end());
    return out;
}

/// Two outgoing PCFG decisions of one state whose guide sets intersect.
struct GuideOverlap {
    StateId node;
    std::string edge_a, edge_b;  ///< e.g. "scan a", "call T", "return"
    SymbolSet overlap;
};

/// All guide-set overlaps: per state, the guides of terminal shifts ({a}),
/// call edges (γ) and the return decision (π of a final) must be disjoint.
inline std::vector<GuideOverlap> guide_overlaps(const Pcfg& f,
                                                const MachineNet& net) {
    std::vector<GuideOverlap> out;
    for (const StateId& q : net.states()) {
        std::vector<std::pair<std::string, SymbolSet>> decisions;
        for (const auto& [x, r] : net.out_edges(q))
            if (!net.is_nonterminal(x))
                decisions.emplace_back("scan " + x, SymbolSet{x});
        for (const auto& e : f.call_edges)
            if (e.from == q)
                decisions.emplace_back("call " + e.callee, e.guide);
        if (net.is_final(q))
            decisions.emplace_back("return", f.prospect.at(q));
        for (size_t i = 0; i < decisions.size(); ++i)
            for (size_t j = i + 1; j < decisions.size(); ++j) {
                SymbolSet overlap;
                for (const Symbol& s : decisions[i].second)
                    if (decisions[j].second.count(s)) overlap.insert(s);
                if (!overlap.empty())
                    out.push_back({q, decisions[i].first, decisions[j].first,
                                   overlap});
            }
    }
    return out;
}

/// Findings of the top-down determinism check.
struct Ell1Report {
    std::optional<LeftRecursionCycle> left_recursion;
    std::optional<StpViolation> stp_violation;
    ConflictReport elr1_conflicts;
    std::vector<GuideOverlap> overlaps;

    bool clean() const {
        return !left_recursion && !stp_violation && elr1_conflicts.empty() &&
               overlaps.empty();
    }
};

/// Check the top-down condition twice: structurally (no left recursion +
/// bottom-up clean + single-transition property) and via guide-set
/// disjointness. The two routes are provably equivalent; a disagreement
/// would be a bug in this library and throws.
inline Ell1Report check_ell1(const MachineNet& net, const AnalysisTables& t,
                             const Pilot& pilot) {
    Ell1Report r;
    r.left_recursion = detect_left_recursion(net, t);
    r.stp_violation = check_stp(pilot, net);
    r.elr1_conflicts = check_elr1(pilot, net);
    r.overlaps = guide_overlaps(fixpoint_prospect_guide(net, t), net);

    bool structural_clean = !r.left_recursion && !r.stp_violation &&
                            r.elr1_conflicts.empty();
    if (structural_clean != r.overlaps.empty())
        throw PreconditionError(
            "internal inconsistency: structural top-down check and guide-set "
            "disjointness disagree");
    return r;
}

/// Pointerless bottom-up parser driven by the compact pilot (requires the
/// single-transition property). Stack elements carry only the set of still-
/// alive states; shifts from non-initial states prune to the base, and a
/// reduction of machine A pops to the topmost deeper element still holding
/// 0_A alive.
inline ParseOutcome parse_pointerless(const Pilot& compact,
                                      const MachineNet& net,
                                      const std::vector<Symbol>& tokens) {
    struct Elem {
        int mstate;
        std::set<StateId> alive;
    };
    ParseOutcome out;
    std::vector<Elem> elems;
    std::vector<Symbol> syms;
    std::vector<SyntaxTree> trees;

    auto kernel_of = [&](int m) { return compact.mstates[m].kernel(); };
    elems.push_back({compact.initial, kernel_of(compact.initial)});

    auto describe = [&](const Elem& e) {
        std::string s = "K" + std::to_string(e.mstate) + "{";
        bool first = true;
        for (const auto& q : e.alive) {
            if (!first) s += " ";
            first = false;
            s += q.str();
        }
        return s + "}";
    };
    out.trace.push_back("init  " + describe(elems.back()));

    size_t ip = 0;
    auto current = [&]() -> const Symbol& {
        return ip < tokens.size() ? tokens[ip] : kEndMarker;
    };

    // Shift X: prune the top to its base unless the move leaves an initial
    // state, then push the full target kernel.
    auto shift = [&](const Symbol& x, SyntaxTree tree) {
        Elem& top = elems.back();
        StateId source{};
        bool found = false;
        for (const StateId& q : top.alive)
            if (net.target(q, x)) {
                source = q;
                found = true;
                break;  // unique under the single-transition property
            }
        (void)found;
        if (!source.is_initial()) {
            std::set<StateId> base;
            for (const StateId& q : top.alive)
                if (!q.is_initial()) base.insert(q);
            top.alive = std::move(base);
        }
        int j = *compact.next(top.mstate, x);
        elems.push_back({j, kernel_of(j)});
        syms.push_back(x);
        trees.push_back(std::move(tree));
        out.trace.push_back("shift " + x + "  " + describe(elems.back()));
    };

    auto syntax_error = [&]() {
        const Elem& top = elems.back();
        ParseError err{ip, {}};
        for (const Symbol& a : net.terminals)
            if (compact.next(top.mstate, a)) err.expected.insert(a);
        for (const StateId& q : top.alive)
            if (net.is_final(q)) {
                const SymbolSet& la =
                    compact.mstates[top.mstate].candidates.at(q);
                err.expected.insert(la.begin(), la.end());
            }
        out.error = err;
        out.trace.push_back("error at token " + std::to_string(ip) +
                            ", expected " + join_symbols(err.expected));
    };

    for (;;) {
        const Symbol& a = current();
        Elem& top = elems.back();
        const CandidateSet& cands = compact.mstates[top.mstate].candidates;

        std::optional<StateId> chosen;
        for (const StateId& q : top.alive) {
            if (!net.is_final(q) || !cands.at(q).count(a)) continue;
            if (chosen)
                throw PreconditionError("two enabled reductions on '" + a +
                                        "' (pilot not conflict-free)");
            chosen = q;
        }

        if (chosen) {
            Symbol A = chosen->owner;
            SyntaxTree node;
            Reduction red;
            red.nonterminal = A;
            if (chosen->is_initial()) {
                node = SyntaxTree::make_node(A, {});
            } else {
                // Pop to the topmost deeper element where 0_A is alive.
                size_t h = elems.size() - 1;
                StateId init{A, 0};
                for (;;) {
                    if (h == 0 && !elems[0].alive.count(init))
                        throw PreconditionError(
                            "no live activation of " + A + " on the stack");
                    --h;
                    if (elems[h].alive.count(init)) break;
                }
                std::vector<SyntaxTree> kids(trees.begin() + h, trees.end());
                red.handle.assign(syms.begin() + h, syms.end());
                node = SyntaxTree::make_node(A, std::move(kids));
                elems.resize(h + 1);
                syms.resize(h);
                trees.resize(h);
            }
            out.trace.push_back("reduce " + red.str());
            out.reductions.push_back(std::move(red));

            if (A == net.axiom && elems.size() == 1 && a == kEndMarker) {
                out.accepted = true;
                out.tree = std::move(node);
                out.trace.push_back("accept");
                return out;
            }
            if (!compact.next(elems.back().mstate, A)) {
                syntax_error();
                return out;
            }
            shift(A, std::move(node));
            continue;
        }

        if (a != kEndMarker && compact.next(top.mstate, a)) {
            shift(a, SyntaxTree::make_leaf(a));
            ++ip;
            continue;
        }

        syntax_error();
        return out;
    }
}

/// A leftmost derivation in the right-linearized grammar: one rule
/// application per predictive-parser move.
using LeftDerivation = std::vector<RlRule>;

struct PredictiveResult {
    ParseOutcome outcome;
    LeftDerivation derivation;
};

/// Predictive (goto-style) parser over the PCFG. The stack holds machine
/// states only: the active state on top, suspended return states below.
inline PredictiveResult parse_predictive(const Pcfg& f, const MachineNet& net,
                                         const std::vector<Symbol>& tokens) {
    PredictiveResult res;
    ParseOutcome& out = res.outcome;

    std::vector<StateId> stack{StateId{net.axiom, 0}};
    std::vector<SyntaxTree> nodes{SyntaxTree::make_node(net.axiom, {})};

    size_t ip = 0;
    auto current = [&]() -> const Symbol& {
        return ip < tokens.size() ? tokens[ip] : kEndMarker;
    };
    auto stack_str = [&]() {
        std::string s;
        for (const auto& q : stack) s += "⟨" + q.str() + "⟩";
        return s;
    };

    for (;;) {
        const Symbol& cc = current();
        StateId q = stack.back();

        // Scan: a terminal shift on the current token.
        if (auto r = net.target(q, cc); r && cc != kEndMarker) {
            res.derivation.push_back(
                {q, {RlSymbol{false, cc, {}}, RlSymbol{true, {}, *r}}});
            out.trace.push_back(stack_str() + "  scan " + cc);
            stack.back() = *r;
            nodes.back().children.push_back(SyntaxTree::make_leaf(cc));
            ++ip;
            continue;
        }

        // Call: the unique call edge whose guide set holds the token.
        const CallEdge* call = nullptr;
        for (const auto& e : f.call_edges)
            if (e.from == q && e.guide.count(cc)) {
                call = &e;
                break;  // guides are disjoint for valid inputs
            }
        if (call) {
            res.derivation.push_back(
                {q, {RlSymbol{true, {}, StateId{call->callee, 0}},
                     RlSymbol{true, {}, call->return_state}}});
            out.trace.push_back(stack_str() + "  call " + call->callee);
            stack.back() = call->return_state;
            stack.push_back({call->callee, 0});
            nodes.push_back(SyntaxTree::make_node(call->callee, {}));
            continue;
        }

        if (net.is_final(q) && f.prospect.at(q).count(cc)) {
            if (stack.size() == 1) {
                // Recognition: outermost activation may only end the input.
                if (cc == kEndMarker) {
                    res.derivation.push_back({q, {}});
                    out.trace.push_back(stack_str() + "  accept");
                    out.accepted = true;
                    out.tree = std::move(nodes.back());
                    return res;
                }
            } else {
                // Return to the suspended caller.
                res.derivation.push_back({q, {}});
                out.trace.push_back(stack_str() + "  return");
                stack.pop_back();
                SyntaxTree done = std::move(nodes.back());
                nodes.pop_back();
                nodes.back().children.push_back(std::move(done));
                continue;
            }
        }

        ParseError err{ip, {}};
        for (const auto& [x, r] : net.out_edges(q))
            if (!net.is_nonterminal(x)) err.expected.insert(x);
        for (const auto& e : f.call_edges)
            if (e.from == q) err.expected.insert(e.guide.begin(),
                                                 e.guide.end());
        if (net.is_final(q)) {
            const SymbolSet& pi = f.prospect.at(q);
            err.expected.insert(pi.begin(), pi.end());
        }
        out.error = err;
        out.trace.push_back("error at token " + std::to_string(ip) +
                            ", expected " + join_symbols(err.expected));
        return res;
    }
}

/// Replay a left derivation from the axiom's initial state, expanding the
/// leftmost state symbol at each step. Returns every sentential form (the
/// first is [0_S]); throws if a step does not apply.
inline std::vector<std::vector<RlSymbol>> replay_left_derivation(
    const LeftDerivation& d, const StateId& axiom_initial) {
    std::vector<std::vector<RlSymbol>> forms;
    std::vector<RlSymbol> form{RlSymbol{true, {}, axiom_initial}};
    forms.push_back(form);
    for (const RlRule& step : d) {
        auto it = std::find_if(form.begin(), form.end(),
                               [](const RlSymbol& s) { return s.is_state; });
        if (it == form.end() || it->state != step.lhs)
            throw PreconditionError("left-derivation replay mismatch at " +
                                    step.lhs.str());
        it = form.erase(it);
        form.insert(it, step.rhs.begin(), step.rhs.end());
        forms.push_back(form);
    }
    return forms;
}

/// Leftmost expansion of a syntax tree into sentential forms of the EBNF
/// grammar, e.g. E ⇒ T ⇒ ( E ) ⇒ ( T ) ⇒ ( a ).
inline std::vector<std::vector<Symbol>> g_derivation(const SyntaxTree& root) {
    struct Item {
        const SyntaxTree* node;  // null for terminals
        Symbol label;
    };
    std::vector<Item> form{{&root, root.label}};
    std::vector<std::vector<Symbol>> out;
    auto snapshot = [&]() {
        std::vector<Symbol> s;
        for (const auto& it : form) s.push_back(it.label);
        out.push_back(std::move(s));
    };
    snapshot();
    for (;;) {
        auto it = std::find_if(form.begin(), form.end(),
                               [](const Item& i) { return i.node != nullptr; });
        if (it == form.end()) break;
        const SyntaxTree* node = it->node;
        it = form.erase(it);
        std::vector<Item> kids;
        for (const auto& c : node->children)
            kids.push_back({c.leaf ? nullptr : &c, c.label});
        form.insert(it, kids.begin(), kids.end());
        snapshot();
    }
    return out;
}

/// Emit language-neutral recursive-descent pseudo-code: one procedure per
/// machine, one labeled block per state, guarded scan/call/return decisions.
/// Refuses when the guide sets overlap (the net is not top-down parsable).
inline std::string emit_recursive_descent(const Pcfg& f,
                                          const MachineNet& net) {
    if (!guide_overlaps(f, net).empty())
        throw PreconditionError(
            "recursive-descent emission requires disjoint guide sets");
    std::string out;
    for (const auto& [name, m] : net.machines) {
        out += "procedure " + name + "\n";
        for (int s = 0; s < m.num_states; ++s) {
            StateId q{name, s};
            out += "  state " + std::to_string(s) + ":\n";
            for (const auto& [x, r] : m.out_edges(s)) {
                if (net.is_nonterminal(x)) {
                    const CallEdge* e = f.find_call(q, x);
                    out += "    if next in " + join_symbols(e->guide) +
                           " then call " + x + " then goto " +
                           std::to_string(r) + "\n";
                } else {
                    out += "    if next in {" + x + "} then scan " + x +
                           " then goto " + std::to_string(r) + "\n";
                }
            }
            if (m.is_final(s))
                out += "    if next in " + join_symbols(f.prospect.at(q)) +
                       " then return\n";
            out += "    else error\n";
        }
        out += "end\n\n";
    }
    out += "main\n  call " + net.axiom + "\n  if next in {" + kEndMarker +
           "} then accept else error\nend\n";
    return out;
}

}  // namespace netparse
