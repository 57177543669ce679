// Command-line orchestration: grammar loading, checks, graph export, parsing
// with a selectable engine, recursive-descent emission, and the LR(1) oracle
// comparison. Kept in a header (taking streams) so it is directly testable.
#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netparse/netparse.hpp"

namespace netparse {

struct RunConfig {
    std::string command;  ///< check | analyze | graph | parse | emit-rd | oracle
    std::string grammar_path;
    std::string algo = "elr";  ///< elr | elr-vector | pointerless | predictive | earley
    std::string what = "net";  ///< graph: net | pilot | compact | pcfg
    std::optional<std::string> input;  ///< parse: token string (stdin if unset)
    std::string format = "text";       ///< text | json | dot
    std::string out_path;              ///< graph: write DOT here instead of stdout
    bool trace = false;
    bool minimize = false;
    bool chars = false;       ///< split parse input into single characters
    bool want_elr1 = false;   ///< check: --elr1
    bool want_ell1 = false;   ///< check: --ell1
};

namespace cli_detail {

using nlohmann::json;

inline json to_json(const SymbolSet& s) {
    json a = json::array();
    for (const auto& x : s) a.push_back(x);
    return a;
}

inline json to_json(const ConflictReport& r) {
    json out;
    out["shift_reduce"] = json::array();
    for (const auto& c : r.shift_reduce)
        out["shift_reduce"].push_back({{"mstate", c.mstate},
                                       {"state", c.final_state.str()},
                                       {"overlap", to_json(c.overlap)}});
    out["reduce_reduce"] = json::array();
    for (const auto& c : r.reduce_reduce)
        out["reduce_reduce"].push_back({{"mstate", c.mstate},
                                        {"a", c.a.str()},
                                        {"b", c.b.str()},
                                        {"overlap", to_json(c.overlap)}});
    out["convergence"] = json::array();
    for (const auto& c : r.convergence)
        out["convergence"].push_back({{"mstate", c.mstate},
                                      {"symbol", c.symbol},
                                      {"a", c.a.str()},
                                      {"b", c.b.str()},
                                      {"overlap", to_json(c.overlap)}});
    return out;
}

inline json tree_json(const SyntaxTree& t) {
    if (t.leaf) return t.label;
    json kids = json::array();
    for (const auto& c : t.children) kids.push_back(tree_json(c));
    return json{{"nonterminal", t.label}, {"children", kids}};
}

inline std::vector<Symbol> split_tokens(const std::string& text, bool chars) {
    std::vector<Symbol> tokens;
    if (chars) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                tokens.emplace_back(1, c);
        return tokens;
    }
    std::istringstream in(text);
    Symbol tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

struct Loaded {
    Grammar grammar;
    MachineNet net;
    AnalysisTables tables;
};

inline Loaded load(const RunConfig& cfg) {
    std::ifstream file(cfg.grammar_path);
    if (!file)
        throw GrammarError("cannot open grammar file: " + cfg.grammar_path);
    std::stringstream buf;
    buf << file.rdbuf();
    Loaded l;
    l.grammar = parse_ebnf(buf.str());
    l.net = build_net(l.grammar, cfg.minimize);
    l.tables = compute_ini(l.net);
    return l;
}

inline int run_check(const RunConfig& cfg, const Loaded& l,
                     std::ostream& out) {
    bool do_elr = cfg.want_elr1 || !cfg.want_ell1;
    bool do_ell = cfg.want_ell1 || !cfg.want_elr1;
    Pilot pilot = build_pilot(l.net, l.tables);
    bool ok = true;
    json j{{"schema", "netparse/1"}, {"command", "check"}};

    if (do_elr) {
        ConflictReport r = check_elr1(pilot, l.net);
        j["elr1"] = {{"clean", r.empty()},
                     {"mstates", pilot.mstates.size()},
                     {"convergent_edges", pilot.convergent_edges.size()},
                     {"conflicts", to_json(r)}};
        if (cfg.format == "text") {
            if (r.empty()) {
                out << "ELR(1): OK, pilot m-states: " << pilot.mstates.size()
                    << "\n";
            } else {
                out << "ELR(1): FAIL (" << r.shift_reduce.size()
                    << " shift-reduce, " << r.reduce_reduce.size()
                    << " reduce-reduce, " << r.convergence.size()
                    << " convergence)\n";
                for (const auto& c : r.shift_reduce)
                    out << "  shift-reduce in I" << c.mstate << " at "
                        << c.final_state.str() << " on "
                        << join_symbols(c.overlap) << "\n";
                for (const auto& c : r.reduce_reduce)
                    out << "  reduce-reduce in I" << c.mstate << " between "
                        << c.a.str() << " and " << c.b.str() << " on "
                        << join_symbols(c.overlap) << "\n";
                for (const auto& c : r.convergence)
                    out << "  convergence conflict in I" << c.mstate
                        << " on '" << c.symbol << "' (" << c.a.str() << ", "
                        << c.b.str() << ") look-aheads overlap "
                        << join_symbols(c.overlap) << "\n";
            }
        }
        ok = ok && r.empty();
    }
    if (do_ell) {
        Ell1Report r = check_ell1(l.net, l.tables, pilot);
        json je{{"clean", r.clean()}};
        je["left_recursion"] = json::array();
        if (r.left_recursion)
            for (const auto& q : *r.left_recursion)
                je["left_recursion"].push_back(q.str());
        je["stp_violation"] =
            r.stp_violation
                ? json{{"mstate", r.stp_violation->mstate},
                       {"symbol", r.stp_violation->symbol},
                       {"a", r.stp_violation->a.str()},
                       {"b", r.stp_violation->b.str()}}
                : json();
        je["elr1_conflicts"] = to_json(r.elr1_conflicts);
        je["guide_overlaps"] = json::array();
        for (const auto& o : r.overlaps)
            je["guide_overlaps"].push_back({{"node", o.node.str()},
                                            {"a", o.edge_a},
                                            {"b", o.edge_b},
                                            {"overlap", to_json(o.overlap)}});
        j["ell1"] = je;
        if (cfg.format == "text") {
            if (r.clean()) {
                out << "ELL(1): OK\n";
            } else {
                out << "ELL(1): FAIL\n";
                if (r.left_recursion) {
                    out << "  left recursion:";
                    for (const auto& q : *r.left_recursion)
                        out << " " << q.str();
                    out << "\n";
                }
                if (r.stp_violation)
                    out << "  multiple transitions in I"
                        << r.stp_violation->mstate << " on '"
                        << r.stp_violation->symbol << "' from "
                        << r.stp_violation->a.str() << " and "
                        << r.stp_violation->b.str() << "\n";
                if (!r.elr1_conflicts.empty())
                    out << "  bottom-up conflicts: "
                        << r.elr1_conflicts.shift_reduce.size() << " sr, "
                        << r.elr1_conflicts.reduce_reduce.size() << " rr, "
                        << r.elr1_conflicts.convergence.size() << " conv\n";
                for (const auto& o : r.overlaps)
                    out << "  guide overlap at " << o.node.str() << ": "
                        << o.edge_a << " vs " << o.edge_b << " on "
                        << join_symbols(o.overlap) << "\n";
            }
        }
        ok = ok && r.clean();
    }
    if (cfg.format == "json") out << j.dump(2) << "\n";
    return ok ? 0 : 1;
}

inline int run_analyze(const RunConfig& cfg, const Loaded& l,
                       std::ostream& out) {
    if (cfg.format == "json") {
        json j{{"schema", "netparse/1"}, {"command", "analyze"}};
        j["nullable_nonterminals"] = to_json(l.tables.nullable_nonterminals);
        json states = json::array();
        for (const StateId& q : l.net.states())
            states.push_back({{"state", q.str()},
                              {"nullable", l.tables.nullable(q)},
                              {"ini", to_json(l.tables.initials(q))}});
        j["states"] = states;
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "nullable nonterminals: "
        << join_symbols(l.tables.nullable_nonterminals) << "\n";
    out << "state     nullable  Ini\n";
    for (const StateId& q : l.net.states()) {
        std::string name = q.str();
        name.resize(10, ' ');
        out << name << (l.tables.nullable(q) ? "yes       " : "no        ")
            << join_symbols(l.tables.initials(q)) << "\n";
    }
    return 0;
}

inline int run_graph(const RunConfig& cfg, const Loaded& l, std::ostream& out,
                     std::ostream& err) {
    std::string dot;
    if (cfg.what == "net") {
        dot = dot_net(l.net);
    } else if (cfg.what == "pilot") {
        dot = dot_pilot(build_pilot(l.net, l.tables));
    } else if (cfg.what == "compact") {
        dot = dot_pilot(compact_pilot(build_pilot(l.net, l.tables), l.net));
    } else if (cfg.what == "pcfg") {
        dot = dot_pcfg(build_pcfg(l.net, l.tables), l.net);
    } else {
        err << "unknown graph kind: " << cfg.what << "\n";
        return 2;
    }
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path);
        if (!f) {
            err << "cannot write " << cfg.out_path << "\n";
            return 2;
        }
        f << dot;
    } else {
        out << dot;
    }
    return 0;
}

inline int run_parse(const RunConfig& cfg, const Loaded& l, std::istream& in,
                     std::ostream& out, std::ostream& err) {
    std::string text;
    if (cfg.input) {
        text = *cfg.input;
    } else {
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    std::vector<Symbol> tokens = split_tokens(text, cfg.chars);
    for (const Symbol& t : tokens)
        if (!l.net.terminals.count(t)) {
            err << "unknown token: " << t << "\n";
            return 2;
        }

    ParseOutcome outcome;
    LeftDerivation derivation;
    bool has_derivation = false;

    if (cfg.algo == "earley") {
        outcome = parse_earley(l.net, tokens);
    } else {
        Pilot pilot = build_pilot(l.net, l.tables);
        ConflictReport r = check_elr1(pilot, l.net);
        if (!r.empty()) {
            err << "grammar is not deterministically parsable bottom-up; "
                   "use --algo earley\n";
            return 1;
        }
        if (cfg.algo == "elr") {
            outcome = parse_elr_cid(pilot, l.net, tokens);
        } else if (cfg.algo == "elr-vector") {
            outcome = parse_elr_vector(pilot, l.net, tokens);
        } else if (cfg.algo == "pointerless") {
            if (check_stp(pilot, l.net)) {
                err << "pointerless parsing requires the single-transition "
                       "property\n";
                return 1;
            }
            outcome = parse_pointerless(compact_pilot(pilot, l.net), l.net,
                                        tokens);
        } else if (cfg.algo == "predictive") {
            Ell1Report ell = check_ell1(l.net, l.tables, pilot);
            if (!ell.clean()) {
                err << "predictive parsing requires the top-down (ELL(1)) "
                       "condition\n";
                return 1;
            }
            PredictiveResult res =
                parse_predictive(build_pcfg(l.net, l.tables), l.net, tokens);
            outcome = std::move(res.outcome);
            derivation = std::move(res.derivation);
            has_derivation = true;
        } else {
            err << "unknown algorithm: " << cfg.algo << "\n";
            return 2;
        }
    }

    if (cfg.format == "json") {
        json j{{"schema", "netparse/1"},
               {"command", "parse"},
               {"algo", cfg.algo},
               {"accepted", outcome.accepted}};
        if (outcome.tree) {
            j["tree"] = tree_json(*outcome.tree);
            j["tree_text"] = outcome.tree->str();
        }
        json reds = json::array();
        for (const auto& r : outcome.reductions) {
            json h = json::array();
            for (const auto& s : r.handle) h.push_back(s);
            reds.push_back({{"handle", h}, {"nonterminal", r.nonterminal}});
        }
        j["reductions"] = reds;
        if (has_derivation) {
            json d = json::array();
            for (const auto& step : derivation) {
                json rhs = json::array();
                for (const auto& s : step.rhs) rhs.push_back(s.str());
                d.push_back({{"lhs", step.lhs.str()}, {"rhs", rhs}});
            }
            j["derivation"] = d;
        }
        if (outcome.error) {
            j["error"] = {{"token_index", outcome.error->token_index},
                          {"expected", to_json(outcome.error->expected)}};
        }
        if (cfg.trace) j["trace"] = outcome.trace;
        out << j.dump(2) << "\n";
    } else {
        if (cfg.trace)
            for (const auto& line : outcome.trace) out << line << "\n";
        if (outcome.accepted) {
            out << "accepted\n";
            if (outcome.tree) out << "tree: " << outcome.tree->str() << "\n";
            if (!outcome.reductions.empty()) {
                out << "reductions:";
                for (const auto& r : outcome.reductions)
                    out << " " << r.str();
                out << "\n";
            }
            if (has_derivation) {
                out << "derivation:";
                for (const auto& step : derivation) {
                    out << " " << step.lhs.str() << "→";
                    if (step.rhs.empty()) out << "ε";
                    for (const auto& s : step.rhs) out << s.str();
                }
                out << "\n";
            }
        } else {
            out << "rejected";
            if (outcome.error)
                out << " at token " << outcome.error->token_index
                    << ", expected " << join_symbols(outcome.error->expected);
            out << "\n";
        }
    }
    return outcome.accepted ? 0 : 1;
}

inline int run_emit_rd(const RunConfig&, const Loaded& l, std::ostream& out,
                       std::ostream& err) {
    Pilot pilot = build_pilot(l.net, l.tables);
    Ell1Report ell = check_ell1(l.net, l.tables, pilot);
    if (!ell.clean()) {
        err << "recursive-descent emission requires the top-down (ELL(1)) "
               "condition\n";
        return 1;
    }
    out << emit_recursive_descent(build_pcfg(l.net, l.tables), l.net);
    return 0;
}

inline int run_oracle(const RunConfig& cfg, const Loaded& l,
                      std::ostream& out) {
    Pilot pilot = build_pilot(l.net, l.tables);
    ConflictReport elr = check_elr1(pilot, l.net);
    Lr1Automaton lr = build_lr1_pilot(to_bnf(right_linearize(l.net)));
    Lr1ConflictReport ref = check_lr1(lr);

    if (cfg.format == "json") {
        json j{{"schema", "netparse/1"},
               {"command", "oracle"},
               {"elr1_clean", elr.empty()},
               {"lr1_clean", ref.empty()},
               {"agree", elr.empty() == ref.empty()},
               {"elr1_mstates", pilot.mstates.size()},
               {"lr1_mstates", lr.mstates.size()}};
        out << j.dump(2) << "\n";
    } else {
        out << "net check (pilot, " << pilot.mstates.size()
            << " m-states): " << (elr.empty() ? "clean" : "conflicts") << "\n";
        out << "LR(1) oracle on right-linearized grammar ("
            << lr.mstates.size()
            << " m-states): " << (ref.empty() ? "clean" : "conflicts") << "\n";
        out << (elr.empty() == ref.empty() ? "verdicts agree"
                                           : "VERDICTS DISAGREE")
            << "\n";
        for (const auto& c : ref.shift_reduce)
            out << "  oracle shift-reduce in state " << c.mstate << " on "
                << c.symbol << "\n";
        for (const auto& c : ref.reduce_reduce)
            out << "  oracle reduce-reduce in state " << c.mstate
                << " (rules " << c.rule_a << ", " << c.rule_b << ") on "
                << c.symbol << "\n";
    }
    if (elr.empty() != ref.empty()) return 1;
    return elr.empty() ? 0 : 1;
}

}  // namespace cli_detail

/// Execute one command. Returns the process exit code: 0 success/acceptance,
/// 1 rejection or condition failure, 2 usage or grammar errors.
inline int run(const RunConfig& cfg, std::istream& in, std::ostream& out,
               std::ostream& err) {
    try {
        cli_detail::Loaded l = cli_detail::load(cfg);
        if (cfg.command == "check") return cli_detail::run_check(cfg, l, out);
        if (cfg.command == "analyze")
            return cli_detail::run_analyze(cfg, l, out);
        if (cfg.command == "graph")
            return cli_detail::run_graph(cfg, l, out, err);
        if (cfg.command == "parse")
            return cli_detail::run_parse(cfg, l, in, out, err);
        if (cfg.command == "emit-rd")
            return cli_detail::run_emit_rd(cfg, l, out, err);
        if (cfg.command == "oracle")
            return cli_detail::run_oracle(cfg, l, out);
        err << "unknown command: " << cfg.command << "\n";
        return 2;
    } catch (const GrammarError& e) {
        err << "grammar error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const AmbiguityError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace netparse
