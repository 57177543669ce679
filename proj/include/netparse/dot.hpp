// Graphviz (DOT) rendering of nets, pilots and parser control-flow graphs.
#pragma once

#include <string>

#include "netparse/ell.hpp"
#include "netparse/machine.hpp"
#include "netparse/pilot.hpp"

namespace netparse {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

/// One cluster per machine; final states double-circled; an entry arrow
/// marks each initial state.
inline std::string dot_net(const MachineNet& net) {
    std::string out = "digraph net {\n  rankdir=LR;\n";
    int cluster = 0;
    for (const auto& [name, m] : net.machines) {
        out += "  subgraph cluster_" + std::to_string(cluster++) + " {\n";
        out += "    label=\"M_" + detail::dot_escape(name) + "\";\n";
        out += "    entry_" + name + " [shape=point, style=invis];\n";
        for (int s = 0; s < m.num_states; ++s) {
            StateId q{name, s};
            out += "    \"" + q.str() + "\" [shape=" +
                   (m.is_final(s) ? "doublecircle" : "circle") + "];\n";
        }
        out += "    entry_" + name + " -> \"" + StateId{name, 0}.str() +
               "\";\n";
        for (int s = 0; s < m.num_states; ++s)
            for (const auto& [x, t] : m.out_edges(s))
                out += "    \"" + StateId{name, s}.str() + "\" -> \"" +
                       StateId{name, t}.str() + "\" [label=\"" +
                       detail::dot_escape(x) + "\"];\n";
        out += "  }\n";
    }
    return out + "}\n";
}

/// Pilot graph: each m-state is a two-compartment record (base | closure);
/// convergent edges are drawn doubled.
inline std::string dot_pilot(const Pilot& p) {
    std::string out = "digraph pilot {\n  rankdir=LR;\n"
                      "  node [shape=record];\n";
    for (int i = 0; i < (int)p.mstates.size(); ++i) {
        const MState& I = p.mstates[i];
        auto part = [&](bool initial_part) {
            std::string s;
            for (const auto& [q, la] : I.candidates) {
                if (q.is_initial() != initial_part) continue;
                if (!s.empty()) s += "\\n";
                s += q.str() + " " + join_symbols(la);
            }
            return s.empty() ? std::string("—") : s;
        };
        out += "  I" + std::to_string(i) + " [label=\"{I" +
               std::to_string(i) + "|" + detail::dot_escape(part(false)) +
               "|" + detail::dot_escape(part(true)) + "}\"];\n";
    }
    for (const auto& [key, j] : p.theta) {
        const auto& [i, x] = key;
        bool conv = p.is_convergent(i, x);
        out += "  I" + std::to_string(i) + " -> I" + std::to_string(j) +
               " [label=\"" + detail::dot_escape(x) + "\"" +
               (conv ? ", color=\"black:invis:black\"" : "") + "];\n";
    }
    return out + "}\n";
}

/// PCFG: the net with prospect sets appended to final states and dashed
/// call edges labeled by their guide sets.
inline std::string dot_pcfg(const Pcfg& f, const MachineNet& net) {
    std::string out = "digraph pcfg {\n  rankdir=LR;\n";
    int cluster = 0;
    for (const auto& [name, m] : net.machines) {
        out += "  subgraph cluster_" + std::to_string(cluster++) + " {\n";
        out += "    label=\"M_" + detail::dot_escape(name) + "\";\n";
        for (int s = 0; s < m.num_states; ++s) {
            StateId q{name, s};
            std::string label = q.str();
            if (m.is_final(s))
                label += "\\nπ=" + join_symbols(f.prospect.at(q));
            out += "    \"" + q.str() + "\" [shape=" +
                   (m.is_final(s) ? "doublecircle" : "circle") +
                   ", label=\"" + detail::dot_escape(label) + "\"];\n";
        }
        for (int s = 0; s < m.num_states; ++s)
            for (const auto& [x, t] : m.out_edges(s))
                out += "    \"" + StateId{name, s}.str() + "\" -> \"" +
                       StateId{name, t}.str() + "\" [label=\"" +
                       detail::dot_escape(x) + "\"];\n";
        out += "  }\n";
    }
    for (const CallEdge& e : f.call_edges)
        out += "  \"" + e.from.str() + "\" -> \"" +
               StateId{e.callee, 0}.str() + "\" [style=dashed, label=\"" +
               detail::dot_escape(join_symbols(e.guide)) + "\"];\n";
    return out + "}\n";
}

}  // namespace netparse
