// Types shared by every parse engine: syntax trees, reductions, outcomes.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netparse/basics.hpp"

namespace netparse {

/// Syntax tree in the shape of the EBNF grammar: an internal node is a
/// nonterminal whose children spell one accepting path of its machine.
struct SyntaxTree {
    Symbol label;
    bool leaf = false;
    std::vector<SyntaxTree> children;  ///< empty for leaves and ε-nodes

    static SyntaxTree make_leaf(Symbol terminal) {
        return {std::move(terminal), true, {}};
    }
    static SyntaxTree make_node(Symbol nonterminal,
                                std::vector<SyntaxTree> kids) {
        return {std::move(nonterminal), false, std::move(kids)};
    }

    /// Parenthesized form, e.g. "( a a b ( b ( ε )_B a )_B a )_S".
    std::string str() const {
        if (leaf) return label;
        std::string out = "(";
        if (children.empty()) {
            out += " ε";
        } else {
            for (const auto& c : children) out += " " + c.str();
        }
        return out + " )_" + label;
    }

    /// Leaf labels left to right (the parsed string).
    std::vector<Symbol> frontier() const {
        std::vector<Symbol> out;
        collect_frontier(out);
        return out;
    }

    friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;

private:
    void collect_frontier(std::vector<Symbol>& out) const {
        if (leaf) {
            out.push_back(label);
            return;
        }
        for (const auto& c : children) c.collect_frontier(out);
    }
};

/// One reduction step: the handle (grammar symbols popped, left to right;
/// empty for ε) reduced to a nonterminal. Printed "( E )⤳T" style as
/// "handle⤳A" with the handle symbols concatenated space-free when short.
struct Reduction {
    std::vector<Symbol> handle;
    Symbol nonterminal;

    std::string str() const {
        std::string h;
        for (const auto& s : handle) h += s;
        if (h.empty()) h = "ε";
        return h + "⤳" + nonterminal;
    }
    friend bool operator==(const Reduction&, const Reduction&) = default;
};

struct ParseError {
    size_t token_index;  ///< 0-based position of the offending token
    SymbolSet expected;  ///< shiftable terminals ∪ enabled look-aheads
};

struct ParseOutcome {
    bool accepted = false;
    std::optional<SyntaxTree> tree;          ///< set iff accepted
    std::vector<Reduction> reductions;       ///< bottom-up engines only
    std::optional<ParseError> error;         ///< set iff !accepted
    std::vector<std::string> trace;          ///< human-readable step log
};

}  // namespace netparse
