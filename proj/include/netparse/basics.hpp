// Core identifiers shared by every layer: grammar symbols, machine-state ids,
// and the reserved end-of-input marker.
#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>

namespace netparse {

/// A grammar symbol: a terminal token name or a nonterminal name.
using Symbol = std::string;

/// The end-of-input marker. Reserved; not writable in grammar files.
inline const Symbol kEndMarker = "-|";

/// A state of one machine of the net, globally unique via the owner name.
struct StateId {
    Symbol owner;   ///< nonterminal whose machine contains this state
    int index = 0;  ///< 0 is always the initial state

    friend auto operator<=>(const StateId&, const StateId&) = default;

    bool is_initial() const { return index == 0; }

    /// Render as "3_T" like the usual drawing convention.
    std::string str() const { return std::to_string(index) + "_" + owner; }
};

using SymbolSet = std::set<Symbol>;

/// Error for malformed grammar input (carries a human-readable position).
struct GrammarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error for violated operation preconditions (e.g. merging without STP).
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Join a set of symbols for diagnostics: "{a, (, -|}".
inline std::string join_symbols(const SymbolSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& x : s) {
        if (!first) out += ", ";
        out += x;
        first = false;
    }
    return out + "}";
}

}  // namespace netparse
