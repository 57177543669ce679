// Shared helpers for the test suites: grammar-corpus loading and tokenizing.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netparse/netparse.hpp"

#ifndef NETPARSE_GRAMMAR_DIR
#define NETPARSE_GRAMMAR_DIR "tests/grammars"
#endif

namespace testsupport {

inline std::string grammar_path(const std::string& name) {
    return std::string(NETPARSE_GRAMMAR_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

inline netparse::Grammar load_grammar(const std::string& name) {
    return netparse::parse_ebnf(read_file(grammar_path(name)));
}

inline netparse::MachineNet load_net(const std::string& name,
                                     bool minimize = false) {
    return netparse::build_net(load_grammar(name), minimize);
}

/// Split "( a )" into {"(", "a", ")"}.
inline std::vector<netparse::Symbol> tokens(const std::string& text) {
    std::istringstream in(text);
    std::vector<netparse::Symbol> out;
    netparse::Symbol t;
    while (in >> t) out.push_back(t);
    return out;
}

inline std::string tokens_str(const std::vector<netparse::Symbol>& w) {
    std::string out;
    for (const auto& s : w) {
        if (!out.empty()) out += " ";
        out += s;
    }
    return out;
}

}  // namespace testsupport
