// An interpreter for the recursive-descent pseudo-code emitted by the
// library, used to check that the emitted program actually decides the same
// language as the net it was generated from. The interpreter is a dumb
// text-level simulation: it knows nothing about nets or guide sets beyond
// the emitted lines.
#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "netparse/basics.hpp"

namespace testsupport {

struct RdDecision {
    enum class Kind { Scan, Call, Return } kind;
    std::set<std::string> guard;
    std::string symbol;  ///< scanned terminal or called procedure
    int target = -1;     ///< goto state (Scan/Call)
};

struct RdState {
    std::vector<RdDecision> decisions;
};

struct RdProgram {
    std::map<std::string, std::vector<RdState>> procedures;
    std::string main_call;
    std::set<std::string> accept_guard;
};

namespace rd_detail {

inline std::set<std::string> parse_guard(const std::string& line) {
    size_t open = line.find('{');
    size_t close = line.find('}', open);
    if (open == std::string::npos || close == std::string::npos)
        throw std::runtime_error("malformed guard in: " + line);
    std::string body = line.substr(open + 1, close - open - 1);
    std::set<std::string> out;
    size_t pos = 0;
    while (pos < body.size()) {
        size_t comma = body.find(", ", pos);
        if (comma == std::string::npos) {
            out.insert(body.substr(pos));
            break;
        }
        out.insert(body.substr(pos, comma - pos));
        pos = comma + 2;
    }
    return out;
}

inline std::string word_after(const std::string& line,
                              const std::string& key) {
    size_t at = line.find(key);
    if (at == std::string::npos)
        throw std::runtime_error("missing '" + key + "' in: " + line);
    size_t start = at + key.size();
    size_t end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos
                                                       : end - start);
}

}  // namespace rd_detail

/// Parse the emitted pseudo-code back into an executable structure.
inline RdProgram parse_rd(const std::string& text) {
    RdProgram prog;
    std::vector<RdState>* proc = nullptr;
    bool in_main = false;

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        if (line.find_first_not_of(' ') == std::string::npos) continue;

        if (line.rfind("procedure ", 0) == 0) {
            proc = &prog.procedures[line.substr(10)];
            in_main = false;
        } else if (line == "main") {
            proc = nullptr;
            in_main = true;
        } else if (line == "end") {
            proc = nullptr;
            in_main = false;
        } else if (in_main) {
            if (line.find("call ") != std::string::npos)
                prog.main_call = rd_detail::word_after(line, "call ");
            else if (line.find("then accept") != std::string::npos)
                prog.accept_guard = rd_detail::parse_guard(line);
        } else if (proc) {
            if (line.find("state ") != std::string::npos &&
                line.back() == ':') {
                proc->emplace_back();
            } else if (line.find("else error") != std::string::npos) {
                // terminator; nothing to record
            } else if (line.find("then scan ") != std::string::npos) {
                RdDecision d{RdDecision::Kind::Scan,
                             rd_detail::parse_guard(line),
                             rd_detail::word_after(line, "scan "),
                             std::stoi(rd_detail::word_after(line,
                                                             "goto "))};
                proc->back().decisions.push_back(std::move(d));
            } else if (line.find("then call ") != std::string::npos) {
                RdDecision d{RdDecision::Kind::Call,
                             rd_detail::parse_guard(line),
                             rd_detail::word_after(line, "call "),
                             std::stoi(rd_detail::word_after(line,
                                                             "goto "))};
                proc->back().decisions.push_back(std::move(d));
            } else if (line.find("then return") != std::string::npos) {
                proc->back().decisions.push_back(
                    {RdDecision::Kind::Return,
                     rd_detail::parse_guard(line), "", -1});
            } else {
                throw std::runtime_error("unrecognized line: " + line);
            }
        }
    }
    if (prog.main_call.empty())
        throw std::runtime_error("no main call in emitted program");
    return prog;
}

/// Run the program on a token string; true iff it accepts. Throws when a
/// state offers two decisions for the same token (guides not disjoint).
inline bool rd_run(const RdProgram& prog,
                   const std::vector<netparse::Symbol>& input) {
    struct Frame {
        const std::vector<RdState>* proc;
        int state;
    };
    std::vector<Frame> stack{{&prog.procedures.at(prog.main_call), 0}};
    size_t ip = 0;
    size_t steps = 0;

    while (!stack.empty()) {
        if (++steps > 100000)
            throw std::runtime_error("interpreter did not terminate");
        const std::string& next =
            ip < input.size() ? input[ip] : netparse::kEndMarker;
        Frame& top = stack.back();
        const RdState& st = (*top.proc)[top.state];

        const RdDecision* chosen = nullptr;
        for (const RdDecision& d : st.decisions)
            if (d.guard.count(next)) {
                if (chosen)
                    throw std::runtime_error(
                        "two decisions enabled on '" + next + "'");
                chosen = &d;
            }
        if (!chosen) return false;

        switch (chosen->kind) {
        case RdDecision::Kind::Scan:
            ++ip;
            top.state = chosen->target;
            break;
        case RdDecision::Kind::Call:
            top.state = chosen->target;
            stack.push_back({&prog.procedures.at(chosen->symbol), 0});
            break;
        case RdDecision::Kind::Return:
            stack.pop_back();
            break;
        }
    }
    const std::string& next =
        ip < input.size() ? input[ip] : netparse::kEndMarker;
    return ip == input.size() && prog.accept_guard.count(next) != 0;
}

}  // namespace testsupport
