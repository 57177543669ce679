// Textual EBNF grammar frontend: regular-expression ASTs and the grammar-file
// parser ("Name : alternatives ;" with quoted terminals, | * + ? () %empty).
#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "netparse/basics.hpp"

namespace netparse {

/// Node of a right-part regular expression.
struct RegexAst {
    enum class Kind { Epsilon, Sym, Union, Concat, Star };

    Kind kind = Kind::Epsilon;
    Symbol symbol;                   ///< set iff kind == Sym
    std::vector<RegexAst> children;  ///< Union/Concat: >= 2; Star: exactly 1

    static RegexAst epsilon() { return {}; }
    static RegexAst sym(Symbol s) { return {Kind::Sym, std::move(s), {}}; }
    static RegexAst star(RegexAst c) {
        return {Kind::Star, {}, {std::move(c)}};
    }
    // Unions and concatenations are flattened n-ary; single-child lists
    // collapse to the child itself so the >=2-children invariant holds.
    static RegexAst unite(std::vector<RegexAst> cs) {
        return combine(Kind::Union, std::move(cs));
    }
    static RegexAst concat(std::vector<RegexAst> cs) {
        return combine(Kind::Concat, std::move(cs));
    }

private:
    static RegexAst combine(Kind k, std::vector<RegexAst> cs) {
        std::vector<RegexAst> flat;
        for (auto& c : cs) {
            if (c.kind == k)
                for (auto& g : c.children) flat.push_back(std::move(g));
            else
                flat.push_back(std::move(c));
        }
        if (flat.size() == 1) return std::move(flat.front());
        return {k, {}, std::move(flat)};
    }
};

/// An EBNF grammar: exactly one regular-expression rule per nonterminal.
struct Grammar {
    SymbolSet terminals;
    SymbolSet nonterminals;
    Symbol axiom;
    std::map<Symbol, RegexAst> rules;
};

namespace detail {

struct Token {
    enum class Kind {
        Terminal, Ident, Colon, Semi, Bar, Star, Plus, Quest,
        LParen, RParen, Empty, End
    };
    Kind kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_blanks();
        int line = line_, col = col_;
        if (pos_ >= src_.size()) return {Token::Kind::End, "", line, col};
        char c = src_[pos_];
        auto single = [&](Token::Kind k) {
            advance();
            return Token{k, std::string(1, c), line, col};
        };
        switch (c) {
            case ':': return single(Token::Kind::Colon);
            case ';': return single(Token::Kind::Semi);
            case '|': return single(Token::Kind::Bar);
            case '*': return single(Token::Kind::Star);
            case '+': return single(Token::Kind::Plus);
            case '?': return single(Token::Kind::Quest);
            case '(': return single(Token::Kind::LParen);
            case ')': return single(Token::Kind::RParen);
            case '\'': case '"': return lex_quoted(c, line, col);
            default: break;
        }
        if (c == '%') return lex_directive(line, col);
        if (is_ident_start(c)) return lex_ident(line, col);
        fail(line, col, std::string("unexpected character '") + c + "'");
    }

    [[noreturn]] static void fail(int line, int col, const std::string& msg) {
        throw GrammarError(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg);
    }

private:
    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return is_ident_start(c) ||
               std::isdigit(static_cast<unsigned char>(c));
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blanks() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_quoted(char quote, int line, int col) {
        advance();  // opening quote
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
            text += src_[pos_];
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != quote)
            fail(line, col, "unterminated quoted terminal");
        advance();  // closing quote
        if (text.empty()) fail(line, col, "empty terminal literal");
        if (text == kEndMarker)
            fail(line, col, "'" + kEndMarker + "' is the reserved end marker");
        return {Token::Kind::Terminal, text, line, col};
    }

    Token lex_directive(int line, int col) {
        advance();  // '%'
        std::string word;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            word += src_[pos_];
            advance();
        }
        if (word != "empty") fail(line, col, "unknown directive %" + word);
        return {Token::Kind::Empty, "%empty", line, col};
    }

    Token lex_ident(int line, int col) {
        std::string text;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            text += src_[pos_];
            advance();
        }
        return {Token::Kind::Ident, text, line, col};
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

// Recursive-descent parser for the grammar file format:
//   file  := rule+            rule := Ident ':' alts ';'
//   alts  := seq ('|' seq)*   seq  := factor*        (empty seq = epsilon)
//   factor := atom ('*'|'+'|'?')*
//   atom  := Terminal | Ident | '%empty' | '(' alts ')'
class Parser {
public:
    explicit Parser(const std::string& src) : lexer_(src) { shift(); }

    Grammar parse_file() {
        Grammar g;
        std::vector<std::pair<Symbol, Token>> lhs_seen;
        while (cur_.kind != Token::Kind::End) {
            Token name = expect(Token::Kind::Ident, "rule name");
            expect(Token::Kind::Colon, "':'");
            RegexAst body = parse_alts(g);
            expect(Token::Kind::Semi, "';'");
            if (g.rules.count(name.text))
                Lexer::fail(name.line, name.col,
                            "duplicate rule for nonterminal " + name.text);
            g.rules.emplace(name.text, std::move(body));
            g.nonterminals.insert(name.text);
            if (g.axiom.empty()) g.axiom = name.text;
        }
        if (g.rules.empty()) throw GrammarError("1:1: empty grammar");
        check_references(g);
        return g;
    }

private:
    void shift() { cur_ = lexer_.next(); }

    Token expect(Token::Kind k, const std::string& what) {
        if (cur_.kind != k)
            Lexer::fail(cur_.line, cur_.col,
                        "expected " + what + ", found '" +
                            (cur_.kind == Token::Kind::End ? "<eof>"
                                                           : cur_.text) +
                            "'");
        Token t = cur_;
        shift();
        return t;
    }

    bool at_atom() const {
        switch (cur_.kind) {
            case Token::Kind::Terminal:
            case Token::Kind::Ident:
            case Token::Kind::Empty:
            case Token::Kind::LParen:
                return true;
            default:
                return false;
        }
    }

    RegexAst parse_alts(Grammar& g) {
        std::vector<RegexAst> alts;
        alts.push_back(parse_seq(g));
        while (cur_.kind == Token::Kind::Bar) {
            shift();
            alts.push_back(parse_seq(g));
        }
        return RegexAst::unite(std::move(alts));
    }

    RegexAst parse_seq(Grammar& g) {
        std::vector<RegexAst> factors;
        while (at_atom()) factors.push_back(parse_factor(g));
        if (factors.empty()) return RegexAst::epsilon();
        return RegexAst::concat(std::move(factors));
    }

    RegexAst parse_factor(Grammar& g) {
        RegexAst node = parse_atom(g);
        for (;;) {
            if (cur_.kind == Token::Kind::Star) {
                shift();
                node = RegexAst::star(std::move(node));
            } else if (cur_.kind == Token::Kind::Plus) {
                // X+ is sugar for X X*
                shift();
                RegexAst copy = node;
                std::vector<RegexAst> seq;
                seq.push_back(std::move(copy));
                seq.push_back(RegexAst::star(std::move(node)));
                node = RegexAst::concat(std::move(seq));
            } else if (cur_.kind == Token::Kind::Quest) {
                shift();
                std::vector<RegexAst> alts;
                alts.push_back(std::move(node));
                alts.push_back(RegexAst::epsilon());
                node = {RegexAst::Kind::Union, {}, std::move(alts)};
            } else {
                break;
            }
        }
        return node;
    }

    RegexAst parse_atom(Grammar& g) {
        switch (cur_.kind) {
            case Token::Kind::Terminal: {
                Token t = cur_;
                shift();
                g.terminals.insert(t.text);
                return RegexAst::sym(t.text);
            }
            case Token::Kind::Ident: {
                Token t = cur_;
                shift();
                references_.emplace_back(t.text, t);
                return RegexAst::sym(t.text);
            }
            case Token::Kind::Empty:
                shift();
                return RegexAst::epsilon();
            case Token::Kind::LParen: {
                shift();
                RegexAst inner = parse_alts(g);
                expect(Token::Kind::RParen, "')'");
                return inner;
            }
            default:
                Lexer::fail(cur_.line, cur_.col, "expected a symbol");
        }
    }

    void check_references(const Grammar& g) const {
        for (const auto& [name, tok] : references_)
            if (!g.nonterminals.count(name))
                Lexer::fail(tok.line, tok.col,
                            "undefined nonterminal " + name);
        for (const auto& t : g.terminals)
            if (g.nonterminals.count(t))
                throw GrammarError("name '" + t +
                                   "' used both as terminal and nonterminal");
    }

    Lexer lexer_;
    Token cur_{};
    std::vector<std::pair<Symbol, Token>> references_;
};

}  // namespace detail

/// Parse a grammar file. The first rule's left-hand side is the axiom;
/// alternatives of one rule form a single union AST.
/// Throws GrammarError ("line:col: message") on malformed input.
inline Grammar parse_ebnf(const std::string& text) {
    return detail::Parser(text).parse_file();
}

}  // namespace netparse
