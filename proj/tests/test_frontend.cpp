// Grammar file parsing, regex-to-machine compilation, net assembly and the
// right-linearized grammar.
#include <doctest.h>

#include "netparse/netparse.hpp"
#include "support/oracle.hpp"
#include "support/util.hpp"

using namespace netparse;
using testsupport::Str;
using testsupport::StrSet;

TEST_CASE("grammar file: symbols, axiom, comments") {
    Grammar g = testsupport::load_grammar("running.g");
    CHECK(g.axiom == "E");
    CHECK(g.nonterminals == SymbolSet{"E", "T"});
    CHECK(g.terminals == SymbolSet{"(", ")", "a"});
    CHECK(g.rules.count("E") == 1);
    CHECK(g.rules.count("T") == 1);
}

TEST_CASE("grammar file: first rule is the axiom") {
    Grammar g = parse_ebnf("B : 'x' ; A : B ;");
    CHECK(g.axiom == "B");
}

TEST_CASE("grammar file: double quotes and %empty") {
    Grammar g = parse_ebnf("S : \"if\" S \"fi\" | %empty ;");
    CHECK(g.terminals == SymbolSet{"fi", "if"});
    MachineNet net = build_net(g);
    StrSet lang = testsupport::net_language(net, 4);
    CHECK(lang.count(Str{}) == 1);
    CHECK(lang.count(Str{"if", "fi"}) == 1);
    CHECK(lang.count(Str{"if", "if", "fi", "fi"}) == 1);
    CHECK(lang.size() == 3);
}

TEST_CASE("grammar file: postfix sugar") {
    // X+ == X X*, X? == (X | empty)
    MachineNet plus = build_net(parse_ebnf("S : 'a'+ ;"));
    StrSet lp = testsupport::net_language(plus, 3);
    CHECK(lp == StrSet{{"a"}, {"a", "a"}, {"a", "a", "a"}});

    MachineNet opt = build_net(parse_ebnf("S : 'a'? 'b' ;"));
    StrSet lo = testsupport::net_language(opt, 3);
    CHECK(lo == StrSet{{"b"}, {"a", "b"}});
}

TEST_CASE("grammar file: errors carry positions") {
    CHECK_THROWS_AS(parse_ebnf("S : 'a ;"), GrammarError);      // unterminated
    CHECK_THROWS_AS(parse_ebnf("S : 'a' ; S : 'b' ;"), GrammarError);
    CHECK_THROWS_AS(parse_ebnf("S : A ;"), GrammarError);       // undefined A
    CHECK_THROWS_AS(parse_ebnf("S : 'a'"), GrammarError);       // missing ;
    CHECK_THROWS_AS(parse_ebnf("S : 'S' | 'a' ; "), GrammarError);  // collision
    CHECK_THROWS_AS(parse_ebnf(""), GrammarError);              // no rules
    try {
        parse_ebnf("S : 'a'\n= 'b' ;");
        FAIL("expected a grammar error");
    } catch (const GrammarError& e) {
        CHECK(std::string(e.what()).find("2:") != std::string::npos);
    }
}

TEST_CASE("machines: running net has the reference shape") {
    MachineNet net = testsupport::load_net("running.g");
    const Machine& me = net.machines.at("E");
    CHECK(me.num_states == 2);
    CHECK(me.finals == std::set<int>{0, 1});
    CHECK(me.target(0, "T") == 1);
    CHECK(me.target(1, "T") == 1);

    const Machine& mt = net.machines.at("T");
    CHECK(mt.num_states == 4);
    CHECK(mt.finals == std::set<int>{3});
    CHECK(mt.target(0, "(") == 1);
    CHECK(mt.target(0, "a") == 3);
    CHECK(mt.target(1, "E") == 2);
    CHECK(mt.target(2, ")") == 3);
}

TEST_CASE("machines: determinization of a BNF alternative list") {
    // The common prefixes a b and the A-call are factored by the subset
    // construction; the machine is deterministic by construction.
    MachineNet net = testsupport::load_net("fig3bnf.g");
    const Machine& ms = net.machines.at("S");
    for (int s = 0; s < ms.num_states; ++s) {
        (void)s;  // out_edges is a map: at most one target per symbol
    }
    StrSet lang = testsupport::net_language(net, 5);
    CHECK(lang.count(Str{"a", "b", "c"}) == 1);
    CHECK(lang.count(Str{"a", "b", "d"}) == 1);
    CHECK(lang.count(Str{"b", "c"}) == 1);
    CHECK(lang.count(Str{"a", "b", "c", "e"}) == 1);  // A e with A -> a S
    CHECK(lang.count(Str{"a", "b"}) == 0);
}

TEST_CASE("machines: no reentry into initial states") {
    for (const char* name : {"running.g", "fig3bnf.g", "fig5.g", "fig7.g",
                             "fig8.g", "fig10a.g", "fig10b.g", "fig10c.g",
                             "fig14.g"}) {
        MachineNet net = testsupport::load_net(name);
        for (const auto& [nt, m] : net.machines) {
            CHECK(m.initial == 0);
            for (int s = 0; s < m.num_states; ++s)
                for (const auto& [x, t] : m.out_edges(s))
                    CHECK(t != 0);
        }
    }
}

TEST_CASE("machines: minimization is off by default, Moore under the flag") {
    Grammar g = parse_ebnf("S : 'a' 'b' | 'c' 'b' ;");
    MachineNet plain = build_net(g);
    MachineNet mini = build_net(g, true);
    CHECK(plain.machines.at("S").num_states == 4);
    CHECK(mini.machines.at("S").num_states == 3);
    CHECK(testsupport::net_language(plain, 4) ==
          testsupport::net_language(mini, 4));
}

TEST_CASE("machines: language is preserved by compilation") {
    // Hand-enumerable: balanced parenthesis lists.
    MachineNet net = testsupport::load_net("running.g");
    StrSet lang = testsupport::net_language(net, 4);
    CHECK(lang.count(Str{}) == 1);
    CHECK(lang.count(Str{"a"}) == 1);
    CHECK(lang.count(Str{"(", ")"}) == 1);
    CHECK(lang.count(Str{"(", "a", ")"}) == 1);
    CHECK(lang.count(Str{"a", "a", "a", "a"}) == 1);
    CHECK(lang.count(Str{"("}) == 0);
    CHECK(lang.count(Str{")", "("}) == 0);
}

TEST_CASE("right-linearized grammar: one rule per edge plus one per final") {
    MachineNet net = testsupport::load_net("running.g");
    RightLinearizedGrammar rl = right_linearize(net);
    CHECK(rl.axiom == StateId{"E", 0});
    CHECK(rl.rules.size() == 9);  // 6 edges + 3 final states

    int eps = 0, calls = 0, scans = 0;
    for (const RlRule& r : rl.rules) {
        if (r.rhs.empty()) {
            ++eps;
            continue;
        }
        REQUIRE(r.rhs.size() == 2);
        CHECK(r.rhs[1].is_state);
        (r.rhs[0].is_state ? calls : scans)++;
    }
    CHECK(eps == 3);
    CHECK(calls == 3);   // 0_E -T->, 1_E -T->, 1_T -E->
    CHECK(scans == 3);   // (, ), a
}

TEST_CASE("right-linearized grammar: same language as the net") {
    for (const char* name :
         {"running.g", "fig5.g", "fig7.g", "fig8.g", "fig14.g"}) {
        MachineNet net = testsupport::load_net(name);
        BnfGrammar bnf = to_bnf(right_linearize(net));
        CHECK(testsupport::net_language(net, 5) ==
              testsupport::bnf_language(bnf, 5));
    }
}
