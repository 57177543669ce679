// The tabular engine: vector construction, acceptance, tree extraction and
// ambiguity detection.
#include <doctest.h>

#include "netparse/netparse.hpp"
#include "support/oracle.hpp"
#include "support/util.hpp"

using namespace netparse;
using testsupport::tokens;

TEST_CASE("non-deterministic net: a a b b a a accepted with origin 0") {
    MachineNet net = testsupport::load_net("fig14.g");
    auto [accepted, E] = earley_recognize(net, tokens("a a b b a a"));
    REQUIRE(accepted);
    CHECK(E.e[6].contains({StateId{"S", 4}, 0}));

    ParseOutcome o = parse_earley(net, tokens("a a b b a a"));
    REQUIRE(o.accepted);
    CHECK(o.tree->str() == "( a a b ( b ( ε )_B a )_B a )_S");
}

TEST_CASE("both alternatives of the non-deterministic axiom") {
    MachineNet net = testsupport::load_net("fig14.g");
    // Plain a-runs use the first alternative.
    ParseOutcome runs = parse_earley(net, tokens("a a a"));
    REQUIRE(runs.accepted);
    CHECK(runs.tree->str() == "( a a a )_S");
    // a^n b^n uses the A-alternative.
    ParseOutcome nested = parse_earley(net, tokens("a a b b"));
    REQUIRE(nested.accepted);
    CHECK(nested.tree->frontier() == tokens("a a b b"));
    CHECK(nested.tree->children.size() == 1);
    CHECK(nested.tree->children.front().label == "A");
}

TEST_CASE("rejections report the stuck position") {
    MachineNet net = testsupport::load_net("fig14.g");
    ParseOutcome o = parse_earley(net, tokens("a b c"));
    CHECK(!o.accepted);
    REQUIRE(o.error.has_value());
    CHECK(o.error->token_index == 3);

    // An impossible first token empties E[1]; the scan stops early.
    MachineNet run = testsupport::load_net("running.g");
    ParseOutcome p = parse_earley(run, tokens(") a"));
    CHECK(!p.accepted);
    REQUIRE(p.error.has_value());
    CHECK(p.error->token_index == 0);
}

TEST_CASE("deterministic nets: same trees as the shift-reduce engine") {
    MachineNet net = testsupport::load_net("running.g");
    AnalysisTables t = compute_ini(net);
    Pilot pilot = build_pilot(net, t);
    for (const char* input : {"", "a", "( )", "( a )", "( ( ) a )"}) {
        CAPTURE(input);
        ParseOutcome e = parse_earley(net, tokens(input));
        ParseOutcome c = parse_elr_cid(pilot, net, tokens(input));
        REQUIRE(e.accepted == c.accepted);
        CHECK(e.tree == c.tree);
    }
}

TEST_CASE("ambiguous inputs raise an ambiguity error") {
    // Two derivations of "a b": as the literal pair and through B.
    Grammar g = parse_ebnf("S : 'a' 'b' | 'a' B ; B : 'b' ;");
    MachineNet net = build_net(g);
    auto [accepted, E] = earley_recognize(net, tokens("a b"));
    CHECK(accepted);
    CHECK_THROWS_AS(parse_earley(net, tokens("a b")), AmbiguityError);
}

TEST_CASE("acceptance agrees with brute-force enumeration") {
    for (const char* name : {"running.g", "fig5.g", "fig14.g"}) {
        CAPTURE(name);
        MachineNet net = testsupport::load_net(name);
        testsupport::StrSet lang = testsupport::net_language(net, 5);
        for (const auto& w : testsupport::all_strings(net.terminals, 5)) {
            CAPTURE(testsupport::tokens_str(w));
            auto [accepted, E] = earley_recognize(net, w);
            CHECK(accepted == (lang.count(w) == 1));
        }
    }
}

TEST_CASE("vector contents match the derivation characterization") {
    for (const char* name : {"running.g", "fig7.g", "fig14.g"}) {
        CAPTURE(name);
        MachineNet net = testsupport::load_net(name);
        for (const auto& w : testsupport::all_strings(net.terminals, 4)) {
            std::string diag = testsupport::check_earley_lemma(net, w);
            CAPTURE(testsupport::tokens_str(w));
            CHECK(diag.empty());
            if (!diag.empty()) FAIL_CHECK(diag);
        }
    }
}
