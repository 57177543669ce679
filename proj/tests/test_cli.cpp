// CLI behavior, exercised through the same run() the binary dispatches to.
#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "netparse/cli.hpp"
#include "support/util.hpp"

using namespace netparse;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(RunConfig cfg, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = netparse::run(cfg, in, out, err);
    return {code, out.str(), err.str()};
}

RunConfig base(const std::string& command, const std::string& grammar) {
    RunConfig cfg;
    cfg.command = command;
    cfg.grammar_path = testsupport::grammar_path(grammar);
    return cfg;
}

}  // namespace

TEST_CASE("check: clean net exits 0 and prints both verdicts") {
    Result r = run_cli(base("check", "running.g"));
    CHECK(r.code == 0);
    CHECK(r.out.find("ELR(1): OK, pilot m-states: 9") != std::string::npos);
    CHECK(r.out.find("ELL(1): OK") != std::string::npos);
}

TEST_CASE("check --elr1 only") {
    RunConfig cfg = base("check", "fig8.g");
    cfg.want_elr1 = true;
    Result r = run_cli(cfg);
    CHECK(r.code == 0);  // bottom-up condition holds
    CHECK(r.out.find("ELR(1): OK") != std::string::npos);
    CHECK(r.out.find("ELL(1)") == std::string::npos);
}

TEST_CASE("check --ell1 reports the overlap and exits 1") {
    RunConfig cfg = base("check", "fig8.g");
    cfg.want_ell1 = true;
    Result r = run_cli(cfg);
    CHECK(r.code == 1);
    CHECK(r.out.find("ELL(1): FAIL") != std::string::npos);
    CHECK(r.out.find("guide overlap at 0_S") != std::string::npos);
}

TEST_CASE("check: conflicted net exits 1 with diagnostics") {
    RunConfig cfg = base("check", "fig5.g");
    cfg.want_elr1 = true;
    Result r = run_cli(cfg);
    CHECK(r.code == 1);
    CHECK(r.out.find("convergence conflict") != std::string::npos);
}

TEST_CASE("check: json output is machine readable") {
    RunConfig cfg = base("check", "running.g");
    cfg.format = "json";
    Result r = run_cli(cfg);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == "netparse/1");
    CHECK(j["elr1"]["clean"] == true);
    CHECK(j["elr1"]["mstates"] == 9);
    CHECK(j["ell1"]["clean"] == true);
}

TEST_CASE("analyze: text table and json") {
    Result text = run_cli(base("analyze", "running.g"));
    CHECK(text.code == 0);
    CHECK(text.out.find("nullable nonterminals: {E}") != std::string::npos);

    RunConfig cfg = base("analyze", "running.g");
    cfg.format = "json";
    json j = json::parse(run_cli(cfg).out);
    bool found = false;
    for (const auto& s : j["states"])
        if (s["state"] == "1_T") {
            found = true;
            CHECK(s["nullable"] == false);
            CHECK(s["ini"] == json::array({"(", ")", "a"}));
        }
    CHECK(found);
}

TEST_CASE("graph: all four DOT exports") {
    for (const char* what : {"net", "pilot", "compact", "pcfg"}) {
        RunConfig cfg = base("graph", "running.g");
        cfg.what = what;
        Result r = run_cli(cfg);
        CHECK(r.code == 0);
        CHECK(r.out.rfind("digraph", 0) == 0);
    }
}

TEST_CASE("parse: every engine accepts ( a ) on the running net") {
    for (const char* algo :
         {"elr", "elr-vector", "pointerless", "predictive", "earley"}) {
        RunConfig cfg = base("parse", "running.g");
        cfg.algo = algo;
        cfg.input = "( a )";
        Result r = run_cli(cfg);
        CAPTURE(algo);
        CHECK(r.code == 0);
        CHECK(r.out.find("accepted") != std::string::npos);
        CHECK(r.out.find("( ( ( ( ( a )_T )_E ) )_T )_E") !=
              std::string::npos);
    }
}

TEST_CASE("parse: rejection exits 1 and reports the position") {
    RunConfig cfg = base("parse", "running.g");
    cfg.input = "( (";
    Result r = run_cli(cfg);
    CHECK(r.code == 1);
    CHECK(r.out.find("rejected at token 2") != std::string::npos);
}

TEST_CASE("parse: unknown token exits 2") {
    RunConfig cfg = base("parse", "running.g");
    cfg.input = "( x )";
    Result r = run_cli(cfg);
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown token: x") != std::string::npos);
}

TEST_CASE("parse: input from stdin and --chars splitting") {
    RunConfig cfg = base("parse", "running.g");
    Result r = run_cli(cfg, "( a )\n");
    CHECK(r.code == 0);

    RunConfig ch = base("parse", "running.g");
    ch.chars = true;
    ch.input = "((a))";
    CHECK(run_cli(ch).code == 0);
}

TEST_CASE("parse: engines refuse nets outside their condition") {
    RunConfig pred = base("parse", "fig8.g");
    pred.algo = "predictive";
    pred.input = "a b";
    Result r = run_cli(pred);
    CHECK(r.code == 1);
    CHECK(r.err.find("ELL(1)") != std::string::npos);

    RunConfig ptr = base("parse", "fig8.g");
    ptr.algo = "pointerless";
    ptr.input = "a b";
    CHECK(run_cli(ptr).code == 1);

    RunConfig elr = base("parse", "fig5.g");
    elr.input = "b c";
    Result e = run_cli(elr);
    CHECK(e.code == 1);
    CHECK(e.err.find("earley") != std::string::npos);

    // The tabular engine has no precondition.
    RunConfig earley = base("parse", "fig5.g");
    earley.algo = "earley";
    earley.input = "b c";
    CHECK(run_cli(earley).code == 0);
}

TEST_CASE("parse: json payload with tree and reductions") {
    RunConfig cfg = base("parse", "running.g");
    cfg.format = "json";
    cfg.input = "( a )";
    cfg.trace = true;
    json j = json::parse(run_cli(cfg).out);
    CHECK(j["accepted"] == true);
    CHECK(j["tree_text"] == "( ( ( ( ( a )_T )_E ) )_T )_E");
    CHECK(j["reductions"].size() == 4);
    CHECK(j["trace"].is_array());
}

TEST_CASE("emit-rd: emits for top-down nets, refuses otherwise") {
    Result ok = run_cli(base("emit-rd", "running.g"));
    CHECK(ok.code == 0);
    CHECK(ok.out.find("procedure E") != std::string::npos);

    Result bad = run_cli(base("emit-rd", "fig8.g"));
    CHECK(bad.code == 1);
}

TEST_CASE("oracle: verdicts agree on clean and conflicted nets") {
    Result clean = run_cli(base("oracle", "running.g"));
    CHECK(clean.code == 0);
    CHECK(clean.out.find("verdicts agree") != std::string::npos);

    Result bad = run_cli(base("oracle", "fig5.g"));
    CHECK(bad.code == 1);
    CHECK(bad.out.find("verdicts agree") != std::string::npos);
    CHECK(bad.out.find("conflicts") != std::string::npos);
}

TEST_CASE("grammar problems exit 2") {
    RunConfig missing = base("check", "no-such-file.g");
    Result r = run_cli(missing);
    CHECK(r.code == 2);
    CHECK(r.err.find("grammar error") != std::string::npos);
}
