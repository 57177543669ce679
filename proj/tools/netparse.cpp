// netparse — grammar analysis and parsing over machine nets.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netparse/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"netparse: EBNF grammar analysis and parsing over networks "
                 "of finite machines"};
    app.require_subcommand(1);

    netparse::RunConfig cfg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("grammar", cfg.grammar_path, "grammar file")
            ->required();
        cmd->add_flag("--minimize", cfg.minimize,
                      "minimize machines (Moore) before normalization");
        cmd->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };

    CLI::App* check = app.add_subcommand("check", "check parsability");
    check->add_flag("--elr1", cfg.want_elr1, "check the bottom-up condition");
    check->add_flag("--ell1", cfg.want_ell1, "check the top-down condition");
    add_common(check);

    CLI::App* analyze =
        app.add_subcommand("analyze", "print nullability and Ini tables");
    add_common(analyze);

    CLI::App* graph = app.add_subcommand("graph", "export DOT graphs");
    graph->add_option("--what", cfg.what, "net | pilot | compact | pcfg")
        ->check(CLI::IsMember({"net", "pilot", "compact", "pcfg"}))
        ->capture_default_str();
    graph->add_option("--out", cfg.out_path, "write DOT to a file");
    add_common(graph);

    CLI::App* parse = app.add_subcommand("parse", "parse a token string");
    parse->add_option("--algo", cfg.algo,
                      "elr | elr-vector | pointerless | predictive | earley")
        ->check(CLI::IsMember(
            {"elr", "elr-vector", "pointerless", "predictive", "earley"}))
        ->capture_default_str();
    parse->add_flag("--trace", cfg.trace, "print the step-by-step trace");
    parse->add_flag("--chars", cfg.chars,
                    "split the input into single-character tokens");
    std::string input;
    CLI::Option* input_opt = parse->add_option(
        "input", input, "token string (whitespace-separated; stdin if "
                        "omitted)");
    add_common(parse);

    CLI::App* emit =
        app.add_subcommand("emit-rd", "emit recursive-descent pseudo-code");
    add_common(emit);

    CLI::App* oracle = app.add_subcommand(
        "oracle", "compare the net check against a classical LR(1) "
                  "construction of the right-linearized grammar");
    oracle->add_flag("--compare", [](size_t) {},
                     "print both verdicts (default behavior)");
    add_common(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "parse" && input_opt->count() > 0) cfg.input = input;
    return netparse::run(cfg, std::cin, std::cout, std::cerr);
}
