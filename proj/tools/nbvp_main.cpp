#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "nbvp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Galerkin candidate and Newton-Kantorovich certificate for u'' = f(x, u, u'), u'(0) = u'(1) = 0"};
    app.require_subcommand(1);

    nbvp::RunConfig config;
    int m = 0, solver_panels = 0, rigor_panels = 0, subdiv = 0, max_iter = 0;
    std::vector<double> b0;
    const std::map<std::string, nbvp::RunMode> modes{
        {"solve", nbvp::RunMode::solve}, {"certify", nbvp::RunMode::certify}, {"given", nbvp::RunMode::given}};
    const std::map<std::string, nbvp::OutputFormat> formats{{"text", nbvp::OutputFormat::text},
                                                             {"kv", nbvp::OutputFormat::kv}};

    CLI::App* cmd = app.add_subcommand("certify", "solve and certify a problem file");
    cmd->add_option("file", config.path, "problem file")->required();
    auto* o_m = cmd->add_option("--m", m, "number of cosine modes");
    auto* o_sp = cmd->add_option("--solver-panels", solver_panels, "Simpson panels for Newton");
    auto* o_rp = cmd->add_option("--rigor-panels", rigor_panels, "panels for the enclosed integrals");
    auto* o_sd = cmd->add_option("--subdiv", subdiv, "cells per axis for N and K");
    auto* o_it = cmd->add_option("--max-iter", max_iter, "maximum Newton iterations");
    cmd->add_option("--mode", config.mode, "solve | certify | given (certify b0 without Newton)")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    cmd->add_option("--format", config.format, "text | kv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    auto* o_b0 = cmd->add_option("--b0", b0, "initial guess as raw cosine amplitudes a1,a2,...")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nbvp::exit_config;
    }
    if (*o_m) config.m = m;
    if (*o_sp) config.solver_panels = solver_panels;
    if (*o_rp) config.rigor_panels = rigor_panels;
    if (*o_sd) config.subdiv = subdiv;
    if (*o_it) config.max_iter = max_iter;
    if (*o_b0) config.b0 = b0;
    return nbvp::run(config, std::cout, std::cerr);
}
