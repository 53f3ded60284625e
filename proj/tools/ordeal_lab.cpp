#include <iostream>

#include "CLI11.hpp"
#include "ordeal/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ordeal_lab: numerical laboratory for ordeal and damage screening"};
    app.require_subcommand(1);
    ordeal::cli::RunOptions opts;
    std::string scenario;
    app.add_option("--scenario", scenario, "scenario TOML file");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--grid", opts.grid, "grid resolution N");
    app.add_option("--tol", opts.tol, "mass tolerance for clearing");
    app.add_option("--seed", opts.seed, "random seed");
    for (const auto& c : ordeal::cli::commands()) app.add_subcommand(c, "run " + c)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    std::string command = app.get_subcommands().front()->get_name();
    return ordeal::cli::execute(command, scenario, opts, std::cout, std::cerr);
}
