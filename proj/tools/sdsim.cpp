// sdsim: run service discovery scenarios from the command line.

#include <iostream>

#include "CLI11.hpp"
#include "sdsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Service discovery simulator for mobile ad-hoc networks"};
    app.require_subcommand(1);

    sdsim::RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Run one scenario and write histogram/summary CSVs");
    run->add_option("config", run_opts.config_path, "Scenario file")->required();
    run->add_option("--out", run_opts.out_dir, "Output directory");
    run->add_flag("--trace", run_opts.trace, "Also write trace.log");
    run->add_option("--set", run_opts.overrides, "Override a scenario key (key=value)");

    sdsim::CompareOptions cmp_opts;
    auto* compare = app.add_subcommand("compare", "Paired runs with and without periodic advertisement");
    compare->add_option("config", cmp_opts.config_path, "Scenario file")->required();
    compare->add_option("--seeds", cmp_opts.seeds, "Number of derived seeds")->check(CLI::PositiveNumber);
    compare->add_option("--out", cmp_opts.out_dir, "Output directory");
    compare->add_option("--set", cmp_opts.overrides, "Override a scenario key (key=value)");

    app.add_subcommand("print-config", "Print the default scenario file");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return sdsim::cmd_run(run_opts, std::cout, std::cerr);
    if (compare->parsed()) return sdsim::cmd_compare(cmp_opts, std::cout, std::cerr);
    return sdsim::cmd_print_config(std::cout);
}
