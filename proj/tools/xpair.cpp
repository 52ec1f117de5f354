#include <iostream>

#include <CLI11.hpp>

#include "xpair/commands.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Double Compton scattering cross sections, rates and pair events"};
    app.require_subcommand(1, 1);

    xpair::CommandOptions opts;
    std::uint64_t seed = 0;
    double tol = 0;
    for (const char* name : {"grid", "rates", "sample", "report"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opts.scenario_path, "scenario file")->required();
        sub->add_option("--out", opts.out_path, "output path (default: stdout)");
        sub->add_option("--seed", seed, "sampler seed override");
        sub->add_option("--tol", tol, "relative integration tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : xpair::exit_validation;
    }
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed"))
        opts.seed = seed;
    if (sub->count("--tol"))
        opts.tolerance = tol;
    return xpair::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
