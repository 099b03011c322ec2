// tractionpf: DC power flow and maximal demand scaling for overhead-wire networks.

#include "tractionpf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using tpf::cli::Command;
    using tpf::cli::CliInvocation;

    CLI::App app{"DC power flow with maximal uniform demand scaling for traction networks", "tractionpf"};
    app.require_subcommand(1);

    CliInvocation inv;
    const std::map<std::string, tpf::OutputFormat> formats{
        {"table", tpf::OutputFormat::table}, {"csv", tpf::OutputFormat::csv}, {"json", tpf::OutputFormat::json}};

    auto add_common = [&](CLI::App* sub, bool with_input) {
        if (with_input) {
            sub->add_option("input", inv.input, "netlist (JSON) or built-in scenario: toy1, toy2, single:V,R,P")
                ->required();
        }
        sub->add_option("--delta-con", inv.config.nr.delta_con, "NR residual tolerance");
        sub->add_option("--max-nr", inv.config.nr.max_iters, "initial NR iteration budget");
        sub->add_option("--delta-opt", inv.config.delta_opt, "optimality tolerance of the bisection");
        sub->add_option("--delta-act", inv.config.delta_act, "initial active bracket tolerance");
        sub->add_option("--c-bi", inv.config.c_bi, "bisection coefficient");
        sub->add_option("--delta-alpha", inv.config.delta_alpha, "increment of the incremental search");
        sub->add_option("--format", inv.format, "output format")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--out", inv.out_path, "write the report to this file");
    };

    auto* solve = app.add_subcommand("solve", "Newton-Raphson solve at a fixed scaling alpha");
    add_common(solve, true);
    solve->add_option("--alpha", inv.alpha, "demand scaling in [0, 1]");

    auto* search = app.add_subcommand("search", "find the maximal solvable demand scaling");
    add_common(search, true);
    search->add_flag("--basic", inv.basic, "use the incremental walk instead of buffered bisection");

    auto* sweep = app.add_subcommand("sweep", "solvability, residual, iterations and condition over an alpha grid");
    add_common(sweep, true);
    sweep->add_option("--grid", inv.grid, "number of uniform grid points on [0, 1]");

    auto* scenario = app.add_subcommand("scenario", "print a built-in scenario as a netlist");
    scenario->add_option("name", inv.input, "toy1, toy2 or single:V,R,P")->required();
    scenario->add_option("--out", inv.out_path, "write the netlist to this file");

    auto* timeline = app.add_subcommand("timeline", "single vehicle driving a straight route");
    add_common(timeline, false);
    timeline->add_option("--route-length", inv.route.route_length, "m");
    timeline->add_option("--spacing", inv.route.intersection_spacing, "intersection spacing, m");
    timeline->add_option("--substation-pos", inv.route.substation_position, "m");
    timeline->add_option("--feeder-length", inv.route.feeder_length, "m");
    timeline->add_option("--voltage", inv.route.voltage, "substation voltage, V");
    timeline->add_option("--resistivity", inv.route.resistivity, "wire resistance, ohm/m");
    timeline->add_option("--dt", inv.route.dt, "time step, s");
    timeline->add_option("--duration", inv.route.max_duration, "maximal simulated time, s");
    timeline->add_option("--constant-power", inv.constant_power, "constant demand (W) instead of stop-and-go");
    timeline->add_option("--speed", inv.constant_speed, "speed for --constant-power, m/s");

    auto* verify = app.add_subcommand("verify", "check solvability on a grid of [0, alpha_hat]");
    add_common(verify, true);
    auto* verify_grid = verify->add_option("--grid", inv.grid, "number of grid points (default 50)");
    verify->add_option("--alpha", inv.verify_alpha, "alpha_hat to check (default: run the search)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tpf::cli::kExitInvalid;
    }

    if (*solve) inv.command = Command::solve;
    else if (*search) inv.command = Command::search;
    else if (*sweep) inv.command = Command::sweep;
    else if (*scenario) inv.command = Command::scenario;
    else if (*timeline) inv.command = Command::timeline;
    else inv.command = Command::verify;

    if (*verify && verify_grid->count() == 0) inv.grid = 50;

    return tpf::cli::run(inv, std::cout, std::cerr);
}
