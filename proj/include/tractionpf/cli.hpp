#pragma once

#include "tractionpf/report.hpp"
#include "tractionpf/scenarios.hpp"
#include "tractionpf/search.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tpf::cli {

enum class Command { solve, search, sweep, scenario, timeline, verify };

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNoSolution = 2;

struct CliInvocation {
    Command command = Command::search;
    /// Netlist path, or a built-in name: "toy1", "toy2", "single:V,R,P".
    std::string input;
    SearchConfig config;
    double alpha = 1.0;                  ///< solve
    std::optional<double> verify_alpha;  ///< verify: check this alpha instead of searching
    bool basic = false;                  ///< search: incremental walk instead of bisection
    std::size_t grid = 101;              ///< sweep / verify points
    OutputFormat format = OutputFormat::table;
    std::string out_path;  ///< empty = stream passed to run()

    RouteOptions route;                   ///< timeline
    std::optional<double> constant_power;  ///< timeline: constant demand instead of stop-and-go
    double constant_speed = 10.0;
};

std::vector<std::string> builtin_scenarios();

/// Built-in scenario by name, or nullopt if the name is not one.
std::optional<CircuitSpec> builtin_scenario(const std::string& name);

/// Netlist file if it exists, otherwise a built-in scenario.
CircuitSpec resolve_input(const std::string& input);

/// Executes one command. Reports go to `out` (or out_path), diagnostics to `err`.
int run(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace tpf::cli
