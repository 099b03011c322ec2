#include "tractionpf/cli.hpp"

#include "tractionpf/analysis.hpp"
#include "tractionpf/errors.hpp"
#include "tractionpf/netlist.hpp"

#include <fmt/format.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace tpf::cli {

using nlohmann::ordered_json;

namespace {

std::optional<double> parse_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

std::string_view command_name(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::search: return "search";
        case Command::sweep: return "sweep";
        case Command::scenario: return "scenario";
        case Command::timeline: return "timeline";
        case Command::verify: return "verify";
    }
    return "?";
}

void emit_solution(std::string& text, OutputFormat format, ordered_json head, const MnaSystem& sys,
                   const Potentials& phi, const std::optional<BranchReport>& branches) {
    switch (format) {
        case OutputFormat::json: {
            head["potentials"] = potentials_json(sys, phi);
            if (branches) head["branches"] = to_json(*branches);
            text += head.dump(2) + "\n";
            break;
        }
        case OutputFormat::csv: {
            text += potentials_csv(sys, phi);
            if (branches) text += "\n" + to_csv(*branches);
            break;
        }
        case OutputFormat::table: {
            for (const auto& [key, value] : head.items()) {
                if (value.is_number_float()) {
                    text += fmt::format("{:<18} {}\n", key + ":", key.starts_with("alpha") ? format_alpha(value.get<double>())
                                                                                        : format_value(value.get<double>()));
                } else if (value.is_string()) {
                    text += fmt::format("{:<18} {}\n", key + ":", value.get<std::string>());
                } else {
                    text += fmt::format("{:<18} {}\n", key + ":", value.dump());
                }
            }
            text += "\n" + potentials_table(sys, phi);
            if (branches) text += "\n" + to_table(*branches);
            break;
        }
    }
}

std::string run_solve(const CliInvocation& inv, std::ostream& err, int& status) {
    const auto spec = resolve_input(inv.input);
    const auto sys = assemble(spec);
    if (!(inv.alpha >= 0.0 && inv.alpha <= 1.0)) {
        throw ValidationError(ValidationCode::invalid_config, fmt::format("--alpha must lie in [0, 1], got {}", inv.alpha));
    }
    const auto out = newton_solve(sys, inv.alpha, start_point(sys), inv.config.nr);
    if (!out.converged) {
        err << fmt::format("no solution at alpha = {}: Newton-Raphson stopped ({}) after {} iterations, residual {}\n",
                           format_alpha(inv.alpha), to_string(out.status), out.iterations,
                           format_value(out.final_residual_norm));
        status = kExitNoSolution;
        return {};
    }
    ordered_json head;
    head["command"] = "solve";
    head["alpha"] = round_alpha(inv.alpha);
    head["iterations"] = out.iterations;
    head["residual"] = round_value(out.final_residual_norm);
    std::string text;
    emit_solution(text, inv.format, head, sys, out.phi,
                  branch_report(spec, sys, out.phi, inv.alpha, inv.config.nr.delta_con));
    return text;
}

std::string run_search(const CliInvocation& inv) {
    const auto spec = resolve_input(inv.input);
    const auto sys = assemble(spec);
    const auto result = inv.basic ? search_basic(sys, inv.config) : search_efficient(sys, inv.config);
    ordered_json head;
    head["command"] = "search";
    head["algorithm"] = inv.basic ? "incremental" : "bisection";
    head["alpha_hat"] = round_alpha(result.alpha_hat);
    head["fully_supplied"] = result.fully_supplied;
    head["nr_calls"] = result.trace.size();
    std::optional<BranchReport> branches;
    if (residual(sys, result.phi_hat, result.alpha_hat).norm() < inv.config.nr.delta_con) {
        branches = branch_report(spec, sys, result.phi_hat, result.alpha_hat, inv.config.nr.delta_con);
    }
    std::string text;
    emit_solution(text, inv.format, head, sys, result.phi_hat, branches);
    return text;
}

std::string run_sweep(const CliInvocation& inv) {
    const auto sys = assemble(resolve_input(inv.input));
    const auto report = alpha_sweep(sys, uniform_grid(inv.grid), inv.config.nr);
    switch (inv.format) {
        case OutputFormat::json: return to_json(report).dump(2) + "\n";
        case OutputFormat::csv: return to_csv(report);
        case OutputFormat::table: return to_table(report);
    }
    return {};
}

std::string run_scenario(const CliInvocation& inv) {
    auto spec = builtin_scenario(inv.input);
    if (!spec) {
        throw ValidationError(ValidationCode::invalid_config,
                              fmt::format("unknown scenario '{}' (available: toy1, toy2, single:V,R,P)", inv.input));
    }
    return dump_netlist(*spec);
}

std::string run_timeline(const CliInvocation& inv) {
    const auto cycle = inv.constant_power ? constant_cycle(inv.constant_speed, *inv.constant_power)
                                          : stop_and_go_cycle(inv.route.intersection_spacing);
    const auto steps = straight_route_timeline(inv.route, cycle, inv.config);
    switch (inv.format) {
        case OutputFormat::json: return to_json(steps).dump(2) + "\n";
        case OutputFormat::csv: return to_csv(steps);
        case OutputFormat::table: return to_table(steps);
    }
    return {};
}

std::string run_verify(const CliInvocation& inv) {
    const auto sys = assemble(resolve_input(inv.input));
    double alpha_hat = 0.0;
    if (inv.verify_alpha) {
        alpha_hat = *inv.verify_alpha;
    } else {
        alpha_hat = search_efficient(sys, inv.config).alpha_hat;
    }
    const auto check = verify_dichotomy(sys, alpha_hat, inv.grid);
    ordered_json doc;
    doc["command"] = "verify";
    doc["alpha_hat"] = round_alpha(alpha_hat);
    doc["grid"] = inv.grid;
    doc["holds"] = check.holds;
    doc["offending_alpha"] = check.offending_alpha ? ordered_json(round_alpha(*check.offending_alpha)) : nullptr;
    switch (inv.format) {
        case OutputFormat::json: return doc.dump(2) + "\n";
        case OutputFormat::csv:
            return fmt::format("alpha_hat,grid,holds,offending_alpha\n{},{},{},{}\n", format_alpha(alpha_hat), inv.grid,
                               check.holds ? 1 : 0,
                               check.offending_alpha ? format_alpha(*check.offending_alpha) : std::string());
        case OutputFormat::table:
            if (check.holds) {
                return fmt::format("solvable at all {} grid points of [0, {}]\n", inv.grid, format_alpha(alpha_hat));
            }
            return fmt::format("not solvable at alpha = {} (grid of {} points on [0, {}])\n",
                               format_alpha(*check.offending_alpha), inv.grid, format_alpha(alpha_hat));
    }
    return {};
}

}  // namespace

std::vector<std::string> builtin_scenarios() { return {"toy1", "toy2", "single:V,R,P"}; }

std::optional<CircuitSpec> builtin_scenario(const std::string& name) {
    if (name == "toy1") return toy_case_1().to_circuit();
    if (name == "toy2") return toy_case_2().to_circuit();
    if (name.starts_with("single:")) {
        std::vector<double> values;
        std::string_view rest = std::string_view(name).substr(7);
        while (true) {
            const auto comma = rest.find(',');
            const auto v = parse_double(rest.substr(0, comma));
            if (!v) break;
            values.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (values.size() != 3) {
            throw ValidationError(ValidationCode::invalid_config,
                                  fmt::format("scenario '{}': expected single:VOLTS,OHMS,WATTS", name));
        }
        return single_load_circuit(values[0], values[1], values[2]);
    }
    return std::nullopt;
}

CircuitSpec resolve_input(const std::string& input) {
    if (input.empty()) {
        throw ValidationError(ValidationCode::invalid_config, "no input netlist or scenario given");
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(input, ec)) return load_netlist(input);
    if (auto spec = builtin_scenario(input)) return *spec;
    throw ValidationError(ValidationCode::malformed_input,
                          fmt::format("'{}' is neither a readable netlist nor a built-in scenario", input));
}

int run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    int status = kExitOk;
    std::string text;
    try {
        inv.config.validate();
        if ((inv.command == Command::sweep || inv.command == Command::verify) && inv.grid == 0) {
            throw ValidationError(ValidationCode::invalid_config, "--grid must be >= 1");
        }
        switch (inv.command) {
            case Command::solve: text = run_solve(inv, err, status); break;
            case Command::search: text = run_search(inv); break;
            case Command::sweep: text = run_sweep(inv); break;
            case Command::scenario: text = run_scenario(inv); break;
            case Command::timeline: text = run_timeline(inv); break;
            case Command::verify: text = run_verify(inv); break;
        }
    } catch (const ValidationError& e) {
        err << fmt::format("error: {}\n", e.what());
        return kExitInvalid;
    } catch (const SearchError& e) {
        err << fmt::format("error: {} ({} NR calls traced)\n", e.what(), e.trace().size());
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << fmt::format("error in {}: {}\n", command_name(inv.command), e.what());
        return kExitInvalid;
    }

    if (status != kExitOk) return status;
    if (inv.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(inv.out_path, std::ios::binary);
        if (!file) {
            err << fmt::format("error: cannot write '{}'\n", inv.out_path);
            return kExitInvalid;
        }
        file << text;
    }
    return kExitOk;
}

}  // namespace tpf::cli
