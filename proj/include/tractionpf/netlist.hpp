#pragma once

// JSON netlist:
//   {
//     "nodes":     ["n1", "n2"],
//     "resistors": [{"a": "n1", "b": "n2", "ohms": 0.1}],
//     "sources":   [{"node": "n1", "volts": 600}],
//     "loads":     [{"node": "n2", "watts": 5e5}]
//   }
// "loads" may be omitted. Unknown keys are rejected.

#include "tractionpf/network.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace tpf {

/// Parses and validates. Throws ValidationError whose message names the
/// line/column (syntax errors) or the field path (schema errors).
CircuitSpec parse_netlist(std::string_view text);

CircuitSpec load_netlist(const std::filesystem::path& path);

/// Canonical encoding: fixed key order, two-space indent, round-trip doubles.
std::string dump_netlist(const CircuitSpec& spec);

}  // namespace tpf
