#pragma once

// Text renderings of solver results. Output is deterministic: fixed field
// order, potentials and electrical quantities to 6 significant digits,
// scaling parameters to 4 decimal places.

#include "tractionpf/analysis.hpp"
#include "tractionpf/newton.hpp"
#include "tractionpf/scenarios.hpp"
#include "tractionpf/search.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tpf {

enum class OutputFormat { table, csv, json };

std::string format_alpha(double alpha);
std::string format_value(double value);

/// Value rounded the way format_value()/format_alpha() print it.
double round_value(double value);
double round_alpha(double alpha);

nlohmann::ordered_json potentials_json(const MnaSystem& sys, const Potentials& phi);
nlohmann::ordered_json to_json(const BranchReport& report);
nlohmann::ordered_json to_json(const SweepReport& report);
nlohmann::ordered_json to_json(const std::vector<TimelineStep>& steps);
nlohmann::ordered_json to_json(const TimingSummary& summary);

std::string potentials_csv(const MnaSystem& sys, const Potentials& phi);
std::string to_csv(const BranchReport& report);
std::string to_csv(const SweepReport& report);
std::string to_csv(const std::vector<TimelineStep>& steps);

std::string potentials_table(const MnaSystem& sys, const Potentials& phi);
std::string to_table(const BranchReport& report);
std::string to_table(const SweepReport& report);
std::string to_table(const std::vector<TimelineStep>& steps);

}  // namespace tpf
