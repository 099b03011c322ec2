#pragma once

#include "tractionpf/newton.hpp"
#include "tractionpf/search.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tpf {

struct BranchCurrent {
    std::string a;
    std::string b;
    double ohms = 0.0;
    double current = 0.0;  ///< amperes, positive when flowing a -> b
};

struct SourceFlow {
    std::string node;
    double volts = 0.0;
    double current = 0.0;  ///< injected into the network
    double power = 0.0;
};

struct LoadFlow {
    std::string node;
    double demanded = 0.0;  ///< P_i before scaling
    double potential = 0.0;
    double current = 0.0;   ///< drawn from the network
    double received = 0.0;  ///< potential * current; equals alpha * P_i at a solution
};

struct BranchReport {
    double alpha = 0.0;
    std::vector<BranchCurrent> resistors;  ///< spec order
    std::vector<SourceFlow> sources;       ///< spec order
    std::vector<LoadFlow> loads;           ///< spec order
    double losses = 0.0;

    [[nodiscard]] double source_power() const;
    [[nodiscard]] double received_power() const;
};

/// Ohm's-law bookkeeping at a converged point. Throws PreconditionError if
/// the residual at (phi, alpha) is not below delta_con.
BranchReport branch_report(const CircuitSpec& spec, const MnaSystem& sys, const Potentials& phi, double alpha,
                           double delta_con = NrConfig{}.delta_con);

struct SweepRecord {
    double alpha = 0.0;
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;
    std::optional<double> condition;  ///< Jacobian condition at the solution
};

struct SweepReport {
    std::vector<SweepRecord> records;
};

enum class SweepMode {
    warm_start,   ///< sequential, each point starts from the last converged one
    independent,  ///< every point starts from initial_guess; runs in parallel
};

/// Grid must be sorted and inside [0, 1].
SweepReport alpha_sweep(const MnaSystem& sys, const std::vector<double>& grid, const NrConfig& cfg = {},
                        SweepMode mode = SweepMode::warm_start);

/// n points spaced uniformly on [0, 1]; {0} for n == 1.
std::vector<double> uniform_grid(std::size_t n);

struct TimingSummary {
    int repetitions = 0;
    double mean_seconds = 0.0;
    double min_seconds = 0.0;
    double max_seconds = 0.0;
    double alpha_hat = 0.0;
    bool deterministic = true;  ///< alpha_hat identical across repetitions
};

/// Wall-clock statistics of search_efficient (search call only, system assembled once).
TimingSummary timing_harness(const CircuitSpec& spec, int repetitions, const SearchConfig& cfg = {});

}  // namespace tpf
