#pragma once

#include "tractionpf/linsolve.hpp"
#include "tractionpf/network.hpp"

#include <string_view>
#include <vector>

namespace tpf {

struct NrConfig {
    double delta_con = 1e-8;  ///< Euclidean residual tolerance
    int max_iters = 10;
    std::size_t dense_threshold = kDenseThreshold;

    /// Throws ValidationError(invalid_config).
    void validate() const;
};

enum class NrStatus {
    converged,
    iteration_limit,
    singular_jacobian,
    non_finite,
};

std::string_view to_string(NrStatus status);

struct NrOutcome {
    bool converged = false;
    NrStatus status = NrStatus::iteration_limit;
    Potentials phi;
    int iterations = 0;
    double final_residual_norm = 0.0;
    /// log|det J| at the last factored Jacobian; -inf when singular.
    double log_abs_det = 0.0;
    /// Residual norm at the start point followed by one entry per update.
    std::vector<double> residual_history;
};

/// Solution of A*phi0 = b(U*1, 1): load currents frozen at the nominal
/// (mean) source level. Throws EvaluationError if A is singular or the
/// nominal level is zero.
Potentials initial_guess(const MnaSystem& sys);

/// Exact solution at alpha = 0 (no demand supplied).
Potentials zero_demand_solution(const MnaSystem& sys);

/// initial_guess(), unless it puts a load node inside the zero-potential
/// guard, in which case the zero-demand solution.
Potentials start_point(const MnaSystem& sys);

/// Plain Newton-Raphson at fixed alpha. Non-convergence, a singular Jacobian
/// or a non-finite iterate is reported in the outcome, never thrown.
NrOutcome newton_solve(const MnaSystem& sys, double alpha, const Potentials& phi_init, const NrConfig& cfg = {});

}  // namespace tpf
