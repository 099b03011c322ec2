#include "tractionpf/newton.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace tpf {

void NrConfig::validate() const {
    if (!(delta_con > 0.0) || !std::isfinite(delta_con)) {
        throw ValidationError(ValidationCode::invalid_config,
                              fmt::format("delta_con must be positive, got {}", delta_con));
    }
    if (max_iters < 1) {
        throw ValidationError(ValidationCode::invalid_config,
                              fmt::format("max NR iterations must be >= 1, got {}", max_iters));
    }
}

std::string_view to_string(NrStatus status) {
    switch (status) {
        case NrStatus::converged: return "converged";
        case NrStatus::iteration_limit: return "iteration_limit";
        case NrStatus::singular_jacobian: return "singular_jacobian";
        case NrStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

namespace {

Potentials solve_with_frozen_loads(const MnaSystem& sys, double alpha, double level) {
    const Potentials frozen = Potentials::Constant(static_cast<Eigen::Index>(sys.size()), level);
    const auto report = solve_linear(sys.matrix(), rhs(sys, frozen, alpha));
    if (report.singular) {
        throw EvaluationError("system matrix is singular");
    }
    return report.solution;
}

}  // namespace

Potentials initial_guess(const MnaSystem& sys) {
    return solve_with_frozen_loads(sys, 1.0, sys.nominal_voltage());
}

Potentials zero_demand_solution(const MnaSystem& sys) {
    // b does not depend on phi at alpha = 0; any admissible level will do
    return solve_with_frozen_loads(sys, 0.0, 1.0);
}

Potentials start_point(const MnaSystem& sys) {
    Potentials guess = initial_guess(sys);
    const auto& part = sys.partition();
    const auto loads = guess.segment(static_cast<Eigen::Index>(part.load_begin()),
                                     static_cast<Eigen::Index>(part.load_count()));
    if (loads.size() > 0 && loads.cwiseAbs().minCoeff() < kMinLoadPotential) return zero_demand_solution(sys);
    return guess;
}

NrOutcome newton_solve(const MnaSystem& sys, double alpha, const Potentials& phi_init, const NrConfig& cfg) {
    cfg.validate();
    if (phi_init.size() != static_cast<Eigen::Index>(sys.size())) {
        throw std::invalid_argument(
            fmt::format("initial point has {} entries, system has {} nodes", phi_init.size(), sys.size()));
    }

    const auto s0 = static_cast<Eigen::Index>(sys.partition().source_begin());
    const auto ns = sys.source().size();

    NrOutcome out;
    out.phi = phi_init;
    out.status = NrStatus::iteration_limit;

    const auto n = static_cast<Eigen::Index>(sys.size());
    const bool dense = static_cast<std::size_t>(n) <= cfg.dense_threshold;
    const auto j0 = static_cast<Eigen::Index>(sys.partition().load_begin());
    const auto nj = static_cast<Eigen::Index>(sys.partition().load_count());
    DenseMatrix a_dense;
    if (dense) a_dense = DenseMatrix(sys.matrix());

    Vector f;
    try {
        f = residual(sys, out.phi, alpha);
        out.final_residual_norm = f.norm();
    } catch (const EvaluationError&) {
        out.status = NrStatus::non_finite;
        out.final_residual_norm = std::numeric_limits<double>::infinity();
        return out;
    }
    out.residual_history.push_back(out.final_residual_norm);

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        out.iterations = iter;
        try {
            LinearSolveReport step;
            if (dense) {
                DenseMatrix jac = a_dense;
                for (Eigen::Index k = 0; k < nj; ++k) {
                    const double v = out.phi(j0 + k);
                    jac(j0 + k, j0 + k) -= alpha * sys.demand()(k) / (v * v);
                }
                step = solve_linear(jac, f);
            } else {
                step = solve_linear(jacobian(sys, out.phi, alpha), f, cfg.dense_threshold);
            }
            out.log_abs_det = step.log_abs_det;
            if (step.singular) {
                out.status = NrStatus::singular_jacobian;
                return out;
            }
            out.phi -= step.solution;
            // source rows are linear with unit diagonal: one step lands on U
            out.phi.segment(s0, ns) = sys.source();
            if (!out.phi.allFinite()) {
                out.status = NrStatus::non_finite;
                return out;
            }
            f = residual(sys, out.phi, alpha);
            out.final_residual_norm = f.norm();
        } catch (const EvaluationError&) {
            out.status = NrStatus::non_finite;
            out.final_residual_norm = std::numeric_limits<double>::infinity();
            return out;
        }
        out.residual_history.push_back(out.final_residual_norm);
        if (!std::isfinite(out.final_residual_norm)) {
            out.status = NrStatus::non_finite;
            return out;
        }
        if (out.final_residual_norm < cfg.delta_con) {
            out.converged = true;
            out.status = NrStatus::converged;
            return out;
        }
    }
    return out;
}

}  // namespace tpf
