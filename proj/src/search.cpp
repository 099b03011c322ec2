#include "tractionpf/search.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace tpf {

void SearchConfig::validate() const {
    auto fail = [](const std::string& message) {
        throw ValidationError(ValidationCode::invalid_config, message);
    };
    if (!(delta_opt > 0.0) || !(delta_opt <= delta_act) || !(delta_act <= 1.0)) {
        fail(fmt::format("need 0 < delta_opt <= delta_act <= 1, got delta_opt={} delta_act={}", delta_opt, delta_act));
    }
    if (!(c_bi > 0.0 && c_bi < 1.0)) {
        fail(fmt::format("c_bi must lie in (0, 1), got {}", c_bi));
    }
    if (!(delta_alpha > 0.0 && delta_alpha < 1.0)) {
        fail(fmt::format("delta_alpha must lie in (0, 1), got {}", delta_alpha));
    }
    if (max_outer < 1) {
        fail(fmt::format("max_outer must be >= 1, got {}", max_outer));
    }
    nr.validate();
}

int final_nr_budget(const SearchConfig& cfg) {
    int budget = cfg.nr.max_iters;
    double act = cfg.delta_act;
    for (;;) {
        act /= 10.0;
        if (act < cfg.delta_opt) return budget;
        budget *= 2;
    }
}

namespace {

TraceEntry summarize(double alpha, const NrOutcome& out, int max_iters) {
    return {alpha, out.converged, out.status, out.iterations, max_iters, out.final_residual_norm};
}

}  // namespace

SearchResult search_basic(const MnaSystem& sys, const SearchConfig& cfg) {
    cfg.validate();

    SearchResult result;
    result.alpha_hat = 0.0;
    result.phi_hat = zero_demand_solution(sys);

    const Potentials start = start_point(sys);
    bool accepted = false;
    for (long k = 0;; ++k) {
        // multiply rather than accumulate so the grid does not drift
        const double alpha = std::min(1.0, static_cast<double>(k) * cfg.delta_alpha);
        const auto out = newton_solve(sys, alpha, accepted ? result.phi_hat : start, cfg.nr);
        result.trace.push_back(summarize(alpha, out, cfg.nr.max_iters));
        ++result.outer_iterations;
        if (!out.converged) {
            result.failed_buffer_final.push_back(alpha);
            break;
        }
        result.alpha_hat = alpha;
        result.phi_hat = out.phi;
        accepted = true;
        if (alpha >= 1.0) break;
    }
    result.fully_supplied = result.alpha_hat >= 1.0;
    return result;
}

SearchResult search_efficient(const MnaSystem& sys, const SearchConfig& cfg) {
    cfg.validate();

    SearchResult result;
    result.alpha_hat = 0.0;
    result.phi_hat = zero_demand_solution(sys);

    const Potentials start = start_point(sys);
    bool accepted = false;
    std::vector<double> failed;  // used as a stack, most recent failure at back()
    double alpha_try = 1.0;
    NrConfig nr = cfg.nr;
    double delta_act = cfg.delta_act;

    auto finish = [&]() {
        result.failed_buffer_final = failed;
        result.fully_supplied = result.alpha_hat >= 1.0;
        return result;
    };

    for (;;) {
        if (result.outer_iterations >= cfg.max_outer) {
            throw SearchError(fmt::format("no termination after {} outer iterations (alpha_hat={}, delta_act={})",
                                          cfg.max_outer, result.alpha_hat, delta_act),
                              result.trace);
        }
        ++result.outer_iterations;

        const auto out = newton_solve(sys, alpha_try, accepted ? result.phi_hat : start, nr);
        result.trace.push_back(summarize(alpha_try, out, nr.max_iters));
        if (out.converged) {
            result.alpha_hat = alpha_try;
            result.phi_hat = out.phi;
            accepted = true;
        } else {
            failed.push_back(alpha_try);
        }

        if (failed.empty()) return finish();

        if (std::abs(result.alpha_hat - failed.back()) >= delta_act) {
            alpha_try = result.alpha_hat + cfg.c_bi * (failed.back() - result.alpha_hat);
            ++result.bisections;
            continue;
        }

        // close to the boundary: the problem is ill-conditioned, so allow
        // more NR iterations and tighten the active tolerance
        nr.max_iters *= 2;
        delta_act /= 10.0;
        if (delta_act < cfg.delta_opt) return finish();
        alpha_try = failed.back();
        failed.pop_back();
    }
}

DichotomyCheck verify_dichotomy(const MnaSystem& sys, double alpha_hat, std::size_t grid_size, const NrConfig& nr) {
    if (grid_size == 0) {
        throw std::invalid_argument("grid_size must be >= 1");
    }
    if (!(alpha_hat >= 0.0 && alpha_hat <= 1.0)) {
        throw std::invalid_argument(fmt::format("alpha_hat must lie in [0, 1], got {}", alpha_hat));
    }
    nr.validate();

    Potentials phi = start_point(sys);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double alpha = grid_size == 1
                                 ? alpha_hat
                                 : alpha_hat * static_cast<double>(k) / static_cast<double>(grid_size - 1);
        const auto out = newton_solve(sys, alpha, phi, nr);
        if (!out.converged) {
            return {false, alpha};
        }
        phi = out.phi;
    }
    return {};
}

}  // namespace tpf
