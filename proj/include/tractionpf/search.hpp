#pragma once

// Largest demand scaling alpha in [0, 1] for which the scaled DC power flow
// has a solution: an incremental walk and a buffered bisection that starts
// at alpha = 1 and adapts the NR budget near the solvability boundary.

#include "tractionpf/newton.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace tpf {

struct SearchConfig {
    double delta_alpha = 1e-2;  ///< increment of the incremental walk
    double delta_opt = 1e-5;    ///< stop once the active tolerance drops below this
    double delta_act = 1e-2;    ///< initial active bracket tolerance
    double c_bi = 0.5;          ///< bisection coefficient
    NrConfig nr;                ///< initial NR budget, doubled adaptively
    int max_outer = 200;

    void validate() const;
};

/// Largest NR iteration budget search_efficient can hand to a solve.
int final_nr_budget(const SearchConfig& cfg);

struct TraceEntry {
    double alpha = 0.0;
    bool converged = false;
    NrStatus status = NrStatus::iteration_limit;
    int iterations = 0;
    int max_iters = 0;
    double residual_norm = 0.0;
};

struct SearchResult {
    double alpha_hat = 0.0;
    Potentials phi_hat;
    bool fully_supplied = false;
    std::vector<TraceEntry> trace;
    /// Failed alphas still buffered at termination; all exceed alpha_hat.
    std::vector<double> failed_buffer_final;
    int outer_iterations = 0;
    int bisections = 0;
};

/// max_outer exhausted; carries the trace for diagnosis.
class SearchError : public std::runtime_error {
public:
    SearchError(const std::string& message, std::vector<TraceEntry> trace)
        : std::runtime_error(message), trace_(std::move(trace)) {}

    [[nodiscard]] const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    std::vector<TraceEntry> trace_;
};

/// Walks alpha = 0, d, 2d, ..., 1 (1 always included) and returns the last
/// alpha at which NR converged.
SearchResult search_basic(const MnaSystem& sys, const SearchConfig& cfg = {});

/// Buffered bisection from alpha = 1. Returns after a single NR call when
/// the unscaled problem is solvable.
SearchResult search_efficient(const MnaSystem& sys, const SearchConfig& cfg = {});

struct DichotomyCheck {
    bool holds = true;
    std::optional<double> offending_alpha;
};

/// Confirms NR convergence on grid_size uniform points of [0, alpha_hat].
/// The default budget is the final one search_efficient reaches, so an
/// alpha_hat it accepted is reproducible here.
DichotomyCheck verify_dichotomy(const MnaSystem& sys, double alpha_hat, std::size_t grid_size,
                                const NrConfig& nr = NrConfig{.max_iters = final_nr_budget(SearchConfig{})});

}  // namespace tpf
