#include "tractionpf/analysis.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace tpf {

double BranchReport::source_power() const {
    double total = 0.0;
    for (const auto& s : sources) total += s.power;
    return total;
}

double BranchReport::received_power() const {
    double total = 0.0;
    for (const auto& l : loads) total += l.received;
    return total;
}

BranchReport branch_report(const CircuitSpec& spec, const MnaSystem& sys, const Potentials& phi, double alpha,
                           double delta_con) {
    if (spec.resistors.size() != sys.branches().size() || spec.nodes.size() != sys.size()) {
        throw std::invalid_argument("circuit spec does not match the assembled system");
    }
    const double norm = residual(sys, phi, alpha).norm();
    if (!(norm < delta_con)) {
        throw PreconditionError(
            fmt::format("branch report needs a converged point: residual {:.3e} >= {:.3e}", norm, delta_con));
    }

    const auto& part = sys.partition();
    auto at = [&](std::size_t index) { return phi(static_cast<Eigen::Index>(index)); };

    BranchReport report;
    report.alpha = alpha;
    // net current leaving each node through resistors
    std::vector<double> outflow(sys.size(), 0.0);
    report.resistors.reserve(spec.resistors.size());
    for (std::size_t k = 0; k < spec.resistors.size(); ++k) {
        const auto& br = sys.branches()[k];
        const double current = (at(br.from) - at(br.to)) / br.ohms;
        outflow[br.from] += current;
        outflow[br.to] -= current;
        report.losses += current * current * br.ohms;
        report.resistors.push_back({spec.resistors[k].a, spec.resistors[k].b, br.ohms, current});
    }
    for (const auto& s : spec.sources) {
        const auto i = *part.index_of(s.node);
        report.sources.push_back({s.node, at(i), outflow[i], at(i) * outflow[i]});
    }
    for (const auto& l : spec.loads) {
        const auto i = *part.index_of(l.node);
        const double drawn = -outflow[i];
        report.loads.push_back({l.node, l.watts, at(i), drawn, at(i) * drawn});
    }
    return report;
}

std::vector<double> uniform_grid(std::size_t n) {
    if (n == 0) throw std::invalid_argument("grid needs at least one point");
    std::vector<double> grid(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        grid[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return grid;
}

namespace {

SweepRecord sweep_point(const MnaSystem& sys, double alpha, const Potentials& start, const NrConfig& cfg,
                        Potentials* solution) {
    const auto out = newton_solve(sys, alpha, start, cfg);
    SweepRecord rec{alpha, out.converged, out.final_residual_norm, out.iterations, std::nullopt};
    if (out.converged) {
        rec.condition = condition_estimate(jacobian(sys, out.phi, alpha), cfg.dense_threshold);
        if (solution != nullptr) *solution = out.phi;
    }
    return rec;
}

}  // namespace

SweepReport alpha_sweep(const MnaSystem& sys, const std::vector<double>& grid, const NrConfig& cfg, SweepMode mode) {
    cfg.validate();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) {
            throw std::invalid_argument(fmt::format("grid[{}] = {} is outside [0, 1]", k, grid[k]));
        }
        if (k > 0 && grid[k] < grid[k - 1]) {
            throw std::invalid_argument(fmt::format("grid is not sorted at index {}", k));
        }
    }

    SweepReport report;
    report.records.resize(grid.size());
    const Potentials start = start_point(sys);

    if (mode == SweepMode::warm_start) {
        Potentials phi = start;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            report.records[k] = sweep_point(sys, grid[k], phi, cfg, &phi);
        }
        return report;
    }

    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(grid.size(), 1));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < grid.size(); k += workers) {
                report.records[k] = sweep_point(sys, grid[k], start, cfg, nullptr);
            }
        });
    }
    for (auto& t : pool) t.join();
    return report;
}

TimingSummary timing_harness(const CircuitSpec& spec, int repetitions, const SearchConfig& cfg) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    const MnaSystem sys = assemble(spec);

    using clock = std::chrono::steady_clock;
    TimingSummary summary;
    summary.repetitions = repetitions;
    summary.min_seconds = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int r = 0; r < repetitions; ++r) {
        const auto t0 = clock::now();
        const auto result = search_efficient(sys, cfg);
        const double dt = std::chrono::duration<double>(clock::now() - t0).count();
        total += dt;
        summary.min_seconds = std::min(summary.min_seconds, dt);
        summary.max_seconds = std::max(summary.max_seconds, dt);
        if (r == 0) {
            summary.alpha_hat = result.alpha_hat;
        } else if (result.alpha_hat != summary.alpha_hat) {
            summary.deterministic = false;
        }
    }
    summary.mean_seconds = total / repetitions;
    return summary;
}

}  // namespace tpf
