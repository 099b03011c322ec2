#include "tractionpf/network.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace tpf {

std::string_view to_string(ValidationCode code) {
    switch (code) {
        case ValidationCode::empty_network: return "empty_network";
        case ValidationCode::invalid_node_id: return "invalid_node_id";
        case ValidationCode::duplicate_node: return "duplicate_node";
        case ValidationCode::unknown_node: return "unknown_node";
        case ValidationCode::nonpositive_resistance: return "nonpositive_resistance";
        case ValidationCode::self_loop: return "self_loop";
        case ValidationCode::invalid_value: return "invalid_value";
        case ValidationCode::no_voltage_source: return "no_voltage_source";
        case ValidationCode::duplicate_source: return "duplicate_source";
        case ValidationCode::duplicate_load: return "duplicate_load";
        case ValidationCode::source_and_load: return "source_and_load";
        case ValidationCode::disconnected: return "disconnected";
        case ValidationCode::invalid_config: return "invalid_config";
        case ValidationCode::malformed_input: return "malformed_input";
    }
    return "unknown";
}

namespace {

[[noreturn]] void reject(ValidationCode code, const std::string& message) {
    throw ValidationError(code, message);
}

}  // namespace

void CircuitSpec::validate() const {
    if (nodes.empty()) {
        reject(ValidationCode::empty_network, "circuit has no nodes");
    }

    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k].empty()) {
            reject(ValidationCode::invalid_node_id, fmt::format("nodes[{}]: empty node id", k));
        }
        if (!index.emplace(nodes[k], k).second) {
            reject(ValidationCode::duplicate_node, fmt::format("nodes[{}]: duplicate node '{}'", k, nodes[k]));
        }
    }

    auto lookup = [&](const std::string& id, std::string_view where) {
        auto it = index.find(id);
        if (it == index.end()) {
            reject(ValidationCode::unknown_node, fmt::format("{}: unknown node '{}'", where, id));
        }
        return it->second;
    };

    // adjacency for the connectivity check
    std::vector<std::vector<std::size_t>> adjacent(nodes.size());
    for (std::size_t k = 0; k < resistors.size(); ++k) {
        const auto& r = resistors[k];
        const auto where = fmt::format("resistors[{}]", k);
        const auto a = lookup(r.a, where);
        const auto b = lookup(r.b, where);
        if (a == b) {
            reject(ValidationCode::self_loop, fmt::format("{}: both ends on node '{}'", where, r.a));
        }
        if (!std::isfinite(r.ohms) || r.ohms <= 0.0) {
            reject(ValidationCode::nonpositive_resistance,
                   fmt::format("{}: resistance must be positive and finite, got {}", where, r.ohms));
        }
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    }

    if (sources.empty()) {
        reject(ValidationCode::no_voltage_source, "circuit has no voltage source");
    }
    std::unordered_set<std::size_t> source_nodes;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const auto where = fmt::format("sources[{}]", k);
        const auto n = lookup(sources[k].node, where);
        if (!std::isfinite(sources[k].volts)) {
            reject(ValidationCode::invalid_value, fmt::format("{}: voltage must be finite", where));
        }
        if (!source_nodes.insert(n).second) {
            reject(ValidationCode::duplicate_source,
                   fmt::format("{}: node '{}' already carries a source", where, sources[k].node));
        }
    }

    std::unordered_set<std::size_t> load_nodes;
    for (std::size_t k = 0; k < loads.size(); ++k) {
        const auto where = fmt::format("loads[{}]", k);
        const auto n = lookup(loads[k].node, where);
        if (!std::isfinite(loads[k].watts)) {
            reject(ValidationCode::invalid_value, fmt::format("{}: power must be finite", where));
        }
        if (source_nodes.contains(n)) {
            reject(ValidationCode::source_and_load,
                   fmt::format("{}: node '{}' carries both a source and a load", where, loads[k].node));
        }
        if (!load_nodes.insert(n).second) {
            reject(ValidationCode::duplicate_load,
                   fmt::format("{}: node '{}' already carries a load", where, loads[k].node));
        }
    }

    std::vector<bool> seen(nodes.size(), false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto n = frontier.front();
        frontier.pop();
        for (auto m : adjacent[n]) {
            if (!seen[m]) {
                seen[m] = true;
                ++reached;
                frontier.push(m);
            }
        }
    }
    if (reached != nodes.size()) {
        const auto first = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), false) - seen.begin());
        reject(ValidationCode::disconnected,
               fmt::format("circuit is disconnected: node '{}' is not reachable from '{}'", nodes[first], nodes[0]));
    }
}

NodePartition NodePartition::from(const CircuitSpec& spec) {
    std::unordered_set<std::string_view> sources;
    std::unordered_set<std::string_view> loads;
    for (const auto& s : spec.sources) sources.insert(s.node);
    for (const auto& l : spec.loads) loads.insert(l.node);

    std::vector<std::string> block_i;
    std::vector<std::string> block_j;
    std::vector<std::string> block_0;
    for (const auto& n : spec.nodes) {
        if (sources.contains(n)) {
            block_0.push_back(n);
        } else if (loads.contains(n)) {
            block_j.push_back(n);
        } else {
            block_i.push_back(n);
        }
    }
    std::sort(block_i.begin(), block_i.end());
    std::sort(block_j.begin(), block_j.end());
    std::sort(block_0.begin(), block_0.end());

    NodePartition p;
    p.n_resistor_ = block_i.size();
    p.n_load_ = block_j.size();
    p.n_source_ = block_0.size();
    p.order_.reserve(spec.nodes.size());
    for (auto* block : {&block_i, &block_j, &block_0}) {
        for (auto& n : *block) p.order_.push_back(std::move(n));
    }
    for (std::size_t k = 0; k < p.order_.size(); ++k) {
        p.index_.emplace(p.order_[k], k);
    }
    return p;
}

NodeKind NodePartition::kind(std::size_t index) const {
    if (index >= size()) {
        throw std::out_of_range("node index out of range");
    }
    if (index < load_begin()) return NodeKind::resistor_only;
    if (index < source_begin()) return NodeKind::load;
    return NodeKind::source;
}

std::optional<std::size_t> NodePartition::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

MnaSystem assemble(const CircuitSpec& spec) {
    spec.validate();

    MnaSystem sys;
    sys.partition_ = NodePartition::from(spec);
    const auto& part = sys.partition_;
    const auto n = part.size();
    const auto source_begin = part.source_begin();

    std::vector<Eigen::Triplet<double>> stamps;
    stamps.reserve(4 * spec.resistors.size() + part.source_count());
    sys.branches_.reserve(spec.resistors.size());
    for (const auto& r : spec.resistors) {
        const auto a = *part.index_of(r.a);
        const auto b = *part.index_of(r.b);
        const double g = 1.0 / r.ohms;
        sys.branches_.push_back({a, b, r.ohms});
        if (a < source_begin) {
            stamps.emplace_back(a, a, g);
            stamps.emplace_back(a, b, -g);
        }
        if (b < source_begin) {
            stamps.emplace_back(b, b, g);
            stamps.emplace_back(b, a, -g);
        }
    }
    for (std::size_t k = source_begin; k < n; ++k) {
        stamps.emplace_back(k, k, 1.0);
    }

    sys.matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    sys.matrix_.setFromTriplets(stamps.begin(), stamps.end());
    sys.matrix_.makeCompressed();

    sys.demand_ = Vector::Zero(static_cast<Eigen::Index>(part.load_count()));
    for (const auto& l : spec.loads) {
        sys.demand_(static_cast<Eigen::Index>(*part.index_of(l.node) - part.load_begin())) = l.watts;
    }
    sys.source_ = Vector::Zero(static_cast<Eigen::Index>(part.source_count()));
    for (const auto& s : spec.sources) {
        sys.source_(static_cast<Eigen::Index>(*part.index_of(s.node) - source_begin)) = s.volts;
    }
    return sys;
}

namespace {

void check_evaluation_point(const MnaSystem& sys, const Potentials& phi) {
    if (phi.size() != static_cast<Eigen::Index>(sys.size())) {
        throw std::invalid_argument(
            fmt::format("potential vector has {} entries, system has {} nodes", phi.size(), sys.size()));
    }
    const auto& part = sys.partition();
    for (auto k = part.load_begin(); k < part.source_begin(); ++k) {
        const double v = phi(static_cast<Eigen::Index>(k));
        if (!std::isfinite(v) || std::abs(v) < kMinLoadPotential) {
            throw EvaluationError(fmt::format("potential {} V at load node '{}' is not admissible", v, part.name(k)));
        }
    }
}

}  // namespace

Vector rhs(const MnaSystem& sys, const Potentials& phi, double alpha) {
    check_evaluation_point(sys, phi);
    const auto& part = sys.partition();
    const auto j0 = static_cast<Eigen::Index>(part.load_begin());
    const auto nj = static_cast<Eigen::Index>(part.load_count());
    const auto s0 = static_cast<Eigen::Index>(part.source_begin());

    Vector b = Vector::Zero(phi.size());
    b.segment(j0, nj) = -alpha * sys.demand().array() / phi.segment(j0, nj).array();
    b.segment(s0, sys.source().size()) = sys.source();
    return b;
}

Vector residual(const MnaSystem& sys, const Potentials& phi, double alpha) {
    Vector b = rhs(sys, phi, alpha);
    return sys.matrix() * phi - b;
}

SparseMatrix jacobian(const MnaSystem& sys, const Potentials& phi, double alpha) {
    check_evaluation_point(sys, phi);
    const auto& part = sys.partition();
    SparseMatrix jac = sys.matrix();
    // every load node has at least one resistor, so its diagonal is already stored
    for (auto k = part.load_begin(); k < part.source_begin(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const double p = sys.demand()(i - static_cast<Eigen::Index>(part.load_begin()));
        jac.coeffRef(i, i) -= alpha * p / (phi(i) * phi(i));
    }
    return jac;
}

}  // namespace tpf
