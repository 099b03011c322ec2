#pragma once

// Circuit description, node partition and the modified-nodal-analysis system
// A*phi = b(phi, alpha) for DC networks with constant-power loads.
//
// Sign convention: a load with positive watts consumes power. The load row of
// the residual reads
//     sum_j (phi_i - phi_j) / R_ij + alpha * P_i / phi_i = 0,
// so that a single load fed through R from V satisfies phi^2 - V*phi + P*R = 0.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tpf {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Node potentials in volts, ordered per NodePartition.
using Potentials = Vector;

/// |phi| below this at a load node makes the load current undefined.
inline constexpr double kMinLoadPotential = 1e-9;

struct Resistor {
    std::string a;
    std::string b;
    double ohms = 0.0;

    bool operator==(const Resistor&) const = default;
};

struct VoltageSource {
    std::string node;
    double volts = 0.0;

    bool operator==(const VoltageSource&) const = default;
};

/// Aggregate power demand at a node. Negative watts = regeneration.
struct PowerLoad {
    std::string node;
    double watts = 0.0;

    bool operator==(const PowerLoad&) const = default;
};

/// Declarative network: nodes, resistors, voltage sources and power loads.
struct CircuitSpec {
    std::vector<std::string> nodes;
    std::vector<Resistor> resistors;
    std::vector<VoltageSource> sources;
    std::vector<PowerLoad> loads;

    bool operator==(const CircuitSpec&) const = default;

    /// Throws ValidationError if any structural invariant is violated.
    void validate() const;
};

enum class NodeKind { resistor_only, load, source };

/// Fixed ordering of all nodes: resistor-only block (I), load block (J),
/// source block (I0); lexicographic by id inside each block.
class NodePartition {
public:
    NodePartition() = default;

    static NodePartition from(const CircuitSpec& spec);

    [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
    [[nodiscard]] std::size_t resistor_count() const noexcept { return n_resistor_; }
    [[nodiscard]] std::size_t load_count() const noexcept { return n_load_; }
    [[nodiscard]] std::size_t source_count() const noexcept { return n_source_; }

    [[nodiscard]] std::size_t load_begin() const noexcept { return n_resistor_; }
    [[nodiscard]] std::size_t source_begin() const noexcept { return n_resistor_ + n_load_; }

    [[nodiscard]] NodeKind kind(std::size_t index) const;
    [[nodiscard]] const std::vector<std::string>& order() const noexcept { return order_; }
    [[nodiscard]] const std::string& name(std::size_t index) const { return order_.at(index); }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view id) const;

private:
    std::vector<std::string> order_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t n_resistor_ = 0;
    std::size_t n_load_ = 0;
    std::size_t n_source_ = 0;
};

/// Resistor with endpoints resolved to partition indices (spec order kept).
struct Branch {
    std::size_t from = 0;
    std::size_t to = 0;
    double ohms = 0.0;
};

/// Assembled system. Immutable once built by assemble().
class MnaSystem {
public:
    [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] DenseMatrix dense_matrix() const { return DenseMatrix(matrix_); }
    /// Demanded power per load node, in J-block order.
    [[nodiscard]] const Vector& demand() const noexcept { return demand_; }
    /// Source voltage per source node, in I0-block order.
    [[nodiscard]] const Vector& source() const noexcept { return source_; }
    [[nodiscard]] const NodePartition& partition() const noexcept { return partition_; }
    [[nodiscard]] const std::vector<Branch>& branches() const noexcept { return branches_; }
    [[nodiscard]] std::size_t size() const noexcept { return partition_.size(); }

    /// Mean source level; the nominal voltage for single-level networks.
    [[nodiscard]] double nominal_voltage() const { return source_.mean(); }

private:
    friend MnaSystem assemble(const CircuitSpec& spec);

    SparseMatrix matrix_;
    Vector demand_;
    Vector source_;
    NodePartition partition_;
    std::vector<Branch> branches_;
};

MnaSystem assemble(const CircuitSpec& spec);

/// b(phi, alpha): zeros on I rows, -alpha*P/phi on J rows, U on I0 rows.
Vector rhs(const MnaSystem& sys, const Potentials& phi, double alpha);

/// f(phi, alpha) = A*phi - b(phi, alpha).
Vector residual(const MnaSystem& sys, const Potentials& phi, double alpha);

/// Derivative of residual() w.r.t. phi: A plus -alpha*P/phi^2 on the J diagonal.
SparseMatrix jacobian(const MnaSystem& sys, const Potentials& phi, double alpha);

}  // namespace tpf
