#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpf {

/// Reasons a circuit description or configuration is rejected.
enum class ValidationCode {
    empty_network,
    invalid_node_id,
    duplicate_node,
    unknown_node,
    nonpositive_resistance,
    self_loop,
    invalid_value,
    no_voltage_source,
    duplicate_source,
    duplicate_load,
    source_and_load,
    disconnected,
    invalid_config,
    malformed_input,
};

std::string_view to_string(ValidationCode code);

/// Rejected input: malformed netlist, invariant-violating circuit, or bad config.
class ValidationError : public std::runtime_error {
public:
    ValidationError(ValidationCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ValidationCode code() const noexcept { return code_; }

private:
    ValidationCode code_;
};

/// Residual/Jacobian evaluated at a point where the load term is undefined.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called on data that does not meet its precondition.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace tpf
