#pragma once

#include "tractionpf/network.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace tpf {

/// Systems up to this many unknowns are factored densely.
inline constexpr std::size_t kDenseThreshold = 256;

/// A pivot smaller than this fraction of the largest |a_ij| marks the matrix singular.
inline constexpr double kSingularPivotRatio = 1e-12;

struct LinearSolveReport {
    Vector solution;  ///< empty when singular
    double log_abs_det = -std::numeric_limits<double>::infinity();
    bool singular = false;
};

/// LU factorization with partial pivoting on a dense matrix.
class DenseLu {
public:
    explicit DenseLu(DenseMatrix a);

    [[nodiscard]] bool singular() const noexcept { return singular_; }
    [[nodiscard]] double log_abs_det() const noexcept { return log_abs_det_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return lu_.rows(); }

    /// Solves A x = b. Requires !singular().
    [[nodiscard]] Vector solve(const Vector& b) const;
    /// Solves A^T x = b. Requires !singular().
    [[nodiscard]] Vector solve_transpose(const Vector& b) const;

private:
    DenseMatrix lu_;
    std::vector<Eigen::Index> perm_;
    double log_abs_det_ = -std::numeric_limits<double>::infinity();
    bool singular_ = false;
};

LinearSolveReport solve_linear(const DenseMatrix& a, const Vector& rhs);
LinearSolveReport solve_linear(const SparseMatrix& a, const Vector& rhs,
                               std::size_t dense_threshold = kDenseThreshold);

/// 1-norm condition number; +inf for singular input. Exact below the dense
/// threshold, Hager/Higham estimate above it.
double condition_estimate(const DenseMatrix& a);
double condition_estimate(const SparseMatrix& a, std::size_t dense_threshold = kDenseThreshold);

}  // namespace tpf
