#include "tractionpf/linsolve.hpp"

#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tpf {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void check_square(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols) {
        throw std::invalid_argument(fmt::format("matrix must be square, got {}x{}", rows, cols));
    }
}

void check_rhs(Eigen::Index n, const Vector& rhs) {
    if (rhs.size() != n) {
        throw std::invalid_argument(fmt::format("right-hand side has {} entries, matrix has {} rows", rhs.size(), n));
    }
}

double one_norm(const DenseMatrix& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

double one_norm(const SparseMatrix& a) {
    double best = 0.0;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

DenseLu::DenseLu(DenseMatrix a) : lu_(std::move(a)) {
    check_square(lu_.rows(), lu_.cols());
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    std::iota(perm_.begin(), perm_.end(), Eigen::Index{0});
    if (n == 0) {
        log_abs_det_ = 0.0;
        return;
    }

    const double scale = lu_.cwiseAbs().maxCoeff();
    const double threshold = kSingularPivotRatio * scale;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        singular_ = true;
        return;
    }

    double log_det = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot_row = k;
        lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
        pivot_row += k;
        const double pivot = lu_(pivot_row, k);
        if (std::abs(pivot) < threshold) {
            singular_ = true;
            return;
        }
        if (pivot_row != k) {
            lu_.row(k).swap(lu_.row(pivot_row));
            std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot_row)]);
        }
        log_det += std::log(std::abs(pivot));
        const Eigen::Index rest = n - k - 1;
        if (rest > 0) {
            lu_.col(k).tail(rest) /= pivot;
            lu_.bottomRightCorner(rest, rest).noalias() -= lu_.col(k).tail(rest) * lu_.row(k).tail(rest);
        }
    }
    log_abs_det_ = log_det;
}

Vector DenseLu::solve(const Vector& b) const {
    check_rhs(size(), b);
    if (singular_) throw std::logic_error("solve on a singular factorization");
    Vector x(size());
    for (Eigen::Index i = 0; i < size(); ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
    lu_.triangularView<Eigen::UnitLower>().solveInPlace(x);
    lu_.triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

Vector DenseLu::solve_transpose(const Vector& b) const {
    check_rhs(size(), b);
    if (singular_) throw std::logic_error("solve on a singular factorization");
    // P A = L U  =>  A^T = U^T L^T P
    Vector y = b;
    lu_.transpose().triangularView<Eigen::Lower>().solveInPlace(y);
    lu_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(y);
    Vector x(size());
    for (Eigen::Index i = 0; i < size(); ++i) x(perm_[static_cast<std::size_t>(i)]) = y(i);
    return x;
}

LinearSolveReport solve_linear(const DenseMatrix& a, const Vector& rhs) {
    check_square(a.rows(), a.cols());
    check_rhs(a.rows(), rhs);
    DenseLu lu(a);
    LinearSolveReport report;
    report.singular = lu.singular();
    if (report.singular) return report;
    report.log_abs_det = lu.log_abs_det();
    report.solution = lu.solve(rhs);
    if (!report.solution.allFinite()) {
        report.singular = true;
        report.solution.resize(0);
    }
    return report;
}

LinearSolveReport solve_linear(const SparseMatrix& a, const Vector& rhs, std::size_t dense_threshold) {
    check_square(a.rows(), a.cols());
    check_rhs(a.rows(), rhs);
    if (static_cast<std::size_t>(a.rows()) <= dense_threshold) {
        return solve_linear(DenseMatrix(a), rhs);
    }

    LinearSolveReport report;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        report.singular = true;
        return report;
    }
    Vector x = lu.solve(rhs);
    const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    if (lu.info() != Eigen::Success || !x.allFinite() || (a * x - rhs).lpNorm<Eigen::Infinity>() > 1e-8 * scale) {
        report.singular = true;
        return report;
    }
    report.log_abs_det = lu.logAbsDeterminant();
    report.solution = std::move(x);
    return report;
}

double condition_estimate(const DenseMatrix& a) {
    check_square(a.rows(), a.cols());
    if (a.rows() == 0) return 1.0;
    DenseLu lu(a);
    if (lu.singular()) return kInfinity;
    const Eigen::Index n = a.rows();
    double inverse_norm = 0.0;
    Vector e = Vector::Zero(n);
    for (Eigen::Index c = 0; c < n; ++c) {
        e.setZero();
        e(c) = 1.0;
        inverse_norm = std::max(inverse_norm, lu.solve(e).lpNorm<1>());
    }
    const double cond = one_norm(a) * inverse_norm;
    return std::isfinite(cond) ? std::max(1.0, cond) : kInfinity;
}

double condition_estimate(const SparseMatrix& a, std::size_t dense_threshold) {
    check_square(a.rows(), a.cols());
    const Eigen::Index n = a.rows();
    if (static_cast<std::size_t>(n) <= dense_threshold) {
        return condition_estimate(DenseMatrix(a));
    }

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    SparseMatrix at = a.transpose();
    Eigen::SparseLU<SparseMatrix> lu_t;
    lu_t.compute(at);
    if (lu.info() != Eigen::Success || lu_t.info() != Eigen::Success) return kInfinity;

    // Hager's 1-norm estimate of A^-1, with Higham's alternating-sign safeguard.
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double estimate = 0.0;
    Eigen::Index last_j = -1;
    for (int iter = 0; iter < 5; ++iter) {
        Vector y = lu.solve(x);
        if (!y.allFinite()) return kInfinity;
        estimate = std::max(estimate, y.lpNorm<1>());
        Vector xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        Vector z = lu_t.solve(xi);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (zmax <= z.dot(x) || j == last_j) break;
        x.setZero();
        x(j) = 1.0;
        last_j = j;
    }
    Vector alt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        alt(i) = sign * (1.0 + static_cast<double>(i) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1)));
    }
    Vector w = lu.solve(alt);
    if (w.allFinite()) {
        estimate = std::max(estimate, 2.0 * w.lpNorm<1>() / (3.0 * static_cast<double>(n)));
    }

    const double cond = one_norm(a) * estimate;
    return std::isfinite(cond) ? std::max(1.0, cond) : kInfinity;
}

}  // namespace tpf
