#include "catch_amalgamated.hpp"

#include "tractionpf/linsolve.hpp"
#include "tractionpf/network.hpp"
#include "tractionpf/scenarios.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace tpf;
using Catch::Approx;

namespace {

/// 2-norm condition number from singular values.
double svd_condition(const DenseMatrix& a) {
    Eigen::JacobiSVD<DenseMatrix> svd(a);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

DenseMatrix random_well_conditioned(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = u(rng);
    a += DenseMatrix::Identity(n, n) * static_cast<double>(n);
    return a;
}

SparseMatrix ladder_laplacian(Eigen::Index n) {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double g = 1.0 / (0.05 + 0.01 * static_cast<double>(i % 7));
        t.emplace_back(i, i, g);
        t.emplace_back(i + 1, i + 1, g);
        t.emplace_back(i, i + 1, -g);
        t.emplace_back(i + 1, i, -g);
    }
    t.emplace_back(0, 0, 1.0);
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

}  // namespace

TEST_CASE("identity solve returns the right-hand side", "[linsolve]") {
    Vector b(4);
    b << 1.0, -2.0, 3.5, 600.0;
    const auto rep = solve_linear(DenseMatrix::Identity(4, 4), b);
    REQUIRE_FALSE(rep.singular);
    CHECK(rep.solution == b);
    CHECK(rep.log_abs_det == 0.0);
}

TEST_CASE("two-node initial-guess system", "[linsolve]") {
    DenseMatrix a(2, 2);
    a << 10.0, -10.0, 0.0, 1.0;
    Vector b(2);
    b << -1666.67, 600.0;
    const auto rep = solve_linear(a, b);
    REQUIRE_FALSE(rep.singular);
    CHECK(rep.solution(0) == Approx(433.33).margin(0.01));
    CHECK(rep.solution(1) == Approx(600.0).margin(0.01));
    CHECK(rep.log_abs_det == Approx(std::log(10.0)));

    const SparseMatrix sa = a.sparseView();
    const auto srep = solve_linear(sa, b);
    REQUIRE_FALSE(srep.singular);
    CHECK(srep.solution.isApprox(rep.solution));
}

TEST_CASE("singular matrices are flagged", "[linsolve][errors]") {
    DenseMatrix a(2, 2);
    a << 0.0, 0.0, 0.0, 1.0;
    const auto rep = solve_linear(a, Vector::Ones(2));
    CHECK(rep.singular);
    CHECK(rep.solution.size() == 0);
    CHECK(std::isinf(rep.log_abs_det));
    CHECK(std::isinf(condition_estimate(a)));

    DenseMatrix b(3, 3);
    b << 1, 2, 3, 2, 4, 6, 1, 0, 1;
    CHECK(solve_linear(b, Vector::Ones(3)).singular);

    DenseMatrix tiny = DenseMatrix::Identity(2, 2);
    tiny(1, 1) = 1e-14;
    CHECK(solve_linear(tiny, Vector::Ones(2)).singular);
}

TEST_CASE("dimension mismatches throw", "[linsolve][errors]") {
    CHECK_THROWS_AS(solve_linear(DenseMatrix::Identity(3, 3), Vector::Ones(2)), std::invalid_argument);
    CHECK_THROWS_AS(solve_linear(DenseMatrix::Ones(2, 3), Vector::Ones(2)), std::invalid_argument);
    CHECK_THROWS_AS(condition_estimate(DenseMatrix::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("condition numbers of simple matrices", "[linsolve]") {
    CHECK(condition_estimate(DenseMatrix::Identity(5, 5)) == Approx(1.0));
    DenseMatrix d = DenseMatrix::Zero(2, 2);
    d(0, 0) = 10.0;
    d(1, 1) = 1.0;
    CHECK(condition_estimate(d) == Approx(10.0));
}

TEST_CASE("condition grows without bound toward the critical point", "[linsolve]") {
    const auto sys = assemble(single_load_circuit(600.0, 0.1, 9e5));
    double previous = 0.0;
    for (double phi2 : {400.0, 330.0, 310.0, 301.0, 300.1, 300.001}) {
        // alpha that makes phi2 an exact root: alpha = phi2 (V - phi2) / (P R)
        const double alpha = phi2 * (600.0 - phi2) / (9e5 * 0.1);
        Potentials phi(2);
        phi << phi2, 600.0;
        const DenseMatrix j = DenseMatrix(jacobian(sys, phi, alpha));
        const double est = condition_estimate(j);
        const double exact = svd_condition(j);
        CHECK(est >= exact / 10.0);
        CHECK(est <= exact * 10.0);
        CHECK(est > previous);
        previous = est;
    }
    CHECK(previous > 1e6);
}

TEST_CASE("residual bound on random well-conditioned systems", "[linsolve][property]") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> size(1, 50);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(size(rng));
        const DenseMatrix a = random_well_conditioned(rng, n);
        Vector b(n);
        for (Eigen::Index i = 0; i < n; ++i) b(i) = u(rng);
        REQUIRE(svd_condition(a) < 1e8);
        const auto rep = solve_linear(a, b);
        REQUIRE_FALSE(rep.singular);
        const double rel = (a * rep.solution - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
        CHECK(rel <= 1e-10);
    }
}

TEST_CASE("condition estimate is at least one and scale invariant", "[linsolve][property]") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> size(1, 30);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int trial = 0; trial < 100; ++trial) {
        const DenseMatrix a = random_well_conditioned(rng, size(rng));
        const double c = condition_estimate(a);
        CHECK(c >= 1.0);
        CHECK(condition_estimate(DenseMatrix(scale(rng) * a)) == Approx(c).epsilon(1e-6));
        const double two = svd_condition(a);
        CHECK(c >= two / 10.0);
        CHECK(c <= two * 10.0);
    }
}

TEST_CASE("sparse path above the dense threshold", "[linsolve]") {
    const Eigen::Index n = 400;
    const SparseMatrix a = ladder_laplacian(n);
    Vector b = Vector::LinSpaced(n, -1.0, 1.0);
    const auto sparse = solve_linear(a, b);
    const auto dense = solve_linear(DenseMatrix(a), b);
    REQUIRE_FALSE(sparse.singular);
    REQUIRE_FALSE(dense.singular);
    CHECK((sparse.solution - dense.solution).cwiseAbs().maxCoeff() <= 1e-8 * dense.solution.cwiseAbs().maxCoeff());
    CHECK(sparse.log_abs_det == Approx(dense.log_abs_det).epsilon(1e-9));

    const double exact = condition_estimate(DenseMatrix(a));
    const double estimate = condition_estimate(a);
    CHECK(estimate <= exact * (1.0 + 1e-9));
    CHECK(estimate >= exact / 10.0);

    SparseMatrix singular = a;
    singular.coeffRef(0, 0) -= 1.0;
    CHECK(solve_linear(singular, Vector::Ones(n)).singular);
}

TEST_CASE("dense threshold is a knob", "[linsolve]") {
    const SparseMatrix a = ladder_laplacian(40);
    const Vector b = Vector::Ones(40);
    const auto forced_sparse = solve_linear(a, b, 8);
    const auto dense = solve_linear(a, b);
    REQUIRE_FALSE(forced_sparse.singular);
    CHECK(forced_sparse.solution.isApprox(dense.solution, 1e-10));
    CHECK(condition_estimate(a, 8) <= condition_estimate(a) * (1.0 + 1e-9));
}
