#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rdsteady/errors.hpp"
#include "rdsteady/jacobian.hpp"
#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"
#include "test_support.hpp"

using namespace rdsteady;

namespace {

const PowerLawPair kP23{2.0, 3.0};

// dense row-major copy of a tridiagonal matrix with off-diagonal -1
std::vector<double> dense_of(const TridiagonalMatrix& J) {
    const int n = J.n();
    std::vector<double> a(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        a[i * n + i] = J.gamma[i];
        if (i > 0) a[i * n + i - 1] = -1.0;
        if (i + 1 < n) a[i * n + i + 1] = -1.0;
    }
    return a;
}

} // namespace

TEST_CASE("assemble produces the two-node diagonal by hand") {
    const MeshConfig mesh(2);
    const std::vector<double> u{1.0, 1.5};
    const TridiagonalMatrix J = assemble(kP23, mesh, ParamForm::alpha, 13.0 / 27.0, u);
    REQUIRE(J.n() == 2);
    CHECK(J.gamma[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(J.gamma[1] == doctest::Approx(-0.75).epsilon(1e-14));
}

TEST_CASE("alpha form and beta form coincide under beta = 1/alpha") {
    const MeshConfig mesh(7);
    const ShootingTrajectory t = shoot(kP23, mesh, 0.7);
    const double alpha = 1.3;
    const TridiagonalMatrix Ja = assemble(kP23, mesh, ParamForm::alpha, alpha, t.u);
    const TridiagonalMatrix Jb = assemble(kP23, mesh, ParamForm::beta, 1.0 / alpha, t.u);
    for (int i = 0; i < mesh.n; ++i) CHECK(Ja.gamma[i] == doctest::Approx(Jb.gamma[i]).epsilon(1e-15));
    for (int i = 1; i + 1 < mesh.n; ++i) CHECK(Ja.gamma[i] > 2.0); // g1' > 0 on the trajectory
}

TEST_CASE("interior diagonal tends to 2 as the state vanishes") {
    const MeshConfig mesh(6);
    const std::vector<double> u(6, 1e-9);
    const TridiagonalMatrix J = assemble(kP23, mesh, ParamForm::alpha, 1.0, u);
    for (int i = 1; i + 1 < 6; ++i) CHECK(J.gamma[i] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("assemble rejects nonpositive states") {
    const MeshConfig mesh(3);
    CHECK_THROWS_AS(assemble(kP23, mesh, ParamForm::alpha, 1.0, std::vector<double>{1.0, -1.0, 1.0}),
                    DomainError);
    CHECK_THROWS_AS(assemble(kP23, mesh, ParamForm::alpha, 0.0, std::vector<double>{1.0, 1.0, 1.0}),
                    DomainError);
}

TEST_CASE("two-node solve by hand") {
    TridiagonalMatrix J;
    J.gamma = {2.0, -0.75};
    const std::vector<double> x = solve_tridiagonal(J, std::vector<double>{0.0, 1.0});
    // [[2,-1],[-1,-0.75]] x = [0,1] gives x = (-0.4, -0.8)
    CHECK(x[0] == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(-0.8).epsilon(1e-14));
}

TEST_CASE("zero right-hand side yields zero") {
    TridiagonalMatrix J;
    J.gamma = {2.0, 2.1, 2.2, -0.6};
    const std::vector<double> x = solve_tridiagonal(J, std::vector<double>(4, 0.0));
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("J times ones round-trips") {
    TridiagonalMatrix J;
    J.gamma = {1.7, 2.3, 2.05, 2.4, -0.9};
    const int n = J.n();
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs[i] = J.gamma[i];
        if (i > 0) rhs[i] -= 1.0;
        if (i + 1 < n) rhs[i] -= 1.0;
    }
    const std::vector<double> x = solve_tridiagonal(J, rhs);
    for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("banded solve matches a dense oracle on random instances") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> bump(-1.5, 2.5);
    std::uniform_real_distribution<double> load(-1.0, 1.0);
    for (int n : {2, 5, 17, 64}) {
        for (int rep = 0; rep < 6; ++rep) {
            TridiagonalMatrix J;
            J.gamma.resize(n);
            for (int i = 0; i < n; ++i) J.gamma[i] = 2.0 + bump(rng);
            std::vector<double> rhs(n);
            for (int i = 0; i < n; ++i) rhs[i] = load(rng);

            const std::vector<double> x = solve_tridiagonal(J, rhs);
            const std::vector<double> y = test::dense_solve(dense_of(J), rhs);
            const double scale = std::max(1.0, test::inf_norm(y));
            CHECK(test::inf_diff(x, y) <= 1e-10 * scale);

            // residual contract
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                double r = J.gamma[i] * x[i] - rhs[i];
                if (i > 0) r -= x[i - 1];
                if (i + 1 < n) r -= x[i + 1];
                worst = std::max(worst, std::abs(r));
            }
            CHECK(worst <= 1e-12 * (test::inf_norm(rhs) + test::inf_norm(x) * J.inf_norm()));
        }
    }
}

TEST_CASE("singular matrices are reported") {
    TridiagonalMatrix J;
    J.gamma = {1.0, 1.0}; // [[1,-1],[-1,1]] is singular
    CHECK_THROWS_AS(solve_tridiagonal(J, std::vector<double>{1.0, 0.0}), SingularMatrixError);
}

TEST_CASE("determinant recurrence on the two-node example") {
    TridiagonalMatrix J;
    J.gamma = {2.0, -0.75};
    const DeterminantResult d = determinant(J);
    CHECK(d.value == doctest::Approx(-2.5).epsilon(1e-14));
    CHECK(d.minors[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("determinant overflow guard") {
    TridiagonalMatrix J;
    J.gamma = {1e200, 1e200};
    CHECK_THROWS_AS(determinant(J), OverflowError);
}

TEST_CASE("determinant is negative with positive leading minors at solutions") {
    for (int n : {2, 8, 32}) {
        const MeshConfig mesh(n);
        for (double alpha : {0.5, 1.0, 2.0}) {
            const double u1 = solve_u1_oracle(kP23, mesh, alpha, 1e-12);
            const ShootingTrajectory t = shoot(kP23, mesh, u1);
            const TridiagonalMatrix J = assemble(kP23, mesh, ParamForm::alpha, alpha, t.u);
            const DeterminantResult d = determinant(J);
            CHECK(d.value < 0.0);
            for (int k = 0; k + 1 < n; ++k) CHECK(d.minors[k] > 0.0);
            // D_{k-1} = U_k'(u1)
            for (int k = 2; k <= n; ++k)
                CHECK(d.minors[k - 2] ==
                      doctest::Approx(t.u_prime[k - 1]).epsilon(1e-9));
        }
    }
}

TEST_CASE("factorized inverse reproduces the two-node entry") {
    const FactorizedInverse inv(std::vector<double>{1.0, 2.0}, -2.5);
    CHECK(inv.entry(0, 0) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(inv.entry(0, 1) == doctest::Approx(inv.entry(1, 0)).epsilon(1e-15));
}

TEST_CASE("factorized inverse matches the dense inverse at solved points") {
    for (int n : {2, 10, 32}) {
        const MeshConfig mesh(n);
        const double alpha = 1.0;
        const double u1 = solve_u1_oracle(kP23, mesh, alpha, 1e-12);
        const ShootingTrajectory t = shoot(kP23, mesh, u1);
        const TridiagonalMatrix J = assemble(kP23, mesh, ParamForm::alpha, alpha, t.u);
        const DeterminantResult d = determinant(J);
        const FactorizedInverse inv(t.u_prime, d.value);

        const std::vector<double> dense = dense_of(J);
        for (int j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            const std::vector<double> col = test::dense_solve(dense, e);
            for (int i = 0; i < n; ++i)
                CHECK(inv.entry(i, j) == doctest::Approx(col[i]).epsilon(1e-10));
        }

        // apply-to-vector against the dense solve
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = std::sin(1.0 + i);
        const std::vector<double> via_apply = inv.apply(v);
        const std::vector<double> via_dense = test::dense_solve(dense, v);
        CHECK(test::inf_diff(via_apply, via_dense) <=
              1e-10 * std::max(1.0, test::inf_norm(via_dense)));
    }
}

TEST_CASE("factorized inverse rejects degenerate inputs") {
    CHECK_THROWS_AS(FactorizedInverse(std::vector<double>{1.0, 0.0}, -2.5), DomainError);
    CHECK_THROWS_AS(FactorizedInverse(std::vector<double>{1.0, 2.0}, 0.0), DomainError);
}

TEST_CASE("condition sample at the two-node solution") {
    const ConditionSample s = condition_phi_prime(kP23, MeshConfig(2), 13.0 / 27.0);
    CHECK(s.u1 == doctest::Approx(1.0).epsilon(1e-11));
    // U_2' = 2 and |A'(1)| = 20/27
    CHECK(s.phi_prime_inf == doctest::Approx(2.7).epsilon(1e-10));
    CHECK(s.phi_prime_inf_beta ==
          doctest::Approx(s.alpha * s.alpha * s.phi_prime_inf).epsilon(1e-15));
}

TEST_CASE("condition formula matches a finite difference of the path") {
    const MeshConfig mesh(20);
    const double alpha = 1.0;
    const ConditionSample s = condition_phi_prime(kP23, mesh, alpha);

    const double step = 1e-6;
    auto path_at = [&](double a) {
        const double u1 = solve_u1_oracle(kP23, mesh, a, 1e-13);
        return shoot(kP23, mesh, u1).u;
    };
    const std::vector<double> up = path_at(alpha + step);
    const std::vector<double> dn = path_at(alpha - step);
    double fd_norm = 0.0;
    for (int i = 0; i < mesh.n; ++i)
        fd_norm = std::max(fd_norm, std::abs(up[i] - dn[i]) / (2.0 * step));
    CHECK(std::abs(s.phi_prime_inf - fd_norm) <= 1e-5 * fd_norm);
}

TEST_CASE("condition samples stay bounded as the mesh refines") {
    std::vector<double> maxima;
    for (int n : {10, 100, 1000}) {
        const MeshConfig mesh(n);
        double peak = 0.0;
        for (double alpha : {0.5, 0.875, 1.25, 1.625, 2.0})
            peak = std::max(peak, condition_phi_prime(kP23, mesh, alpha).phi_prime_inf);
        maxima.push_back(peak);
    }
    const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
    CHECK(*hi / *lo < 1.05);
}

TEST_CASE("Cramer identities hold at solutions and flag non-solutions") {
    const CramerReport two_node = cramer_identity_check(kP23, MeshConfig(2), 13.0 / 27.0);
    CHECK(two_node.solution_like);
    CHECK(two_node.residual_det <= 1e-12);
    CHECK(two_node.residual_cramer <= 1e-12);
    CHECK(two_node.residual_minor <= 1e-12);

    const CramerReport mid = cramer_identity_check(kP23, MeshConfig(50), 1.0);
    CHECK(mid.solution_like);
    CHECK(mid.residual_det <= 1e-9);
    CHECK(mid.residual_cramer <= 1e-9);
    CHECK(mid.residual_minor <= 1e-9);

    // doubling u1 leaves the path, so the determinant identity must fail
    const CramerReport off = cramer_identity_check(kP23, MeshConfig(50), 1.0, mid.u1 * 2.0);
    CHECK(!off.solution_like);
}
