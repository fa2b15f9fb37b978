#include "rdsteady/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdsteady/errors.hpp"

namespace rdsteady {

namespace {

constexpr double kPivotFloor = 1e-300;
constexpr double kOverflowGuard = 1e300;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

double TridiagonalMatrix::inf_norm() const {
    const int m = n();
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        double row = std::abs(gamma[i]);
        if (i > 0) row += 1.0;
        if (i + 1 < m) row += 1.0;
        worst = std::max(worst, row);
    }
    return worst;
}

void assemble(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form, double param,
              std::span<const double> u, TridiagonalMatrix& out) {
    if (!(param > 0.0))
        throw DomainError("assemble: parameter must be positive, got " + fmt(param));
    if (static_cast<int>(u.size()) != mesh.n)
        throw DomainError("assemble: state has " + std::to_string(u.size()) +
                          " entries, mesh has n=" + std::to_string(mesh.n));
    for (double v : u)
        if (!(v > 0.0))
            throw DomainError("assemble: state entries must be positive, got " + fmt(v));

    const double h = mesh.h;
    const double h2 = h * h;
    const double a = form == ParamForm::alpha ? param : 1.0 / param;
    const int n = mesh.n;

    out.gamma.resize(n);
    out.gamma[0] = 1.0 + 0.5 * h2 * pair.derivative(Component::g1, 1, u[0]);
    for (int i = 1; i + 1 < n; ++i)
        out.gamma[i] = 2.0 + h2 * pair.derivative(Component::g1, 1, u[i]);
    out.gamma[n - 1] = 1.0 + 0.5 * h2 * pair.derivative(Component::g1, 1, u[n - 1]) -
                       h * a * pair.derivative(Component::g2, 1, u[n - 1]);
}

TridiagonalMatrix assemble(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form,
                           double param, std::span<const double> u) {
    TridiagonalMatrix J;
    assemble(pair, mesh, form, param, u, J);
    return J;
}

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& J, std::span<const double> rhs) {
    if (static_cast<int>(rhs.size()) != J.n())
        throw DomainError("solve_tridiagonal: rhs has " + std::to_string(rhs.size()) +
                          " entries for an n=" + std::to_string(J.n()) + " matrix");
    std::vector<double> x(rhs.begin(), rhs.end());
    TridiagonalWorkspace ws;
    solve_tridiagonal(J, x, ws);
    return x;
}

void solve_tridiagonal(const TridiagonalMatrix& J, std::vector<double>& x,
                       TridiagonalWorkspace& ws) {
    const int n = J.n();
    if (static_cast<int>(x.size()) != n)
        throw DomainError("solve_tridiagonal: rhs has " + std::to_string(x.size()) +
                          " entries for an n=" + std::to_string(n) + " matrix");
    if (n == 1) {
        if (std::abs(J.gamma[0]) < kPivotFloor)
            throw SingularMatrixError("solve_tridiagonal: singular 1x1 matrix");
        x[0] /= J.gamma[0];
        return;
    }

    ws.diag.assign(J.gamma.begin(), J.gamma.end());
    ws.sup1.assign(n, -1.0);
    ws.sup2.assign(n, 0.0); // fill from row swaps
    std::vector<double>& diag = ws.diag;
    std::vector<double>& sup1 = ws.sup1;
    std::vector<double>& sup2 = ws.sup2;
    sup1[n - 1] = 0.0;

    for (int i = 0; i + 1 < n; ++i) {
        double r1c0 = diag[i], r1c1 = sup1[i], r1c2 = sup2[i];
        double r2c0 = -1.0, r2c1 = diag[i + 1];
        double r2c2 = i + 2 < n ? sup1[i + 1] : 0.0;
        if (std::abs(r2c0) > std::abs(r1c0)) {
            std::swap(r1c0, r2c0);
            std::swap(r1c1, r2c1);
            std::swap(r1c2, r2c2);
            std::swap(x[i], x[i + 1]);
        }
        if (std::abs(r1c0) < kPivotFloor)
            throw SingularMatrixError("solve_tridiagonal: pivot " + fmt(r1c0) + " at row " +
                                      std::to_string(i) + " below 1e-300");
        const double m = r2c0 / r1c0;
        diag[i] = r1c0;
        sup1[i] = r1c1;
        sup2[i] = r1c2;
        diag[i + 1] = r2c1 - m * r1c1;
        if (i + 2 < n) sup1[i + 1] = r2c2 - m * r1c2;
        x[i + 1] -= m * x[i];
    }
    if (std::abs(diag[n - 1]) < kPivotFloor)
        throw SingularMatrixError("solve_tridiagonal: pivot " + fmt(diag[n - 1]) +
                                  " at the last row below 1e-300");

    x[n - 1] /= diag[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - sup1[n - 2] * x[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (x[i] - sup1[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
}

DeterminantResult determinant(const TridiagonalMatrix& J) {
    const int n = J.n();
    DeterminantResult r;
    r.minors.resize(n);
    double dkm2 = 1.0; // D_0
    double dkm1 = 1.0;
    for (int k = 0; k < n; ++k) {
        const double dk = k == 0 ? J.gamma[0] : J.gamma[k] * dkm1 - dkm2;
        if (!(std::abs(dk) < kOverflowGuard))
            throw OverflowError("determinant: minor D_" + std::to_string(k + 1) +
                                " exceeded 1e300; a log-scaled recurrence would be needed");
        r.minors[k] = dk;
        dkm2 = k == 0 ? 1.0 : dkm1;
        dkm1 = dk;
    }
    r.value = r.minors[n - 1];
    return r;
}

FactorizedInverse::FactorizedInverse(std::vector<double> u_prime, double det)
    : up_(std::move(u_prime)), det_(det) {
    const int n = static_cast<int>(up_.size());
    if (n < 1) throw DomainError("factorized inverse needs a nonempty derivative sequence");
    if (det_ == 0.0)
        throw DomainError("factorized inverse: det J must be nonzero");
    for (double v : up_)
        if (v == 0.0)
            throw DomainError("factorized inverse: derivative sequence has a zero entry");

    suffix_.resize(n);
    suffix_[n - 1] = 1.0 / (up_[n - 1] * det_);
    for (int k = n - 2; k >= 0; --k)
        suffix_[k] = suffix_[k + 1] + 1.0 / (up_[k] * up_[k + 1]);
}

double FactorizedInverse::entry(int i, int j) const {
    const int m = n();
    if (i < 0 || j < 0 || i >= m || j >= m)
        throw DomainError("factorized inverse: entry index out of range");
    return up_[i] * up_[j] * suffix_[std::max(i, j)];
}

std::vector<double> FactorizedInverse::apply(std::span<const double> x) const {
    const int m = n();
    if (static_cast<int>(x.size()) != m)
        throw DomainError("factorized inverse: vector length mismatch");

    // y = L x with L_ij = u'_j / u'_{i+1} (j <= i < n-1), L_nj = u'_j / det
    std::vector<double> y(m);
    double prefix = 0.0;
    for (int i = 0; i < m; ++i) {
        prefix += up_[i] * x[i];
        y[i] = i + 1 < m ? prefix / up_[i + 1] : prefix / det_;
    }
    // z = U y with U_ij = u'_i / u'_j (j >= i)
    std::vector<double> z(m);
    double suffix = 0.0;
    for (int i = m - 1; i >= 0; --i) {
        suffix += y[i] / up_[i];
        z[i] = up_[i] * suffix;
    }
    return z;
}

ConditionSample condition_phi_prime(const NonlinearityPair& pair, const MeshConfig& mesh,
                                    double alpha, double oracle_tol) {
    const double u1 = solve_u1_oracle(pair, mesh, alpha, oracle_tol);
    const ShootingTrajectory t = shoot(pair, mesh, u1);
    ConditionSample s;
    s.alpha = alpha;
    s.u1 = u1;
    s.phi_prime_inf = t.u_prime.back() / std::abs(t.a_prime);
    s.phi_prime_inf_beta = alpha * alpha * s.phi_prime_inf;
    return s;
}

CramerReport cramer_identity_check(const NonlinearityPair& pair, const MeshConfig& mesh,
                                   double alpha, std::optional<double> u1_override) {
    if (!(alpha > 0.0))
        throw DomainError("cramer_identity_check: alpha must be positive, got " + fmt(alpha));
    const double u1 = u1_override ? *u1_override : solve_u1_oracle(pair, mesh, alpha, 1e-12);
    const ShootingTrajectory t = shoot(pair, mesh, u1);
    const TridiagonalMatrix J = assemble(pair, mesh, ParamForm::alpha, alpha, t.u);
    const DeterminantResult det = determinant(J);

    const int n = mesh.n;
    const double lhs = mesh.h * pair.derivative(Component::g2, 0, t.u.back()) * t.a_prime;

    CramerReport rep;
    rep.alpha = alpha;
    rep.u1 = u1;
    rep.residual_det = std::abs(lhs - det.value) / std::max({std::abs(lhs), std::abs(det.value), 1e-300});

    double worst_cramer = 0.0;
    double worst_minor = 0.0;
    for (int k = 2; k <= n; ++k) {
        const double uk_prime = t.u_prime[k - 1];
        const double minor = det.minors[k - 2]; // D_{k-1}
        const double left = det.value * uk_prime;
        const double right = lhs * minor;
        worst_cramer = std::max(worst_cramer,
                                std::abs(left - right) / std::max({std::abs(left), std::abs(right), 1e-300}));
        worst_minor = std::max(worst_minor, std::abs(minor - uk_prime) / std::abs(uk_prime));
    }
    rep.residual_cramer = worst_cramer;
    rep.residual_minor = worst_minor;
    rep.solution_like = rep.residual_det <= 1e-6;
    return rep;
}

} // namespace rdsteady
