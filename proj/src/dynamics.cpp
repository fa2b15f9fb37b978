#include "rdsteady/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdsteady/errors.hpp"
#include "rdsteady/homotopy.hpp"
#include "rdsteady/jacobian.hpp"

namespace rdsteady {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

void DynamicsConfig::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("dynamics: alpha must be positive, got " + fmt(alpha));
    if (!(dt > 0.0)) throw ConfigError("dynamics: dt must be positive, got " + fmt(dt));
    if (!(steady_tol > 0.0))
        throw ConfigError("dynamics: steady_tol must be positive, got " + fmt(steady_tol));
    if (!(t_max > 0.0)) throw ConfigError("dynamics: t_max must be positive, got " + fmt(t_max));
    if (max_newton_per_step < 1)
        throw ConfigError("dynamics: max_newton_per_step must be positive");
}

std::vector<double> dynamics_rhs(const NonlinearityPair& pair, const MeshConfig& mesh,
                                 double alpha, std::span<const double> u) {
    if (!(alpha > 0.0))
        throw DomainError("dynamics_rhs: alpha must be positive, got " + fmt(alpha));
    if (static_cast<int>(u.size()) != mesh.n)
        throw DomainError("dynamics_rhs: state length mismatch");
    for (double v : u)
        if (!(v > 0.0))
            throw DomainError("dynamics_rhs: state entries must be positive, got " + fmt(v));

    const int n = mesh.n;
    const double h = mesh.h;
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> f(n);
    f[0] = 2.0 * inv_h2 * (u[1] - u[0]) - pair.derivative(Component::g1, 0, u[0]);
    for (int k = 1; k + 1 < n; ++k) {
        const double dl = u[k] - u[k - 1];
        const double dr = u[k + 1] - u[k];
        f[k] = inv_h2 * (dr - dl) - pair.derivative(Component::g1, 0, u[k]);
    }
    f[n - 1] = 2.0 * inv_h2 * (u[n - 2] - u[n - 1]) -
               pair.derivative(Component::g1, 0, u[n - 1]) +
               (2.0 * alpha / h) * pair.derivative(Component::g2, 0, u[n - 1]);
    return f;
}

IntegrationResult integrate_to_steady(const NonlinearityPair& pair, const MeshConfig& mesh,
                                      const DynamicsConfig& config, std::span<const double> u0) {
    config.validate();
    if (static_cast<int>(u0.size()) != mesh.n)
        throw DomainError("integrate_to_steady: initial state length mismatch");
    for (double v : u0)
        if (!(v > 0.0))
            throw DomainError("integrate_to_steady: initial state must be strictly positive");

    const int n = mesh.n;
    const double h = mesh.h;
    const double h2 = h * h;
    const double blowup_guard = 1e6 * g_inverse(pair, config.alpha);

    IntegrationResult res;
    res.u.assign(u0.begin(), u0.end());

    // The implicit-Euler equation v - u - dt rhs(v) = 0 is equivalent, after
    // scaling row k by h^2 (h^2/2 at the ends), to
    //   G(v) = D (v - u)/dt + F(alpha, v) = 0,   D = diag(h^2/2, h^2, ..., h^2/2),
    // whose Jacobian is the stationary tridiagonal J plus D/dt on the
    // diagonal. Newton steps on G coincide with Newton steps on the
    // unscaled equation.
    auto implicit_step = [&](std::vector<double>& u, double dt) -> bool {
        std::vector<double> v = u;
        for (int it = 0; it < config.max_newton_per_step; ++it) {
            std::vector<double> g = stationary_residual(pair, mesh, ParamForm::alpha,
                                                        config.alpha, v);
            for (int i = 0; i < n; ++i) {
                const double d = (i == 0 || i == n - 1) ? 0.5 * h2 : h2;
                g[i] += d * (v[i] - u[i]) / dt;
            }
            TridiagonalMatrix J = assemble(pair, mesh, ParamForm::alpha, config.alpha, v);
            for (int i = 0; i < n; ++i) {
                const double d = (i == 0 || i == n - 1) ? 0.5 * h2 : h2;
                J.gamma[i] += d / dt;
            }
            const std::vector<double> step = solve_tridiagonal(J, g);
            ++res.newton_iterations;
            double vmax = 0.0;
            bool positive = true;
            for (int i = 0; i < n; ++i) {
                v[i] -= step[i];
                vmax = std::max(vmax, std::abs(v[i]));
                positive = positive && v[i] > 0.0;
            }
            if (!positive) return false;
            if (vmax > blowup_guard)
                throw OverflowError("integrate_to_steady: state exceeded the blow-up guard " +
                                    fmt(blowup_guard) + " at t=" + fmt(res.t_final) +
                                    "; escaped the basin of the stationary solution");
            if (inf_norm(step) <= 1e-12 * (1.0 + vmax)) {
                u = std::move(v);
                return true;
            }
        }
        return false;
    };

    while (true) {
        res.final_residual = inf_norm(dynamics_rhs(pair, mesh, config.alpha, res.u));
        if (res.final_residual <= config.steady_tol) {
            res.converged = true;
            return res;
        }
        if (res.t_final >= config.t_max) {
            res.converged = false; // horizon exceeded
            return res;
        }

        // retry with a halved step when the stage Newton fails; the accepted
        // path still advances by the configured dt in the normal case
        double dt = std::min(config.dt, config.t_max - res.t_final);
        bool accepted = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            if (implicit_step(res.u, dt)) {
                accepted = true;
                break;
            }
            ++res.rejected_steps;
            dt *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("integrate_to_steady: implicit step failed down to dt=" +
                                   fmt(dt) + " at t=" + fmt(res.t_final));
        res.t_final += dt;
        ++res.steps;
    }
}

std::vector<double> sample_initial(const MeshConfig& mesh,
                                   const std::function<double(double)>& u0_of_x) {
    std::vector<double> u(mesh.n);
    for (int k = 0; k < mesh.n; ++k) u[k] = u0_of_x(k * mesh.h);
    return u;
}

} // namespace rdsteady
