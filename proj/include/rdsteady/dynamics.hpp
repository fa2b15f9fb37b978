#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"

namespace rdsteady {

/// Implicit-Euler integration of the semi-discrete system to steady state.
/// This is a validator for the stationary solvers, not a time-accurate
/// integrator; implicit stepping reuses the tridiagonal machinery and
/// admits dt far beyond the explicit h^2 limit.
struct DynamicsConfig {
    double alpha = 1.0;
    double dt = 1.0;
    double steady_tol = 1e-9; // on ||du/dt||_inf
    double t_max = 1e6;
    int max_newton_per_step = 20;

    void validate() const; // throws ConfigError
};

/// Right-hand side of the semi-discrete system:
///   du_1/dt = (2/h^2)(u_2 - u_1) - g1(u_1)
///   du_k/dt = (u_{k+1} - 2 u_k + u_{k-1})/h^2 - g1(u_k),  2 <= k <= n-1
///   du_n/dt = (2/h^2)(u_{n-1} - u_n) - g1(u_n) + (2 alpha/h) g2(u_n).
/// Throws DomainError on nonpositive entries.
std::vector<double> dynamics_rhs(const NonlinearityPair& pair, const MeshConfig& mesh,
                                 double alpha, std::span<const double> u);

struct IntegrationResult {
    std::vector<double> u;
    double t_final = 0.0;
    bool converged = false;
    long steps = 0;
    long newton_iterations = 0;
    long rejected_steps = 0;
    double final_residual = 0.0; // ||rhs||_inf at exit
};

/// Step u^{m+1} = u^m + dt rhs(u^{m+1}) until ||rhs||_inf <= steady_tol or
/// the horizon is reached (converged = false then, no throw). Each step is
/// solved by Newton on the diagonally shifted stationary system, whose
/// Jacobian is tridiagonal. Throws OverflowError once ||u||_inf exceeds
/// 1e6 g^{-1}(alpha), which separates escape from the basin from slow
/// convergence.
IntegrationResult integrate_to_steady(const NonlinearityPair& pair, const MeshConfig& mesh,
                                      const DynamicsConfig& config, std::span<const double> u0);

/// Sample an initial condition u0(x) on the mesh nodes x_k = (k-1) h.
std::vector<double> sample_initial(const MeshConfig& mesh,
                                   const std::function<double(double)>& u0_of_x);

} // namespace rdsteady
