#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdsteady/jacobian.hpp"
#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"

namespace rdsteady {

enum class ScheduleMode { theoretical, adaptive };

/// Per-node iteration policy for phase 1. by_mode resolves to single_step
/// in theoretical mode and to_tolerance in adaptive mode.
enum class NodeIteration { by_mode, single_step, to_tolerance };

/// Configuration of the two-phase continuation in beta = 1/alpha over
/// [beta_lo, beta_hi], beta_hi = 1/alpha_star.
struct ContinuationConfig {
    double beta_lo = 0.0;  // beta_*; 0 requests automatic selection
    double beta_hi = 1.0;  // beta^*
    double epsilon = 1e-12;
    ScheduleMode mode = ScheduleMode::adaptive;
    NodeIteration node_iteration = NodeIteration::by_mode;
    int max_newton_per_node = 12;
    double residual_tol = 1e-12;
    double node_step_tol = 1e-5; // adaptive per-node relative step tolerance
    long max_phase1_nodes = 4000;
    int max_phase2_iters = 40;

    void validate() const; // throws ConfigError
};

/// The certified-schedule constants for the power-law family.
struct TheoreticalConstants {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double epsilon = 0.0;
    double rho_star = 0.0;   // p/q
    double theta_star = 0.0; // (1 - rho*) g1'(g^{-1}(1/beta^*))
    double eta_star = 0.0;   // max{p(p-1)2^{p-2}, q(q-1)2^{q-2}}
    double delta = 0.0;      // min delta_beta over a 64-point log grid
    double kappa1 = 0.0;     // 1.1 x max sampled ||dphi/dbeta||_inf
    double c = 0.0;          // contraction constant at beta^*
    double c_hat = 0.0;      // 3/(4c), reported only, never a stopping rule
    long long n_nodes = 0;   // N = ceil(3 beta^* kappa1 / delta) + 1
    int k0 = 0;              // ceil(log2 log3(3/(4 c epsilon)))

    std::vector<double> beta_grid;  // the 64-point grid
    std::vector<double> delta_grid; // delta_beta on it
    std::vector<double> c_grid;     // C(beta) on it
};

/// eta_beta = 2 max{g1''(2 g^{-1}(1/beta)), g2''(2 g^{-1}(1/beta))/beta}.
double eta_beta(const NonlinearityPair& pair, double beta);

/// C(beta) = C(alpha = 1/beta) from c_alpha().
double c_of_beta(const NonlinearityPair& pair, double beta);

/// delta_beta = min{ g1'(g^{-1}(C(beta)/beta)) (1 - rho*) /
///                   (8 eta_beta (theta* + 1) C(beta)),  g^{-1}(1/beta) }.
double delta_beta(const NonlinearityPair& pair, double beta, double rho_star, double theta_star);

/// k0 = ceil(log2 log3(3/(4 c epsilon))), clamped at 0.
int phase2_iteration_bound(double c, double epsilon);

/// The starting hypercube [g^{-1}(C(beta_*)/beta_*), g^{-1}(1/beta_*)].
struct Hypercube {
    double lo;
    double hi;
    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

Hypercube starting_hypercube(const NonlinearityPair& pair, double beta_lo);

/// Constant vector at the hypercube midpoint. When delta_requirement is
/// given, throws ScheduleError if the hypercube width is not below it
/// (the caller should decrease beta_*).
std::vector<double> initial_point(const NonlinearityPair& pair, const MeshConfig& mesh,
                                  double beta_lo,
                                  std::optional<double> delta_requirement = std::nullopt);

/// Halve beta_* from beta_hi/2 until the hypercube width drops below the
/// certified delta over [beta_*, beta_hi] (strict = true, theoretical
/// mode) or below a quarter of the hypercube's lower corner (strict =
/// false, adaptive mode; the certified delta near beta^* is
/// existence-grade small and would push beta_* to absurd values).
double select_beta_lo(const NonlinearityPair& pair, double beta_hi, bool strict);

struct NewtonResult {
    std::vector<double> u;
    int iterations = 0;
    std::vector<double> step_norms;
    std::vector<double> residual_norms;
};

/// Full Newton on the stationary system at fixed beta, from a strictly
/// positive u0. Stops when the residual inf-norm is <= tol and the last
/// step satisfies ||step|| <= tol (1 + ||u||). Throws ConvergenceError on
/// divergence (three consecutive residual growths or an iterate leaving
/// the positive cone) or when max_iter runs out.
NewtonResult newton_solve(const NonlinearityPair& pair, const MeshConfig& mesh, double beta,
                          std::span<const double> u0, double tol, int max_iter);

/// Residual of the stationary system at parameter beta (B-form corner row).
std::vector<double> stationary_residual(const NonlinearityPair& pair, const MeshConfig& mesh,
                                        ParamForm form, double param, std::span<const double> u);

/// Allocation-free variant for hot loops.
void stationary_residual(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form,
                         double param, std::span<const double> u, std::vector<double>& out);

struct BoundsCheck {
    double u1_lower = 0.0;
    double un_upper = 0.0;
    double growth = 0.0;
    bool inside_box = false;     // u1 > lower and u_n < upper and u_n < e^M u1
    double flux_residual = 0.0;  // relative defect of the flux-balance identity
    bool flux_ok = false;
};

/// Verify a candidate solution at parameter alpha against the
/// h-independent bound box and the flux-balance identity
/// alpha g2(u_n) = h (g1(u_1)/2 + g1(u_2) + ... + g1(u_n)/2).
BoundsCheck check_solution_bounds(const NonlinearityPair& pair, const MeshConfig& mesh,
                                  double alpha, std::span<const double> u);

struct SolveReport {
    std::vector<double> u;
    double residual_inf = 0.0;
    long phase1_nodes = 0;
    long phase1_rejects = 0;
    long phase2_iterations = 0;
    long tridiagonal_solves = 0;
    std::vector<double> phase2_step_norms;
    std::vector<double> node_contraction; // per accepted node: s_last / s_prev^2
    BoundsCheck bounds;
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double epsilon = 0.0;
    ScheduleMode mode = ScheduleMode::adaptive;
    bool schedule_truncated = false; // theoretical N exceeded max_phase1_nodes
    long long certified_nodes = 0;   // theoretical mode: the certified N
    int k0 = 0;                      // theoretical mode: certified phase-2 count
    double elapsed_seconds = 0.0;
};

/// The two-phase continuation. Phase 1 tracks the path over a partition of
/// [beta_*, beta^*): one Newton step per node in theoretical mode, Newton
/// to tolerance with step halving/doubling in adaptive mode. Phase 2 runs
/// plain Newton at beta^* until the error is certified below epsilon by
/// step-norm plus residual criteria. The report carries the bound-box and
/// flux-balance verification of the output.
SolveReport continuation_solve(const NonlinearityPair& pair, const MeshConfig& mesh,
                               const ContinuationConfig& config);

/// The certified schedule (power-law pairs only).
TheoreticalConstants theoretical_schedule(const NonlinearityPair& pair, const MeshConfig& mesh,
                                          const ContinuationConfig& config);

struct PathSample {
    double beta = 0.0;
    double u1 = 0.0;
    double phi_prime_inf_beta = 0.0;
    double residual = 0.0; // |A(u1) - alpha| / alpha at the sample
    bool ok = false;
    std::string error;
};

/// Solve at `samples` uniformly spaced beta values in [beta_lo, beta_hi]
/// via the shooting oracle. Failures are flagged per sample and do not
/// abort the trace.
std::vector<PathSample> path_trace(const NonlinearityPair& pair, const MeshConfig& mesh,
                                   const ContinuationConfig& config, int samples);

} // namespace rdsteady
