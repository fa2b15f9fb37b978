#include "rdsteady/homotopy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rdsteady/errors.hpp"

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

bool all_positive(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

// Supremum of g1' g2 / (g1 g2') over (0, g^{-1}(1/beta_hi)]; p/q exactly for
// monomials. The hypotheses make it < 1.
double rho_star_of(const NonlinearityPair& pair, double beta_hi) {
    if (auto pl = pair.power_law()) return pl->p / pl->q;
    const double x_hi = g_inverse(pair, 1.0 / beta_hi);
    double sup = 0.0;
    const int samples = 128;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double x = x_hi * std::pow(1e-8, 1.0 - t);
        const double num = pair.derivative(Component::g1, 1, x) * pair.derivative(Component::g2, 0, x);
        const double den = pair.derivative(Component::g1, 0, x) * pair.derivative(Component::g2, 1, x);
        sup = std::max(sup, num / den);
    }
    return sup;
}

double theta_star_of(const NonlinearityPair& pair, double beta_hi, double rho_star) {
    return (1.0 - rho_star) * eval(pair, Component::g1, 1, g_inverse(pair, 1.0 / beta_hi));
}

double delta_min(const NonlinearityPair& pair, double beta_lo, double beta_hi, double rho_star,
                 double theta_star) {
    const int points = 64;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double beta = beta_lo * std::pow(beta_hi / beta_lo, t);
        dmin = std::min(dmin, delta_beta(pair, beta, rho_star, theta_star));
    }
    return dmin;
}

struct SolveCounters {
    long tridiagonal_solves = 0;
};

// Reused buffers: a continuation run performs hundreds of Newton steps and
// must not churn allocations at large n.
struct NewtonWorkspace {
    std::vector<double> f;
    TridiagonalMatrix J;
    TridiagonalWorkspace tws;
};

// One full Newton step at fixed beta; returns the step inf-norm and the
// residual inf-norm seen before stepping.
struct StepResult {
    double step_norm;
    double residual_norm;
};

StepResult newton_step(const NonlinearityPair& pair, const MeshConfig& mesh, double beta,
                       std::vector<double>& u, NewtonWorkspace& ws, SolveCounters& counters) {
    stationary_residual(pair, mesh, ParamForm::beta, beta, u, ws.f);
    const double residual_norm = inf_norm(ws.f);
    assemble(pair, mesh, ParamForm::beta, beta, u, ws.J);
    solve_tridiagonal(ws.J, ws.f, ws.tws); // ws.f now holds the step
    ++counters.tridiagonal_solves;
    for (int i = 0; i < mesh.n; ++i) u[i] -= ws.f[i];
    return {inf_norm(ws.f), residual_norm};
}

struct NodeStatus {
    bool converged = false;
    bool positive = true;
    int iterations = 0;
    double last_step = 0.0;
    double prev_step = 0.0;
};

// The positive path at parameter beta lies in the box
// [g^{-1}(C(beta)/beta), g^{-1}(1/beta)] (first and last coordinates carry
// the endpoints). The zero vector is also a root of F, so a tracker that
// wanders off the branch can converge there with positive iterates and
// vanishing steps; this box test is the branch guard.
bool inside_solution_box(const NonlinearityPair& pair, double beta, std::span<const double> u) {
    const double lo = g_inverse(pair, c_of_beta(pair, beta) / beta);
    const double hi = g_inverse(pair, 1.0 / beta);
    return u.front() > 0.8 * lo && u.back() < 1.25 * hi;
}

// Newton at a node until the step norm drops below step_tol relative to
// the iterate scale; solution amplitudes range over many decades with
// alpha, so the tolerance must follow ||u||, not max(1, ||u||).
NodeStatus newton_to_tolerance(const NonlinearityPair& pair, const MeshConfig& mesh, double beta,
                               std::vector<double>& u, double step_tol, int max_iter,
                               NewtonWorkspace& ws, SolveCounters& counters) {
    NodeStatus status;
    double prev_residual = std::numeric_limits<double>::infinity();
    int growths = 0;
    for (int it = 0; it < max_iter; ++it) {
        const StepResult s = newton_step(pair, mesh, beta, u, ws, counters);
        ++status.iterations;
        status.prev_step = status.last_step;
        status.last_step = s.step_norm;
        if (!all_positive(u)) {
            status.positive = false;
            return status;
        }
        if (s.residual_norm > prev_residual) {
            if (++growths >= 3) return status;
        } else {
            growths = 0;
        }
        prev_residual = s.residual_norm;
        if (s.step_norm <= step_tol * inf_norm(u)) {
            status.converged = true;
            return status;
        }
    }
    return status;
}

} // namespace

void ContinuationConfig::validate() const {
    if (!(beta_hi > 0.0))
        throw ConfigError("continuation: beta_hi must be positive, got " + fmt(beta_hi));
    if (beta_lo != 0.0 && !(beta_lo > 0.0 && beta_lo < beta_hi))
        throw ConfigError("continuation: beta_lo must satisfy 0 < beta_lo < beta_hi, got " +
                          fmt(beta_lo));
    if (!(epsilon >= 1e-13))
        throw ConfigError("continuation: epsilon must be at least 1e-13 in binary64, got " +
                          fmt(epsilon));
    if (max_newton_per_node < 1 || max_phase2_iters < 1 || max_phase1_nodes < 1)
        throw ConfigError("continuation: iteration budgets must be positive");
    if (!(residual_tol > 0.0) || !(node_step_tol > 0.0))
        throw ConfigError("continuation: tolerances must be positive");
}

double eta_beta(const NonlinearityPair& pair, double beta) {
    const double x = 2.0 * g_inverse(pair, 1.0 / beta);
    return 2.0 * std::max(eval(pair, Component::g1, 2, x),
                          eval(pair, Component::g2, 2, x) / beta);
}

double c_of_beta(const NonlinearityPair& pair, double beta) {
    return c_alpha(pair, 1.0 / beta);
}

double delta_beta(const NonlinearityPair& pair, double beta, double rho_star, double theta_star) {
    const double cb = c_of_beta(pair, beta);
    const double g1p = eval(pair, Component::g1, 1, g_inverse(pair, cb / beta));
    const double arm = g1p * (1.0 - rho_star) / (8.0 * eta_beta(pair, beta) * (theta_star + 1.0) * cb);
    return std::min(arm, g_inverse(pair, 1.0 / beta));
}

int phase2_iteration_bound(double c, double epsilon) {
    const double arg = 3.0 / (4.0 * c * epsilon);
    if (!(arg > 3.0)) return 0;
    const double log3 = std::log(arg) / std::log(3.0);
    return static_cast<int>(std::max(0.0, std::ceil(std::log2(log3))));
}

Hypercube starting_hypercube(const NonlinearityPair& pair, double beta_lo) {
    if (!(beta_lo > 0.0))
        throw DomainError("starting_hypercube: beta_* must be positive, got " + fmt(beta_lo));
    Hypercube box;
    box.hi = g_inverse(pair, 1.0 / beta_lo);
    box.lo = g_inverse(pair, c_of_beta(pair, beta_lo) / beta_lo);
    return box;
}

std::vector<double> initial_point(const NonlinearityPair& pair, const MeshConfig& mesh,
                                  double beta_lo, std::optional<double> delta_requirement) {
    const Hypercube box = starting_hypercube(pair, beta_lo);
    if (delta_requirement && !(box.width() < *delta_requirement))
        throw ScheduleError("initial_point: hypercube width " + fmt(box.width()) +
                            " at beta_*=" + fmt(beta_lo) + " is not below delta=" +
                            fmt(*delta_requirement) + "; decrease beta_*");
    return std::vector<double>(mesh.n, box.midpoint());
}

double select_beta_lo(const NonlinearityPair& pair, double beta_hi, bool strict) {
    const double rho = strict ? rho_star_of(pair, beta_hi) : 0.0;
    const double theta = strict ? theta_star_of(pair, beta_hi, rho) : 0.0;
    double beta = 0.5 * beta_hi;
    for (int halvings = 0; halvings < 200; ++halvings) {
        const Hypercube box = starting_hypercube(pair, beta);
        const double limit =
            strict ? delta_min(pair, beta, beta_hi, rho, theta) : 0.25 * box.lo;
        if (box.width() < limit) return beta;
        beta *= 0.5;
    }
    throw ScheduleError("select_beta_lo: no admissible beta_* found above " + fmt(beta) +
                        " for beta^*=" + fmt(beta_hi));
}

void stationary_residual(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form,
                         double param, std::span<const double> u, std::vector<double>& f) {
    if (!(param > 0.0))
        throw DomainError("stationary_residual: parameter must be positive, got " + fmt(param));
    if (static_cast<int>(u.size()) != mesh.n)
        throw DomainError("stationary_residual: state length mismatch");
    const int n = mesh.n;
    const double h = mesh.h;
    const double h2 = h * h;
    const double a = form == ParamForm::alpha ? param : 1.0 / param;

    f.resize(n);
    // second differences assembled from first differences, which keeps the
    // cancellation exact for neighboring values
    f[0] = -(u[1] - u[0]) + 0.5 * h2 * pair.derivative(Component::g1, 0, u[0]);
    for (int k = 1; k + 1 < n; ++k) {
        const double dl = u[k] - u[k - 1];
        const double dr = u[k + 1] - u[k];
        f[k] = -(dr - dl) + h2 * pair.derivative(Component::g1, 0, u[k]);
    }
    f[n - 1] = (u[n - 1] - u[n - 2]) + 0.5 * h2 * pair.derivative(Component::g1, 0, u[n - 1]) -
               h * a * pair.derivative(Component::g2, 0, u[n - 1]);
}

std::vector<double> stationary_residual(const NonlinearityPair& pair, const MeshConfig& mesh,
                                        ParamForm form, double param, std::span<const double> u) {
    std::vector<double> f;
    stationary_residual(pair, mesh, form, param, u, f);
    return f;
}

NewtonResult newton_solve(const NonlinearityPair& pair, const MeshConfig& mesh, double beta,
                          std::span<const double> u0, double tol, int max_iter) {
    if (!(beta > 0.0))
        throw DomainError("newton_solve: beta must be positive, got " + fmt(beta));
    if (!(tol > 0.0))
        throw DomainError("newton_solve: tol must be positive, got " + fmt(tol));
    if (!all_positive(u0))
        throw DomainError("newton_solve: u0 must be strictly positive");

    NewtonResult result;
    result.u.assign(u0.begin(), u0.end());
    SolveCounters counters;
    NewtonWorkspace ws;
    double prev_residual = std::numeric_limits<double>::infinity();
    int growths = 0;
    for (int it = 0; it < max_iter; ++it) {
        const StepResult s = newton_step(pair, mesh, beta, result.u, ws, counters);
        ++result.iterations;
        result.step_norms.push_back(s.step_norm);
        result.residual_norms.push_back(s.residual_norm);
        if (!all_positive(result.u))
            throw ConvergenceError("newton_solve: iterate left the positive cone at beta=" +
                                   fmt(beta));
        if (s.residual_norm > prev_residual) {
            if (++growths >= 3)
                throw ConvergenceError("newton_solve: residual grew for 3 consecutive steps "
                                       "at beta=" + fmt(beta));
        } else {
            growths = 0;
        }
        prev_residual = s.residual_norm;
        if (s.residual_norm <= tol && s.step_norm <= tol * (1.0 + inf_norm(result.u)))
            return result;
    }
    throw ConvergenceError("newton_solve: iteration budget exhausted at beta=" + fmt(beta));
}

TheoreticalConstants theoretical_schedule(const NonlinearityPair& pair, const MeshConfig& mesh,
                                          const ContinuationConfig& config) {
    config.validate();
    const auto pl = pair.power_law();
    if (!pl)
        throw ConfigError("theoretical_schedule: the certified schedule requires the "
                          "power-law family");

    TheoreticalConstants k;
    k.beta_hi = config.beta_hi;
    k.epsilon = config.epsilon;
    k.rho_star = pl->p / pl->q;
    k.theta_star = theta_star_of(pair, config.beta_hi, k.rho_star);
    k.eta_star = std::max(pl->p * (pl->p - 1.0) * std::pow(2.0, pl->p - 2.0),
                          pl->q * (pl->q - 1.0) * std::pow(2.0, pl->q - 2.0));

    if (config.beta_lo > 0.0) {
        k.beta_lo = config.beta_lo;
        const Hypercube box = starting_hypercube(pair, k.beta_lo);
        const double d = delta_min(pair, k.beta_lo, k.beta_hi, k.rho_star, k.theta_star);
        if (!(box.width() < d))
            throw ScheduleError("theoretical_schedule: hypercube width " + fmt(box.width()) +
                                " at beta_*=" + fmt(k.beta_lo) + " is not below delta=" + fmt(d));
    } else {
        k.beta_lo = select_beta_lo(pair, config.beta_hi, /*strict=*/true);
    }

    k.delta = delta_min(pair, k.beta_lo, k.beta_hi, k.rho_star, k.theta_star);

    // kappa1: inflate the sampled path derivative over 33 Chebyshev-spaced
    // beta values; the bound exists but has no evaluable expression.
    const int cheb = 33;
    double kappa_max = 0.0;
    for (int j = 0; j < cheb; ++j) {
        const double c = std::cos(std::numbers::pi * j / (cheb - 1));
        const double beta = 0.5 * (k.beta_lo + k.beta_hi) + 0.5 * (k.beta_hi - k.beta_lo) * c;
        const ConditionSample s = condition_phi_prime(pair, mesh, 1.0 / beta);
        kappa_max = std::max(kappa_max, s.phi_prime_inf_beta);
    }
    k.kappa1 = 1.1 * kappa_max;

    k.n_nodes = static_cast<long long>(std::ceil(3.0 * k.beta_hi * k.kappa1 / k.delta)) + 1;

    const double cb = c_of_beta(pair, k.beta_hi);
    k.c = 2.0 * eta_beta(pair, k.beta_hi) * (k.theta_star + 1.0) * cb /
          (eval(pair, Component::g1, 1, g_inverse(pair, cb / k.beta_hi)) * (1.0 - k.rho_star));
    k.c_hat = 3.0 / (4.0 * k.c);
    k.k0 = phase2_iteration_bound(k.c, config.epsilon);

    const int points = 64;
    k.beta_grid.resize(points);
    k.delta_grid.resize(points);
    k.c_grid.resize(points);
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double beta = k.beta_lo * std::pow(k.beta_hi / k.beta_lo, t);
        k.beta_grid[i] = beta;
        k.delta_grid[i] = delta_beta(pair, beta, k.rho_star, k.theta_star);
        k.c_grid[i] = c_of_beta(pair, beta);
    }
    return k;
}

BoundsCheck check_solution_bounds(const NonlinearityPair& pair, const MeshConfig& mesh,
                                  double alpha, std::span<const double> u) {
    const SolutionBounds b = solution_bounds(pair, alpha);
    BoundsCheck out;
    out.u1_lower = b.u1_lower;
    out.un_upper = b.un_upper;
    out.growth = b.growth;
    const double u1 = u.front();
    const double un = u.back();
    out.inside_box = u1 > b.u1_lower && un < b.un_upper && un < std::exp(b.growth) * u1;

    // flux balance: alpha g2(u_n) = h (g1(u_1)/2 + g1(u_2) + ... + g1(u_n)/2)
    double quad = 0.5 * pair.derivative(Component::g1, 0, u.front());
    for (int k = 1; k + 1 < mesh.n; ++k) quad += pair.derivative(Component::g1, 0, u[k]);
    quad += 0.5 * pair.derivative(Component::g1, 0, u.back());
    quad *= mesh.h;
    const double lhs = alpha * pair.derivative(Component::g2, 0, un);
    out.flux_residual = std::abs(lhs - quad) / std::max(std::abs(lhs), std::abs(quad));
    out.flux_ok = out.flux_residual <= 1e-10;
    return out;
}

SolveReport continuation_solve(const NonlinearityPair& pair, const MeshConfig& mesh,
                               const ContinuationConfig& config) {
    config.validate();
    {
        const auto grid = default_validation_grid();
        const ValidationReport vr = validate_pair(pair, grid);
        if (!vr.all_pass()) {
            std::string what = "continuation_solve: nonlinearity fails hypothesis checks:";
            for (const auto& name : vr.failed_hypotheses()) what += " [" + name + "]";
            throw ValidationError(what);
        }
    }

    // Degeneracy pre-flight: the boundary coupling h alpha g2'(u_n) is what
    // separates the Jacobian from the singular constant mode. When it falls
    // below the rounding floor of the O(1) diagonal, the tridiagonal Newton
    // cannot resolve the positive branch in binary64 (the shooting oracle
    // still can, since it parametrizes by u1).
    {
        const double alpha_star = 1.0 / config.beta_hi;
        const double corner = mesh.h * alpha_star *
                              eval(pair, Component::g2, 1, g_inverse(pair, alpha_star));
        const double rounding_floor = 64.0 * mesh.n * std::numeric_limits<double>::epsilon();
        if (!(corner > rounding_floor))
            throw ScheduleError("continuation_solve: boundary coupling " + fmt(corner) +
                                " at alpha*=" + fmt(alpha_star) + " is below the binary64 "
                                "resolution floor " + fmt(rounding_floor) +
                                "; the branch is numerically degenerate at this parameter");
    }

    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.beta_hi = config.beta_hi;
    rep.epsilon = config.epsilon;
    rep.mode = config.mode;

    SolveCounters counters;
    NewtonWorkspace ws;
    const bool theoretical = config.mode == ScheduleMode::theoretical;
    const bool single_step = config.node_iteration == NodeIteration::by_mode
                                 ? theoretical
                                 : config.node_iteration == NodeIteration::single_step;

    std::vector<double> u;
    if (theoretical) {
        const TheoreticalConstants consts = theoretical_schedule(pair, mesh, config);
        rep.beta_lo = consts.beta_lo;
        rep.certified_nodes = consts.n_nodes;
        rep.k0 = consts.k0;
        u = initial_point(pair, mesh, consts.beta_lo, consts.delta);

        const long long n_exec = std::min<long long>(consts.n_nodes, config.max_phase1_nodes);
        rep.schedule_truncated = n_exec < consts.n_nodes;

        // Certified runs use the uniform partition beta_0..beta_{N-1}; a
        // truncated run falls back to geometric nodes, which keeps the
        // per-node path motion uniform in relative terms.
        for (long long kk = 0; kk < n_exec; ++kk) {
            double beta_k;
            if (!rep.schedule_truncated) {
                beta_k = consts.beta_lo +
                         (consts.beta_hi - consts.beta_lo) * static_cast<double>(kk) /
                             static_cast<double>(consts.n_nodes);
            } else {
                beta_k = consts.beta_lo *
                         std::pow(consts.beta_hi / consts.beta_lo,
                                  static_cast<double>(kk) / static_cast<double>(n_exec));
            }
            if (single_step) {
                const StepResult s = newton_step(pair, mesh, beta_k, u, ws, counters);
                if (!all_positive(u))
                    throw ConvergenceError("continuation_solve: iterate left the positive cone "
                                           "at beta=" + fmt(beta_k));
                // residual scales drift with beta along the path, so the
                // lost-path signals are exploding steps or a box escape,
                // not residual growth
                if (!std::isfinite(s.step_norm) || s.step_norm > 10.0 * (1.0 + inf_norm(u)))
                    throw ConvergenceError("continuation_solve: lost the path at beta=" +
                                           fmt(beta_k));
            } else {
                NodeStatus st = newton_to_tolerance(pair, mesh, beta_k, u, config.node_step_tol,
                                                    config.max_newton_per_node, ws, counters);
                if (!st.converged || !st.positive)
                    throw ConvergenceError("continuation_solve: node iteration failed at beta=" +
                                           fmt(beta_k));
            }
            if (!inside_solution_box(pair, beta_k, u))
                throw ConvergenceError("continuation_solve: left the solution box at beta=" +
                                       fmt(beta_k));
            ++rep.phase1_nodes;
        }
    } else {
        rep.beta_lo = config.beta_lo > 0.0 ? config.beta_lo
                                           : select_beta_lo(pair, config.beta_hi, /*strict=*/false);
        u = initial_point(pair, mesh, rep.beta_lo);

        double beta = rep.beta_lo;
        // converge at beta_* itself first
        {
            NodeStatus st = newton_to_tolerance(pair, mesh, beta, u, config.node_step_tol,
                                                config.max_newton_per_node, ws, counters);
            if (!st.converged || !st.positive || !inside_solution_box(pair, beta, u))
                throw ConvergenceError("continuation_solve: could not solve at beta_*=" +
                                       fmt(beta));
            ++rep.phase1_nodes;
        }

        double dbeta = std::min(0.5 * rep.beta_lo, (config.beta_hi - rep.beta_lo) / 16.0);
        const double dbeta_max = (config.beta_hi - rep.beta_lo) / 8.0;
        int easy_streak = 0;
        while (beta + dbeta < config.beta_hi) {
            const double beta_next = beta + dbeta;
            std::vector<double> u_save = u;
            NodeStatus st = newton_to_tolerance(pair, mesh, beta_next, u, config.node_step_tol,
                                                config.max_newton_per_node, ws, counters);
            if (!st.converged || !st.positive || !inside_solution_box(pair, beta_next, u)) {
                u = std::move(u_save);
                dbeta *= 0.5;
                easy_streak = 0;
                ++rep.phase1_rejects;
                if (dbeta < 1e-12 * config.beta_hi)
                    throw ScheduleError("continuation_solve: adaptive step underflow at beta=" +
                                        fmt(beta_next));
                continue;
            }
            beta = beta_next;
            ++rep.phase1_nodes;
            if (st.iterations >= 2 && st.prev_step > 0.0)
                rep.node_contraction.push_back(st.last_step / (st.prev_step * st.prev_step));
            if (st.iterations <= 3) {
                if (++easy_streak >= 2) {
                    dbeta = std::min(2.0 * dbeta, dbeta_max);
                    easy_streak = 0;
                }
            } else {
                easy_streak = 0;
            }
        }
    }

    // Phase 2: plain Newton at beta^*. Once quadratic contraction holds the
    // error after an accepted step is bounded by the step just taken, so
    // stopping at half epsilon certifies ||u - phi(beta^*)||_inf <= epsilon.
    {
        const double beta = config.beta_hi;
        double prev_residual = std::numeric_limits<double>::infinity();
        int growths = 0;
        bool done = false;
        for (int it = 0; it < config.max_phase2_iters; ++it) {
            const StepResult s = newton_step(pair, mesh, beta, u, ws, counters);
            ++rep.phase2_iterations;
            rep.phase2_step_norms.push_back(s.step_norm);
            if (!all_positive(u))
                throw ConvergenceError("continuation_solve: phase-2 iterate left the positive "
                                       "cone at beta^*=" + fmt(beta));
            if (s.residual_norm > prev_residual) {
                if (++growths >= 3)
                    throw ConvergenceError("continuation_solve: phase-2 residual diverged at "
                                           "beta^*=" + fmt(beta));
            } else {
                growths = 0;
            }
            prev_residual = s.residual_norm;
            if (s.step_norm <= 0.5 * config.epsilon && s.residual_norm <= config.residual_tol) {
                done = true;
                break;
            }
        }
        if (!done)
            throw ConvergenceError("continuation_solve: phase 2 did not reach epsilon=" +
                                   fmt(config.epsilon) + " at beta^*=" + fmt(beta));
    }

    rep.u = u;
    rep.residual_inf = inf_norm(stationary_residual(pair, mesh, ParamForm::beta, config.beta_hi, u));
    rep.tridiagonal_solves = counters.tridiagonal_solves;
    rep.bounds = check_solution_bounds(pair, mesh, 1.0 / config.beta_hi, u);
    if (!rep.bounds.inside_box)
        throw ConvergenceError("continuation_solve: output violates the solution bounds at "
                               "beta^*=" + fmt(config.beta_hi) + "; converged off the positive "
                               "branch");
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

std::vector<PathSample> path_trace(const NonlinearityPair& pair, const MeshConfig& mesh,
                                   const ContinuationConfig& config, int samples) {
    config.validate();
    if (samples < 2)
        throw ConfigError("path_trace: at least 2 samples required, got " +
                          std::to_string(samples));
    const double beta_lo = config.beta_lo > 0.0
                               ? config.beta_lo
                               : select_beta_lo(pair, config.beta_hi, /*strict=*/false);

    std::vector<PathSample> out(samples);
    for (int i = 0; i < samples; ++i) {
        PathSample& s = out[i];
        s.beta = beta_lo + (config.beta_hi - beta_lo) * static_cast<double>(i) / (samples - 1);
        const double alpha = 1.0 / s.beta;
        try {
            const double u1 = solve_u1_oracle(pair, mesh, alpha, 1e-12);
            const ShootingTrajectory t = shoot(pair, mesh, u1);
            s.u1 = u1;
            s.phi_prime_inf_beta = alpha * alpha * t.u_prime.back() / std::abs(t.a_prime);
            s.residual = std::abs(t.a - alpha) / alpha;
            s.ok = true;
        } catch (const Error& e) {
            s.ok = false;
            s.error = e.what();
        }
    }
    return out;
}

} // namespace rdsteady
