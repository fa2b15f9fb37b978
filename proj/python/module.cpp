#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdsteady/dynamics.hpp"
#include "rdsteady/errors.hpp"
#include "rdsteady/homotopy.hpp"
#include "rdsteady/jacobian.hpp"
#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"

namespace py = pybind11;
using namespace rdsteady;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stationary states of semilinear heat meshes with nonlinear boundary flux: "
              "shooting oracle, tridiagonal Newton continuation, and an implicit-Euler "
              "cross-check.";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
    py::register_exception<OverflowError>(m, "TrajectoryOverflowError", PyExc_OverflowError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_RuntimeError);
    py::register_exception<ScheduleError>(m, "ScheduleError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "HypothesisError", PyExc_ValueError);

    py::enum_<Component>(m, "Component")
        .value("g1", Component::g1)
        .value("g2", Component::g2);

    py::class_<NonlinearityPair, std::shared_ptr<NonlinearityPair>>(m, "NonlinearityPair")
        .def("name", &NonlinearityPair::name);

    py::class_<PowerLawPair, NonlinearityPair, std::shared_ptr<PowerLawPair>>(m, "PowerLawPair")
        .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
        .def_property_readonly("p", &PowerLawPair::p)
        .def_property_readonly("q", &PowerLawPair::q);

    m.def("eval", &eval, py::arg("pair"), py::arg("which"), py::arg("order"), py::arg("x"));
    m.def("eval_g", &eval_g, py::arg("pair"), py::arg("x"));
    m.def("g_inverse", &g_inverse, py::arg("pair"), py::arg("y"), py::arg("rel_tol") = 1e-13);
    m.def("growth_constant", &growth_constant, py::arg("pair"), py::arg("alpha"));
    m.def("c_alpha", &c_alpha, py::arg("pair"), py::arg("alpha"));

    py::class_<HypothesisCheck>(m, "HypothesisCheck")
        .def_readonly("hypothesis", &HypothesisCheck::hypothesis)
        .def_readonly("x", &HypothesisCheck::x)
        .def_readonly("value", &HypothesisCheck::value)
        .def_readonly("ok", &HypothesisCheck::pass);
    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("checks", &ValidationReport::checks)
        .def("all_pass", &ValidationReport::all_pass)
        .def("failed_hypotheses", &ValidationReport::failed_hypotheses);
    m.def(
        "validate_pair",
        [](const NonlinearityPair& pair, const std::vector<double>& grid) {
            return validate_pair(pair, grid);
        },
        py::arg("pair"), py::arg("grid"));

    py::class_<MeshConfig>(m, "MeshConfig")
        .def(py::init<int>(), py::arg("n"))
        .def_readonly("n", &MeshConfig::n)
        .def_readonly("h", &MeshConfig::h);

    py::class_<ShootingTrajectory>(m, "ShootingTrajectory")
        .def_readonly("u1", &ShootingTrajectory::u1)
        .def_readonly("u", &ShootingTrajectory::u)
        .def_readonly("u_prime", &ShootingTrajectory::u_prime)
        .def_readonly("a", &ShootingTrajectory::a)
        .def_readonly("a_prime", &ShootingTrajectory::a_prime);

    py::class_<SolutionBounds>(m, "SolutionBounds")
        .def_readonly("alpha", &SolutionBounds::alpha)
        .def_readonly("u1_lower", &SolutionBounds::u1_lower)
        .def_readonly("un_upper", &SolutionBounds::un_upper)
        .def_readonly("growth", &SolutionBounds::growth);

    m.def("shoot", &shoot, py::arg("pair"), py::arg("mesh"), py::arg("u1"));
    m.def("minimal_equation", &minimal_equation, py::arg("pair"), py::arg("mesh"),
          py::arg("alpha"), py::arg("u1"));
    m.def(
        "bracket_u1",
        [](const NonlinearityPair& pair, const MeshConfig& mesh, double alpha) {
            const U1Bracket b = bracket_u1(pair, mesh, alpha);
            return std::make_pair(b.u1_star, b.u1_star_star);
        },
        py::arg("pair"), py::arg("mesh"), py::arg("alpha"));
    m.def("solve_u1_oracle", &solve_u1_oracle, py::arg("pair"), py::arg("mesh"), py::arg("alpha"),
          py::arg("tol") = 1e-12);
    m.def("solution_bounds", &solution_bounds, py::arg("pair"), py::arg("alpha"));

    py::enum_<ParamForm>(m, "ParamForm")
        .value("alpha", ParamForm::alpha)
        .value("beta", ParamForm::beta);
    py::class_<TridiagonalMatrix>(m, "TridiagonalMatrix")
        .def_readonly("gamma", &TridiagonalMatrix::gamma)
        .def("inf_norm", &TridiagonalMatrix::inf_norm);
    m.def(
        "assemble",
        [](const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form, double param,
           const std::vector<double>& u) { return assemble(pair, mesh, form, param, u); },
        py::arg("pair"), py::arg("mesh"), py::arg("form"), py::arg("param"), py::arg("u"));
    m.def(
        "solve_tridiagonal",
        [](const TridiagonalMatrix& J, const std::vector<double>& rhs) {
            return solve_tridiagonal(J, rhs);
        },
        py::arg("J"), py::arg("rhs"));
    py::class_<DeterminantResult>(m, "DeterminantResult")
        .def_readonly("value", &DeterminantResult::value)
        .def_readonly("minors", &DeterminantResult::minors);
    m.def("determinant", &determinant, py::arg("J"));
    py::class_<FactorizedInverse>(m, "FactorizedInverse")
        .def(py::init<std::vector<double>, double>(), py::arg("u_prime"), py::arg("det"))
        .def("entry", &FactorizedInverse::entry, py::arg("i"), py::arg("j"))
        .def(
            "apply",
            [](const FactorizedInverse& inv, const std::vector<double>& x) {
                return inv.apply(x);
            },
            py::arg("x"));

    py::class_<ConditionSample>(m, "ConditionSample")
        .def_readonly("alpha", &ConditionSample::alpha)
        .def_readonly("u1", &ConditionSample::u1)
        .def_readonly("phi_prime_inf", &ConditionSample::phi_prime_inf)
        .def_readonly("phi_prime_inf_beta", &ConditionSample::phi_prime_inf_beta);
    m.def("condition_phi_prime", &condition_phi_prime, py::arg("pair"), py::arg("mesh"),
          py::arg("alpha"), py::arg("oracle_tol") = 1e-12);

    py::class_<CramerReport>(m, "CramerReport")
        .def_readonly("alpha", &CramerReport::alpha)
        .def_readonly("u1", &CramerReport::u1)
        .def_readonly("residual_det", &CramerReport::residual_det)
        .def_readonly("residual_cramer", &CramerReport::residual_cramer)
        .def_readonly("residual_minor", &CramerReport::residual_minor)
        .def_readonly("solution_like", &CramerReport::solution_like);
    m.def("cramer_identity_check", &cramer_identity_check, py::arg("pair"), py::arg("mesh"),
          py::arg("alpha"), py::arg("u1_override") = std::nullopt);

    py::enum_<ScheduleMode>(m, "ScheduleMode")
        .value("theoretical", ScheduleMode::theoretical)
        .value("adaptive", ScheduleMode::adaptive);
    py::class_<ContinuationConfig>(m, "ContinuationConfig")
        .def(py::init([](double beta_hi, double epsilon, ScheduleMode mode, double beta_lo) {
                 ContinuationConfig c;
                 c.beta_hi = beta_hi;
                 c.epsilon = epsilon;
                 c.mode = mode;
                 c.beta_lo = beta_lo;
                 return c;
             }),
             py::arg("beta_hi"), py::arg("epsilon") = 1e-12,
             py::arg("mode") = ScheduleMode::adaptive, py::arg("beta_lo") = 0.0)
        .def_readwrite("beta_lo", &ContinuationConfig::beta_lo)
        .def_readwrite("beta_hi", &ContinuationConfig::beta_hi)
        .def_readwrite("epsilon", &ContinuationConfig::epsilon)
        .def_readwrite("mode", &ContinuationConfig::mode)
        .def_readwrite("node_step_tol", &ContinuationConfig::node_step_tol)
        .def_readwrite("max_phase1_nodes", &ContinuationConfig::max_phase1_nodes);

    py::class_<BoundsCheck>(m, "BoundsCheck")
        .def_readonly("u1_lower", &BoundsCheck::u1_lower)
        .def_readonly("un_upper", &BoundsCheck::un_upper)
        .def_readonly("growth", &BoundsCheck::growth)
        .def_readonly("inside_box", &BoundsCheck::inside_box)
        .def_readonly("flux_residual", &BoundsCheck::flux_residual)
        .def_readonly("flux_ok", &BoundsCheck::flux_ok);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("u", &SolveReport::u)
        .def_readonly("residual_inf", &SolveReport::residual_inf)
        .def_readonly("phase1_nodes", &SolveReport::phase1_nodes)
        .def_readonly("phase1_rejects", &SolveReport::phase1_rejects)
        .def_readonly("phase2_iterations", &SolveReport::phase2_iterations)
        .def_readonly("tridiagonal_solves", &SolveReport::tridiagonal_solves)
        .def_readonly("phase2_step_norms", &SolveReport::phase2_step_norms)
        .def_readonly("node_contraction", &SolveReport::node_contraction)
        .def_readonly("bounds", &SolveReport::bounds)
        .def_readonly("beta_lo", &SolveReport::beta_lo)
        .def_readonly("beta_hi", &SolveReport::beta_hi)
        .def_readonly("schedule_truncated", &SolveReport::schedule_truncated)
        .def_readonly("certified_nodes", &SolveReport::certified_nodes)
        .def_readonly("k0", &SolveReport::k0)
        .def_readonly("elapsed_seconds", &SolveReport::elapsed_seconds);

    m.def("continuation_solve", &continuation_solve, py::arg("pair"), py::arg("mesh"),
          py::arg("config"));

    py::class_<TheoreticalConstants>(m, "TheoreticalConstants")
        .def_readonly("beta_lo", &TheoreticalConstants::beta_lo)
        .def_readonly("beta_hi", &TheoreticalConstants::beta_hi)
        .def_readonly("rho_star", &TheoreticalConstants::rho_star)
        .def_readonly("theta_star", &TheoreticalConstants::theta_star)
        .def_readonly("eta_star", &TheoreticalConstants::eta_star)
        .def_readonly("delta", &TheoreticalConstants::delta)
        .def_readonly("kappa1", &TheoreticalConstants::kappa1)
        .def_readonly("c", &TheoreticalConstants::c)
        .def_readonly("c_hat", &TheoreticalConstants::c_hat)
        .def_readonly("N", &TheoreticalConstants::n_nodes)
        .def_readonly("k0", &TheoreticalConstants::k0)
        .def_readonly("beta_grid", &TheoreticalConstants::beta_grid)
        .def_readonly("delta_grid", &TheoreticalConstants::delta_grid)
        .def_readonly("c_grid", &TheoreticalConstants::c_grid);
    m.def("theoretical_schedule", &theoretical_schedule, py::arg("pair"), py::arg("mesh"),
          py::arg("config"));

    py::class_<PathSample>(m, "PathSample")
        .def_readonly("beta", &PathSample::beta)
        .def_readonly("u1", &PathSample::u1)
        .def_readonly("phi_prime_inf_beta", &PathSample::phi_prime_inf_beta)
        .def_readonly("residual", &PathSample::residual)
        .def_readonly("ok", &PathSample::ok)
        .def_readonly("error", &PathSample::error);
    m.def("path_trace", &path_trace, py::arg("pair"), py::arg("mesh"), py::arg("config"),
          py::arg("samples"));

    py::class_<DynamicsConfig>(m, "DynamicsConfig")
        .def(py::init([](double alpha, double dt, double steady_tol, double t_max) {
                 DynamicsConfig c;
                 c.alpha = alpha;
                 c.dt = dt;
                 c.steady_tol = steady_tol;
                 c.t_max = t_max;
                 return c;
             }),
             py::arg("alpha"), py::arg("dt") = 1.0, py::arg("steady_tol") = 1e-9,
             py::arg("t_max") = 1e6)
        .def_readwrite("alpha", &DynamicsConfig::alpha)
        .def_readwrite("dt", &DynamicsConfig::dt)
        .def_readwrite("steady_tol", &DynamicsConfig::steady_tol)
        .def_readwrite("t_max", &DynamicsConfig::t_max);

    py::class_<IntegrationResult>(m, "IntegrationResult")
        .def_readonly("u", &IntegrationResult::u)
        .def_readonly("t_final", &IntegrationResult::t_final)
        .def_readonly("converged", &IntegrationResult::converged)
        .def_readonly("steps", &IntegrationResult::steps)
        .def_readonly("newton_iterations", &IntegrationResult::newton_iterations)
        .def_readonly("rejected_steps", &IntegrationResult::rejected_steps)
        .def_readonly("final_residual", &IntegrationResult::final_residual);
    m.def(
        "dynamics_rhs",
        [](const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
           const std::vector<double>& u) { return dynamics_rhs(pair, mesh, alpha, u); },
        py::arg("pair"), py::arg("mesh"), py::arg("alpha"), py::arg("u"));
    m.def(
        "integrate_to_steady",
        [](const NonlinearityPair& pair, const MeshConfig& mesh, const DynamicsConfig& config,
           const std::vector<double>& u0) { return integrate_to_steady(pair, mesh, config, u0); },
        py::arg("pair"), py::arg("mesh"), py::arg("config"), py::arg("u0"));

    m.def("check_solution_bounds",
          [](const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
             const std::vector<double>& u) { return check_solution_bounds(pair, mesh, alpha, u); },
          py::arg("pair"), py::arg("mesh"), py::arg("alpha"), py::arg("u"));
}
