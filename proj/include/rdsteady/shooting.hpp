#pragma once

#include <span>
#include <string>
#include <vector>

#include "rdsteady/nonlinearity.hpp"

namespace rdsteady {

/// Uniform mesh on [0, 1] with n nodes, h = 1/(n-1).
struct MeshConfig {
    int n;
    double h;

    explicit MeshConfig(int nodes);
};

/// The forward recursion from a trial boundary value u1 > 0:
///
///   U_1 = u1,
///   U_2 = u1 + (h^2/2) g1(u1),
///   U_{k+1} = 2 U_k - U_{k-1} + h^2 g1(U_k),        2 <= k <= n-1,
///   A(u1) = ((U_n - U_{n-1})/h + (h/2) g1(U_n)) / g2(U_n),
///
/// together with its derivative with respect to u1 (U_1' = 1). Storage is
/// zero-based: u[k-1] holds U_k.
///
/// At any u1 > 0 the sequence u is strictly increasing, u_prime is
/// strictly increasing with u_prime[k] > 1 for k >= 1, and a > 0.
struct ShootingTrajectory {
    double u1 = 0.0;
    std::vector<double> u;
    std::vector<double> u_prime;
    double a = 0.0;       // A(u1)
    double a_prime = 0.0; // A'(u1), negative for admissible pairs

    int n() const { return static_cast<int>(u.size()); }
};

/// h-independent enclosure of the positive solution at parameter alpha:
/// u1 > g^{-1}(alpha C(alpha)), u_n < g^{-1}(alpha), u_n < e^M u1.
struct SolutionBounds {
    double alpha = 0.0;
    double u1_lower = 0.0;
    double un_upper = 0.0;
    double growth = 0.0; // M = g1'(g^{-1}(alpha))
};

/// Run the recursion. Throws OverflowError as soon as any trajectory value
/// exceeds 1e300 or stops being finite; the recursion diverges
/// superlinearly above the admissible u1 range and has to fail loudly.
ShootingTrajectory shoot(const NonlinearityPair& pair, const MeshConfig& mesh, double u1);

/// P(alpha, u1) = (U_{n-1} - U_n)/h - (h/2) g1(U_n) + alpha g2(U_n).
/// Positive roots in u1 correspond one-to-one with positive solutions of
/// the stationary system at parameter alpha.
double minimal_equation(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
                        double u1);

/// u1_star solves g(U_n(u1)) = alpha  (so P(alpha, u1_star) >= 0) and
/// u1_star_star solves g(U_n(u1)) = 2 alpha/h (so P <= 0). Since g o U_n is
/// strictly decreasing, u1_star > u1_star_star and the root of P lies in
/// between.
struct U1Bracket {
    double u1_star;
    double u1_star_star;
};

U1Bracket bracket_u1(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha);

/// The unique root of P(alpha, .) inside [u1_star_star, u1_star], found by
/// bisection-safeguarded Newton on A(u1) - alpha using A'. Stops when
/// |A(u1) - alpha| <= tol * alpha or the bracket collapses to rounding
/// width; the bracket never degenerates because A is strictly monotone.
double solve_u1_oracle(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
                       double tol);

/// The three h-independent bound quantities at parameter alpha.
SolutionBounds solution_bounds(const NonlinearityPair& pair, double alpha);

struct RatioProbeRow {
    std::string property;
    int k;                  // 2..n, one-based node index
    bool pass;
    double worst_violation; // most negative margin seen over the grid
};

struct RatioMonotonicityReport {
    std::vector<RatioProbeRow> rows;
    bool all_pass() const;
};

/// Empirical check of the growth ratios along the recursion between
/// consecutive u1 grid points: (U_k - U_{k-1})/g1(U_k) and
/// (U_k - U_1)/g1(U_k) decreasing, (U_k - U_{k-1})/(U_k - U_1)
/// nondecreasing, g1(U_k)/g1(U_1) increasing, and the divided differences
/// (g1(U_j) - g1(U_i))/(U_j - U_i) increasing for (i,j) = (k-1,k) and
/// (1,k). A single-point grid passes vacuously.
RatioMonotonicityReport ratio_monotonicity_probe(const NonlinearityPair& pair,
                                                 const MeshConfig& mesh,
                                                 std::span<const double> u1_grid);

} // namespace rdsteady
