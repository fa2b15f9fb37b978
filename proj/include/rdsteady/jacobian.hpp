#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"

namespace rdsteady {

/// Whether the corner entry of the Jacobian carries h*alpha*g2'(U_n) or
/// h*(1/beta)*g2'(U_n). The two coincide under beta = 1/alpha.
enum class ParamForm { alpha, beta };

/// Symmetric tridiagonal Jacobian of the stationary system with constant
/// off-diagonal -1 and diagonal
///
///   Gamma_1 = 1 + (h^2/2) g1'(U_1),
///   Gamma_i = 2 + h^2 g1'(U_i),                 2 <= i <= n-1,
///   Gamma_n = 1 + (h^2/2) g1'(U_n) - h A g2'(U_n).
///
/// Values are immutable after assembly; solves allocate private
/// workspaces, so concurrent solves with one matrix are safe.
struct TridiagonalMatrix {
    std::vector<double> gamma;

    int n() const { return static_cast<int>(gamma.size()); }
    double inf_norm() const;
};

TridiagonalMatrix assemble(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form,
                           double param, std::span<const double> u);

/// Allocation-free variant for hot loops: writes the diagonal into `out`.
void assemble(const NonlinearityPair& pair, const MeshConfig& mesh, ParamForm form, double param,
              std::span<const double> u, TridiagonalMatrix& out);

/// Solve J x = rhs by tridiagonal LU with partial pivoting (adjacent-row
/// swaps, one extra superdiagonal of fill), O(n). Throws
/// SingularMatrixError when a pivot magnitude drops below 1e-300.
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& J, std::span<const double> rhs);

/// Elimination scratch for the in-place solve.
struct TridiagonalWorkspace {
    std::vector<double> diag;
    std::vector<double> sup1;
    std::vector<double> sup2;
};

/// In-place variant: x carries the right-hand side on entry and the
/// solution on return; ws is resized as needed and reusable across solves
/// (each solve still gets private scratch, so concurrent solves need one
/// workspace per thread).
void solve_tridiagonal(const TridiagonalMatrix& J, std::vector<double>& x,
                       TridiagonalWorkspace& ws);

/// det J via the principal-minor recurrence D_k = Gamma_k D_{k-1} - D_{k-2},
/// D_0 = 1, D_{-1} = 0. minors[k-1] holds D_k; value = D_n. Throws
/// OverflowError when |D_k| exceeds 1e300 (a log-scaled variant would be
/// needed at that point).
struct DeterminantResult {
    double value;
    std::vector<double> minors;
};

DeterminantResult determinant(const TridiagonalMatrix& J);

/// Implicit inverse of J at a solved point, from the bidiagonal-triangular
/// factorization in terms of the derivative sequence U_k'(u1):
///
///   (J^{-1})_{ij} = sum_{k=max(i,j)}^{n-1} U_i' U_j'/(U_k' U_{k+1}')
///                   + U_i' U_j'/(U_n' det J)     (one-based indices).
///
/// entry() is O(1) after construction; apply() multiplies a vector in O(n).
class FactorizedInverse {
public:
    FactorizedInverse(std::vector<double> u_prime, double det);

    double entry(int i, int j) const; // zero-based
    std::vector<double> apply(std::span<const double> x) const;
    int n() const { return static_cast<int>(up_.size()); }

private:
    std::vector<double> up_;
    std::vector<double> suffix_; // suffix_[k] = sum_{m>=k} 1/(up_m up_{m+1}) + 1/(up_{n-1} det)
    double det_;
};

/// One sample of the homotopy path sensitivity at parameter alpha:
/// ||dphi/dalpha||_inf = U_n'(u1(alpha)) / |A'(u1(alpha))|, and the same
/// quantity in the beta = 1/alpha parametrization,
/// ||dphi/dbeta||_inf = alpha^2 ||dphi/dalpha||_inf.
struct ConditionSample {
    double alpha;
    double u1;
    double phi_prime_inf;      // d/dalpha
    double phi_prime_inf_beta; // d/dbeta
};

ConditionSample condition_phi_prime(const NonlinearityPair& pair, const MeshConfig& mesh,
                                    double alpha, double oracle_tol = 1e-12);

/// Residuals of the determinant identities at (alpha, u1):
///   h g2(U_n) A'(u1) = det J                        (residual_det)
///   det J * U_k' = h g2(U_n) A'(u1) det Delta_{k-1} (residual_cramer)
///   U_k' = det Delta_{k-1}                          (residual_minor)
/// all relative. They hold only at solutions; solution_like flags whether
/// the input looks like one. When u1_override is absent the solved u1 at
/// alpha is used.
struct CramerReport {
    double alpha;
    double u1;
    double residual_det;
    double residual_cramer;
    double residual_minor;
    bool solution_like;
};

CramerReport cramer_identity_check(const NonlinearityPair& pair, const MeshConfig& mesh,
                                   double alpha,
                                   std::optional<double> u1_override = std::nullopt);

} // namespace rdsteady
