#include "rdsteady/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdsteady/errors.hpp"

namespace rdsteady {

namespace {

constexpr double kOverflowGuard = 1e300;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double g1v(const NonlinearityPair& p, double x) { return p.derivative(Component::g1, 0, x); }
double g1d(const NonlinearityPair& p, double x) { return p.derivative(Component::g1, 1, x); }
double g2v(const NonlinearityPair& p, double x) { return p.derivative(Component::g2, 0, x); }
double g2d(const NonlinearityPair& p, double x) { return p.derivative(Component::g2, 1, x); }

} // namespace

MeshConfig::MeshConfig(int nodes) : n(nodes), h(0.0) {
    if (nodes < 2)
        throw DomainError("mesh requires n >= 2 nodes, got n=" + std::to_string(nodes));
    h = 1.0 / (nodes - 1);
}

ShootingTrajectory shoot(const NonlinearityPair& pair, const MeshConfig& mesh, double u1) {
    if (!(u1 > 0.0))
        throw DomainError("shoot: u1 must be positive, got u1=" + fmt(u1));

    const int n = mesh.n;
    const double h = mesh.h;
    const double h2 = h * h;

    ShootingTrajectory t;
    t.u1 = u1;
    t.u.resize(n);
    t.u_prime.resize(n);

    auto guard = [&](double value, int node) {
        if (!(std::abs(value) < kOverflowGuard))
            throw OverflowError("shoot: trajectory overflow at node " + std::to_string(node) +
                                " for u1=" + fmt(u1) + "; u1 is far above the admissible range");
    };

    // The three-term recursion is advanced in first-difference form,
    //   d_k = d_{k-1} + h^2 g1(U_k),  U_{k+1} = U_k + d_k,
    // which is the same recurrence with the cancellation 2U_k - U_{k-1}
    // removed; d stays a sum of positive terms. The running trapezoid sums
    // feed A through the identity (U_n - U_{n-1})/h = h (g1(u1)/2 + ...).
    double d = 0.5 * h2 * g1v(pair, u1);
    double d_prime = 0.5 * h2 * g1d(pair, u1);
    double trap = 0.5 * g1v(pair, u1);
    double trap_prime = 0.5 * g1d(pair, u1);

    t.u[0] = u1;
    t.u_prime[0] = 1.0;
    t.u[1] = u1 + d;
    t.u_prime[1] = 1.0 + d_prime;
    guard(t.u[1], 2);

    for (int k = 1; k + 1 < n; ++k) {
        const double gk = g1v(pair, t.u[k]);
        const double gpk = g1d(pair, t.u[k]) * t.u_prime[k];
        trap += gk;
        trap_prime += gpk;
        d += h2 * gk;
        d_prime += h2 * gpk;
        t.u[k + 1] = t.u[k] + d;
        t.u_prime[k + 1] = t.u_prime[k] + d_prime;
        guard(t.u[k + 1], k + 2);
    }

    const double un = t.u[n - 1];
    const double upn = t.u_prime[n - 1];

    const double den = g2v(pair, un);
    t.a = h * (trap + 0.5 * g1v(pair, un)) / den;
    t.a_prime = h * (trap_prime + 0.5 * g1d(pair, un) * upn) / den -
                t.a * g2d(pair, un) * upn / den;

    if (!std::isfinite(t.a) || !std::isfinite(t.a_prime))
        throw OverflowError("shoot: boundary value A(u1) overflowed for u1=" + fmt(u1));
    return t;
}

double minimal_equation(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
                        double u1) {
    if (!(alpha > 0.0))
        throw DomainError("minimal_equation: alpha must be positive, got " + fmt(alpha));
    const ShootingTrajectory t = shoot(pair, mesh, u1);
    const double un = t.u[mesh.n - 1];
    const double unm1 = t.u[mesh.n - 2];
    return (unm1 - un) / mesh.h - 0.5 * mesh.h * g1v(pair, un) + alpha * g2v(pair, un);
}

namespace {

// Find the u1 with U_n(u1) = target; U_n is strictly increasing in u1 and
// U_n(u1) > u1, so target itself is an upper endpoint. A trajectory that
// overflows counts as above the target, which monotonicity justifies.
double solve_un_equals(const NonlinearityPair& pair, const MeshConfig& mesh, double target,
                       double alpha_for_msg) {
    auto above = [&](double u1) {
        try {
            return shoot(pair, mesh, u1).u.back() > target;
        } catch (const OverflowError&) {
            return true;
        }
    };

    double hi = target;
    double lo = target;
    int budget = 0;
    while (above(lo)) {
        lo *= 0.5;
        if (++budget > 200)
            throw BracketError("bracket_u1: expansion budget exhausted below u1=" + fmt(lo) +
                               " at alpha=" + fmt(alpha_for_msg));
    }
    for (int it = 0; it < 200; ++it) {
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

U1Bracket bracket_u1(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha) {
    if (!(alpha > 0.0))
        throw DomainError("bracket_u1: alpha must be positive, got " + fmt(alpha));
    const double target_star = g_inverse(pair, alpha);
    const double target_star_star = g_inverse(pair, 2.0 * alpha / mesh.h);
    U1Bracket b;
    b.u1_star = solve_un_equals(pair, mesh, target_star, alpha);
    b.u1_star_star = solve_un_equals(pair, mesh, target_star_star, alpha);
    return b;
}

double solve_u1_oracle(const NonlinearityPair& pair, const MeshConfig& mesh, double alpha,
                       double tol) {
    if (!(alpha > 0.0))
        throw DomainError("solve_u1_oracle: alpha must be positive, got " + fmt(alpha));
    if (!(tol > 0.0))
        throw DomainError("solve_u1_oracle: tol must be positive, got " + fmt(tol));

    const U1Bracket bracket = bracket_u1(pair, mesh, alpha);
    double lo = bracket.u1_star_star; // A(lo) >= alpha
    double hi = bracket.u1_star;      // A(hi) <= alpha
    if (lo > hi) std::swap(lo, hi);

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const ShootingTrajectory t = shoot(pair, mesh, x);
        const double f = t.a - alpha;
        if (std::abs(f) <= tol * alpha) return x;
        (f > 0.0 ? lo : hi) = x; // A is strictly decreasing
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
        double xn = x - f / t.a_prime;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi); // reject steps that exit the bracket
        x = xn;
    }
    throw ConvergenceError("solve_u1_oracle: no convergence at alpha=" + fmt(alpha) +
                           ", last u1=" + fmt(x) + "; hypothesis violation suspected");
}

SolutionBounds solution_bounds(const NonlinearityPair& pair, double alpha) {
    if (!(alpha > 0.0))
        throw DomainError("solution_bounds: alpha must be positive, got " + fmt(alpha));
    SolutionBounds b;
    b.alpha = alpha;
    b.growth = growth_constant(pair, alpha);
    b.un_upper = g_inverse(pair, alpha);
    b.u1_lower = g_inverse(pair, alpha * c_alpha(pair, alpha));
    return b;
}

bool RatioMonotonicityReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const RatioProbeRow& r) { return r.pass; });
}

RatioMonotonicityReport ratio_monotonicity_probe(const NonlinearityPair& pair,
                                                 const MeshConfig& mesh,
                                                 std::span<const double> u1_grid) {
    for (size_t i = 0; i + 1 < u1_grid.size(); ++i)
        if (!(u1_grid[i] < u1_grid[i + 1]))
            throw DomainError("ratio_monotonicity_probe: u1 grid must be strictly increasing");
    for (double u1 : u1_grid)
        if (!(u1 > 0.0))
            throw DomainError("ratio_monotonicity_probe: u1 grid must be positive");

    RatioMonotonicityReport report;
    if (u1_grid.size() < 2) return report; // vacuous

    const int n = mesh.n;
    std::vector<ShootingTrajectory> trajs;
    trajs.reserve(u1_grid.size());
    for (double u1 : u1_grid) trajs.push_back(shoot(pair, mesh, u1));

    struct Property {
        std::string name;
        int direction; // +1 increasing, -1 decreasing, +2 nondecreasing
        std::function<double(const ShootingTrajectory&, int)> value; // k is zero-based node
    };

    auto div_diff = [&](const ShootingTrajectory& t, int j, int i) {
        return (g1v(pair, t.u[j]) - g1v(pair, t.u[i])) / (t.u[j] - t.u[i]);
    };

    const std::vector<Property> properties = {
        {"(U_k - U_{k-1})/g1(U_k) decreasing", -1,
         [&](const ShootingTrajectory& t, int k) { return (t.u[k] - t.u[k - 1]) / g1v(pair, t.u[k]); }},
        {"(U_k - U_1)/g1(U_k) decreasing", -1,
         [&](const ShootingTrajectory& t, int k) { return (t.u[k] - t.u[0]) / g1v(pair, t.u[k]); }},
        {"(U_k - U_{k-1})/(U_k - U_1) nondecreasing", +2,
         [&](const ShootingTrajectory& t, int k) { return (t.u[k] - t.u[k - 1]) / (t.u[k] - t.u[0]); }},
        {"g1(U_k)/g1(U_1) increasing", +1,
         [&](const ShootingTrajectory& t, int k) { return g1v(pair, t.u[k]) / g1v(pair, t.u[0]); }},
        {"divided difference L_{k,k-1} increasing", +1,
         [&](const ShootingTrajectory& t, int k) { return div_diff(t, k, k - 1); }},
        {"divided difference L_{k,1} increasing", +1,
         [&](const ShootingTrajectory& t, int k) { return div_diff(t, k, 0); }},
    };

    for (const auto& prop : properties) {
        for (int k = 1; k < n; ++k) {
            bool pass = true;
            double worst = 0.0;
            for (size_t i = 0; i + 1 < trajs.size(); ++i) {
                const double va = prop.value(trajs[i], k);
                const double vb = prop.value(trajs[i + 1], k);
                const double scale = std::max({std::abs(va), std::abs(vb), 1e-300});
                // margin > 0 means the required ordering holds; one part in
                // 1e12 of slack absorbs rounding, and lets the identically
                // constant cases of the nondecreasing property through
                const double margin =
                    prop.direction == -1 ? (va - vb) / scale : (vb - va) / scale;
                if (margin < -1e-12) pass = false;
                worst = std::min(worst, margin);
            }
            report.rows.push_back({prop.name, k + 1, pass, worst});
        }
    }
    return report;
}

} // namespace rdsteady
