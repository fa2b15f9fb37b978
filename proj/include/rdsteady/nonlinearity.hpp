#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdsteady {

/// Which component of the pair an evaluation refers to.
enum class Component { g1, g2 };

struct PowerLawExponents {
    double p;
    double q;
};

/// An admissible nonlinearity pair (g1, g2).
///
/// Hypotheses: g1(0) = g2(0) = 0, and on (0, inf) each component has
/// positive first and second derivatives and a nonnegative third
/// derivative; the ratio g = g1/g2 is strictly decreasing and maps
/// (0, inf) onto (0, inf). validate_pair() checks the sign conditions on
/// a sample grid; surjectivity of g is only probed empirically by
/// bracket expansion, since it is not checkable in finite arithmetic.
///
/// Instances are immutable after construction and safe to share between
/// threads; every free operation below is a pure function of its inputs.
class NonlinearityPair {
public:
    virtual ~NonlinearityPair() = default;

    virtual std::string name() const = 0;

    /// Derivative of order 0..3 of one component at x > 0. Arguments are
    /// already checked when called through eval().
    virtual double derivative(Component which, int order, double x) const = 0;

    /// Exponents when the pair is the built-in monomial family x^p, x^q.
    virtual std::optional<PowerLawExponents> power_law() const { return std::nullopt; }

    /// Vanishing order of a component at the origin, when known.
    /// For g2 this is the k with g2(e^M x)/g2(x) -> e^{kM} as x -> 0+;
    /// we identify k with the multiplicity of the root of g2 at 0, which
    /// c_alpha() uses to anchor its sampled supremum near the origin.
    virtual std::optional<double> vanishing_order(Component which) const {
        (void)which;
        return std::nullopt;
    }
};

/// g1(x) = x^p, g2(x) = x^q with 2 <= p < q. Real exponents are accepted;
/// p >= 2 keeps g1''' >= 0 on (0, inf), p < q makes g = x^{p-q} strictly
/// decreasing and surjective.
class PowerLawPair final : public NonlinearityPair {
public:
    PowerLawPair(double p, double q);

    std::string name() const override;
    double derivative(Component which, int order, double x) const override;
    std::optional<PowerLawExponents> power_law() const override { return PowerLawExponents{p_, q_}; }
    std::optional<double> vanishing_order(Component which) const override {
        return which == Component::g1 ? p_ : q_;
    }

    double p() const { return p_; }
    double q() const { return q_; }

private:
    double p_;
    double q_;
    bool p_integral_;
    bool q_integral_;
};

/// A pair backed by caller-supplied evaluators, the extension point for
/// named nonlinearities registered in code. The evaluator receives the
/// derivative order (0..3) and a positive abscissa.
class CustomPair final : public NonlinearityPair {
public:
    using Evaluator = std::function<double(int order, double x)>;

    CustomPair(std::string name, Evaluator g1, Evaluator g2,
               std::optional<double> g1_vanishing_order = std::nullopt,
               std::optional<double> g2_vanishing_order = std::nullopt);

    std::string name() const override { return name_; }
    double derivative(Component which, int order, double x) const override;
    std::optional<double> vanishing_order(Component which) const override {
        return which == Component::g1 ? g1_order_ : g2_order_;
    }

private:
    std::string name_;
    Evaluator g1_;
    Evaluator g2_;
    std::optional<double> g1_order_;
    std::optional<double> g2_order_;
};

/// Registry of named pairs. `find_registered_pair` returns nullptr when the
/// name is unknown.
void register_pair(const std::string& name, std::shared_ptr<const NonlinearityPair> pair);
std::shared_ptr<const NonlinearityPair> find_registered_pair(const std::string& name);
std::vector<std::string> registered_pair_names();

std::shared_ptr<const NonlinearityPair> make_power_law(double p, double q);

/// Uniform accessor with argument guards. Throws DomainError for x <= 0 or
/// order outside 0..3.
double eval(const NonlinearityPair& pair, Component which, int order, double x);

/// g(x) = g1(x)/g2(x). Throws DomainError for x <= 0.
double eval_g(const NonlinearityPair& pair, double x);

/// g'(x) = (g1' g2 - g1 g2')/g2^2; negative for admissible pairs.
double eval_g_prime(const NonlinearityPair& pair, double x);

/// Solve g(x) = y for x > 0. Closed form for power laws; otherwise
/// geometric bracket expansion followed by bisection and a Newton polish,
/// to |g(x) - y| <= rel_tol * y. Throws BracketError when no sign change is
/// found within the expansion budget (a non-surjective g).
double g_inverse(const NonlinearityPair& pair, double y, double rel_tol = 1e-13);

/// M(alpha) = g1'(g^{-1}(alpha)), the per-unit-length growth rate that
/// bounds u_n/u_1 at solutions by e^M.
double growth_constant(const NonlinearityPair& pair, double alpha);

/// C(alpha) >= 1 bounding g2(e^M x)/g2(x) over 0 < x <= g^{-1}(alpha).
/// Exactly e^{q M} for the power-law family; for general pairs the sampled
/// supremum over a logarithmic grid, inflated by 1.05.
double c_alpha(const NonlinearityPair& pair, double alpha);

struct HypothesisCheck {
    std::string hypothesis;
    double x;
    double value;
    bool pass;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const;
    std::vector<std::string> failed_hypotheses() const;
};

/// Evaluate the admissibility hypotheses on a grid of positive abscissae:
/// sign conditions on derivatives of order 1..3 of both components,
/// vanishing at the origin (limit from the right, tolerance 1e-12), and
/// strict decrease of g between consecutive grid points. Failures are
/// reported, never thrown.
ValidationReport validate_pair(const NonlinearityPair& pair, std::span<const double> grid);

/// 25 log-spaced points on [1e-3, 1e3].
std::vector<double> default_validation_grid();

} // namespace rdsteady
