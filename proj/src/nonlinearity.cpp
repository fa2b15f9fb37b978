#include "rdsteady/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "rdsteady/errors.hpp"

namespace rdsteady {

namespace {

// x^e with a multiply loop for small integral exponents; pow() for the rest.
double pow_real(double x, double e) {
    const double r = std::round(e);
    if (r == e && std::abs(r) <= 32.0) {
        const int m = static_cast<int>(std::abs(r));
        double acc = 1.0;
        for (int i = 0; i < m; ++i) acc *= x;
        return r < 0.0 ? 1.0 / acc : acc;
    }
    return std::pow(x, e);
}

std::string format_scalar(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::map<std::string, std::shared_ptr<const NonlinearityPair>>& registry() {
    static std::map<std::string, std::shared_ptr<const NonlinearityPair>> reg;
    return reg;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

PowerLawPair::PowerLawPair(double p, double q) : p_(p), q_(q) {
    if (!(p >= 2.0))
        throw DomainError("power-law pair requires p >= 2, got p=" + format_scalar(p));
    if (!(p < q))
        throw DomainError("power-law pair requires p < q, got p=" + format_scalar(p) +
                          ", q=" + format_scalar(q));
    p_integral_ = std::round(p) == p;
    q_integral_ = std::round(q) == q;
}

std::string PowerLawPair::name() const {
    return "power-law(p=" + format_scalar(p_) + ", q=" + format_scalar(q_) + ")";
}

double PowerLawPair::derivative(Component which, int order, double x) const {
    const double e = which == Component::g1 ? p_ : q_;
    double coeff = 1.0;
    double expo = e;
    for (int k = 0; k < order; ++k) {
        coeff *= expo;
        expo -= 1.0;
    }
    if (coeff == 0.0) return 0.0; // integral exponent differentiated to nothing
    return coeff * pow_real(x, expo);
}

CustomPair::CustomPair(std::string name, Evaluator g1, Evaluator g2,
                       std::optional<double> g1_vanishing_order,
                       std::optional<double> g2_vanishing_order)
    : name_(std::move(name)),
      g1_(std::move(g1)),
      g2_(std::move(g2)),
      g1_order_(g1_vanishing_order),
      g2_order_(g2_vanishing_order) {}

double CustomPair::derivative(Component which, int order, double x) const {
    return which == Component::g1 ? g1_(order, x) : g2_(order, x);
}

void register_pair(const std::string& name, std::shared_ptr<const NonlinearityPair> pair) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(pair);
}

std::shared_ptr<const NonlinearityPair> find_registered_pair(const std::string& name) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    return it == registry().end() ? nullptr : it->second;
}

std::vector<std::string> registered_pair_names() {
    std::lock_guard<std::mutex> lock(registry_mutex());
    std::vector<std::string> names;
    names.reserve(registry().size());
    for (const auto& [name, pair] : registry()) names.push_back(name);
    return names;
}

std::shared_ptr<const NonlinearityPair> make_power_law(double p, double q) {
    return std::make_shared<PowerLawPair>(p, q);
}

double eval(const NonlinearityPair& pair, Component which, int order, double x) {
    if (!(x > 0.0))
        throw DomainError("eval: abscissa must be positive, got x=" + format_scalar(x));
    if (order < 0 || order > 3)
        throw DomainError("eval: unsupported derivative order " + std::to_string(order) +
                          " (supported: 0..3)");
    return pair.derivative(which, order, x);
}

double eval_g(const NonlinearityPair& pair, double x) {
    if (!(x > 0.0))
        throw DomainError("eval_g: abscissa must be positive, got x=" + format_scalar(x));
    return pair.derivative(Component::g1, 0, x) / pair.derivative(Component::g2, 0, x);
}

double eval_g_prime(const NonlinearityPair& pair, double x) {
    if (!(x > 0.0))
        throw DomainError("eval_g_prime: abscissa must be positive, got x=" + format_scalar(x));
    const double f1 = pair.derivative(Component::g1, 0, x);
    const double f2 = pair.derivative(Component::g2, 0, x);
    const double d1 = pair.derivative(Component::g1, 1, x);
    const double d2 = pair.derivative(Component::g2, 1, x);
    return (d1 * f2 - f1 * d2) / (f2 * f2);
}

double g_inverse(const NonlinearityPair& pair, double y, double rel_tol) {
    if (!(y > 0.0))
        throw DomainError("g_inverse: target must be positive, got y=" + format_scalar(y));
    if (auto pl = pair.power_law())
        return std::pow(y, 1.0 / (pl->p - pl->q));

    // g is strictly decreasing, so g - y changes sign from + to - once.
    double lo = 1.0;
    int budget = 0;
    while (eval_g(pair, lo) <= y) {
        lo *= 0.5;
        if (++budget > 200)
            throw BracketError("g_inverse: no sign change found below x=" + format_scalar(lo) +
                               " for y=" + format_scalar(y) + "; g does not look surjective");
    }
    double hi = std::max(1.0, lo * 2.0);
    budget = 0;
    while (eval_g(pair, hi) > y) {
        hi *= 2.0;
        if (++budget > 200)
            throw BracketError("g_inverse: no sign change found above x=" + format_scalar(hi) +
                               " for y=" + format_scalar(y) + "; g does not look surjective");
    }

    // Bisect until the bracket is tight, then polish with Newton.
    for (int it = 0; it < 200 && (hi - lo) > 1e-3 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval_g(pair, mid) > y ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double f = eval_g(pair, x) - y;
        if (std::abs(f) <= rel_tol * y) return x;
        (f > 0.0 ? lo : hi) = x;
        const double d = eval_g_prime(pair, x);
        double xn = x - f / d;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return xn;
        x = xn;
    }
    return x;
}

double growth_constant(const NonlinearityPair& pair, double alpha) {
    if (!(alpha > 0.0))
        throw DomainError("growth_constant: alpha must be positive, got " + format_scalar(alpha));
    return eval(pair, Component::g1, 1, g_inverse(pair, alpha));
}

double c_alpha(const NonlinearityPair& pair, double alpha) {
    if (!(alpha > 0.0))
        throw DomainError("c_alpha: alpha must be positive, got " + format_scalar(alpha));
    const double m = growth_constant(pair, alpha);
    if (auto pl = pair.power_law())
        return std::exp(pl->q * m); // the ratio g2(e^M x)/g2(x) is constant for monomials

    // Sampled supremum of the ratio over a log grid on (0, g^{-1}(alpha)].
    // Near the origin the ratio tends to e^{kM}, k the vanishing order of g2.
    const double x_hi = g_inverse(pair, alpha);
    const double scale = std::exp(m);
    const int samples = 256;
    double worst = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double x = x_hi * std::pow(1e-8, 1.0 - t);
        const double ratio = pair.derivative(Component::g2, 0, scale * x) /
                             pair.derivative(Component::g2, 0, x);
        worst = std::max(worst, ratio);
    }
    if (auto k = pair.vanishing_order(Component::g2))
        worst = std::max(worst, std::exp(*k * m));
    return 1.05 * worst;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.pass; });
}

std::vector<std::string> ValidationReport::failed_hypotheses() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.pass && std::find(out.begin(), out.end(), c.hypothesis) == out.end())
            out.push_back(c.hypothesis);
    return out;
}

ValidationReport validate_pair(const NonlinearityPair& pair, std::span<const double> grid) {
    if (grid.empty())
        throw DomainError("validate_pair: sample grid must be nonempty");
    for (double x : grid)
        if (!(x > 0.0))
            throw DomainError("validate_pair: grid abscissae must be positive, got " +
                              format_scalar(x));

    std::vector<double> xs(grid.begin(), grid.end());
    std::sort(xs.begin(), xs.end());

    ValidationReport report;
    auto push = [&](const std::string& name, double x, double value, bool pass) {
        report.checks.push_back({name, x, value, pass});
    };

    // Vanishing at the origin, evaluated as a limit from the right.
    const double x0 = 1e-12;
    const double v1 = pair.derivative(Component::g1, 0, x0);
    const double v2 = pair.derivative(Component::g2, 0, x0);
    push("g1(0+) = 0", x0, v1, std::abs(v1) <= 1e-12);
    push("g2(0+) = 0", x0, v2, std::abs(v2) <= 1e-12);

    for (double x : xs) {
        push("g1' > 0", x, pair.derivative(Component::g1, 1, x), pair.derivative(Component::g1, 1, x) > 0.0);
        push("g1'' > 0", x, pair.derivative(Component::g1, 2, x), pair.derivative(Component::g1, 2, x) > 0.0);
        push("g1''' >= 0", x, pair.derivative(Component::g1, 3, x), pair.derivative(Component::g1, 3, x) >= 0.0);
        push("g2' > 0", x, pair.derivative(Component::g2, 1, x), pair.derivative(Component::g2, 1, x) > 0.0);
        push("g2'' > 0", x, pair.derivative(Component::g2, 2, x), pair.derivative(Component::g2, 2, x) > 0.0);
        push("g2''' >= 0", x, pair.derivative(Component::g2, 3, x), pair.derivative(Component::g2, 3, x) >= 0.0);
    }

    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        const double ga = eval_g(pair, xs[i]);
        const double gb = eval_g(pair, xs[i + 1]);
        push("g strictly decreasing", xs[i], gb - ga, gb < ga);
    }

    return report;
}

std::vector<double> default_validation_grid() {
    std::vector<double> grid(25);
    for (size_t i = 0; i < grid.size(); ++i)
        grid[i] = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / (grid.size() - 1));
    return grid;
}

} // namespace rdsteady
