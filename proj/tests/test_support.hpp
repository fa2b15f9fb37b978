#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "rdsteady/nonlinearity.hpp"

namespace rdsteady::test {

inline std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return out;
}

inline double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double inf_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Independent scalar bisection on a decreasing function, used as the oracle
// for the library's bracketing inverses.
inline double bisect_decreasing(const std::function<double(double)>& f, double target, double lo,
                                double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Dense Gaussian elimination with partial pivoting; the test-side oracle for
// the banded solver and the factorized inverse. Row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return x;
}

// A non-monomial admissible pair for exercising the generic code paths:
// g1(x) = x^2 + x^3, g2(x) = x^4. The ratio g = (1 + x)/x^2 is strictly
// decreasing and onto (0, inf).
inline std::shared_ptr<const NonlinearityPair> make_mixed_pair() {
    auto g1 = [](int order, double x) {
        switch (order) {
            case 0: return x * x + x * x * x;
            case 1: return 2.0 * x + 3.0 * x * x;
            case 2: return 2.0 + 6.0 * x;
            default: return 6.0;
        }
    };
    auto g2 = [](int order, double x) {
        switch (order) {
            case 0: return x * x * x * x;
            case 1: return 4.0 * x * x * x;
            case 2: return 12.0 * x * x;
            default: return 24.0 * x;
        }
    };
    return std::make_shared<CustomPair>("mixed-square-cubic-over-quartic", g1, g2, 2.0, 4.0);
}

} // namespace rdsteady::test
