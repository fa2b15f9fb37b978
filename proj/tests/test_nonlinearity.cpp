#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rdsteady/errors.hpp"
#include "rdsteady/nonlinearity.hpp"
#include "test_support.hpp"

using namespace rdsteady;

TEST_CASE("power-law eval matches the closed forms") {
    PowerLawPair pair(2.0, 3.0);
    CHECK(eval(pair, Component::g1, 0, 1.5) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(eval(pair, Component::g2, 1, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(eval(pair, Component::g1, 3, 7.0) == 0.0); // third derivative of x^2 vanishes
}

TEST_CASE("eval rejects bad arguments") {
    PowerLawPair pair(2.0, 3.0);
    CHECK_THROWS_AS(eval(pair, Component::g1, 0, 0.0), DomainError);
    CHECK_THROWS_AS(eval(pair, Component::g1, 0, -1.0), DomainError);
    CHECK_THROWS_AS(eval(pair, Component::g1, 4, 1.0), DomainError);
    CHECK_THROWS_AS(eval(pair, Component::g1, -1, 1.0), DomainError);
}

TEST_CASE("power-law construction guards its exponent range") {
    CHECK_THROWS_AS(PowerLawPair(1.5, 3.0), DomainError); // p < 2
    CHECK_THROWS_AS(PowerLawPair(3.0, 3.0), DomainError); // p == q
    CHECK_THROWS_AS(PowerLawPair(3.0, 2.0), DomainError); // p > q
    CHECK_NOTHROW(PowerLawPair(2.0, 2.5));                // real exponents are fine
}

TEST_CASE("eval_g is the ratio g1/g2") {
    PowerLawPair p23(2.0, 3.0);
    CHECK(eval_g(p23, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval_g(p23, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    PowerLawPair p35(3.0, 5.0);
    CHECK(eval_g(p35, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(eval_g(p23, 0.0), DomainError);
}

TEST_CASE("g_inverse closed form and numeric bracketing agree") {
    PowerLawPair p23(2.0, 3.0);
    CHECK(g_inverse(p23, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g_inverse(p23, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    PowerLawPair p24(2.0, 4.0);
    // oracle: bisection on g(x) - y with g(x) = x^{-2}
    const double expected = test::bisect_decreasing(
        [&](double x) { return eval_g(p24, x); }, 4.0, 1e-6, 1e6);
    CHECK(expected == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g_inverse(p24, 4.0) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(g_inverse(p24, 0.0), DomainError);
}

TEST_CASE("g_inverse on a non-monomial pair matches a test-side bisection") {
    auto mixed = test::make_mixed_pair();
    for (double y : {0.1, 1.0, 7.5, 120.0}) {
        const double oracle = test::bisect_decreasing(
            [&](double x) { return eval_g(*mixed, x); }, y, 1e-8, 1e8);
        const double got = g_inverse(*mixed, y, 1e-13);
        CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(std::abs(eval_g(*mixed, got) - y) <= 1e-12 * y);
    }
}

TEST_CASE("g_inverse round-trips eval_g across twelve decades") {
    PowerLawPair pair(2.0, 3.0);
    for (double x : test::log_grid(1e-3, 1e3, 31)) {
        const double y = eval_g(pair, x);
        CHECK(g_inverse(pair, y) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("growth_constant composes g_inverse with g1'") {
    PowerLawPair p23(2.0, 3.0);
    CHECK(growth_constant(p23, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(growth_constant(p23, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    PowerLawPair p34(3.0, 4.0);
    CHECK(growth_constant(p34, 1.0) == doctest::Approx(3.0).epsilon(1e-14));

    // oracle: explicit composition
    for (double alpha : {0.5, 1.0, 3.0}) {
        const double m = eval(p23, Component::g1, 1, g_inverse(p23, alpha));
        CHECK(growth_constant(p23, alpha) == doctest::Approx(m).epsilon(1e-14));
    }
}

TEST_CASE("growth_constant decreases in alpha") {
    PowerLawPair pair(2.0, 3.0);
    double prev = growth_constant(pair, 0.09);
    for (double alpha : test::log_grid(0.1, 100.0, 17)) {
        const double m = growth_constant(pair, alpha);
        CHECK(m < prev);
        prev = m;
    }
}

TEST_CASE("c_alpha closed forms for power laws") {
    PowerLawPair p23(2.0, 3.0);
    CHECK(c_alpha(p23, 2.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-13));
    CHECK(c_alpha(p23, 100.0) == doctest::Approx(std::exp(0.06)).epsilon(1e-13));
    PowerLawPair p225(2.0, 2.5);
    CHECK(c_alpha(p225, 1.0) == doctest::Approx(std::exp(5.0)).epsilon(1e-13));

    // oracle: the ratio g2(e^M x)/g2(x) is independent of x for monomials
    const double m = growth_constant(p23, 2.0);
    const double x = 0.123;
    const double ratio = eval(p23, Component::g2, 0, std::exp(m) * x) / eval(p23, Component::g2, 0, x);
    CHECK(c_alpha(p23, 2.0) == doctest::Approx(ratio).epsilon(1e-13));
}

TEST_CASE("c_alpha stays at least 1 and decreases toward 1") {
    PowerLawPair pair(2.0, 3.0);
    double prev = c_alpha(pair, 0.09);
    for (double alpha : test::log_grid(0.1, 1e4, 25)) {
        const double c = c_alpha(pair, alpha);
        CHECK(c >= 1.0);
        CHECK(c < prev);
        prev = c;
    }
    CHECK(c_alpha(pair, 1e8) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("c_alpha on a non-monomial pair dominates the sampled ratio") {
    auto mixed = test::make_mixed_pair();
    const double alpha = 2.0;
    const double c = c_alpha(*mixed, alpha);
    CHECK(c >= 1.0);
    const double m = growth_constant(*mixed, alpha);
    const double x_hi = g_inverse(*mixed, alpha);
    for (double x : test::log_grid(x_hi * 1e-6, x_hi, 40)) {
        const double ratio = eval(*mixed, Component::g2, 0, std::exp(m) * x) /
                             eval(*mixed, Component::g2, 0, x);
        CHECK(c >= ratio);
    }
}

TEST_CASE("validate_pair accepts admissible power laws") {
    PowerLawPair pair(2.0, 3.0);
    const std::vector<double> grid{0.1, 1.0, 10.0};
    const ValidationReport report = validate_pair(pair, grid);
    CHECK(report.all_pass());
    CHECK(report.failed_hypotheses().empty());
}

TEST_CASE("validate_pair flags a growing ratio") {
    // p >= q breaks the decreasing-ratio hypothesis; build the components
    // directly since the power-law constructor refuses such exponents.
    auto g1 = [](int order, double x) {
        switch (order) {
            case 0: return x * x * x;
            case 1: return 3.0 * x * x;
            case 2: return 6.0 * x;
            default: return 6.0;
        }
    };
    auto g2 = [](int order, double x) {
        switch (order) {
            case 0: return x * x;
            case 1: return 2.0 * x;
            case 2: return 2.0;
            default: return 0.0;
        }
    };
    CustomPair increasing("g-increasing", g1, g2, 3.0, 2.0);
    const std::vector<double> grid{1.0, 2.0};
    const ValidationReport report = validate_pair(increasing, grid);
    CHECK(!report.all_pass());
    const auto failed = report.failed_hypotheses();
    CHECK(std::find(failed.begin(), failed.end(), "g strictly decreasing") != failed.end());
}

TEST_CASE("validate_pair flags a constant ratio") {
    auto g = [](int order, double x) {
        switch (order) {
            case 0: return x * x;
            case 1: return 2.0 * x;
            case 2: return 2.0;
            default: return 0.0;
        }
    };
    CustomPair constant_ratio("g1-equals-g2", g, g, 2.0, 2.0);
    const std::vector<double> grid{1.0, 2.0};
    const ValidationReport report = validate_pair(constant_ratio, grid);
    CHECK(!report.all_pass());
}

TEST_CASE("validate_pair passes admissible exponents and fails p >= q") {
    const std::vector<double> grid = test::log_grid(1e-2, 1e2, 9);
    for (auto [p, q] : {std::pair{2.0, 3.0}, {2.0, 5.0}, {3.0, 4.0}, {2.5, 2.75}}) {
        PowerLawPair pair(p, q);
        CHECK(validate_pair(pair, grid).all_pass());
    }
}

TEST_CASE("validate_pair input guards") {
    PowerLawPair pair(2.0, 3.0);
    CHECK_THROWS_AS(validate_pair(pair, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(validate_pair(pair, std::vector<double>{1.0, -2.0}), DomainError);
}

TEST_CASE("pair registry round-trips") {
    register_pair("mixed-test", test::make_mixed_pair());
    auto found = find_registered_pair("mixed-test");
    REQUIRE(found != nullptr);
    CHECK(found->name() == "mixed-square-cubic-over-quartic");
    CHECK(find_registered_pair("no-such-pair") == nullptr);
}
