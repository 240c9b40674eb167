#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "telecom/errors.hpp"
#include "telecom/quadrature.hpp"

using namespace telecom;

TEST_CASE("polynomials are exact") {
    auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental") {
    auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("endpoint singularity x^-1/2") {
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    opts.max_panels = 20000;
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("oscillatory integrand") {
    auto r = integrate([](double x) { return std::sin(50.0 * x); }, 0.0, 3.0);
    const double exact = (1.0 - std::cos(150.0)) / 50.0;
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("semi-infinite exponential tail") {
    const double v = integrate_to_infinity([](double x) { return std::exp(-x); }, 2.0);
    CHECK(v == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("semi-infinite power tail") {
    const double v =
        integrate_to_infinity([](double x) { return std::pow(x, -2.5); }, 1.0);
    CHECK(v == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
}

TEST_CASE("failure reported, not invented") {
    QuadratureOptions opts;
    opts.max_panels = 8;
    auto r = integrate([](double x) { return std::sin(400.0 * x) / (1e-6 + x * x); },
                       0.0, 10.0, opts);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(integrate_or_throw(
                        [](double x) { return std::sin(400.0 * x) / (1e-6 + x * x); },
                        0.0, 10.0, opts),
                    IntegrationError);
}
