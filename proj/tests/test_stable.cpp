#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "telecom/quadrature.hpp"
#include "telecom/stable.hpp"

using namespace telecom;

namespace {

constexpr double kPi = 3.14159265358979323846;

// High-precision oracle for the characteristic exponent
//   I(theta) = int_0^inf (e^(i theta u) - 1 - i theta u) u^(-gamma-1) du,
// theta > 0: adaptive quadrature on [0, A] plus analytic tails. The
// oscillatory tail of e^(i theta u) u^(-p) is unrolled by parts four times.
std::complex<double> exponent_oracle(double gamma, double theta) {
    const double p = gamma + 1.0;
    const double a = 600.0;
    const std::complex<double> i_unit(0.0, 1.0);

    // Cancellation-free cos(x) - 1 and sin(x) - x.
    auto re_g = [](double x) {
        const double s = std::sin(0.5 * x);
        return -2.0 * s * s;
    };
    auto im_g = [](double x) {
        if (std::abs(x) < 1e-2) {
            const double x2 = x * x;
            return -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
        }
        return std::sin(x) - x;
    };

    // Head: split by accumulated phase so each panel is mildly oscillatory.
    const int segments = std::max(16, static_cast<int>(theta * a / kPi));
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    std::complex<double> head(0.0, 0.0);
    for (int s = 0; s < segments; ++s) {
        const double lo = a * s / segments;
        const double hi = a * (s + 1) / segments;
        const double re = integrate_or_throw(
            [&](double u) { return re_g(theta * u) * std::pow(u, -p); }, lo, hi, opts);
        const double im = integrate_or_throw(
            [&](double u) { return im_g(theta * u) * std::pow(u, -p); }, lo, hi, opts);
        head += std::complex<double>(re, im);
    }

    // Tail of the constant and linear parts, analytic.
    std::complex<double> tail = -std::pow(a, -gamma) / gamma * std::complex<double>(1.0, 0.0);
    tail -= i_unit * theta * std::pow(a, 1.0 - gamma) / (gamma - 1.0);

    // Tail of e^(i theta u) u^(-p): four integrations by parts.
    const std::complex<double> d = 1.0 / (i_unit * theta);
    const std::complex<double> phase = std::exp(i_unit * (theta * a));
    std::complex<double> osc(0.0, 0.0);
    std::complex<double> coeff(1.0, 0.0);
    double power = p;
    for (int k = 0; k < 4; ++k) {
        osc += coeff * (-d * phase * std::pow(a, -power));
        coeff *= power * d;
        power += 1.0;
    }
    // |remaining| <= |coeff| * a^(1-power) / (power-1), far below 1e-12 here.
    return head + tail + osc;
}

}  // namespace

TEST_CASE("cf at zero and conjugate symmetry") {
    StableSpec spec(1.0, 1.5);
    CHECK(stable_cf(spec, 0.0) == std::complex<double>(1.0, 0.0));
    for (double theta : {0.3, 1.0, 4.2}) {
        const auto plus = stable_cf(spec, theta);
        const auto minus = stable_cf(spec, -theta);
        CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-15));
        CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-15));
        CHECK(std::abs(plus) <= 1.0);
    }
}

TEST_CASE("cf magnitude at theta = 1") {
    StableSpec spec(1.0, 1.5);
    // Gamma(-1.5) cos(3 pi / 4) = -(4 sqrt(pi)/3)(sqrt(2)/2).
    const double expected = 4.0 * std::sqrt(kPi) / 3.0 * std::sqrt(2.0) / 2.0;
    CHECK(spec.decay_coefficient() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(stable_cf(spec, 1.0)) ==
          doctest::Approx(std::exp(-expected)).epsilon(1e-13));
    // Independent value from the oscillatory quadrature oracle.
    const auto oracle = exponent_oracle(1.5, 1.0);
    CHECK(std::abs(stable_cf(spec, 1.0)) ==
          doctest::Approx(std::exp(oracle.real())).epsilon(1e-10));
}

TEST_CASE("closed-form cf equals the integral definition on a grid") {
    StableSpec spec(1.3, 1.5);
    for (int k = 1; k <= 10; ++k) {
        const double theta = k;
        const auto oracle = exponent_oracle(spec.gamma, theta);
        const double mag = std::pow(theta, spec.gamma);
        const std::complex<double> closed(-spec.decay_coefficient() * mag,
                                          -spec.twist_coefficient() * mag);
        CHECK(std::abs(closed - spec.q * oracle) < 1e-8 * std::max(1.0, std::abs(closed)));
    }
    StableSpec spec2(1.0, 1.7);
    const auto oracle = exponent_oracle(1.7, 2.5);
    const double mag2 = std::pow(2.5, 1.7);
    const std::complex<double> closed2(-spec2.decay_coefficient() * mag2,
                                       -spec2.twist_coefficient() * mag2);
    CHECK(std::abs(closed2 - oracle) < 1e-8);
}

TEST_CASE("stability under convolution powers") {
    StableSpec one(1.0, 1.5);
    for (int n : {2, 5}) {
        StableSpec many(static_cast<double>(n), 1.5);
        for (double theta : {0.4, 1.7}) {
            const auto lhs = stable_cf(many, theta);
            const auto rhs = std::pow(stable_cf(one, theta), n);
            CHECK(std::abs(lhs - rhs) < 1e-14);
        }
    }
}

TEST_CASE("tail asymptotic") {
    StableSpec spec(1.0, 1.5);
    CHECK(stable_tail_asymptotic(spec, 100.0) ==
          doctest::Approx(1.0 / 1.5 * 1e-3).epsilon(1e-13));
    CHECK(stable_tail_asymptotic(spec, 2.0 * 7.0) /
              stable_tail_asymptotic(spec, 7.0) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-13));
    StableSpec twice(2.0, 1.5);
    CHECK(stable_tail_asymptotic(twice, 5.0) ==
          doctest::Approx(2.0 * stable_tail_asymptotic(spec, 5.0)).epsilon(1e-13));
}

TEST_CASE("cdf limits and monotone evaluation") {
    StableSpec spec(1.0, 1.5);
    CHECK(stable_cdf(spec, -25.0) < 1e-5);
    CHECK(stable_cdf(spec, 300.0) > 0.999);
    std::vector<double> xs;
    for (int i = 0; i <= 60; ++i) xs.push_back(-4.0 + 0.2 * i);
    const auto f = stable_cdf_monotone(spec, xs);
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] >= f[i - 1]);
    CHECK(f.front() >= 0.0);
    CHECK(f.back() <= 1.0);
}

TEST_CASE("cdf mean is zero (tail-corrected integral)") {
    StableSpec spec(1.0, 1.5);
    QuadratureOptions opts;
    opts.rel_tol = 1e-7;
    opts.abs_tol = 1e-9;
    const double x_hi = 400.0;
    const double left = integrate_or_throw(
        [&](double x) { return stable_cdf(spec, x); }, -40.0, 0.0, opts);
    const double right = integrate_or_throw(
        [&](double x) { return 1.0 - stable_cdf(spec, x); }, 0.0, x_hi, opts);
    // Residual right tail from the first-order asymptotic.
    const double correction =
        spec.q / spec.gamma * std::pow(x_hi, 1.0 - spec.gamma) / (spec.gamma - 1.0);
    CHECK(stable_cdf(spec, -40.0) < 1e-7);
    CHECK(std::abs(right + correction - left) < 1e-3);
}

TEST_CASE("far tail matches the asymptotic") {
    StableSpec spec(1.0, 1.5);
    const double ratio =
        (1.0 - stable_cdf(spec, 50.0)) / stable_tail_asymptotic(spec, 50.0);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("two inversion routes agree to 1e-6") {
    StableSpec spec(1.0, 1.5);
    for (double x : {-3.0, -0.7, 0.0, 0.9, 2.4, 11.0, 47.0}) {
        CHECK(std::abs(stable_cdf(spec, x) - stable_cdf_grid(spec, x)) < 1e-6);
    }
    StableSpec other(0.7, 1.8);
    for (double x : {-1.2, 0.4, 6.0}) {
        CHECK(std::abs(stable_cdf(other, x) - stable_cdf_grid(other, x)) < 1e-6);
    }
}
