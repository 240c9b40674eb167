#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "telecom/errors.hpp"
#include "telecom/measures.hpp"
#include "telecom/quadrature.hpp"
#include "telecom/rng.hpp"
#include "telecom/stats.hpp"

using namespace telecom;

namespace {

// Session-count oracle: the overlap tail mass is the integral of
// (t - 2 l0 + u) u^(-gamma-1) over u >= l0 (sessions with overlap >= l0).
double mu_ell_tail_oracle(double t, double gamma, double l0) {
    if (l0 > t) return 0.0;
    return integrate_to_infinity(
        [&](double u) { return (t - 2.0 * l0 + u) * std::pow(u, -gamma - 1.0); }, l0);
}

double mu_lr_tail_oracle(const TailMeasure& m, double v) {
    return m.tail_by_quadrature(v);
}

TailMeasure degenerate_measure(double t) {
    return TailMeasure(t, TelecomParams(1.0, 1.5), RewardLaw::degenerate(1.0));
}

}  // namespace

TEST_CASE("kernel overlap") {
    CHECK(kernel_ell(0.2, 0.3, 1.0) == doctest::Approx(0.3));
    CHECK(kernel_ell(-0.5, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(kernel_ell(2.0, 1.0, 1.0) == 0.0);
    CHECK(kernel_ell(1.5, 3.0, 2.0) == doctest::Approx(0.5));
    CHECK(kernel_ell(0.5, -1.0, 2.0) == 0.0);
    CHECK(kernel_ell(0.5, 1.0, 0.0) == 0.0);
    RandomStream rng(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double s = -2.0 + 6.0 * rng.uniform();
        const double u = 3.0 * rng.uniform();
        const double t = 2.0 * rng.uniform();
        const double ell = kernel_ell(s, u, t);
        CHECK(ell >= 0.0);
        CHECK(ell <= std::min(u, t) + 1e-15);
    }
}

TEST_CASE("overlap tail mass closed form vs oracle") {
    CHECK(mu_ell_tail(10, 1.5, 1) == doctest::Approx(22.0 / 3.0).epsilon(1e-12));
    CHECK(mu_ell_tail(10, 1.5, 1) ==
          doctest::Approx(mu_ell_tail_oracle(10, 1.5, 1)).epsilon(1e-8));
    CHECK(mu_ell_tail(1, 1.5, 2) == 0.0);
    CHECK(mu_ell_tail(4, 1.5, 4) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(mu_ell_tail(4, 1.5, 4) ==
          doctest::Approx(mu_ell_tail_oracle(4, 1.5, 4)).epsilon(1e-8));
    for (double gamma : {1.2, 1.5, 1.8}) {
        for (double l0 : {0.05, 0.7, 2.0}) {
            CHECK(mu_ell_tail(3.0, gamma, l0) ==
                  doctest::Approx(mu_ell_tail_oracle(3.0, gamma, l0)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(mu_ell_tail(1.0, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(mu_ell_tail(1.0, 1.5, 0.0), DomainError);
}

TEST_CASE("whole-window atom") {
    CHECK(mu_ell_atom(1, 1.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(mu_ell_atom(4, 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Atom equals the tail at l0 = t.
    for (double t : {0.5, 1.0, 7.0}) {
        CHECK(mu_ell_atom(t, 1.7) == doctest::Approx(mu_ell_tail(t, 1.7, t)).epsilon(1e-13));
    }
    // Monotone decreasing in t.
    double prev = mu_ell_atom(1.0, 1.5);
    for (double t : {2.0, 8.0, 64.0, 1e4}) {
        const double cur = mu_ell_atom(t, 1.5);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("overlap density examples and finite differences") {
    CHECK(mu_ell_density(10, 1.5, 1) == doctest::Approx(10.0 + 1.0 / 3.0).epsilon(1e-12));
    CHECK(mu_ell_density(1, 1.5, 0.25) ==
          doctest::Approx(std::pow(0.25, -2.5) + std::pow(0.25, -1.5) / 3.0).epsilon(1e-12));
    // d/dl of -tail equals the density.
    const double h = 1e-6;
    for (double ell : {0.3, 0.9}) {
        const double fd = (mu_ell_tail(2.0, 1.5, ell - h) - mu_ell_tail(2.0, 1.5, ell + h)) /
                          (2.0 * h);
        CHECK(mu_ell_density(2.0, 1.5, ell) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK_THROWS_AS(mu_ell_density(1.0, 1.5, 1.5), DomainError);
}

TEST_CASE("tail decomposition identity: density integral plus atom") {
    for (double t : {1.0, 4.0}) {
        for (double gamma : {1.3, 1.5, 1.9}) {
            const double direct = integrate_or_throw(
                [&](double l) { return mu_ell_density(t, gamma, l); }, 0.5 * t,
                t * (1.0 - 1e-12));
            CHECK(direct + mu_ell_atom(t, gamma) ==
                  doctest::Approx(mu_ell_tail(t, gamma, 0.5 * t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("tail differencing vs density integral on a log grid") {
    const double t = 3.0, gamma = 1.5;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = t * std::pow(10.0, -4.0 + 3.5 * i / 99.0);
        const double b = std::min(t, a * 3.0);
        const double diff = mu_ell_tail(t, gamma, a) - mu_ell_tail(t, gamma, b);
        QuadratureOptions opts;
        opts.rel_tol = 1e-12;
        const double integral = integrate_or_throw(
            [&](double l) { return mu_ell_density(t, gamma, l); }, a,
            std::min(b, t * (1.0 - 1e-13)), opts);
        worst = std::max(worst, std::abs(diff - integral) / std::max(1e-300, diff));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("product-measure tail: point-mass reward reduces to the overlap measure") {
    TailMeasure m = degenerate_measure(10.0);
    CHECK(m.tail(1.0) == doctest::Approx(mu_ell_tail(10, 1.5, 1)).epsilon(1e-13));
    CHECK(m.tail(11.0) == 0.0);
    CHECK(m.tail(10.0) == doctest::Approx(mu_ell_atom(10, 1.5)).epsilon(1e-13));
}

TEST_CASE("product-measure tail vs quadrature for continuous rewards") {
    TelecomParams tp(1.0, 1.5);
    std::vector<RewardLaw> laws;
    laws.push_back(RewardLaw::uniform(1.0));
    laws.push_back(RewardLaw::pareto(3.0, 1.0));
    laws.push_back(RewardLaw::truncated_pareto(2.2, 0.5, 5.0));
    for (const auto& law : laws) {
        TailMeasure m(7.0, tp, law);
        for (double v : {0.01, 0.6, 3.0, 6.9, 20.0}) {
            const double closed = m.tail(v);
            const double oracle = mu_lr_tail_oracle(m, v);
            CHECK(closed == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("product-measure tail asymptotic ratio") {
    TailMeasure m(1e6, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    const double asym = 0.4 / 1.5 * 1e6 * std::pow(1e3, -1.5);
    CHECK(m.tail(1e3) / asym == doctest::Approx(1.0).epsilon(0.03));
    // The sharp regime of the ratio check.
    TailMeasure m8(1e8, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    const double ratio = m8.tail(1e4) * 1.5 / (0.4 * 1e8 * std::pow(1e4, -1.5));
    CHECK(ratio > 0.97);
    CHECK(ratio < 1.03);
}

TEST_CASE("tail bound dominates on a log grid") {
    TelecomParams tp(1.0, 1.5);
    TailMeasure md = degenerate_measure(10.0);
    CHECK(md.tail_bound(1.0) == doctest::Approx(40.0 / 3.0).epsilon(1e-12));
    CHECK(md.tail_bound(1.0) >= md.tail(1.0));

    std::vector<TailMeasure> measures;
    measures.push_back(md);
    measures.emplace_back(5.0, tp, RewardLaw::uniform(1.0));
    measures.emplace_back(5.0, tp, RewardLaw::pareto(3.0, 1.0));
    for (const auto& m : measures) {
        for (int i = 0; i < 50; ++i) {
            const double v = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
            CHECK(m.tail(v) <= m.tail_bound(v) * (1.0 + 1e-12));
        }
    }
    // Bound stays positive beyond a compact support where the tail is zero.
    CHECK(md.tail(15.0) == 0.0);
    CHECK(md.tail_bound(15.0) > 0.0);
    // Needs a finite gamma-moment.
    TailMeasure heavy(5.0, TelecomParams(1.0, 1.5), RewardLaw::pareto(1.2, 1.0));
    CHECK_THROWS_AS(heavy.tail_bound(1.0), DomainError);
}

TEST_CASE("mean above a threshold: closed form vs tail-integration oracle") {
    TailMeasure md = degenerate_measure(10.0);
    CHECK(md.mean_above(10.5) == 0.0);
    const double direct =
        1.0 * md.tail(1.0) +
        integrate_or_throw([&](double v) { return md.tail(v); }, 1.0, 10.0);
    CHECK(md.mean_above(1.0) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(md.mean_above(1.0) <= 40.0);  // centering bound with Q = 1

    TailMeasure mu(10.0, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    const double direct_u =
        0.5 * mu.tail(0.5) +
        integrate_or_throw([&](double v) { return mu.tail(v); }, 0.5, 10.0);
    CHECK(mu.mean_above(0.5) == doctest::Approx(direct_u).epsilon(1e-9));
}

TEST_CASE("mean above: doubling the window doubles the leading term") {
    // With v0 fixed far below t the restricted mean is linear in t.
    TailMeasure m200 = degenerate_measure(200.0);
    TailMeasure m400 = degenerate_measure(400.0);
    CHECK(m400.mean_above(1.0) / m200.mean_above(1.0) ==
          doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("variance integral vs quadrature") {
    TailMeasure mu(10.0, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    for (auto [lo, hi] : std::vector<std::pair<double, double>>{{0.1, 1.0}, {0.5, 9.0}}) {
        const double direct = integrate_or_throw(
            [&](double v) { return v * v * mu.density(v); }, lo, hi, opts);
        CHECK(mu.variance_integral(lo, hi) == doctest::Approx(direct).epsilon(1e-8));
    }
    // Point-mass reward: integrate against the overlap measure directly.
    TailMeasure md = degenerate_measure(10.0);
    const double cont = integrate_or_throw(
        [&](double l) { return l * l * mu_ell_density(10.0, 1.5, l); }, 0.5, 9.0, opts);
    CHECK(md.variance_integral(0.5, 9.0) == doctest::Approx(cont).epsilon(1e-8));
    // Window-covering atom included when the interval reaches past t.
    const double cont2 = integrate_or_throw(
        [&](double l) { return l * l * mu_ell_density(10.0, 1.5, l); }, 0.5,
        10.0 * (1.0 - 1e-12), opts);
    CHECK(md.variance_integral(0.5, 10.5) ==
          doctest::Approx(cont2 + 100.0 * mu_ell_atom(10.0, 1.5)).epsilon(1e-8));
}

TEST_CASE("exponential integral via parts vs direct quadrature") {
    TailMeasure mu(10.0, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    for (double lambda : {0.2, 0.7}) {
        const double direct = integrate_or_throw(
            [&](double v) { return (std::expm1(lambda * v) - lambda * v) * mu.density(v); },
            0.3, 2.0);
        CHECK(mu.exp_integral(lambda, 0.3, 2.0) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("characteristic exponent via parts vs direct quadrature") {
    TailMeasure mu(5.0, TelecomParams(1.0, 1.5), RewardLaw::uniform(1.0));
    const double hi = 2.0;
    for (double theta : {0.4, 2.0}) {
        const auto parts = mu.cf_exponent_integral(theta, 0.0, hi);
        QuadratureOptions opts;
        opts.rel_tol = 1e-11;
        opts.max_panels = 20000;
        // Direct route against the density, v = hi * w^4 soaking the
        // endpoint, with cancellation-free cos(x)-1 and sin(x)-x.
        auto re_g = [&](double x) {
            const double s = std::sin(0.5 * x);
            return -2.0 * s * s;
        };
        auto im_g = [&](double x) {
            if (std::abs(x) < 1e-2) {
                const double x2 = x * x;
                return -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
            }
            return std::sin(x) - x;
        };
        const double re = integrate_or_throw(
            [&](double w) {
                const double v = hi * std::pow(w, 4.0);
                if (v <= 0.0) return 0.0;
                return re_g(theta * v) * mu.density(v) * hi * 4.0 * std::pow(w, 3.0);
            },
            0.0, 1.0, opts);
        const double im = integrate_or_throw(
            [&](double w) {
                const double v = hi * std::pow(w, 4.0);
                if (v <= 0.0) return 0.0;
                return im_g(theta * v) * mu.density(v) * hi * 4.0 * std::pow(w, 3.0);
            },
            0.0, 1.0, opts);
        CHECK(parts.real() == doctest::Approx(re).epsilon(1e-7));
        CHECK(parts.imag() == doctest::Approx(im).epsilon(1e-7));
    }
}

TEST_CASE("scale-free overlap measure") {
    NuMeasure nu(1.5);
    CHECK(nu.tail(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(nu.tail(0.5) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(nu.atom_weight() == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    // Identical to the unit-window overlap tail, fine grid.
    for (int i = 1; i <= 50; ++i) {
        const double s0 = static_cast<double>(i) / 50.0;
        CHECK(nu.tail(s0) ==
              doctest::Approx(mu_ell_tail(1.0, 1.5, s0)).epsilon(1e-12));
    }
    // Diverges like s0^-gamma / gamma near zero.
    const double s0 = 1e-8;
    CHECK(nu.tail(s0) * 1.5 * std::pow(s0, 1.5) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(nu.tail(0.0), DomainError);
    CHECK_THROWS_AS(nu.tail(1.5), DomainError);
}

TEST_CASE("restricted overlap sampler matches its law") {
    NuMeasure nu(1.5);
    const double s_min = 0.25;
    RandomStream rng(77, 0);
    const int n = 100000;
    std::vector<double> sample(n);
    long long atoms = 0;
    for (double& x : sample) {
        x = nu.sample_restricted(s_min, rng);
        if (x == 1.0) ++atoms;
    }
    const double total = nu.tail(s_min);
    const double atom_prob = nu.atom_weight() / total;
    CHECK(std::abs(static_cast<double>(atoms) / n - atom_prob) <
          4.0 * std::sqrt(atom_prob / n));
    // KS on the continuous part only (the law has a point mass at 1).
    std::vector<double> continuous;
    for (double s : sample) {
        if (s < 1.0) continuous.push_back(s);
    }
    const double cont_total = total - nu.atom_weight();
    auto cdf = [&](double s) {
        return (total - nu.tail(std::max(s, s_min))) / cont_total;
    };
    CHECK(ks_statistic(continuous, cdf) < 0.01);
}

TEST_CASE("point masses of the product measure") {
    TailMeasure mix(4.0, TelecomParams(1.0, 1.5),
                    RewardLaw::discrete({0.3, 0.7}, {0.5, 0.5}));
    const auto atoms = mix.atoms();
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].first == doctest::Approx(1.2));
    CHECK(atoms[1].first == doctest::Approx(2.8));
    CHECK(atoms[0].second == doctest::Approx(0.5 * mu_ell_atom(4.0, 1.5)));
}

TEST_CASE("critical-intensity construction") {
    TelecomParams tp = TelecomParams::from_critical(2.0, 3.0, 1.5);
    CHECK(tp.q == doctest::Approx(2.0 * 3.0 * 1.5));
    CHECK(tp.gamma == 1.5);
    CHECK_THROWS_AS(TelecomParams(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(TelecomParams(0.0, 1.5), DomainError);
    CHECK_THROWS_AS(TelecomParams::from_critical(0.0, 1.0, 1.5), DomainError);
}
