#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "telecom/parallel.hpp"
#include "telecom/rng.hpp"
#include "telecom/stats.hpp"

using namespace telecom;

TEST_CASE("streams are deterministic and distinct") {
    RandomStream a(123, 7), b(123, 7), c(123, 8);
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
}

TEST_CASE("uniform moments") {
    RandomStream rng(99, 0);
    Moments m;
    const int n = 200000;
    for (int i = 0; i < n; ++i) m.add(rng.uniform());
    CHECK(m.mean() == doctest::Approx(0.5).epsilon(0.005));
    CHECK(m.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("poisson small mean matches pmf") {
    const double mean = 4.0;
    RandomStream rng(5, 1);
    const int n = 200000;
    std::vector<long long> counts(30, 0);
    for (int i = 0; i < n; ++i) {
        long long k = rng.poisson(mean);
        if (k < 30) ++counts[static_cast<std::size_t>(k)];
    }
    double chi2 = 0.0;
    double log_pmf = -mean;  // log P(0)
    for (int k = 0; k < 15; ++k) {
        if (k > 0) log_pmf += std::log(mean / k);
        const double expected = n * std::exp(log_pmf);
        if (expected < 10.0) continue;
        const double diff = counts[static_cast<std::size_t>(k)] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 40.0);  // ~13 cells, generous 99.9% bound
}

TEST_CASE("poisson large mean moments (PTRD branch)") {
    const double mean = 480.0;
    RandomStream rng(6, 2);
    Moments m;
    const int n = 100000;
    for (int i = 0; i < n; ++i) m.add(static_cast<double>(rng.poisson(mean)));
    CHECK(m.mean() == doctest::Approx(mean).epsilon(0.002));
    CHECK(m.variance() == doctest::Approx(mean).epsilon(0.03));
}

TEST_CASE("wilson interval basics") {
    Interval ci = wilson_interval(50, 100);
    CHECK(ci.low == doctest::Approx(0.404).epsilon(0.01));
    CHECK(ci.high == doctest::Approx(0.596).epsilon(0.01));
    Interval zero = wilson_interval(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    CHECK(zero.high < 0.05);
}

TEST_CASE("moments merge equals bulk") {
    RandomStream rng(17, 3);
    Moments all, a, b;
    for (int i = 0; i < 5000; ++i) {
        const double x = rng.uniform() * rng.uniform();
        all.add(x);
        (i % 2 ? a : b).add(x);
    }
    Moments merged = a;
    merged.merge(b);
    CHECK(merged.count() == all.count());
    CHECK(merged.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(merged.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
    CHECK(merged.fourth_central_moment() ==
          doctest::Approx(all.fourth_central_moment()).epsilon(1e-9));
}

TEST_CASE("ks one-sample against exact uniform cdf") {
    RandomStream rng(21, 0);
    std::vector<double> sample(2000);
    for (double& x : sample) x = rng.uniform();
    const double d = ks_statistic(sample, [](double x) { return x; });
    CHECK(d < ks_critical_value(sample.size(), 0.01));
    CHECK(d > 0.0);
}

TEST_CASE("ks two-sample on identical distributions") {
    RandomStream rng(22, 0);
    std::vector<double> a(3000), b(3000);
    for (double& x : a) x = rng.uniform();
    for (double& x : b) x = rng.uniform();
    CHECK(ks_statistic_two_sample(a, b) < 1.63 * std::sqrt(2.0 / 3000.0));
}

TEST_CASE("ks hand-computed small case") {
    // Sample {0.1, 0.6}, cdf(x) = x: steps at 0.5-0.1 and 0.6-0.5.
    std::vector<double> s{0.6, 0.1};
    const double d = ks_statistic(s, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("regression slope exact on a line") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y{2.0, 0.5, -1.0, -2.5};
    CHECK(regression_slope(x, y) == doctest::Approx(-1.5).epsilon(1e-13));
}

TEST_CASE("run_blocks is independent of thread count") {
    auto work = [](std::uint64_t i, Moments& m) {
        RandomStream rng(400, i);
        m.add(rng.uniform());
    };
    struct Block {
        Moments m;
        void merge(const Block& o) { m.merge(o.m); }
    };
    Block one = run_blocks<Block>(20000, 1, [&](std::uint64_t i, Block& b) { work(i, b.m); }, 512);
    Block four = run_blocks<Block>(20000, 4, [&](std::uint64_t i, Block& b) { work(i, b.m); }, 512);
    CHECK(one.m.mean() == four.m.mean());
    CHECK(one.m.variance() == four.m.variance());
}
