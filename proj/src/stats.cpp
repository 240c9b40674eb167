#include "telecom/stats.hpp"

#include <algorithm>
#include <cmath>

#include "telecom/errors.hpp"

namespace telecom {

Interval wilson_interval(long long successes, long long trials, double z) {
    if (trials <= 0) throw DomainError("wilson_interval needs trials > 0");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) out.low = 0.0;
    if (successes == trials) out.high = 1.0;
    return out;
}

Interval mean_interval(double mean, double sample_variance, long long n, double z) {
    if (n <= 1) return Interval{mean, mean};
    const double half = z * std::sqrt(std::max(0.0, sample_variance) / static_cast<double>(n));
    return Interval{mean - half, mean + half};
}

void Moments::add(double x) {
    // Online central-moment update (Pebay's formulas).
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
           4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
}

void Moments::merge(const Moments& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    const double d2 = delta * delta;

    const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + other.m3_ + delta * d2 * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * other.m2_ - nb * m2_) / n;
    const double m4 = m4_ + other.m4_ +
                      d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                      4.0 * delta * (na * other.m3_ - nb * m3_) / n;

    mean_ = (na * mean_ + nb * other.mean_) / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += other.n_;
}

double Moments::mean() const { return mean_; }

double Moments::variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
}

double Moments::fourth_central_moment() const {
    if (n_ == 0) return 0.0;
    return m4_ / static_cast<double>(n_);
}

double Moments::variance_upper_bound(double z) const {
    if (n_ < 2) return variance();
    const double n = static_cast<double>(n_);
    const double s2 = variance();
    const double m4 = fourth_central_moment();
    const double var_of_s2 = std::max(0.0, m4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
    return s2 + z * std::sqrt(var_of_s2);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    double prev_f = -1.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        // Guard against slightly non-monotone numeric CDFs.
        f = std::clamp(std::max(f, prev_f), 0.0, 1.0);
        prev_f = f;
        const double upper = static_cast<double>(i + 1) / n - f;
        const double lower = f - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_statistic_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t n, double alpha) {
    // Asymptotic inverse of the Kolmogorov distribution.
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("regression_slope: need matching samples of size >= 2");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw DomainError("regression_slope: degenerate x values");
    return sxy / sxx;
}

}  // namespace telecom
