#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace telecom {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion (defaults to 95%).
Interval wilson_interval(long long successes, long long trials, double z = 1.959963984540054);

// Normal-approximation interval for a sample mean.
Interval mean_interval(double mean, double sample_variance, long long n,
                       double z = 1.959963984540054);

// Moment accumulator (mean, variance, fourth central moment for variance CIs).
class Moments {
public:
    void add(double x);
    void merge(const Moments& other);

    long long count() const { return n_; }
    double mean() const;
    double variance() const;  // unbiased
    double fourth_central_moment() const;
    // One-sided upper confidence bound for the population variance.
    double variance_upper_bound(double z) const;

private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

// Kolmogorov-Smirnov statistic of a sample against a CDF. The sample is
// copied and sorted; `cdf` must be nondecreasing.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sided critical value for the one-sample statistic.
double ks_critical_value(std::size_t n, double alpha = 0.05);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace telecom
