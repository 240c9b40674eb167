#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "telecom/rng.hpp"

namespace telecom {

using CharacteristicFn = std::function<std::complex<double>(double)>;

// Tabulated CDF of a real law given by its characteristic function.
// Gil-Pelaez sums over a fixed composite Gauss-Kronrod theta-grid shared by
// all x evaluations, followed by monotonization; sampling is inverse
// transform on the grid. Deterministic by construction.
class CdfTable {
public:
    struct Options {
        int x_points = 2049;
        double range_sigmas = 16.0;    // initial half-range in units of sd
        double end_mass = 1e-7;        // target CDF mass outside the range
        int max_expansions = 10;
        double oscillation_budget = 3.0;  // max radians of e^(i theta x) per panel
        int min_panels = 32;
    };

    // mean/sd locate and scale the x grid; theta_max must satisfy
    // |cf| << 1 beyond it.
    CdfTable(const CharacteristicFn& cf, double theta_max, double mean, double sd);
    CdfTable(const CharacteristicFn& cf, double theta_max, double mean, double sd,
             Options opts);

    double cdf(double x) const;
    double quantile(double u) const;
    double sample(RandomStream& rng) const { return quantile(rng.uniform()); }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    // CDF mass outside the tabulated range (diagnostic).
    double outside_mass() const { return outside_mass_; }

    // Moments of the tabulated law (midpoint rule over cells).
    double mean_estimate() const;
    double variance_estimate() const;

    // Pointwise Gil-Pelaez with adaptive quadrature; independent of the grid
    // aggregation, used for self-checks.
    static double gil_pelaez(const CharacteristicFn& cf, double x, double theta_max);

private:
    void build(const CharacteristicFn& cf, double theta_max, Options opts);

    std::vector<double> x_;
    std::vector<double> f_;
    double outside_mass_ = 0.0;
};

}  // namespace telecom
