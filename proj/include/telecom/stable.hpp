#pragma once

#include <complex>
#include <vector>

namespace telecom {

// Centered strictly gamma-stable law with positive spectrum, defined through
// its characteristic function
//   E e^(i theta S) = exp{ Q Gamma(-gamma) (-i theta)^gamma },
// principal branch, gamma in (1,2). This is the large-time limit law of the
// normalized workload process.
struct StableSpec {
    double q;
    double gamma;

    StableSpec(double q_, double gamma_);

    // Decay/oscillation coefficients of the CF for theta > 0:
    //   cf(theta) = exp(-decay * theta^gamma) * exp(-i * twist * theta^gamma).
    double decay_coefficient() const;
    double twist_coefficient() const;
};

// Closed-form characteristic function.
std::complex<double> stable_cf(const StableSpec& spec, double theta);

// First-order tail: P(S >= rho) ~ (Q/gamma) * rho^(-gamma).
double stable_tail_asymptotic(const StableSpec& spec, double rho);

// CDF by Gil-Pelaez inversion with adaptive quadrature; the integration
// cutoff comes from the analytic envelope |cf(theta)| = exp(-c theta^gamma).
// Absolute accuracy ~1e-9; throws InversionError if the quadrature fails.
double stable_cdf(const StableSpec& spec, double x);

// Independent check route: fixed midpoint grid with a cruder cutoff rule.
// Used for two-implementation agreement tests; accuracy ~1e-7.
double stable_cdf_grid(const StableSpec& spec, double x);

// Evaluates the CDF on many points with post-hoc monotonization (running
// maximum, clipped to [0,1]). Points must be sorted ascending.
std::vector<double> stable_cdf_monotone(const StableSpec& spec,
                                        const std::vector<double>& sorted_x);

}  // namespace telecom
