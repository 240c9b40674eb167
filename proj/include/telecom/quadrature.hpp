#pragma once

#include <functional>

namespace telecom {

// Adaptive Gauss-Kronrod (7-15) quadrature. Integrands are assumed smooth
// except possibly at interval endpoints; the worklist subdivides the panel
// with the largest error estimate until the requested tolerance is met.

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
    int max_panels = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

// Single non-adaptive Gauss-Kronrod pass over [a, b].
QuadratureResult gauss_kronrod_panel(const Integrand& f, double a, double b);

// Adaptive integration over the finite interval [a, b].
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Same, but throws IntegrationError when the tolerance is not reached.
double integrate_or_throw(const Integrand& f, double a, double b,
                          const QuadratureOptions& opts = {});

// Integral over [a, +inf) via the substitution x = a + s/(1-s).
// The integrand must decay fast enough for the transformed integral to
// converge; endpoint subdivision absorbs the remaining singularity.
double integrate_to_infinity(const Integrand& f, double a,
                             const QuadratureOptions& opts = {});

}  // namespace telecom
