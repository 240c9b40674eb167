#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "telecom/laws.hpp"

namespace telecom {

// Intensity multiplier and duration-tail index of the limiting workload
// process. Q scales the session intensity measure; gamma in (1,2) is the
// heavy-tail index of the session durations.
struct TelecomParams {
    double q;
    double gamma;

    TelecomParams(double q_, double gamma_);

    // Critical-intensity construction: Q = L * c_U * gamma, where L is the
    // critical-intensity constant and c_U the duration tail constant.
    static TelecomParams from_critical(double intensity_l, double c_u, double gamma_);
};

// Overlap length |[s, s+u] /\ [0, t]| of a session started at s with
// duration u against the observation window [0, t].
double kernel_ell(double s, double u, double t);

// Tail mass of the session-overlap measure: the mass of overlaps >= ell0
// within a window of length t. Zero for ell0 > t; for ell0 in (0, t] equals
//   t * ell0^(-gamma) / gamma + (2-gamma)/((gamma-1)*gamma) * ell0^(1-gamma).
double mu_ell_tail(double t, double gamma, double ell0);

// Point mass of the overlap measure at ell = t (sessions covering the whole
// window): t^(1-gamma) / ((gamma-1)*gamma).
double mu_ell_atom(double t, double gamma);

// Density of the overlap measure on (0, t):
//   t * ell^(-1-gamma) + ((2-gamma)/gamma) * ell^(-gamma).
double mu_ell_density(double t, double gamma, double ell);

// Scale-free copy of the overlap measure on [0,1]: density plus an atom at 1.
// Appears in the multi-session large-deviation constant.
class NuMeasure {
public:
    explicit NuMeasure(double gamma);

    double gamma() const { return gamma_; }
    double atom_weight() const;            // mass at s = 1
    double density(double s) const;        // on (0,1)
    double tail(double s0) const;          // mass of [s0, 1], atom included

    // Draw from nu restricted to [s_min, 1], normalized by tail(s_min).
    double sample_restricted(double s_min, RandomStream& rng) const;

private:
    double gamma_;
};

// Analytic handle for the intensity measure of the per-session contribution
// v = r * ell within a window of length t. Tail, partial means, variance
// integrals and exponential integrals all reduce to truncated moments of the
// reward law; adaptive quadrature is kept as a generic fallback and oracle.
class TailMeasure {
public:
    TailMeasure(double t, TelecomParams params, RewardLaw reward);

    double t() const { return t_; }
    double gamma() const { return params_.gamma; }
    const TelecomParams& params() const { return params_; }
    const RewardLaw& reward() const { return reward_; }

    // Mass of [v, infinity). Exact closed form:
    //   (t/gamma) v^-gamma E[R^gamma 1{R >= v/t}]
    //   + (2-gamma)/((gamma-1)gamma) v^(1-gamma) E[R^(gamma-1) 1{R >= v/t}].
    double tail(double v) const;

    // Generic integral route for the same quantity (reference/oracle path).
    double tail_by_quadrature(double v) const;

    // Upper bound E[R^gamma] / (gamma (gamma-1)) * t * v^-gamma.
    double tail_bound(double v) const;

    // First moment of the restriction to [v0, infinity):
    // v0 * tail(v0) + integral of tail over [v0, infinity), in closed form.
    double mean_above(double v0) const;

    // First and second moments of the restriction to [lo, hi).
    double mean_integral(double lo, double hi) const;
    double variance_integral(double lo, double hi) const;

    // Exponential compensator integral int_[lo,hi) (e^(lambda v)-1-lambda v) dmu.
    double exp_integral(double lambda, double lo, double hi) const;

    // Characteristic-exponent integral int_[lo,hi) (e^(i theta v)-1-i theta v) dmu.
    std::complex<double> cf_exponent_integral(double theta, double lo, double hi) const;

    // Density of the absolutely continuous part (reward laws with a density).
    double density(double v) const;

    // Point masses: t*c_i where the reward law has atoms (the whole-window
    // overlap atom smeared by a discrete reward).
    std::vector<std::pair<double, double>> atoms() const;

    // t * ess_sup(R); +infinity for unbounded rewards.
    double upper_support() const;

private:
    double integrate_tail_weighted(const std::function<double(double)>& weight, double lo,
                                   double hi) const;

    double t_;
    TelecomParams params_;
    RewardLaw reward_;
};

}  // namespace telecom
