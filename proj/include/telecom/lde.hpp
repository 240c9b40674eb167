#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telecom/measures.hpp"
#include "telecom/simulator.hpp"

namespace telecom {

// Monte-Carlo tail probability estimate with provenance.
struct TailEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long long replicates = 0;
    std::string method;  // "crude" or "conditional"
    std::uint64_t seed = 0;

    // Diagnostics (conditional estimator).
    double remainder_bound = 0.0;  // Poisson mass beyond n_max
    int n_max = 0;
    double neglected_variance_bound = 0.0;
    double small_outside_mass = 0.0;
    std::vector<double> branch_weights;
    std::vector<double> branch_probs;
};

// First-order tail in the zone t^(1/gamma) << rho << t:
//   (Q E[R^gamma] / gamma) * t * rho^(-gamma).
double moderate_asymptotic(double q, double gamma, double reward_moment_gamma, double t,
                           double rho);

// Single-session constant on the rho = kappa t boundary:
//   kappa^-gamma/gamma E[R^g 1{R>=k}]
//   + (2-gamma) kappa^(1-gamma)/((gamma-1)gamma) E[R^(g-1) 1{R>=k}].
// Needs P(R >= kappa) > 0 and no reward atom at kappa.
double intermediate_constant_1(double gamma, const RewardLaw& reward, double kappa);

// Number of sessions needed to reach level kappa, with the feasibility
// parameters used to restrict the multi-session constant's domain.
struct SessionCount {
    int n = 1;
    bool bounded = false;  // reward has a finite essential supremum
    double kappa = 0.0;
    double zeta = 0.0;   // midpoint of the feasible interval
    double eta = 0.0;    // (1-zeta) kappa / (n-zeta)
    double s_star = 0.0; // (n-1) eta / (kappa - eta); 1 - zeta for n >= 2
    double sharp_cutoff = 0.0;  // kappa/ess_sup - (n-1); integrand support edge
};

// Throws CriticalCaseError when only zeta = 1 would work (kappa at an exact
// multiple of the essential supremum of an atomless reward).
SessionCount required_sessions(const RewardLaw& reward, double kappa);

struct ConstantEstimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long long replicates = 0;
    std::string method;  // "quadrature" or "monte-carlo"
};

struct DInOptions {
    long long replicates = 1000000;
    std::uint64_t seed = 1;
    int threads = 0;
    enum class Method { automatic, quadrature, monte_carlo };
    Method method = Method::automatic;
};

// n-session constant: (1/n!) times the integral over [0,1]^n of
// P(s_1 R_1 + ... + s_n R_n >= kappa) against the scale-free overlap measure.
// Deterministic quadrature for n <= 2 (closed-form inner probability),
// Monte Carlo with a restricted sampler otherwise.
ConstantEstimate intermediate_constant_n(double gamma, const RewardLaw& reward,
                                         double kappa, int n, const DInOptions& opts = {});

// Closed-form inner probability P(a1 X + a2 Y >= c), X,Y iid uniform(0,1).
double uniform_pair_exceedance(double a1, double a2, double c);

// m(m-1) / (gamma (gamma-1) (m-gamma+1) (m-gamma)) for a reward tail index m.
double ultra_constant(double gamma, double m);

// Ultra-large zone rho >> t with regularly varying reward tail:
//   Q * D * t^-(gamma-1) * P(R >= rho/t).
double ultra_asymptotic(double q, double gamma, const RewardLaw& reward, double t,
                        double rho);

struct EstimatorOptions {
    long long replicates = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    int n_max = 0;  // conditional estimator; 0 = automatic escalation
    SplitConfig::SmallMethod small_method = SplitConfig::SmallMethod::automatic;
};

// Direct Monte Carlo of P(Y(t) >= rho) with a Wilson interval.
TailEstimate tail_estimate_crude(const TailMeasure& m, const SplitConfig& split,
                                 double rho, const EstimatorOptions& opts);

// Exact big-jump decomposition: P(Y >= rho) = sum_n P(N0 = n) q_n + remainder,
// with q_n estimated by conditional Monte Carlo against the small-part CDF.
// Unbiased up to the reported Poisson remainder; escalates n_max until the
// remainder is below 10% of the estimate (ConfigError if that fails).
TailEstimate tail_estimate_conditional(const TailMeasure& m, const SplitConfig& split,
                                       double rho, const EstimatorOptions& opts);

}  // namespace telecom
