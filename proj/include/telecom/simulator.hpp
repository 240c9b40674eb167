#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "telecom/cdf_table.hpp"
#include "telecom/measures.hpp"

namespace telecom {

// ---------------------------------------------------------------------------
// Pre-limit service system
// ---------------------------------------------------------------------------

// Parameters of the infinite-source Poisson system observed on [0, a].
struct ServiceSystemParams {
    double lambda;       // arrival intensity per unit time
    double a;            // time scale of the observation window
    double critical_l;   // critical-intensity constant (0 when lambda is direct)
    DurationLaw duration;
    RewardLaw reward;
    double session_cap = 2e9;  // resource guard on the expected session count

    // Critical-intensity construction: lambda = L * a^(gamma-1).
    static ServiceSystemParams critical(double l, double a, DurationLaw duration,
                                        RewardLaw reward);
    static ServiceSystemParams direct(double lambda, double a, DurationLaw duration,
                                      RewardLaw reward);

    // Expected sessions touching the window [0, a*t_max].
    double expected_sessions(double t_max) const;

    // Soft regime checks (duration tail must be heavier than the reward tail
    // for the limit theorem to hold); returns human-readable warnings.
    std::vector<std::string> regime_warnings() const;
};

// Integral workload W*(a t) on a sorted grid t in [0,1]. Exact event-based
// simulation: fresh arrivals on [0, a t_max] plus the stationary sessions
// straddling time zero.
std::vector<double> simulate_workload(const ServiceSystemParams& params,
                                      const std::vector<double>& t_grid,
                                      RandomStream& rng);

// Normalized workload Z_a(t) = (W*(a t) - E[R] E[U] a lambda t) / a.
std::vector<double> simulate_z_a(const ServiceSystemParams& params,
                                 const std::vector<double>& t_grid, RandomStream& rng);

// ---------------------------------------------------------------------------
// Split simulation of the limit process
// ---------------------------------------------------------------------------

// Threshold configuration for the big/small jump decomposition at v0.
struct SplitConfig {
    double v0;
    // Inner truncation for the jump-by-jump route; 0 selects the
    // variance-budget default (neglected variance 1e-6 of the small-part
    // variance scale).
    double epsilon = 0.0;
    enum class SmallMethod { automatic, cdf_table, jumps };
    SmallMethod method = SmallMethod::automatic;
    // automatic: jump-by-jump while the expected count stays below this,
    // otherwise the exact CDF-table route (no truncation at all).
    double count_budget = 2e4;
};

// Variance-budget default for the inner truncation.
double default_epsilon(double v0, double gamma);

// One draw of Y(t): value = small_sum + big_sum - centering.
struct TelecomSample {
    double value;
    double small_sum;
    double big_sum;
    double centering;
    long long big_jump_count;
    // Variance of whatever the small-jump route left out (0 for the table).
    double neglected_variance_bound;
};

// Deterministic centering term E_t = Q * mean of the measure above v0.
double centering_et(const TailMeasure& m, double q, double v0);

// Exponential moment of the compensated small part over (0, v0):
//   exp{ Q int (e^(lambda v) - 1 - lambda v) dmu }.
double exp_moment_small(const TailMeasure& m, double q, double v0, double lambda);
// Same over an interval [lo, hi); matches truncated jump simulations.
double exp_moment_interval(const TailMeasure& m, double q, double lo, double hi,
                           double lambda);

// Chernoff-type bound on P(small part >= y) for the split at v0:
//   exp(y/v0) * (A v0 / y)^(y/v0),  A = Q (D3 + 3 D4) t v0^(-gamma).
// May exceed 1 at desk scale; it only promises domination.
double chernoff_bound_small(const TailMeasure& m, double q, double v0, double y);

// Conditional law of one jump >= v0: reward drawn from its tail-weighted
// marginal by numeric inversion, then the overlap given the reward, then
// v = r * ell. Immutable and safe to share across threads.
class BigJumpSampler {
public:
    BigJumpSampler(TailMeasure m, double v0);

    double v0() const { return v0_; }
    // mu[v0, inf), without the Q factor.
    double total_mass() const { return mass_; }
    bool empty() const { return mass_ <= 0.0; }

    double sample(RandomStream& rng) const;

private:
    double sample_reward(RandomStream& rng) const;

    TailMeasure measure_;
    double v0_;
    double mass_;
    double w0_;  // v0 / t
    std::vector<double> grid_r_;
    std::vector<double> grid_residual_;
    std::vector<double> comp_point_;
    std::vector<double> comp_cum_;
};

// Poisson number of jumps above v0 with their values (intensity Q mu).
std::vector<double> sample_big_jumps(const TailMeasure& m, double q, double v0,
                                     RandomStream& rng);

// Compensated jump-by-jump simulation of the small part over [epsilon, v0).
class SmallJumpSimulator {
public:
    SmallJumpSimulator(TailMeasure m, double q, double epsilon, double v0,
                       double expected_count_cap = 5e7);

    double expected_count() const { return expected_count_; }
    double compensator() const { return compensator_; }
    double neglected_variance_bound() const { return neglected_var_; }
    double epsilon() const { return epsilon_; }

    double sample(RandomStream& rng) const;

private:
    double sample_jump(RandomStream& rng) const;

    TailMeasure measure_;
    double q_;
    double epsilon_;
    double v0_;
    double hi_eff_;
    double tail_lo_;
    double tail_hi_;
    double expected_count_;
    double compensator_;
    double neglected_var_;
    std::vector<double> grid_v_;
    std::vector<double> grid_tail_;
    std::vector<double> comp_point_;
    std::vector<double> comp_cum_;
};

// Exact-in-law sampler of the compensated small part over [lo, v0) built by
// characteristic-function inversion. No truncation error; accuracy is the
// CDF-table tolerance, checked against exact moments at construction.
class SmallPartLaw {
public:
    SmallPartLaw(const TailMeasure& m, double q, double lo, double v0);

    bool is_zero() const { return !table_.has_value(); }
    double variance() const { return variance_; }
    double sd() const { return sd_; }
    double sample(RandomStream& rng) const;
    double cdf(double x) const;
    // P(small part >= x) with the exponential-moment bound capping the deep
    // right tail, where the table resolution (~1e-8) would otherwise leak.
    double upper_tail(double x) const;
    double outside_mass() const;

private:
    std::optional<CdfTable> table_;
    double variance_ = 0.0;
    double sd_ = 0.0;
    double chernoff_a_ = 0.0;  // A in P(X >= y) <= exp(y/v0) (A v0 / y)^(y/v0)
    double v0_ = 0.0;
};

// Assembled sampler of Y(t) = small + big - centering for a fixed split.
// Construction precomputes the small-part law and the big-jump sampler;
// sample() is cheap and const, so replicates fan out across threads.
class TelecomSimulator {
public:
    TelecomSimulator(TailMeasure m, SplitConfig split);

    const TailMeasure& measure() const { return measure_; }
    double q() const { return q_; }
    double v0() const { return split_.v0; }
    double centering() const { return centering_; }
    double big_jump_mean() const { return big_mean_; }
    double neglected_variance_bound() const { return neglected_var_; }
    bool uses_table() const { return small_law_.has_value(); }
    double resolved_epsilon() const { return epsilon_; }
    const SmallPartLaw* small_law() const {
        return small_law_.has_value() ? &*small_law_ : nullptr;
    }

    TelecomSample sample(RandomStream& rng) const;

private:
    TailMeasure measure_;
    SplitConfig split_;
    double q_;
    double epsilon_ = 0.0;
    double centering_;
    double big_mean_;
    double neglected_var_ = 0.0;
    std::optional<SmallPartLaw> small_law_;
    std::optional<SmallJumpSimulator> small_jumps_;
    std::optional<BigJumpSampler> big_;
};

// One-shot draws (convenience wrappers; loops should reuse the classes).
double simulate_small_part(const TailMeasure& m, double q, const SplitConfig& split,
                           RandomStream& rng);
TelecomSample simulate_telecom(const TailMeasure& m, const SplitConfig& split,
                               RandomStream& rng);

// Overlap draw from the window-overlap measure conditioned on [lo, t]
// (atom at t handled as a discrete branch).
double sample_ell_restricted(double t, double gamma, double lo, RandomStream& rng);
// Same restricted to [lo, hi); the atom at t is included only when hi > t.
double sample_ell_interval(double t, double gamma, double lo, double hi,
                           RandomStream& rng);

}  // namespace telecom
