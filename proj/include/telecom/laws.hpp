#pragma once

#include <string>
#include <utility>
#include <vector>

#include "telecom/rng.hpp"

namespace telecom {

// Parametric reward law (the per-session transmission rate R). All shipped
// variants have closed-form tails, truncated moments and inverse CDFs, which
// keeps rare-event estimates free of sampling bias.
class RewardLaw {
public:
    enum class Kind { degenerate, uniform, pareto, truncated_pareto, discrete };

    static RewardLaw degenerate(double c);
    static RewardLaw uniform(double b);
    static RewardLaw pareto(double m, double x_min);
    static RewardLaw truncated_pareto(double m, double x_min, double x_max);
    // Point masses; weights are normalized to sum to one.
    static RewardLaw discrete(std::vector<double> points, std::vector<double> weights);

    Kind kind() const { return kind_; }

    // P(R >= x).
    double tail(double x) const;

    // E[R^p 1{R >= kappa}]; kappa = 0 gives the full moment. Throws
    // DomainError when the moment is infinite (Pareto with p >= m).
    double truncated_moment(double p, double kappa) const;
    double moment(double p) const { return truncated_moment(p, 0.0); }

    // E[R^p * min(w, R)^q]; closed form assembled from truncated moments.
    double capped_moment(double p, double q, double w) const;

    // Inverse-CDF draw.
    double sample(RandomStream& rng) const;

    // Essential supremum; +infinity for the Pareto variant.
    double ess_sup() const;

    bool has_density() const;
    double density(double x) const;  // 0 outside the support
    // Interval carrying the absolutely continuous mass (density variants).
    std::pair<double, double> density_support() const;

    bool has_atom_at(double x) const;
    // Point masses (empty for continuous variants).
    std::vector<std::pair<double, double>> atoms() const;

    bool has_regular_variation() const { return kind_ == Kind::pareto; }
    // Tail index m of a regularly varying tail; throws otherwise.
    double regular_variation_index() const;

    std::string describe() const;

private:
    RewardLaw() = default;

    Kind kind_ = Kind::degenerate;
    // Parameter slots, meaning depends on kind: degenerate {a_}; uniform {b_};
    // pareto {m_, a_}; truncated_pareto {m_, a_, b_}.
    double a_ = 1.0;
    double b_ = 0.0;
    double m_ = 0.0;
    std::vector<double> points_;
    std::vector<double> weights_;   // normalized
    std::vector<double> cum_;       // cumulative weights for sampling
};

// Pareto service-duration law: P(U > u) = (u/u_min)^(-gamma) for u >= u_min,
// with tail index gamma in (1,2).
class DurationLaw {
public:
    static DurationLaw pareto(double gamma, double u_min);

    double gamma() const { return gamma_; }
    double u_min() const { return u_min_; }

    double tail(double u) const;  // P(U > u)
    double tail_constant() const; // c_U = u_min^gamma
    double mean() const;          // gamma * u_min / (gamma - 1)

    double sample(RandomStream& rng) const;

    // U conditioned on U > a.
    double sample_exceeding(double a, RandomStream& rng) const;

    // Stationary age: density P(U > a) / E[U] on (0, inf). Used to seed the
    // sessions that straddle the start of an observation window.
    double sample_stationary_age(RandomStream& rng) const;

    std::string describe() const;

private:
    DurationLaw(double gamma, double u_min) : gamma_(gamma), u_min_(u_min) {}
    double gamma_;
    double u_min_;
};

}  // namespace telecom
