#include "telecom/lde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "telecom/errors.hpp"
#include "telecom/parallel.hpp"
#include "telecom/quadrature.hpp"
#include "telecom/stats.hpp"

namespace telecom {

namespace {

constexpr double kZ95 = 1.959963984540054;

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

struct MomentsBlock {
    Moments moments;
    void merge(const MomentsBlock& other) { moments.merge(other.moments); }
};

struct HitBlock {
    long long hits = 0;
    void merge(const HitBlock& other) { hits += other.hits; }
};

}  // namespace

double moderate_asymptotic(double q, double gamma, double reward_moment_gamma, double t,
                           double rho) {
    require(q > 0.0 && gamma > 1.0 && gamma < 2.0, "moderate constant needs Q > 0, gamma in (1,2)");
    require(reward_moment_gamma > 0.0 && t > 0.0 && rho > 0.0,
            "moderate constant needs positive moment, t, rho");
    return q * reward_moment_gamma / gamma * t * std::pow(rho, -gamma);
}

double intermediate_constant_1(double gamma, const RewardLaw& reward, double kappa) {
    require(gamma > 1.0 && gamma < 2.0, "intermediate constant needs gamma in (1,2)");
    require(kappa > 0.0, "intermediate constant needs kappa > 0");
    if (reward.tail(kappa) <= 0.0) {
        throw DomainError("P(R >= kappa) = 0: single-session constant vanishes; "
                          "the multi-session regime applies");
    }
    if (reward.has_atom_at(kappa)) {
        throw DomainError("reward law has an atom at kappa; constant undefined here");
    }
    const double m_g = reward.truncated_moment(gamma, kappa);
    const double m_g1 = reward.truncated_moment(gamma - 1.0, kappa);
    return std::pow(kappa, -gamma) / gamma * m_g +
           (2.0 - gamma) * std::pow(kappa, 1.0 - gamma) / ((gamma - 1.0) * gamma) * m_g1;
}

SessionCount required_sessions(const RewardLaw& reward, double kappa) {
    require(kappa > 0.0, "required_sessions needs kappa > 0");
    SessionCount sc;
    sc.kappa = kappa;

    const double sup = reward.ess_sup();
    if (std::isinf(sup)) {
        sc.n = 1;
        sc.bounded = false;
        return sc;
    }
    sc.bounded = true;

    const double ratio = kappa / sup;  // sessions needed at full rate
    const bool atom_at_top = reward.has_atom_at(sup);
    const double nearest = std::round(ratio);
    const bool integer_ratio = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio);

    double zeta_lo;  // feasible zeta interval is (zeta_lo, 1), endpoints per case
    if (atom_at_top) {
        sc.n = integer_ratio ? static_cast<int>(nearest)
                             : static_cast<int>(std::ceil(ratio));
        zeta_lo = std::max(0.0, sc.n - ratio);
    } else {
        if (integer_ratio) {
            throw CriticalCaseError(
                "kappa is an exact multiple of the reward supremum; only zeta = 1 "
                "would satisfy the session-count condition");
        }
        sc.n = static_cast<int>(std::floor(ratio)) + 1;
        zeta_lo = sc.n - ratio;
    }
    sc.zeta = 0.5 * (zeta_lo + 1.0);
    sc.eta = (1.0 - sc.zeta) * kappa / (sc.n - sc.zeta);
    sc.s_star = sc.n > 1 ? (sc.n - 1) * sc.eta / (kappa - sc.eta) : 0.0;
    sc.sharp_cutoff = ratio - (sc.n - 1);
    return sc;
}

double uniform_pair_exceedance(double a1, double a2, double c) {
    require(a1 > 0.0 && a2 > 0.0, "uniform_pair_exceedance needs positive scales");
    if (c <= 0.0) return 1.0;
    // P(a1 X + a2 Y <= c) by the box-corner formula, then complement.
    auto sq = [](double x) { return x > 0.0 ? x * x : 0.0; };
    const double below =
        (sq(c) - sq(c - a1) - sq(c - a2) + sq(c - a1 - a2)) / (2.0 * a1 * a2);
    return std::clamp(1.0 - below, 0.0, 1.0);
}

namespace {

// P(sum s_m R_m >= kappa) in closed form where available.
class InnerProbability {
public:
    InnerProbability(const RewardLaw& reward, double kappa, int n)
        : reward_(reward), kappa_(kappa), n_(n) {
        switch (reward.kind()) {
            case RewardLaw::Kind::uniform:
                closed_ = (n <= 2);
                break;
            case RewardLaw::Kind::degenerate:
            case RewardLaw::Kind::discrete:
                closed_ = true;
                break;
            default:
                closed_ = (n == 1);
        }
    }

    bool closed_form() const { return closed_; }

    double closed_value(const std::vector<double>& s) const {
        if (n_ == 1) return reward_.tail(kappa_ / s[0]);
        if (reward_.kind() == RewardLaw::Kind::uniform) {
            const double b = reward_.ess_sup();
            return uniform_pair_exceedance(s[0] * b, s[1] * b, kappa_);
        }
        // Discrete rewards: enumerate atom combinations.
        double total = 0.0;
        enumerate(s, 0, 0.0, 1.0, total);
        return total;
    }

    double sampled_value(const std::vector<double>& s, RandomStream& rng) const {
        double sum = 0.0;
        for (int m = 0; m < n_; ++m) sum += s[static_cast<std::size_t>(m)] * reward_.sample(rng);
        return sum >= kappa_ ? 1.0 : 0.0;
    }

private:
    void enumerate(const std::vector<double>& s, int depth, double acc, double w,
                   double& total) const {
        if (depth == n_) {
            if (acc >= kappa_) total += w;
            return;
        }
        for (const auto& [point, weight] : reward_.atoms()) {
            enumerate(s, depth + 1, acc + s[static_cast<std::size_t>(depth)] * point,
                      w * weight, total);
        }
    }

    const RewardLaw& reward_;
    double kappa_;
    int n_;
    bool closed_;
};

// Check P(R_1 + ... + R_n = kappa) = 0 for laws with atoms.
bool atom_sum_hits(const RewardLaw& reward, double kappa, int n) {
    const auto atoms = reward.atoms();
    if (atoms.empty()) return false;
    std::function<bool(int, double)> walk = [&](int depth, double acc) {
        if (acc > kappa * (1.0 + 1e-12)) return false;
        if (depth == n) return std::abs(acc - kappa) <= 1e-12 * std::max(1.0, kappa);
        for (const auto& [point, weight] : atoms) {
            (void)weight;
            if (walk(depth + 1, acc + point)) return true;
        }
        return false;
    };
    return walk(0, 0.0);
}

double din_quadrature(double gamma, const RewardLaw& reward, double kappa, int n,
                      double s_lo) {
    const NuMeasure nu(gamma);
    const double atom = nu.atom_weight();
    InnerProbability inner(reward, kappa, n);
    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-14;

    const double lo = std::max(s_lo, 1e-12);
    if (n == 1) {
        auto f = [&](double s) { return inner.closed_value({s}) * nu.density(s); };
        double value = atom * inner.closed_value({1.0});
        if (lo < 1.0) value += integrate_or_throw(f, lo, 1.0, opts);
        return value;
    }

    // n = 2: atom-atom, two atom-density cross terms (symmetric), and the
    // density-density block.
    auto cross = [&](double s) { return inner.closed_value({s, 1.0}) * nu.density(s); };
    auto block_outer = [&](double s1) {
        auto inner_fn = [&](double s2) {
            return inner.closed_value({s1, s2}) * nu.density(s2);
        };
        return integrate_or_throw(inner_fn, lo, 1.0, opts) * nu.density(s1);
    };
    double value = atom * atom * inner.closed_value({1.0, 1.0});
    if (lo < 1.0) {
        value += 2.0 * atom * integrate_or_throw(cross, lo, 1.0, opts);
        QuadratureOptions outer_opts;
        outer_opts.rel_tol = 1e-8;
        outer_opts.abs_tol = 1e-12;
        value += integrate_or_throw(block_outer, lo, 1.0, outer_opts);
    }
    return value / 2.0;  // 1/n! for n = 2
}

}  // namespace

ConstantEstimate intermediate_constant_n(double gamma, const RewardLaw& reward,
                                         double kappa, int n, const DInOptions& opts) {
    require(gamma > 1.0 && gamma < 2.0, "constant needs gamma in (1,2)");
    require(n >= 1, "constant needs n >= 1");

    SessionCount sc = required_sessions(reward, kappa);
    if (sc.n != n) {
        throw DomainError("session count mismatch: kappa requires n = " +
                          std::to_string(sc.n));
    }
    if (atom_sum_hits(reward, kappa, n)) {
        throw DomainError("P(R_1+...+R_n = kappa) > 0: constant not covered");
    }

    InnerProbability inner(reward, kappa, n);
    const bool quad_possible = inner.closed_form() && n <= 2;

    DInOptions::Method method = opts.method;
    if (method == DInOptions::Method::automatic) {
        method = quad_possible ? DInOptions::Method::quadrature
                               : DInOptions::Method::monte_carlo;
    }

    ConstantEstimate out;
    if (method == DInOptions::Method::quadrature) {
        if (!quad_possible) {
            throw DomainError("no deterministic quadrature path for this configuration");
        }
        const double s_lo = sc.bounded ? std::max(sc.sharp_cutoff, 0.0) : 0.0;
        out.value = din_quadrature(gamma, reward, kappa, n, s_lo);
        out.ci_low = out.ci_high = out.value;
        out.method = "quadrature";
        return out;
    }

    // Monte Carlo with the restricted overlap sampler.
    const double s_min = std::max(sc.s_star, sc.sharp_cutoff);
    if (!(s_min > 0.0)) {
        throw DomainError("cannot establish a positive lower cutoff for the "
                          "overlap sampler (unbounded reward)");
    }
    const NuMeasure nu(gamma);
    const double scale = std::pow(nu.tail(s_min), n);
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;

    MomentsBlock agg = run_blocks<MomentsBlock>(
        static_cast<std::uint64_t>(opts.replicates), opts.threads,
        [&](std::uint64_t i, MomentsBlock& blk) {
            RandomStream rng(opts.seed, i);
            std::vector<double> s(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m) {
                s[static_cast<std::size_t>(m)] = nu.sample_restricted(s_min, rng);
            }
            const double value = inner.closed_form() ? inner.closed_value(s)
                                                     : inner.sampled_value(s, rng);
            blk.moments.add(value);
        });

    const double factor = scale / factorial;
    out.value = agg.moments.mean() * factor;
    const Interval ci =
        mean_interval(agg.moments.mean(), agg.moments.variance(), opts.replicates);
    out.ci_low = std::max(0.0, ci.low * factor);
    out.ci_high = ci.high * factor;
    out.replicates = opts.replicates;
    out.method = "monte-carlo";
    return out;
}

double ultra_constant(double gamma, double m) {
    require(gamma > 1.0 && gamma < 2.0, "ultra constant needs gamma in (1,2)");
    require(m > gamma, "ultra constant needs tail index m > gamma");
    return m * (m - 1.0) /
           (gamma * (gamma - 1.0) * (m - gamma + 1.0) * (m - gamma));
}

double ultra_asymptotic(double q, double gamma, const RewardLaw& reward, double t,
                        double rho) {
    require(q > 0.0 && t > 0.0 && rho > 0.0, "ultra asymptotic needs positive Q, t, rho");
    const double m = reward.regular_variation_index();
    return q * ultra_constant(gamma, m) * std::pow(t, -(gamma - 1.0)) *
           reward.tail(rho / t);
}

TailEstimate tail_estimate_crude(const TailMeasure& m, const SplitConfig& split,
                                 double rho, const EstimatorOptions& opts) {
    require(opts.replicates >= 1, "crude estimator needs replicates >= 1");
    SplitConfig cfg = split;
    cfg.method = opts.small_method;
    const TelecomSimulator sim(m, cfg);

    HitBlock agg = run_blocks<HitBlock>(
        static_cast<std::uint64_t>(opts.replicates), opts.threads,
        [&](std::uint64_t i, HitBlock& blk) {
            RandomStream rng(opts.seed, i);
            if (sim.sample(rng).value >= rho) ++blk.hits;
        });

    TailEstimate est;
    est.p_hat = static_cast<double>(agg.hits) / static_cast<double>(opts.replicates);
    const Interval ci = wilson_interval(agg.hits, opts.replicates);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    est.replicates = opts.replicates;
    est.method = "crude";
    est.seed = opts.seed;
    est.neglected_variance_bound = sim.neglected_variance_bound();
    est.small_outside_mass = sim.small_law() ? sim.small_law()->outside_mass() : 0.0;
    return est;
}

TailEstimate tail_estimate_conditional(const TailMeasure& m, const SplitConfig& split,
                                       double rho, const EstimatorOptions& opts) {
    require(opts.replicates >= 1, "conditional estimator needs replicates >= 1");
    const double q = m.params().q;
    const double v0 = split.v0;

    // The smoothed estimator needs the small-part CDF, so the table route is
    // used regardless of the split's sampling method.
    const SmallPartLaw small(m, q, 0.0, v0);
    const double centering = q * m.mean_above(v0);
    const double big_mass = m.tail(v0);
    const double mu0 = q * big_mass;

    std::optional<BigJumpSampler> big;
    if (big_mass > 0.0) big.emplace(m, v0);

    const int hard_cap = 25;
    int n_start = opts.n_max;
    if (n_start <= 0) {
        const double kappa_equiv = rho / m.t();
        if (std::isinf(m.reward().ess_sup()) || kappa_equiv <= 0.0) {
            n_start = 2;
        } else {
            try {
                n_start = required_sessions(m.reward(), kappa_equiv).n + 1;
            } catch (const CriticalCaseError&) {
                n_start = 3;
            }
            n_start = std::min(n_start, hard_cap);
        }
    }

    std::vector<double> weights;   // Poisson pmf at mu0
    std::vector<double> probs;     // conditional branch estimates
    std::vector<double> variances; // per-branch sampling variance of the mean

    auto poisson_pmf = [&](int k) {
        if (mu0 == 0.0) return k == 0 ? 1.0 : 0.0;
        double log_p = -mu0 + k * std::log(mu0) - std::lgamma(k + 1.0);
        return std::exp(log_p);
    };

    auto run_branch = [&](int n_jumps) {
        if (n_jumps == 0) {
            probs.push_back(small.upper_tail(rho + centering));
            variances.push_back(0.0);
            return;
        }
        MomentsBlock agg = run_blocks<MomentsBlock>(
            static_cast<std::uint64_t>(opts.replicates), opts.threads,
            [&](std::uint64_t i, MomentsBlock& blk) {
                RandomStream rng(opts.seed,
                                 substream_id(static_cast<std::uint64_t>(n_jumps), i));
                double jump_sum = 0.0;
                for (int j = 0; j < n_jumps; ++j) jump_sum += big->sample(rng);
                blk.moments.add(small.upper_tail(rho + centering - jump_sum));
            });
        probs.push_back(agg.moments.mean());
        variances.push_back(agg.moments.variance() / static_cast<double>(opts.replicates));
    };

    int n_max = 0;
    double p_hat = 0.0, var = 0.0, weight_sum = 0.0;
    for (int n = 0; n <= hard_cap; ++n) {
        if (n > 0 && mu0 == 0.0) break;
        run_branch(n);
        weights.push_back(poisson_pmf(n));
        p_hat += weights.back() * probs.back();
        var += weights.back() * weights.back() * variances.back();
        weight_sum += weights.back();
        n_max = n;
        const double remainder = std::max(0.0, 1.0 - weight_sum);
        // Escalate until the unexplored Poisson mass is negligible (1% of
        // the estimate), well inside the 10% error contract below.
        if (n >= n_start && remainder <= std::max(0.01 * p_hat, 1e-16)) break;
    }
    const double remainder = std::max(0.0, 1.0 - weight_sum);
    if (remainder > std::max(0.1 * p_hat, 1e-16)) {
        throw ConfigError("Poisson remainder bound exceeds 10% of the estimate even at "
                          "the branch cap; the split point v0 is too low for this rho");
    }

    TailEstimate est;
    est.p_hat = p_hat;
    const double half = kZ95 * std::sqrt(var);
    est.ci_low = std::max(0.0, p_hat - half);
    est.ci_high = std::min(1.0, p_hat + half + remainder);
    est.replicates = opts.replicates;
    est.method = "conditional";
    est.seed = opts.seed;
    est.remainder_bound = remainder;
    est.n_max = n_max;
    est.small_outside_mass = small.outside_mass();
    est.branch_weights = std::move(weights);
    est.branch_probs = std::move(probs);
    return est;
}

}  // namespace telecom
