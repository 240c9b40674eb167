#include "telecom/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "telecom/errors.hpp"

namespace telecom {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

// Solve mu_ell_tail(t, gamma, ell) = target on [lo, hi], target strictly
// above the atom weight so the solution sits in the density region.
double invert_mu_ell_tail(double t, double gamma, double target, double lo, double hi) {
    double a = lo, b = hi;
    // Leading-term initial guess t * ell^-gamma / gamma = target.
    double ell = std::pow(t / (gamma * target), 1.0 / gamma);
    if (!(ell > a && ell < b)) ell = std::sqrt(a * b);
    for (int it = 0; it < 80; ++it) {
        const double val = mu_ell_tail(t, gamma, ell) - target;
        if (val > 0.0) {
            a = ell;
        } else {
            b = ell;
        }
        const double deriv = mu_ell_density(t, gamma, std::min(ell, hi * (1.0 - 1e-16)));
        double next = ell + val / deriv;  // tail' = -density
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - ell) <= 1e-14 * ell) return next;
        ell = next;
    }
    return ell;
}

}  // namespace

double sample_ell_restricted(double t, double gamma, double lo, RandomStream& rng) {
    require(lo > 0.0 && lo <= t, "overlap sampler needs lo in (0, t]");
    const double mass = mu_ell_tail(t, gamma, lo);
    const double atom = mu_ell_atom(t, gamma);
    const double target = rng.uniform() * mass;
    if (target <= atom || lo >= t) return t;
    return invert_mu_ell_tail(t, gamma, target, lo, t);
}

double sample_ell_interval(double t, double gamma, double lo, double hi,
                           RandomStream& rng) {
    require(lo > 0.0 && hi > lo, "overlap sampler needs 0 < lo < hi");
    if (hi > t) return sample_ell_restricted(t, gamma, lo, rng);
    const double k_lo = mu_ell_tail(t, gamma, lo);
    const double k_hi = mu_ell_tail(t, gamma, hi);
    const double target = k_hi + (1.0 - rng.uniform()) * (k_lo - k_hi);
    return invert_mu_ell_tail(t, gamma, target, lo, hi);
}

// ---------------------------------------------------------------------------
// Pre-limit service system
// ---------------------------------------------------------------------------

ServiceSystemParams ServiceSystemParams::critical(double l, double a, DurationLaw duration,
                                                  RewardLaw reward) {
    require(l > 0.0 && a > 0.0, "critical construction needs L > 0 and a > 0");
    const double lambda = l * std::pow(a, duration.gamma() - 1.0);
    return ServiceSystemParams{lambda, a, l, duration, std::move(reward)};
}

ServiceSystemParams ServiceSystemParams::direct(double lambda, double a,
                                                DurationLaw duration, RewardLaw reward) {
    require(lambda >= 0.0 && a > 0.0, "direct construction needs lambda >= 0 and a > 0");
    return ServiceSystemParams{lambda, a, 0.0, duration, std::move(reward)};
}

double ServiceSystemParams::expected_sessions(double t_max) const {
    return lambda * (a * t_max + duration.mean());
}

std::vector<std::string> ServiceSystemParams::regime_warnings() const {
    std::vector<std::string> warnings;
    const double gamma = duration.gamma();
    double delta = 2.0;  // finite-variance rewards
    if (reward.has_regular_variation()) {
        delta = std::min(reward.regular_variation_index(), 2.0);
    }
    if (!(gamma < delta)) {
        warnings.push_back(
            "duration tail index gamma=" + std::to_string(gamma) +
            " is not lighter than the reward tail (delta=" + std::to_string(delta) +
            "); the limit regime assumption gamma < delta fails");
    }
    try {
        reward.moment(gamma);
    } catch (const DomainError&) {
        warnings.push_back("E[R^gamma] is infinite; the limit process is not defined");
    }
    return warnings;
}

std::vector<double> simulate_workload(const ServiceSystemParams& params,
                                      const std::vector<double>& t_grid,
                                      RandomStream& rng) {
    require(!t_grid.empty(), "simulate_workload needs a nonempty grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require(t_grid[i] >= 0.0 && t_grid[i] <= 1.0, "grid times must lie in [0,1]");
        if (i > 0) require(t_grid[i] >= t_grid[i - 1], "grid times must be sorted");
    }
    const double t_back = t_grid.back();
    if (params.expected_sessions(t_back) > params.session_cap) {
        throw ResourceError("expected session count exceeds the configured cap");
    }

    const std::size_t n_grid = t_grid.size();
    std::vector<double> tau(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) tau[i] = params.a * t_grid[i];
    std::vector<double> w(n_grid, 0.0);
    if (params.lambda == 0.0) return w;

    const DurationLaw& dur = params.duration;
    const RewardLaw& reward = params.reward;

    // Sessions already active at time zero (stationary start).
    const long long straddlers = rng.poisson(params.lambda * dur.mean());
    for (long long k = 0; k < straddlers; ++k) {
        const double age = dur.sample_stationary_age(rng);
        const double u = dur.sample_exceeding(age, rng);
        const double r = reward.sample(rng);
        const double residual = u - age;  // active time remaining past zero
        for (std::size_t i = 0; i < n_grid; ++i) {
            w[i] += r * std::min(residual, tau[i]);
        }
    }

    // Fresh arrivals on [0, a * t_back].
    const double horizon = tau.back();
    if (horizon <= 0.0) return w;
    const long long arrivals = rng.poisson(params.lambda * horizon);

    const double gamma = dur.gamma();
    const double u_min = dur.u_min();
    const double inv_gamma = 1.0 / gamma;
    const bool cbrt_path = gamma == 1.5;

    auto run_events = [&](auto&& draw_reward) {
        for (long long k = 0; k < arrivals; ++k) {
            const double s = horizon * rng.uniform();
            const double uu = rng.uniform_open();
            const double u = cbrt_path ? u_min / std::cbrt(uu * uu)
                                       : u_min * std::pow(uu, -inv_gamma);
            const double r = draw_reward();
            for (std::size_t i = 0; i < n_grid; ++i) {
                const double dt = tau[i] - s;
                if (dt > 0.0) w[i] += r * std::min(u, dt);
            }
        }
    };

    switch (reward.kind()) {
        case RewardLaw::Kind::uniform: {
            const double b = reward.ess_sup();
            run_events([&]() { return b * rng.uniform(); });
            break;
        }
        case RewardLaw::Kind::degenerate: {
            const double c = reward.ess_sup();
            run_events([&]() { return c; });
            break;
        }
        default:
            run_events([&]() { return reward.sample(rng); });
    }
    return w;
}

std::vector<double> simulate_z_a(const ServiceSystemParams& params,
                                 const std::vector<double>& t_grid, RandomStream& rng) {
    std::vector<double> w = simulate_workload(params, t_grid, rng);
    const double mean_rate =
        params.reward.moment(1.0) * params.duration.mean() * params.lambda;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = (w[i] - mean_rate * params.a * t_grid[i]) / params.a;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Split helpers
// ---------------------------------------------------------------------------

double default_epsilon(double v0, double gamma) {
    require(v0 > 0.0, "default_epsilon needs v0 > 0");
    // Neglected variance a 1e-6 fraction of the small-part variance scale:
    // (eps/v0)^(2-gamma) = 1e-6.
    return v0 * std::pow(1e-6, 1.0 / (2.0 - gamma));
}

double centering_et(const TailMeasure& m, double q, double v0) {
    require(q >= 0.0, "centering needs q >= 0");
    return q * m.mean_above(v0);
}

double exp_moment_interval(const TailMeasure& m, double q, double lo, double hi,
                           double lambda) {
    if (lambda == 0.0) return 1.0;
    if (lambda > 0.0) {
        // Cheap a-priori screens before the quadrature can overflow: the
        // integrand alone must stay representable, and the mass sitting in
        // the top half of the interval gives a lower bound on the exponent.
        if (lambda * hi > 690.0) {
            throw OverflowError("exponential moment exponent exceeds cap");
        }
        const double mid = std::max(lo, 0.5 * hi);
        const double mass_top = std::max(0.0, m.tail(mid) - m.tail(hi));
        const double lower_bound =
            q * (std::expm1(lambda * mid) - lambda * mid) * mass_top;
        if (lower_bound > 700.0) {
            throw OverflowError("exponential moment exponent exceeds cap");
        }
    }
    const double exponent = q * m.exp_integral(lambda, lo, hi);
    if (exponent > 700.0) {
        throw OverflowError("exponential moment exponent exceeds cap");
    }
    return std::exp(exponent);
}

double exp_moment_small(const TailMeasure& m, double q, double v0, double lambda) {
    return exp_moment_interval(m, q, 0.0, v0, lambda);
}

double chernoff_bound_small(const TailMeasure& m, double q, double v0, double y) {
    require(v0 > 0.0 && y > 0.0, "chernoff bound needs v0 > 0 and y > 0");
    const double g = m.gamma();
    const double moment = m.reward().moment(g);
    const double d3 = std::pow(2.0, g) * moment / (g * (g - 1.0));
    const double d4 = std::pow(2.0, g - 1.0) * moment / (g * (g - 1.0) * (2.0 - g));
    const double a = q * (d3 + 3.0 * d4) * m.t() * std::pow(v0, -g);
    const double ratio = y / v0;
    return std::exp(ratio) * std::pow(a * v0 / y, ratio);
}

// ---------------------------------------------------------------------------
// Big jumps
// ---------------------------------------------------------------------------

BigJumpSampler::BigJumpSampler(TailMeasure m, double v0)
    : measure_(std::move(m)), v0_(v0) {
    require(v0_ > 0.0, "big-jump sampler needs v0 > 0");
    mass_ = measure_.tail(v0_);
    w0_ = v0_ / measure_.t();
    if (mass_ <= 0.0) return;

    const RewardLaw& law = measure_.reward();
    if (!law.has_density()) {
        // Finite reward support: explicit component mixture.
        double cum = 0.0;
        for (const auto& [point, weight] : law.atoms()) {
            if (point < w0_) continue;
            cum += weight * mu_ell_tail(measure_.t(), measure_.gamma(), v0_ / point);
            comp_point_.push_back(point);
            comp_cum_.push_back(cum);
        }
        return;
    }

    // Bracketing grid for the tail-weighted reward marginal. residual(r) is
    // the measure mass contributed by rewards >= r, closed form via
    // truncated moments.
    const double g = measure_.gamma();
    const double t = measure_.t();
    auto residual = [&](double r) {
        const double rr = std::max(r, w0_);
        const double m_g = law.truncated_moment(g, rr);
        if (m_g == 0.0) return 0.0;
        const double m_g1 = law.truncated_moment(g - 1.0, rr);
        return t * std::pow(v0_, -g) / g * m_g +
               (2.0 - g) / ((g - 1.0) * g) * std::pow(v0_, 1.0 - g) * m_g1;
    };

    double r_hi = law.ess_sup();
    if (std::isinf(r_hi)) {
        r_hi = std::max(w0_, 1.0) * 2.0;
        while (residual(r_hi) > mass_ * 1e-16) r_hi *= 2.0;
    }
    const int n = 257;
    grid_r_.resize(n);
    grid_residual_.resize(n);
    const double log_lo = std::log(w0_);
    const double log_hi = std::log(r_hi);
    for (int i = 0; i < n; ++i) {
        grid_r_[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
        grid_residual_[i] = residual(grid_r_[i]);
    }
    grid_residual_[0] = mass_;
}

double BigJumpSampler::sample_reward(RandomStream& rng) const {
    const RewardLaw& law = measure_.reward();
    if (!law.has_density()) {
        const double target = rng.uniform() * mass_;
        for (std::size_t i = 0; i < comp_cum_.size(); ++i) {
            if (target < comp_cum_[i]) return comp_point_[i];
        }
        return comp_point_.back();
    }

    const double g = measure_.gamma();
    const double t = measure_.t();
    const double target = (1.0 - rng.uniform()) * mass_;  // residual level
    // Bracket on the precomputed grid (residual is nonincreasing in r).
    auto it = std::lower_bound(grid_residual_.begin(), grid_residual_.end(), target,
                               std::greater<double>());
    std::size_t hi_idx = static_cast<std::size_t>(it - grid_residual_.begin());
    if (hi_idx == 0) return grid_r_.front();
    if (hi_idx >= grid_r_.size()) hi_idx = grid_r_.size() - 1;
    double a = grid_r_[hi_idx - 1];
    double b = grid_r_[hi_idx];

    auto residual = [&](double r) {
        const double rr = std::max(r, w0_);
        const double m_g = law.truncated_moment(g, rr);
        if (m_g == 0.0) return 0.0;
        const double m_g1 = law.truncated_moment(g - 1.0, rr);
        return t * std::pow(v0_, -g) / g * m_g +
               (2.0 - g) / ((g - 1.0) * g) * std::pow(v0_, 1.0 - g) * m_g1;
    };

    double r = std::sqrt(a * b);
    for (int it2 = 0; it2 < 60; ++it2) {
        const double val = residual(r) - target;
        if (val > 0.0) {
            a = r;
        } else {
            b = r;
        }
        const double dens = law.density(r);
        double next;
        if (dens > 0.0) {
            const double deriv = mu_ell_tail(t, g, std::min(v0_ / r, t)) * dens;
            next = r + val / deriv;
        } else {
            next = 0.5 * (a + b);
        }
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - r) <= 1e-13 * r) return next;
        r = next;
    }
    return r;
}

double BigJumpSampler::sample(RandomStream& rng) const {
    require(mass_ > 0.0, "big-jump sampler has empty support");
    const double r = sample_reward(rng);
    const double lo = std::min(v0_ / r, measure_.t());
    const double ell = sample_ell_restricted(measure_.t(), measure_.gamma(), lo, rng);
    return r * ell;
}

std::vector<double> sample_big_jumps(const TailMeasure& m, double q, double v0,
                                     RandomStream& rng) {
    require(q >= 0.0, "sample_big_jumps needs q >= 0");
    const double mass = m.tail(v0);
    std::vector<double> out;
    if (mass <= 0.0 || q == 0.0) return out;
    BigJumpSampler sampler(m, v0);
    const long long n = rng.poisson(q * mass);
    out.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) out.push_back(sampler.sample(rng));
    return out;
}

// ---------------------------------------------------------------------------
// Jump-by-jump small part
// ---------------------------------------------------------------------------

SmallJumpSimulator::SmallJumpSimulator(TailMeasure m, double q, double epsilon, double v0,
                                       double expected_count_cap)
    : measure_(std::move(m)), q_(q), epsilon_(epsilon), v0_(v0) {
    require(q_ >= 0.0, "small-jump simulator needs q >= 0");
    require(epsilon_ > 0.0 && epsilon_ < v0_, "split needs 0 < epsilon < v0");

    const double support = measure_.upper_support();
    hi_eff_ = std::isinf(support) ? v0_ : std::min(v0_, support);
    tail_lo_ = measure_.tail(epsilon_);
    tail_hi_ = measure_.tail(v0_);
    expected_count_ = q_ * std::max(0.0, tail_lo_ - tail_hi_);
    if (expected_count_ > expected_count_cap) {
        throw ResourceError("expected small-jump count " + std::to_string(expected_count_) +
                            " exceeds the cap; raise epsilon or use the CDF table");
    }
    compensator_ = expected_count_ > 0.0 ? q_ * measure_.mean_integral(epsilon_, v0_) : 0.0;

    const double g = measure_.gamma();
    const double d2 =
        2.0 * q_ * measure_.reward().moment(g) / (g * (g - 1.0) * (2.0 - g));
    neglected_var_ = d2 * measure_.t() * std::pow(epsilon_, 2.0 - g);

    if (expected_count_ <= 0.0) return;

    const RewardLaw& law = measure_.reward();
    if (law.has_density()) {
        const int n = 513;
        grid_v_.resize(n);
        grid_tail_.resize(n);
        const double log_lo = std::log(epsilon_);
        const double log_hi = std::log(hi_eff_);
        for (int i = 0; i < n; ++i) {
            grid_v_[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
            grid_tail_[i] = measure_.tail(grid_v_[i]);
        }
        grid_v_.front() = epsilon_;
        grid_tail_.front() = tail_lo_;
    } else {
        double cum = 0.0;
        const double t = measure_.t();
        for (const auto& [point, weight] : law.atoms()) {
            const double a = epsilon_ / point;
            const double b = v0_ / point;
            if (a > t) continue;
            const double k_a = mu_ell_tail(t, g, a);
            const double k_b = b <= t ? mu_ell_tail(t, g, b) : 0.0;
            if (k_a - k_b <= 0.0) continue;
            cum += weight * (k_a - k_b);
            comp_point_.push_back(point);
            comp_cum_.push_back(cum);
        }
    }
}

double SmallJumpSimulator::sample_jump(RandomStream& rng) const {
    const RewardLaw& law = measure_.reward();
    const double t = measure_.t();
    const double g = measure_.gamma();
    if (!law.has_density()) {
        const double target = rng.uniform() * comp_cum_.back();
        std::size_t idx = comp_cum_.size() - 1;
        for (std::size_t i = 0; i < comp_cum_.size(); ++i) {
            if (target < comp_cum_[i]) {
                idx = i;
                break;
            }
        }
        const double point = comp_point_[idx];
        const double ell =
            sample_ell_interval(t, g, epsilon_ / point, v0_ / point, rng);
        return point * ell;
    }

    // Direct inversion of the restricted tail.
    const double target = tail_lo_ - rng.uniform() * (tail_lo_ - tail_hi_);
    auto it = std::lower_bound(grid_tail_.begin(), grid_tail_.end(), target,
                               std::greater<double>());
    std::size_t hi_idx = static_cast<std::size_t>(it - grid_tail_.begin());
    if (hi_idx == 0) return grid_v_.front();
    if (hi_idx >= grid_v_.size()) hi_idx = grid_v_.size() - 1;
    double a = grid_v_[hi_idx - 1];
    double b = grid_v_[hi_idx];
    double v = std::sqrt(a * b);
    for (int iter = 0; iter < 60; ++iter) {
        const double val = measure_.tail(v) - target;
        if (val > 0.0) {
            a = v;
        } else {
            b = v;
        }
        const double dens = measure_.density(v);
        double next = dens > 0.0 ? v + val / dens : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - v) <= 1e-13 * v) return next;
        v = next;
    }
    return v;
}

double SmallJumpSimulator::sample(RandomStream& rng) const {
    if (expected_count_ <= 0.0) return 0.0;
    const long long n = rng.poisson(expected_count_);
    double sum = 0.0;
    for (long long i = 0; i < n; ++i) sum += sample_jump(rng);
    return sum - compensator_;
}

// ---------------------------------------------------------------------------
// Exact small-part law via CF inversion
// ---------------------------------------------------------------------------

SmallPartLaw::SmallPartLaw(const TailMeasure& m, double q, double lo, double v0) {
    require(q > 0.0, "small-part law needs q > 0");
    require(lo >= 0.0 && v0 > lo, "small-part law needs 0 <= lo < v0");
    variance_ = q * m.variance_integral(lo, v0);
    v0_ = v0;
    {
        const double g = m.gamma();
        const double moment = m.reward().moment(g);
        const double d3 = std::pow(2.0, g) * moment / (g * (g - 1.0));
        const double d4 = std::pow(2.0, g - 1.0) * moment / (g * (g - 1.0) * (2.0 - g));
        chernoff_a_ = q * (d3 + 3.0 * d4) * m.t() * std::pow(v0, -g);
    }
    if (variance_ <= 0.0) return;
    sd_ = std::sqrt(variance_);

    auto cf = [&m, q, lo, v0](double theta) {
        const std::complex<double> e = m.cf_exponent_integral(theta, lo, v0);
        return std::polar(std::exp(q * e.real()), q * e.imag());
    };

    // Integration cutoff: walk out until |cf| <= e^-34, then add margin.
    double theta = 6.0 / sd_;
    auto log_mag = [&](double th) { return q * m.cf_exponent_integral(th, lo, v0).real(); };
    int guard = 0;
    while (log_mag(theta) > -34.0) {
        theta *= 1.3;
        if (++guard > 400) throw InversionError("small-part CF does not decay");
    }
    while (log_mag(1.2 * theta) > -30.0 && guard < 400) {
        theta *= 1.2;
        ++guard;
    }
    const double theta_max = 1.05 * theta;

    table_.emplace(cf, theta_max, 0.0, sd_);

    // The law is centered with known variance; use both as built-in checks.
    const double mean_err = std::abs(table_->mean_estimate());
    if (mean_err > std::max(2e-3 * sd_, 1e-12)) {
        throw InversionError("small-part CDF table failed the mean check");
    }
    const double var_est = table_->variance_estimate();
    if (std::abs(var_est - variance_) > 0.02 * variance_) {
        throw InversionError("small-part CDF table failed the variance check");
    }
    for (double xs : {-1.5, 0.5, 2.0}) {
        const double x = xs * sd_;
        const double direct = CdfTable::gil_pelaez(cf, x, theta_max);
        if (std::abs(direct - table_->cdf(x)) > 2e-4) {
            throw InversionError("small-part CDF table disagrees with pointwise inversion");
        }
    }
}

double SmallPartLaw::sample(RandomStream& rng) const {
    if (!table_) return 0.0;
    return table_->sample(rng);
}

double SmallPartLaw::cdf(double x) const {
    if (!table_) return x < 0.0 ? 0.0 : 1.0;
    return table_->cdf(x);
}

double SmallPartLaw::upper_tail(double x) const {
    if (!table_) return x <= 0.0 ? 1.0 : 0.0;
    double p = 1.0 - table_->cdf(x);
    if (x > chernoff_a_ * v0_) {
        const double ratio = x / v0_;
        const double bound = std::exp(ratio) * std::pow(chernoff_a_ * v0_ / x, ratio);
        p = std::min(p, bound);
    }
    return p;
}

double SmallPartLaw::outside_mass() const { return table_ ? table_->outside_mass() : 0.0; }

// ---------------------------------------------------------------------------
// Assembled simulator
// ---------------------------------------------------------------------------

namespace {

// Truncation level at which the expected jump count over [eps, v0) equals
// the budget; bisection on log(eps), tails are closed form.
double epsilon_for_count(const TailMeasure& m, double q, double v0, double budget) {
    const double target = budget / q + m.tail(v0);
    double lo = v0 * 1e-250, hi = v0 * (1.0 - 1e-12);
    if (m.tail(lo) <= target) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (m.tail(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace

TelecomSimulator::TelecomSimulator(TailMeasure m, SplitConfig split)
    : measure_(std::move(m)), split_(split), q_(measure_.params().q) {
    require(split_.v0 > 0.0, "split needs v0 > 0");
    const double gamma = measure_.gamma();
    epsilon_ = split_.epsilon > 0.0 ? split_.epsilon : default_epsilon(split_.v0, gamma);
    require(epsilon_ < split_.v0, "split needs epsilon < v0");

    centering_ = q_ * measure_.mean_above(split_.v0);
    const double big_mass = measure_.tail(split_.v0);
    big_mean_ = q_ * big_mass;
    if (big_mass > 0.0) big_.emplace(measure_, split_.v0);

    SplitConfig::SmallMethod method = split_.method;
    bool allow_fallback = false;
    if (method == SplitConfig::SmallMethod::automatic) {
        const double count = q_ * std::max(0.0, measure_.tail(epsilon_) - big_mass);
        if (count <= split_.count_budget) {
            method = SplitConfig::SmallMethod::jumps;
        } else {
            method = SplitConfig::SmallMethod::cdf_table;
            allow_fallback = true;
        }
    }
    if (method == SplitConfig::SmallMethod::cdf_table) {
        try {
            small_law_.emplace(measure_, q_, 0.0, split_.v0);
            neglected_var_ = 0.0;
            return;
        } catch (const Error&) {
            if (!allow_fallback) throw;
            // Near-degenerate intensities defeat the CF table (the cutoff
            // frequency explodes); the jump route with a count-budget
            // truncation is accurate there because counts scale with Q.
            small_law_.reset();
            epsilon_ = std::min(split_.v0 * 0.5,
                                std::max(epsilon_, epsilon_for_count(measure_, q_, split_.v0,
                                                                     split_.count_budget)));
        }
    }
    small_jumps_.emplace(measure_, q_, epsilon_, split_.v0);
    neglected_var_ = small_jumps_->neglected_variance_bound();
}

TelecomSample TelecomSimulator::sample(RandomStream& rng) const {
    TelecomSample s{};
    s.small_sum = small_law_ ? small_law_->sample(rng) : small_jumps_->sample(rng);
    s.big_jump_count = big_mean_ > 0.0 ? rng.poisson(big_mean_) : 0;
    double big = 0.0;
    for (long long i = 0; i < s.big_jump_count; ++i) big += big_->sample(rng);
    s.big_sum = big;
    s.centering = centering_;
    s.value = s.small_sum + s.big_sum - s.centering;
    s.neglected_variance_bound = neglected_var_;
    return s;
}

double simulate_small_part(const TailMeasure& m, double q, const SplitConfig& split,
                           RandomStream& rng) {
    const double eps =
        split.epsilon > 0.0 ? split.epsilon : default_epsilon(split.v0, m.gamma());
    SmallJumpSimulator sim(m, q, eps, split.v0);
    return sim.sample(rng);
}

TelecomSample simulate_telecom(const TailMeasure& m, const SplitConfig& split,
                               RandomStream& rng) {
    TelecomSimulator sim(m, split);
    return sim.sample(rng);
}

}  // namespace telecom
