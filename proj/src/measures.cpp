#include "telecom/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "telecom/errors.hpp"
#include "telecom/quadrature.hpp"

namespace telecom {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 1.0 && gamma < 2.0)) {
        throw DomainError("gamma must lie in the open interval (1,2)");
    }
}

// (2-gamma) / ((gamma-1) * gamma)
inline double c2(double gamma) { return (2.0 - gamma) / ((gamma - 1.0) * gamma); }

}  // namespace

TelecomParams::TelecomParams(double q_, double gamma_) : q(q_), gamma(gamma_) {
    check_gamma(gamma);
    if (!(q > 0.0)) throw DomainError("intensity multiplier Q must be positive");
}

TelecomParams TelecomParams::from_critical(double intensity_l, double c_u, double gamma_) {
    if (!(intensity_l > 0.0) || !(c_u > 0.0)) {
        throw DomainError("critical construction needs L > 0 and c_U > 0");
    }
    return TelecomParams(intensity_l * c_u * gamma_, gamma_);
}

double kernel_ell(double s, double u, double t) {
    if (!(u > 0.0) || !(t > 0.0)) return 0.0;
    const double lo = std::max(s, 0.0);
    const double hi = std::min(s + u, t);
    return hi > lo ? hi - lo : 0.0;
}

double mu_ell_tail(double t, double gamma, double ell0) {
    check_gamma(gamma);
    if (!(t > 0.0)) throw DomainError("mu_ell_tail needs t > 0");
    if (!(ell0 > 0.0)) throw DomainError("mu_ell_tail needs ell0 > 0");
    if (ell0 > t) return 0.0;
    return t * std::pow(ell0, -gamma) / gamma + c2(gamma) * std::pow(ell0, 1.0 - gamma);
}

double mu_ell_atom(double t, double gamma) {
    check_gamma(gamma);
    if (!(t > 0.0)) throw DomainError("mu_ell_atom needs t > 0");
    return std::pow(t, 1.0 - gamma) / ((gamma - 1.0) * gamma);
}

double mu_ell_density(double t, double gamma, double ell) {
    check_gamma(gamma);
    if (!(t > 0.0)) throw DomainError("mu_ell_density needs t > 0");
    if (!(ell > 0.0 && ell < t)) throw DomainError("mu_ell_density needs ell in (0,t)");
    return t * std::pow(ell, -1.0 - gamma) + (2.0 - gamma) / gamma * std::pow(ell, -gamma);
}

NuMeasure::NuMeasure(double gamma) : gamma_(gamma) { check_gamma(gamma); }

double NuMeasure::atom_weight() const { return 1.0 / (gamma_ * (gamma_ - 1.0)); }

double NuMeasure::density(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("nu density needs s in (0,1)");
    return std::pow(s, -gamma_ - 1.0) + (2.0 - gamma_) / gamma_ * std::pow(s, -gamma_);
}

double NuMeasure::tail(double s0) const {
    if (!(s0 > 0.0 && s0 <= 1.0)) throw DomainError("nu tail needs s0 in (0,1]");
    return mu_ell_tail(1.0, gamma_, s0);
}

double NuMeasure::sample_restricted(double s_min, RandomStream& rng) const {
    const double total = tail(s_min);
    const double atom = atom_weight();
    double u = rng.uniform() * total;
    if (u <= atom) return 1.0;
    // Invert the continuous mass above s: C(s) = tail(s) - atom, decreasing
    // from total - atom at s_min to 0 at 1.
    const double target = u - atom;
    double lo = s_min, hi = 1.0;
    // Newton iteration on C(s) = target with bisection safeguard.
    double s = std::pow(gamma_ * (target + 1.0 / gamma_), -1.0 / gamma_);
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double c = tail(s) - atom - target;
        if (c > 0.0) {
            lo = s;
        } else {
            hi = s;
        }
        const double step = c / density(s);
        double next = s + step;  // C' = -density
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) < 1e-14 * s) return next;
        s = next;
    }
    return s;
}

TailMeasure::TailMeasure(double t, TelecomParams params, RewardLaw reward)
    : t_(t), params_(params), reward_(std::move(reward)) {
    if (!(t_ > 0.0)) throw DomainError("TailMeasure needs t > 0");
}

double TailMeasure::tail(double v) const {
    if (!(v > 0.0)) throw DomainError("tail mass needs v > 0");
    const double g = params_.gamma;
    const double w = v / t_;
    const double m_g = reward_.truncated_moment(g, w);
    if (m_g == 0.0) return 0.0;
    const double m_g1 = reward_.truncated_moment(g - 1.0, w);
    return t_ * std::pow(v, -g) / g * m_g + c2(g) * std::pow(v, 1.0 - g) * m_g1;
}

double TailMeasure::tail_by_quadrature(double v) const {
    if (!(v > 0.0)) throw DomainError("tail mass needs v > 0");
    const double g = params_.gamma;
    // Integrate mu_ell_tail(t, gamma, v/r) against the reward law; only
    // rewards r >= v/t contribute.
    const double r_lo = v / t_;
    double total = 0.0;
    for (const auto& [point, weight] : reward_.atoms()) {
        if (point >= r_lo) total += weight * mu_ell_tail(t_, g, v / point);
    }
    if (reward_.has_density()) {
        const auto [sup_lo, sup_hi] = reward_.density_support();
        const double a = std::max(r_lo, sup_lo);
        const double b = sup_hi;
        auto f = [&](double r) {
            const double d = reward_.density(r);
            return d > 0.0 ? d * mu_ell_tail(t_, g, v / r) : 0.0;
        };
        QuadratureOptions opts;
        opts.rel_tol = 1e-10;
        if (std::isinf(b)) {
            total += integrate_to_infinity(f, std::max(a, 1e-300), opts);
        } else if (b > a) {
            total += integrate_or_throw(f, a, b, opts);
        }
    }
    return total;
}

double TailMeasure::tail_bound(double v) const {
    if (!(v > 0.0)) throw DomainError("tail bound needs v > 0");
    const double g = params_.gamma;
    const double moment = reward_.moment(g);  // throws when infinite
    return moment / (g * (g - 1.0)) * t_ * std::pow(v, -g);
}

double TailMeasure::mean_above(double v0) const {
    if (!(v0 > 0.0)) throw DomainError("mean_above needs v0 > 0");
    const double g = params_.gamma;
    const double w0 = v0 / t_;
    const double m_g = reward_.truncated_moment(g, w0);
    if (m_g == 0.0) return 0.0;
    const double m_g1 = reward_.truncated_moment(g - 1.0, w0);
    // integral of tail over [v0, inf):
    //   t^(2-gamma)/(gamma(gamma-1)) * w0^(1-gamma) * (M_g(w0) - w0 M_(g-1)(w0))
    const double tail_integral = std::pow(t_, 2.0 - g) / (g * (g - 1.0)) *
                                 std::pow(w0, 1.0 - g) * (m_g - w0 * m_g1);
    return v0 * tail(v0) + tail_integral;
}

double TailMeasure::mean_integral(double lo, double hi) const {
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("mean_integral needs 0 < lo <= hi");
    if (hi == lo) return 0.0;
    return mean_above(lo) - mean_above(hi);
}

double TailMeasure::variance_integral(double lo, double hi) const {
    if (!(lo >= 0.0 && hi >= lo && std::isfinite(hi))) {
        throw DomainError("variance_integral needs 0 <= lo <= hi < inf");
    }
    if (hi == lo) return 0.0;
    const double g = params_.gamma;
    // J(V) = int_0^V v * tail(v) dv in closed form via capped reward moments.
    auto first_moment_of_tail = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double w = v / t_;
        const double a = reward_.capped_moment(g, 2.0 - g, w) / (2.0 - g);
        const double b = reward_.capped_moment(g - 1.0, 3.0 - g, w) / (3.0 - g);
        return std::pow(t_, 3.0 - g) * (a / g + c2(g) * b);
    };
    const double boundary_lo = lo > 0.0 ? lo * lo * tail(lo) : 0.0;
    const double boundary_hi = hi * hi * tail(hi);
    return boundary_lo - boundary_hi +
           2.0 * (first_moment_of_tail(hi) - first_moment_of_tail(lo));
}

double TailMeasure::exp_integral(double lambda, double lo, double hi) const {
    if (!(lo >= 0.0 && hi > lo)) throw DomainError("exp_integral needs 0 <= lo < hi");
    auto g_fn = [&](double v) { return std::expm1(lambda * v) - lambda * v; };
    const double boundary = (lo > 0.0 ? g_fn(lo) * tail(lo) : 0.0) - g_fn(hi) * tail(hi);
    auto weight = [&](double v) { return lambda * std::expm1(lambda * v); };
    return boundary + integrate_tail_weighted(weight, lo, hi);
}

std::complex<double> TailMeasure::cf_exponent_integral(double theta, double lo,
                                                       double hi) const {
    if (!(lo >= 0.0 && hi > lo)) throw DomainError("cf_exponent_integral needs 0 <= lo < hi");
    if (theta == 0.0) return {0.0, 0.0};
    auto g_re = [&](double v) { return std::cos(theta * v) - 1.0; };
    auto g_im = [&](double v) { return std::sin(theta * v) - theta * v; };
    double re = (lo > 0.0 ? g_re(lo) * tail(lo) : 0.0) - g_re(hi) * tail(hi);
    double im = (lo > 0.0 ? g_im(lo) * tail(lo) : 0.0) - g_im(hi) * tail(hi);
    auto w_re = [&](double v) { return -theta * std::sin(theta * v); };
    auto w_im = [&](double v) { return theta * (std::cos(theta * v) - 1.0); };
    re += integrate_tail_weighted(w_re, lo, hi);
    im += integrate_tail_weighted(w_im, lo, hi);
    return {re, im};
}

double TailMeasure::integrate_tail_weighted(const std::function<double(double)>& weight,
                                            double lo, double hi) const {
    // integral of weight(v) * tail(v) over [lo, hi], split at point masses and
    // with a power substitution soaking up the v^(-gamma) blowup at 0.
    double cap = hi;
    if (!std::isinf(upper_support())) cap = std::min(hi, upper_support());
    if (cap <= lo) return 0.0;

    std::vector<double> cuts;
    cuts.push_back(lo);
    for (const auto& [pos, w] : atoms()) {
        (void)w;
        if (pos > lo && pos < cap) cuts.push_back(pos);
    }
    cuts.push_back(cap);
    std::sort(cuts.begin(), cuts.end());

    QuadratureOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-14;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (b <= a) continue;
        auto f = [&](double v) { return weight(v) * tail(v); };
        if (a == 0.0) {
            // v = b * w^p with p = 2/(2-gamma) turns the endpoint into a zero.
            const double p = 2.0 / (2.0 - params_.gamma);
            auto sub = [&](double w) {
                const double v = b * std::pow(w, p);
                if (v <= 0.0) return 0.0;
                return f(v) * b * p * std::pow(w, p - 1.0);
            };
            total += integrate_or_throw(sub, 0.0, 1.0, opts);
        } else {
            total += integrate_or_throw(f, a, b, opts);
        }
    }
    return total;
}

double TailMeasure::density(double v) const {
    if (!(v > 0.0)) throw DomainError("density needs v > 0");
    const double g = params_.gamma;
    const double w = v / t_;
    if (!reward_.has_density()) {
        throw DomainError("reward law has no density; measure is not absolutely continuous");
    }
    const double m_g = reward_.truncated_moment(g, w);
    if (m_g == 0.0) return 0.0;
    const double m_g1 = reward_.truncated_moment(g - 1.0, w);
    const double smear = std::pow(t_, -g) * reward_.density(w) / ((g - 1.0) * g);
    return t_ * std::pow(v, -g - 1.0) * m_g +
           (2.0 - g) / g * std::pow(v, -g) * m_g1 + smear;
}

std::vector<std::pair<double, double>> TailMeasure::atoms() const {
    std::vector<std::pair<double, double>> out;
    const double atom = mu_ell_atom(t_, params_.gamma);
    for (const auto& [point, weight] : reward_.atoms()) {
        out.emplace_back(t_ * point, atom * weight);
    }
    return out;
}

double TailMeasure::upper_support() const { return t_ * reward_.ess_sup(); }

}  // namespace telecom
