#include "telecom/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "telecom/errors.hpp"

namespace telecom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}
}  // namespace

RewardLaw RewardLaw::degenerate(double c) {
    require(c > 0.0, "degenerate reward needs c > 0");
    RewardLaw law;
    law.kind_ = Kind::degenerate;
    law.a_ = c;
    return law;
}

RewardLaw RewardLaw::uniform(double b) {
    require(b > 0.0, "uniform reward needs b > 0");
    RewardLaw law;
    law.kind_ = Kind::uniform;
    law.b_ = b;
    return law;
}

RewardLaw RewardLaw::pareto(double m, double x_min) {
    require(m > 0.0 && x_min > 0.0, "pareto reward needs m > 0 and x_min > 0");
    RewardLaw law;
    law.kind_ = Kind::pareto;
    law.m_ = m;
    law.a_ = x_min;
    return law;
}

RewardLaw RewardLaw::truncated_pareto(double m, double x_min, double x_max) {
    require(m > 0.0 && x_min > 0.0 && x_max > x_min,
            "truncated pareto needs m > 0 and 0 < x_min < x_max");
    RewardLaw law;
    law.kind_ = Kind::truncated_pareto;
    law.m_ = m;
    law.a_ = x_min;
    law.b_ = x_max;
    return law;
}

RewardLaw RewardLaw::discrete(std::vector<double> points, std::vector<double> weights) {
    require(!points.empty() && points.size() == weights.size(),
            "discrete reward needs matching nonempty points/weights");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });

    RewardLaw law;
    law.kind_ = Kind::discrete;
    double total = 0.0;
    for (std::size_t k : order) {
        require(points[k] > 0.0, "discrete reward points must be positive");
        require(weights[k] > 0.0, "discrete reward weights must be positive");
        if (!law.points_.empty()) {
            require(points[k] != law.points_.back(), "discrete reward points must be distinct");
        }
        law.points_.push_back(points[k]);
        law.weights_.push_back(weights[k]);
        total += weights[k];
    }
    double cum = 0.0;
    for (double& w : law.weights_) {
        w /= total;
        cum += w;
        law.cum_.push_back(cum);
    }
    law.cum_.back() = 1.0;
    return law;
}

double RewardLaw::tail(double x) const {
    if (x <= 0.0) return 1.0;
    switch (kind_) {
        case Kind::degenerate:
            return x <= a_ ? 1.0 : 0.0;
        case Kind::uniform:
            return x >= b_ ? 0.0 : (b_ - x) / b_;
        case Kind::pareto:
            return x <= a_ ? 1.0 : std::pow(x / a_, -m_);
        case Kind::truncated_pareto: {
            if (x <= a_) return 1.0;
            if (x >= b_) return 0.0;
            const double lo = std::pow(a_, -m_);
            const double hi = std::pow(b_, -m_);
            return (std::pow(x, -m_) - hi) / (lo - hi);
        }
        case Kind::discrete: {
            double s = 0.0;
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (points_[i] >= x) s += weights_[i];
            }
            return s;
        }
    }
    return 0.0;
}

double RewardLaw::truncated_moment(double p, double kappa) const {
    require(p >= 0.0, "truncated_moment needs p >= 0");
    switch (kind_) {
        case Kind::degenerate:
            return a_ >= kappa ? std::pow(a_, p) : 0.0;
        case Kind::uniform: {
            const double k = std::clamp(kappa, 0.0, b_);
            return (std::pow(b_, p + 1.0) - std::pow(k, p + 1.0)) / ((p + 1.0) * b_);
        }
        case Kind::pareto: {
            if (p >= m_) {
                throw DomainError("pareto moment E[R^p] infinite for p >= m");
            }
            const double k = std::max(kappa, a_);
            // m * x_min^m * k^(p-m) / (m - p)
            return m_ * std::pow(a_, m_) * std::pow(k, p - m_) / (m_ - p);
        }
        case Kind::truncated_pareto: {
            const double k = std::clamp(kappa, a_, b_);
            const double norm = m_ / (std::pow(a_, -m_) - std::pow(b_, -m_));
            if (p == m_) {
                return norm * std::log(b_ / k);
            }
            return norm * (std::pow(b_, p - m_) - std::pow(k, p - m_)) / (p - m_);
        }
        case Kind::discrete: {
            double s = 0.0;
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (points_[i] >= kappa) s += weights_[i] * std::pow(points_[i], p);
            }
            return s;
        }
    }
    return 0.0;
}

double RewardLaw::capped_moment(double p, double q, double w) const {
    if (w <= 0.0) return 0.0;
    // E[R^p min(w,R)^q] = w^q E[R^p 1{R>=w}] + E[R^(p+q) 1{R<w}]
    const double above = std::pow(w, q) * truncated_moment(p, w);
    const double below = truncated_moment(p + q, 0.0) - truncated_moment(p + q, w);
    return above + std::max(0.0, below);
}

double RewardLaw::sample(RandomStream& rng) const {
    switch (kind_) {
        case Kind::degenerate:
            return a_;
        case Kind::uniform:
            return b_ * rng.uniform();
        case Kind::pareto:
            return a_ * std::pow(rng.uniform_open(), -1.0 / m_);
        case Kind::truncated_pareto: {
            const double lo = std::pow(a_, -m_);
            const double hi = std::pow(b_, -m_);
            const double u = rng.uniform();
            return std::pow(lo - u * (lo - hi), -1.0 / m_);
        }
        case Kind::discrete: {
            const double u = rng.uniform();
            for (std::size_t i = 0; i < cum_.size(); ++i) {
                if (u < cum_[i]) return points_[i];
            }
            return points_.back();
        }
    }
    return a_;
}

double RewardLaw::ess_sup() const {
    switch (kind_) {
        case Kind::degenerate:
            return a_;
        case Kind::uniform:
            return b_;
        case Kind::pareto:
            return kInf;
        case Kind::truncated_pareto:
            return b_;
        case Kind::discrete:
            return points_.back();
    }
    return kInf;
}

bool RewardLaw::has_density() const {
    return kind_ == Kind::uniform || kind_ == Kind::pareto ||
           kind_ == Kind::truncated_pareto;
}

double RewardLaw::density(double x) const {
    switch (kind_) {
        case Kind::uniform:
            return (x > 0.0 && x < b_) ? 1.0 / b_ : 0.0;
        case Kind::pareto:
            return x >= a_ ? m_ * std::pow(a_, m_) * std::pow(x, -m_ - 1.0) : 0.0;
        case Kind::truncated_pareto: {
            if (x < a_ || x > b_) return 0.0;
            const double norm = m_ / (std::pow(a_, -m_) - std::pow(b_, -m_));
            return norm * std::pow(x, -m_ - 1.0);
        }
        default:
            throw DomainError("reward law has no density");
    }
}

std::pair<double, double> RewardLaw::density_support() const {
    switch (kind_) {
        case Kind::uniform:
            return {0.0, b_};
        case Kind::pareto:
            return {a_, kInf};
        case Kind::truncated_pareto:
            return {a_, b_};
        default:
            throw DomainError("reward law has no density");
    }
}

bool RewardLaw::has_atom_at(double x) const {
    if (kind_ == Kind::degenerate) return x == a_;
    if (kind_ == Kind::discrete) {
        return std::find(points_.begin(), points_.end(), x) != points_.end();
    }
    return false;
}

std::vector<std::pair<double, double>> RewardLaw::atoms() const {
    std::vector<std::pair<double, double>> out;
    if (kind_ == Kind::degenerate) {
        out.emplace_back(a_, 1.0);
    } else if (kind_ == Kind::discrete) {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            out.emplace_back(points_[i], weights_[i]);
        }
    }
    return out;
}

double RewardLaw::regular_variation_index() const {
    if (kind_ != Kind::pareto) {
        throw DomainError("reward tail is not regularly varying");
    }
    return m_;
}

std::string RewardLaw::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::degenerate:
            os << "degenerate(c=" << a_ << ")";
            break;
        case Kind::uniform:
            os << "uniform(0," << b_ << ")";
            break;
        case Kind::pareto:
            os << "pareto(m=" << m_ << ",x_min=" << a_ << ")";
            break;
        case Kind::truncated_pareto:
            os << "truncated_pareto(m=" << m_ << ",x_min=" << a_ << ",x_max=" << b_ << ")";
            break;
        case Kind::discrete:
            os << "discrete(";
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i) os << ",";
                os << points_[i] << ":" << weights_[i];
            }
            os << ")";
            break;
    }
    return os.str();
}

DurationLaw DurationLaw::pareto(double gamma, double u_min) {
    require(gamma > 1.0 && gamma < 2.0, "duration law needs gamma in (1,2)");
    require(u_min > 0.0, "duration law needs u_min > 0");
    return DurationLaw(gamma, u_min);
}

double DurationLaw::tail(double u) const {
    if (u <= u_min_) return 1.0;
    return std::pow(u / u_min_, -gamma_);
}

double DurationLaw::tail_constant() const { return std::pow(u_min_, gamma_); }

double DurationLaw::mean() const { return gamma_ * u_min_ / (gamma_ - 1.0); }

double DurationLaw::sample(RandomStream& rng) const {
    return u_min_ * std::pow(rng.uniform_open(), -1.0 / gamma_);
}

double DurationLaw::sample_exceeding(double a, RandomStream& rng) const {
    if (a <= u_min_) return sample(rng);
    return a * std::pow(rng.uniform_open(), -1.0 / gamma_);
}

double DurationLaw::sample_stationary_age(RandomStream& rng) const {
    // P(age <= u_min) = u_min / E[U] = (gamma-1)/gamma, uniform there;
    // beyond u_min the age tail is (a/u_min)^(1-gamma).
    if (rng.uniform() < (gamma_ - 1.0) / gamma_) {
        return u_min_ * rng.uniform();
    }
    return u_min_ * std::pow(rng.uniform_open(), -1.0 / (gamma_ - 1.0));
}

std::string DurationLaw::describe() const {
    std::ostringstream os;
    os << "pareto(gamma=" << gamma_ << ",u_min=" << u_min_ << ")";
    return os.str();
}

}  // namespace telecom
