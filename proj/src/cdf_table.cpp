#include "telecom/cdf_table.hpp"

#include <algorithm>
#include <cmath>

#include "telecom/errors.hpp"
#include "telecom/quadrature.hpp"

namespace telecom {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 15 nodes/weights on [-1,1]; same constants as quadrature.cpp.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};

constexpr double kWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

struct Node {
    double theta;
    double weight;  // quadrature weight, panel scaling included
    double psi_re;
    double psi_im;
};

}  // namespace

void CdfTable::build(const CharacteristicFn& cf, double theta_max, Options opts) {
    const double x_scale = std::max(std::abs(x_.front()), std::abs(x_.back()));
    const double panel_width =
        std::min(theta_max / opts.min_panels, opts.oscillation_budget / (x_scale + 1e-300));
    const int panels = static_cast<int>(std::ceil(theta_max / panel_width));

    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(panels) * 15);
    for (int p = 0; p < panels; ++p) {
        const double lo = theta_max * p / panels;
        const double hi = theta_max * (p + 1) / panels;
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        for (int i = 0; i < 8; ++i) {
            for (int sign = (i == 7 ? 1 : -1); sign <= 1; sign += 2) {
                const double theta = c + sign * h * kNodes[i];
                const std::complex<double> psi = cf(theta);
                nodes.push_back(Node{theta, kWeights[i] * h, psi.real(), psi.imag()});
                if (i == 7) break;
            }
        }
    }

    f_.resize(x_.size());
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double x = x_[k];
        double sum = 0.0;
        for (const Node& n : nodes) {
            // Im[e^(-i theta x) psi(theta)] / theta
            const double s = std::sin(n.theta * x);
            const double c = std::cos(n.theta * x);
            sum += n.weight * (c * n.psi_im - s * n.psi_re) / n.theta;
        }
        f_[k] = 0.5 - sum / kPi;
    }

    // Monotonize and clip.
    double running = 0.0;
    for (double& v : f_) {
        running = std::max(running, std::clamp(v, 0.0, 1.0));
        v = running;
    }
    outside_mass_ = f_.front() + (1.0 - f_.back());
}

CdfTable::CdfTable(const CharacteristicFn& cf, double theta_max, double mean, double sd)
    : CdfTable(cf, theta_max, mean, sd, Options{}) {}

CdfTable::CdfTable(const CharacteristicFn& cf, double theta_max, double mean, double sd,
                   Options opts) {
    if (!(theta_max > 0.0) || !(sd > 0.0)) {
        throw DomainError("CdfTable needs theta_max > 0 and sd > 0");
    }
    double lo = mean - opts.range_sigmas * sd;
    double hi = mean + opts.range_sigmas * sd;

    for (int round = 0;; ++round) {
        const int n = opts.x_points;
        x_.resize(n);
        for (int i = 0; i < n; ++i) {
            x_[i] = lo + (hi - lo) * i / (n - 1);
        }
        build(cf, theta_max, opts);

        const double left_mass = f_.front();
        const double right_mass = 1.0 - f_.back();
        if ((left_mass <= opts.end_mass && right_mass <= opts.end_mass) ||
            round >= opts.max_expansions) {
            break;
        }
        if (left_mass > opts.end_mass) lo = mean - 1.6 * (mean - lo);
        if (right_mass > opts.end_mass) hi = mean + 1.6 * (hi - mean);
    }
}

double CdfTable::cdf(double x) const {
    if (x <= x_.front()) return f_.front();
    if (x >= x_.back()) return f_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return f_[i] + t * (f_[i + 1] - f_[i]);
}

double CdfTable::quantile(double u) const {
    const double uu = std::clamp(u, f_.front(), f_.back());
    auto it = std::lower_bound(f_.begin(), f_.end(), uu);
    if (it == f_.begin()) return x_.front();
    if (it == f_.end()) return x_.back();
    const std::size_t i = static_cast<std::size_t>(it - f_.begin());
    const double df = f_[i] - f_[i - 1];
    if (df <= 0.0) return x_[i];
    const double t = (uu - f_[i - 1]) / df;
    return x_[i - 1] + t * (x_[i] - x_[i - 1]);
}

double CdfTable::mean_estimate() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        m += (f_[i + 1] - f_[i]) * 0.5 * (x_[i] + x_[i + 1]);
    }
    // Mass clamped at the ends sits on the boundary points.
    m += f_.front() * x_.front() + (1.0 - f_.back()) * x_.back();
    return m;
}

double CdfTable::variance_estimate() const {
    const double m = mean_estimate();
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double mid = 0.5 * (x_[i] + x_[i + 1]) - m;
        const double w = f_[i + 1] - f_[i];
        // Within-cell spread of the piecewise-uniform law.
        const double cell = x_[i + 1] - x_[i];
        v += w * (mid * mid + cell * cell / 12.0);
    }
    v += f_.front() * (x_.front() - m) * (x_.front() - m);
    v += (1.0 - f_.back()) * (x_.back() - m) * (x_.back() - m);
    return v;
}

double CdfTable::gil_pelaez(const CharacteristicFn& cf, double x, double theta_max) {
    auto integrand = [&](double theta) {
        const std::complex<double> psi = cf(theta);
        return (std::cos(theta * x) * psi.imag() - std::sin(theta * x) * psi.real()) / theta;
    };
    const double phase = std::abs(x) * theta_max;
    const int segments = std::clamp(static_cast<int>(phase / kPi) + 1, 8, 100000);
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 1e-11 / segments;
    opts.max_panels = 400;
    double sum = 0.0;
    for (int s = 0; s < segments; ++s) {
        const double lo = theta_max * s / segments;
        const double hi = theta_max * (s + 1) / segments;
        QuadratureResult r = integrate(integrand, lo, hi, opts);
        if (!r.converged) throw InversionError("pointwise Gil-Pelaez failed");
        sum += r.value;
    }
    return std::clamp(0.5 - sum / kPi, 0.0, 1.0);
}

}  // namespace telecom
