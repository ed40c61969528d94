/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/radial.hpp"

#include <algorithm>
#include <cmath>

#include "interp.hpp"
#include "quadrature.hpp"

namespace dclab {

namespace {

double log_upsilon(double lambda, double gamma)
{
    return (std::log(lambda) + 4.0 * std::log(3.0 - gamma) - std::log(64.0) - std::log1p(gamma)) / (3.0 - gamma);
}

void check_exponent(double lambda, double gamma)
{
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
    require(gamma >= 0.0, ErrorCode::InvalidArgument, "gamma must be non-negative");
    require(gamma < 3.0, ErrorCode::OutOfRange, "gamma >= 3 has no dead-core coefficient");
}

}  // namespace

double upsilon(double lambda, double gamma)
{
    check_exponent(lambda, gamma);
    return std::exp(log_upsilon(lambda, gamma));
}

RadialDeadCoreSolution RadialDeadCoreSolution::make(double lambda, double gamma, double r, double alpha,
                                                    const Point& center)
{
    check_exponent(lambda, gamma);
    require(r > 0.0, ErrorCode::InvalidArgument, "ball radius must be positive");
    require(alpha >= 0.0, ErrorCode::InvalidArgument, "boundary value must be non-negative");
    RadialDeadCoreSolution s;
    s.lambda = lambda;
    s.gamma = gamma;
    s.r = r;
    s.alpha = alpha;
    s.center = center;
    s.upsilon = dclab::upsilon(lambda, gamma);
    s.beta = 4.0 / (3.0 - gamma);
    s.R = r - std::pow(alpha / s.upsilon, 1.0 / s.beta);
    s.empty_plateau = s.R < 0.0;
    return s;
}

double RadialDeadCoreSolution::profile(double rho) const
{
    require(rho >= 0.0, ErrorCode::InvalidArgument, "radius must be non-negative");
    const double d = rho - R;
    return d > 0.0 ? upsilon * std::pow(d, beta) : 0.0;
}

double RadialDeadCoreSolution::at(const Point& x) const { return profile(distance(x, center)); }

double exact_profile(const RadialDeadCoreSolution& sol, double rho) { return sol.profile(rho); }

PlateauRadius plateau_radius(const RadialDeadCoreSolution& sol) { return {sol.R, sol.R < 0.0}; }

double verify_ansatz(double lambda, double gamma, std::span<const double> rho)
{
    check_exponent(lambda, gamma);
    const double log_u = std::log(upsilon(lambda, gamma));
    const double beta = 4.0 / (3.0 - gamma);
    double worst = 0.0;
    for (double x : rho) {
        require(x > 0.0, ErrorCode::InvalidArgument, "ansatz samples must be positive");
        const double lx = std::log(x);
        // (w')^2 w'' = Upsilon^3 beta^3 (beta - 1) rho^(3 beta - 4); lambda w^gamma = lambda Upsilon^gamma rho^(beta gamma).
        const double lhs = 3.0 * log_u + 3.0 * std::log(beta) + std::log(beta - 1.0) + (3.0 * beta - 4.0) * lx;
        const double rhs = std::log(lambda) + gamma * log_u + beta * gamma * lx;
        worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
    }
    return worst;
}

// ---------------------------------------------------------------------------

struct RadialProfile::Interp {
    detail::MonotoneCubic forward;  // log rho -> log v
    detail::MonotoneCubic inverse;  // log v -> log rho
};

RadialProfile::RadialProfile(std::vector<double> rho, std::vector<double> v) : rho_(std::move(rho)), v_(std::move(v))
{
    require(rho_.size() == v_.size() && rho_.size() >= 3, ErrorCode::InvalidArgument,
            "radial profile needs matching samples");
    const std::size_t first = rho_.front() == 0.0 ? 1 : 0;
    if (first == 1)
        require(v_.front() == 0.0, ErrorCode::InvalidArgument, "profile must vanish at the plateau edge");
    std::vector<double> lr, lv;
    for (std::size_t i = first; i < rho_.size(); ++i) {
        require(rho_[i] > 0.0 && v_[i] > 0.0 && std::isfinite(v_[i]), ErrorCode::InvalidArgument,
                "profile samples must be positive past the plateau edge");
        if (i > first)
            require(rho_[i] > rho_[i - 1] && v_[i] > v_[i - 1], ErrorCode::InvalidArgument,
                    "profile samples must increase strictly");
        lr.push_back(std::log(rho_[i]));
        lv.push_back(std::log(v_[i]));
    }
    interp_ = std::make_shared<const Interp>(Interp{{lr, lv}, {lv, lr}});
}

double RadialProfile::value_at(double rho) const
{
    if (rho <= 0.0) return 0.0;
    require(rho <= rho_.back() * (1.0 + 1e-12), ErrorCode::OutOfRange, "radius beyond the sampled profile");
    return std::exp(interp_->forward(std::log(std::min(rho, rho_.back()))));
}

double RadialProfile::radius_at(double v) const
{
    require(v >= 0.0, ErrorCode::InvalidArgument, "profile value must be non-negative");
    if (v == 0.0) return 0.0;
    require(v <= v_.back() * (1.0 + 1e-12), ErrorCode::OutOfRange, "value beyond the sampled profile");
    return std::exp(interp_->inverse(std::log(std::min(v, v_.back()))));
}

RadialProfile quadrature_profile(const SourceTerm& f, double v_max, int steps)
{
    require(!f.is_spatial(), ErrorCode::InvalidArgument, "radial profile needs a non-spatial source");
    require(v_max > 0.0 && std::isfinite(v_max), ErrorCode::InvalidArgument, "v_max must be positive");
    require(steps >= 1000, ErrorCode::InvalidArgument, "radial profile needs at least 1000 steps");
    require(f(0.0) == 0.0, ErrorCode::InvalidArgument, "source must vanish at zero");
    require(check_monotone(f, v_max, 1000).pass, ErrorCode::InvalidArgument, "source must be non-decreasing");

    // Leading power of F near zero from a least-squares fit over [1e-10, 1e-6].
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int fit_points = 9;
    for (int j = 0; j < fit_points; ++j) {
        const double s = std::pow(10.0, -10.0 + 0.5 * j);
        const double F = f.antiderivative(s);
        if (!(F > 0.0)) raise(ErrorCode::DegenerateSource, "source vanishes identically near zero");
        const double x = std::log(s), y = std::log(F);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double p = (fit_points * sxy - sx * sy) / (fit_points * sxx - sx * sx);
    if (!(p < 4.0 - 1e-6))
        raise(ErrorCode::DegenerateSource, "antiderivative vanishes to order >= 4 at zero; no finite plateau edge");
    const double q = 4.0 / (4.0 - p);

    // s = sigma^q removes the s^(-p/4) singularity of the integrand.
    auto integrand = [&](double sigma) {
        const double s = std::pow(sigma, q);
        const double F = f.antiderivative(s);
        if (!(F > 0.0)) raise(ErrorCode::DegenerateSource, "antiderivative vanishes on an interval");
        return q * std::pow(sigma, q - 1.0) * std::pow(4.0 * F, -0.25);
    };

    const double decades = std::min(50.0, std::log10(v_max) + 250.0);
    const double v_lo = v_max * std::pow(10.0, -decades);
    std::vector<double> rho(steps + 2), v(steps + 2);
    rho[0] = v[0] = 0.0;
    double sigma_prev = std::pow(v_lo, 1.0 / q);
    double acc = detail::integrate(integrand, 0.0, sigma_prev, 8);
    v[1] = v_lo;
    rho[1] = acc;
    for (int i = 1; i <= steps; ++i) {
        const double vi = v_lo * std::pow(10.0, decades * i / steps);
        const double sigma = std::pow(vi, 1.0 / q);
        acc += detail::integrate(integrand, sigma_prev, sigma, 1);
        sigma_prev = sigma;
        v[i + 1] = i == steps ? v_max : vi;
        rho[i + 1] = acc;
    }
    return RadialProfile(std::move(rho), std::move(v));
}

}  // namespace dclab
