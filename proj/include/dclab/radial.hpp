/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dclab/grid.hpp"
#include "dclab/source_terms.hpp"

namespace dclab {

/// Coefficient making Upsilon * rho^(4/(3-gamma)) an exact radial solution
/// of Delta_inf v = lambda v^gamma. Throws OutOfRange for gamma >= 3.
double upsilon(double lambda, double gamma);

/// Dead-core radial solution in B_r(center) with constant boundary value alpha:
/// v(x) = Upsilon * (|x - center| - R)_+^beta.
struct RadialDeadCoreSolution {
    double lambda = 1.0;
    double gamma = 1.0;
    double r = 1.0;
    double alpha = 0.0;
    Point center{};
    double upsilon = 0.0;
    double beta = 0.0;
    /// Plateau radius; negative when alpha exceeds Upsilon * r^beta.
    double R = 0.0;
    bool empty_plateau = false;

    static RadialDeadCoreSolution make(double lambda, double gamma, double r, double alpha,
                                       const Point& center = {});

    [[nodiscard]] double profile(double rho) const;
    [[nodiscard]] double at(const Point& x) const;
};

double exact_profile(const RadialDeadCoreSolution& sol, double rho);

struct PlateauRadius {
    double R = 0.0;
    bool empty = false;
};

PlateauRadius plateau_radius(const RadialDeadCoreSolution& sol);

/// Largest relative defect of (w')^2 w'' = lambda w^gamma for w = Upsilon rho^beta
/// over the samples, with analytic derivatives. Evaluated in log space so
/// that stiff exponents near gamma = 3 neither underflow nor overflow.
double verify_ansatz(double lambda, double gamma, std::span<const double> rho);

/// Radial profile v(rho) measured from the plateau edge, sampled at
/// increasing rho and interpolated by a monotone cubic in (log rho, log v).
class RadialProfile {
public:
    RadialProfile(std::vector<double> rho, std::vector<double> v);

    [[nodiscard]] const std::vector<double>& rho() const { return rho_; }
    [[nodiscard]] const std::vector<double>& v() const { return v_; }

    /// v at distance rho from the plateau edge; 0 for rho <= 0. Throws
    /// OutOfRange past the last sample.
    [[nodiscard]] double value_at(double rho) const;
    /// Inverse of value_at for v in [0, v_max].
    [[nodiscard]] double radius_at(double v) const;

    [[nodiscard]] double rho_max() const { return rho_.back(); }
    [[nodiscard]] double v_max() const { return v_.back(); }

    struct Interp;

private:
    std::vector<double> rho_, v_;
    std::shared_ptr<const Interp> interp_;
};

/// rho(v) = integral_0^v (4 F(s))^(-1/4) ds with F the antiderivative of f,
/// sampled at `steps` geometrically spaced values up to v_max.
/// Throws DegenerateSource when F vanishes on an interval or grows like
/// s^4 or faster at zero (no dead core can form).
RadialProfile quadrature_profile(const SourceTerm& f, double v_max, int steps);

}  // namespace dclab
