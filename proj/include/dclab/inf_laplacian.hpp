/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "dclab/grid.hpp"
#include "dclab/source_terms.hpp"

namespace dclab {

/// Extremal directional slopes (u(x + he) - u(x)) / (h|e|) over all signed
/// stencil rays at one node.
struct SlopeExtremes {
    double s_plus = 0.0;
    double s_minus = 0.0;
    double ell_plus = 0.0;
    double ell_minus = 0.0;
    Index dir_plus{};
    Index dir_minus{};
};

SlopeExtremes slope_extremes(const ScalarField& u, const DomainMask& mask, NodeId node,
                             const StencilSet& stencil);

/// Wide-stencil surrogate of sum_ij u_i u_j u_ij:
///   G^2 * D2,  G = (s+ - s-)/2,  D2 = 2 (s+ + s-) / (l+ + l-).
double discrete_inf_laplacian(const ScalarField& u, const DomainMask& mask, NodeId node,
                              const StencilSet& stencil);

/// Operator value on every Interior node; zero elsewhere.
ScalarField apply_operator(const ScalarField& u, const DomainMask& mask, const StencilSet& stencil);

/// max over Interior of the distance between the operator value and f(u).
/// Both sides are read as intervals where they jump: f(0) as [0, f(0+)] for
/// the gamma = 0 power, and the operator as the span over near-tied
/// extremal rays of different length (see operator_range).
double residual(const ScalarField& u, const DomainMask& mask, const SourceTerm& f,
                const StencilSet& stencil);

/// Precomputed ray table for one (mask, stencil) pair. All hot loops in
/// the solver and analysis go through this; the free functions above are
/// thin wrappers.
class InfLaplacianStencil {
public:
    InfLaplacianStencil(const DomainMask& mask, const StencilSet& stencil);

    [[nodiscard]] const std::vector<Ray>& rays() const { return rays_; }
    [[nodiscard]] const DomainMask& mask() const { return *mask_; }

    [[nodiscard]] SlopeExtremes extremes(std::span<const double> u, NodeId node) const;
    [[nodiscard]] double value(std::span<const double> u, NodeId node) const;

    /// [lower, upper] semicontinuous envelope of the operator at `node`:
    /// the span of G^2 * D2 over every pair of rays whose slopes lie within
    /// a relative 1e-10 of s+ and s-. Equals [value, value] away from ties.
    [[nodiscard]] std::pair<double, double> operator_range(std::span<const double> u, NodeId node) const;

    /// Interval mismatch of residual().
    [[nodiscard]] double node_residual(std::span<const double> u, NodeId node, const SourceTerm& f) const;

    /// Rays grouped by |e|^2; within a group rays keep their global order.
    struct LengthClass {
        double length = 0.0;
        std::vector<int> rays;  // indices into rays()
    };
    [[nodiscard]] const std::vector<LengthClass>& classes() const { return classes_; }
    [[nodiscard]] GradientSurrogate gradient() const { return gradient_; }

private:
    const DomainMask* mask_;
    std::vector<Ray> rays_;
    std::vector<LengthClass> classes_;
    GradientSurrogate gradient_ = GradientSurrogate::HalfSpread;
};

/// G^2 * D2 from extremal slopes. The half-spread G makes the value decrease
/// in s- when s+ + 3 s- > 0 (and in s+ when 3 s+ + s- < 0), which happens
/// near critical points. The monotone surrogate switches to |s+ + s-| exactly
/// there; the branches agree on the switching lines, and smooth fields with
/// a nonzero gradient stay on the half-spread branch as h -> 0.
inline double inf_laplacian_from_extremes(double s_plus, double s_minus, double ell_plus, double ell_minus,
                                          GradientSurrogate gradient = GradientSurrogate::HalfSpread)
{
    double g = 0.5 * (s_plus - s_minus);
    if (gradient == GradientSurrogate::Monotone) g = std::max(g, std::abs(s_plus + s_minus));
    const double d2 = 2.0 * (s_plus + s_minus) / (ell_plus + ell_minus);
    return g * g * d2;
}

/// Distance between the operator interval [op_lo, op_hi] and the value set
/// of f at t (an interval at a jump).
inline double source_mismatch(double op_lo, double op_hi, double t, const SourceTerm& f, NodeId node)
{
    double f_lo = f.eval_unchecked(t, node);
    double f_hi = f_lo;
    if (t == 0.0) f_hi = std::max(f_lo, f.limit_at_zero(node));
    if (op_hi < f_lo) return f_lo - op_hi;
    if (op_lo > f_hi) return op_lo - f_hi;
    return 0.0;
}

inline double source_mismatch(double op, double t, const SourceTerm& f, NodeId node)
{
    return source_mismatch(op, op, t, f, node);
}

}  // namespace dclab
