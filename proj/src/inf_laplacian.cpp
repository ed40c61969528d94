/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/inf_laplacian.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace dclab {

namespace {

void check_node(const DomainMask& mask, NodeId node)
{
    if (node >= mask.grid().node_count() || mask.label(node) != NodeLabel::Interior)
        throw Error(ErrorCode::InvalidArgument, "operator evaluated at a non-interior node", node);
}

void check_compatible(const ScalarField& u, const DomainMask& mask)
{
    require(u.grid() == mask.grid(), ErrorCode::InvalidArgument, "field and mask live on different grids");
}

SlopeExtremes scan(std::span<const double> u, NodeId node, const std::vector<Ray>& rays)
{
    SlopeExtremes ex;
    ex.s_plus = -std::numeric_limits<double>::infinity();
    ex.s_minus = std::numeric_limits<double>::infinity();
    const double u0 = u[node];
    for (const Ray& r : rays) {
        const double s = (u[static_cast<std::ptrdiff_t>(node) + r.flat_offset] - u0) / r.length;
        if (s > ex.s_plus) {
            ex.s_plus = s;
            ex.ell_plus = r.length;
            ex.dir_plus = r.offset;
        }
        if (s < ex.s_minus) {
            ex.s_minus = s;
            ex.ell_minus = r.length;
            ex.dir_minus = r.offset;
        }
    }
    return ex;
}

}  // namespace

InfLaplacianStencil::InfLaplacianStencil(const DomainMask& mask, const StencilSet& stencil)
    : mask_(&mask), rays_(signed_rays(stencil, mask.grid())), gradient_(stencil.gradient)
{
    check_rays_readable(mask, stencil);
    std::map<int, LengthClass> by_norm;
    for (int i = 0; i < static_cast<int>(rays_.size()); ++i) {
        LengthClass& c = by_norm[rays_[i].norm_sq];
        c.length = rays_[i].length;
        c.rays.push_back(i);
    }
    for (auto& [norm, c] : by_norm) classes_.push_back(std::move(c));
}

SlopeExtremes InfLaplacianStencil::extremes(std::span<const double> u, NodeId node) const
{
    return scan(u, node, rays_);
}

double InfLaplacianStencil::value(std::span<const double> u, NodeId node) const
{
    const SlopeExtremes ex = scan(u, node, rays_);
    return inf_laplacian_from_extremes(ex.s_plus, ex.s_minus, ex.ell_plus, ex.ell_minus, gradient_);
}

std::pair<double, double> InfLaplacianStencil::operator_range(std::span<const double> u, NodeId node) const
{
    const SlopeExtremes ex = scan(u, node, rays_);
    const double eta = 1e-10 * std::max({1.0, std::abs(ex.s_plus), std::abs(ex.s_minus)});
    double lp_min = ex.ell_plus, lp_max = ex.ell_plus;
    double lm_min = ex.ell_minus, lm_max = ex.ell_minus;
    const double u0 = u[node];
    for (const Ray& r : rays_) {
        const double s = (u[static_cast<std::ptrdiff_t>(node) + r.flat_offset] - u0) / r.length;
        if (s >= ex.s_plus - eta) {
            lp_min = std::min(lp_min, r.length);
            lp_max = std::max(lp_max, r.length);
        }
        if (s <= ex.s_minus + eta) {
            lm_min = std::min(lm_min, r.length);
            lm_max = std::max(lm_max, r.length);
        }
    }
    const double a = inf_laplacian_from_extremes(ex.s_plus, ex.s_minus, lp_min, lm_min, gradient_);
    const double b = inf_laplacian_from_extremes(ex.s_plus, ex.s_minus, lp_max, lm_max, gradient_);
    return {std::min(a, b), std::max(a, b)};
}

double InfLaplacianStencil::node_residual(std::span<const double> u, NodeId node, const SourceTerm& f) const
{
    const auto [lo, hi] = operator_range(u, node);
    return source_mismatch(lo, hi, u[node], f, node);
}

SlopeExtremes slope_extremes(const ScalarField& u, const DomainMask& mask, NodeId node,
                             const StencilSet& stencil)
{
    check_compatible(u, mask);
    check_node(mask, node);
    const GridSpec& grid = mask.grid();
    const auto rays = signed_rays(stencil, grid);
    const Index idx = grid.unflat(node);
    for (const Ray& r : rays) {
        const Index nb{idx[0] + r.offset[0], idx[1] + r.offset[1], idx[2] + r.offset[2]};
        if (!grid.contains(nb) || !mask.readable(grid.flat(nb)))
            throw Error(ErrorCode::MaskedRay, "stencil ray hits an exterior node", node);
    }
    return scan(u.values(), node, rays);
}

double discrete_inf_laplacian(const ScalarField& u, const DomainMask& mask, NodeId node,
                              const StencilSet& stencil)
{
    const SlopeExtremes ex = slope_extremes(u, mask, node, stencil);
    return inf_laplacian_from_extremes(ex.s_plus, ex.s_minus, ex.ell_plus, ex.ell_minus, stencil.gradient);
}

ScalarField apply_operator(const ScalarField& u, const DomainMask& mask, const StencilSet& stencil)
{
    check_compatible(u, mask);
    const InfLaplacianStencil op(mask, stencil);
    ScalarField out(u.grid(), 0.0);
    for (NodeId n : mask.interior()) out[n] = op.value(u.values(), n);
    return out;
}

double residual(const ScalarField& u, const DomainMask& mask, const SourceTerm& f,
                const StencilSet& stencil)
{
    check_compatible(u, mask);
    const InfLaplacianStencil op(mask, stencil);
    double worst = 0.0;
    for (NodeId n : mask.interior()) {
        if (!(u[n] >= 0.0) && f.family() != SourceFamily::Zero)
            throw Error(ErrorCode::Domain, "negative field value where the source is evaluated", n);
        worst = std::max(worst, op.node_residual(u.values(), n, f));
    }
    return worst;
}

}  // namespace dclab
