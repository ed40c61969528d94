/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dclab {

std::size_t GridSpec::node_count() const
{
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(cells[a] + 1);
    return n;
}

std::array<std::ptrdiff_t, 3> GridSpec::strides() const
{
    std::array<std::ptrdiff_t, 3> s{0, 0, 0};
    std::ptrdiff_t stride = 1;
    for (int a = dim - 1; a >= 0; --a) {
        s[a] = stride;
        stride *= cells[a] + 1;
    }
    return s;
}

NodeId GridSpec::flat(const Index& idx) const
{
    NodeId id = 0;
    for (int a = 0; a < dim; ++a) id = id * static_cast<NodeId>(cells[a] + 1) + static_cast<NodeId>(idx[a]);
    return id;
}

Index GridSpec::unflat(NodeId id) const
{
    Index idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        const auto n = static_cast<NodeId>(cells[a] + 1);
        idx[a] = static_cast<int>(id % n);
        id /= n;
    }
    return idx;
}

bool GridSpec::contains(const Index& idx) const
{
    for (int a = 0; a < dim; ++a)
        if (idx[a] < 0 || idx[a] > cells[a]) return false;
    return true;
}

Point GridSpec::coord(const Index& idx) const
{
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = origin[a] + idx[a] * h[a];
    return p;
}

Point GridSpec::coord(NodeId id) const
{
    return coord(unflat(id));
}

GridSpec make_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                   std::span<const int> cells)
{
    require(dim >= 1 && dim <= 3, ErrorCode::InvalidGeometry, "grid dimension must be 1, 2 or 3");
    require(origin.size() == static_cast<std::size_t>(dim) && extent.size() == origin.size() &&
                cells.size() == origin.size(),
            ErrorCode::InvalidGeometry, "origin, extent and cells need one entry per axis");
    GridSpec g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        require(std::isfinite(origin[a]), ErrorCode::InvalidGeometry, "non-finite grid origin");
        require(std::isfinite(extent[a]) && extent[a] > 0.0, ErrorCode::InvalidGeometry,
                "grid extent must be positive");
        require(cells[a] >= 4, ErrorCode::InvalidGeometry, "grid needs at least 4 cells per axis");
        g.origin[a] = origin[a];
        g.extent[a] = extent[a];
        g.cells[a] = cells[a];
        g.h[a] = extent[a] / cells[a];
    }
    for (int a = 1; a < dim; ++a) {
        if (std::abs(g.h[a] - g.h[0]) > 1e-12 * g.h[0]) {
            std::ostringstream msg;
            msg << "unequal spacing across axes (" << g.h[0] << " vs " << g.h[a] << ")";
            raise(ErrorCode::InvalidGeometry, msg.str());
        }
        g.h[a] = g.h[0];
    }
    return g;
}

double distance(const Point& a, const Point& b)
{
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridSpec grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill)
{
}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    require(values_.size() == grid_.node_count(), ErrorCode::InvalidArgument,
            "field value count does not match the grid node count");
    check_finite();
}

ScalarField ScalarField::sample(const GridSpec& grid, const std::function<double(const Point&)>& fn)
{
    ScalarField f(grid);
    for (NodeId n = 0; n < f.size(); ++n) f[n] = fn(grid.coord(n));
    f.check_finite();
    return f;
}

void ScalarField::check_finite() const
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw Error(ErrorCode::InvalidArgument, "non-finite field value", i);
    }
}

// ---------------------------------------------------------------------------

DomainMask::DomainMask(GridSpec grid, std::vector<NodeLabel> labels,
                       std::vector<double> boundary_values, int reach)
    : grid_(grid), labels_(std::move(labels)), boundary_values_(std::move(boundary_values)),
      reach_(reach)
{
    require(labels_.size() == grid_.node_count() && boundary_values_.size() == labels_.size(),
            ErrorCode::InvalidGeometry, "mask arrays do not match the grid node count");
    require(reach_ >= 1, ErrorCode::InvalidGeometry, "mask reach must be at least 1");
    index_nodes();
}

void DomainMask::index_nodes()
{
    interior_.clear();
    boundary_.clear();
    for (NodeId n = 0; n < labels_.size(); ++n) {
        if (labels_[n] == NodeLabel::Interior) {
            interior_.push_back(n);
        } else if (labels_[n] == NodeLabel::DirichletBoundary) {
            require(std::isfinite(boundary_values_[n]), ErrorCode::InvalidArgument,
                    "non-finite boundary value");
            boundary_.push_back(n);
        }
    }
}

void DomainMask::pin(NodeId id, double value)
{
    labels_[id] = NodeLabel::DirichletBoundary;
    boundary_values_[id] = value;
    index_nodes();
}

void DomainMask::set_boundary_values(const std::function<double(const Point&)>& fn)
{
    for (NodeId n : boundary_) boundary_values_[n] = fn(grid_.coord(n));
    index_nodes();
}

double DomainMask::min_boundary_value() const
{
    double m = std::numeric_limits<double>::infinity();
    for (NodeId n : boundary_) m = std::min(m, boundary_values_[n]);
    return m;
}

double DomainMask::max_boundary_value() const
{
    double m = -std::numeric_limits<double>::infinity();
    for (NodeId n : boundary_) m = std::max(m, boundary_values_[n]);
    return m;
}

double DomainMask::mean_boundary_value() const
{
    if (boundary_.empty()) return 0.0;
    double s = 0.0;
    for (NodeId n : boundary_) s += boundary_values_[n];
    return s / static_cast<double>(boundary_.size());
}

namespace {

// Visits every offset in [-reach, reach]^dim.
template <class Fn>
void for_each_offset(int dim, int reach, Fn&& fn)
{
    Index o{0, 0, 0};
    const int lo0 = -reach, hi0 = reach;
    const int lo1 = dim > 1 ? -reach : 0, hi1 = dim > 1 ? reach : 0;
    const int lo2 = dim > 2 ? -reach : 0, hi2 = dim > 2 ? reach : 0;
    for (o[0] = lo0; o[0] <= hi0; ++o[0])
        for (o[1] = lo1; o[1] <= hi1; ++o[1])
            for (o[2] = lo2; o[2] <= hi2; ++o[2]) fn(o);
}

DomainMask collar_mask(const GridSpec& grid, std::vector<NodeLabel> labels,
                       const BoundaryFn& boundary_fn, int reach)
{
    require(reach >= 1, ErrorCode::InvalidGeometry, "collar reach must be at least 1");
    const std::size_t count = grid.node_count();
    std::vector<double> values(count, 0.0);
    bool any_interior = false;
    for (NodeId n = 0; n < count; ++n) {
        if (labels[n] != NodeLabel::Interior) continue;
        any_interior = true;
        const Index idx = grid.unflat(n);
        for_each_offset(grid.dim, reach, [&](const Index& o) {
            Index nb{idx[0] + o[0], idx[1] + o[1], idx[2] + o[2]};
            if (!grid.contains(nb))
                throw Error(ErrorCode::InvalidGeometry,
                            "domain plus its boundary collar does not fit inside the grid", n);
            const NodeId m = grid.flat(nb);
            if (labels[m] == NodeLabel::Exterior) labels[m] = NodeLabel::DirichletBoundary;
        });
    }
    require(any_interior, ErrorCode::InvalidGeometry, "domain contains no interior node");
    for (NodeId n = 0; n < count; ++n)
        if (labels[n] == NodeLabel::DirichletBoundary) values[n] = boundary_fn(grid.coord(n));
    return DomainMask(grid, std::move(labels), std::move(values), reach);
}

}  // namespace

DomainMask ball_mask(const GridSpec& grid, const Point& center, double radius,
                     const BoundaryFn& boundary_fn, int reach)
{
    require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidGeometry,
            "ball radius must be positive");
    std::vector<NodeLabel> labels(grid.node_count(), NodeLabel::Exterior);
    for (NodeId n = 0; n < labels.size(); ++n)
        if (distance(grid.coord(n), center) < radius) labels[n] = NodeLabel::Interior;
    return collar_mask(grid, std::move(labels), boundary_fn, reach);
}

DomainMask box_mask(const GridSpec& grid, const BoundaryFn& boundary_fn, int reach)
{
    std::vector<NodeLabel> labels(grid.node_count(), NodeLabel::Exterior);
    for (NodeId n = 0; n < labels.size(); ++n) {
        const Index idx = grid.unflat(n);
        bool inside = true;
        for (int a = 0; a < grid.dim; ++a)
            inside = inside && idx[a] >= reach && idx[a] <= grid.cells[a] - reach;
        if (inside) labels[n] = NodeLabel::Interior;
    }
    return collar_mask(grid, std::move(labels), boundary_fn, reach);
}

// ---------------------------------------------------------------------------

StencilSet stencil_directions(int dim, int k)
{
    require(dim >= 1 && dim <= 3, ErrorCode::InvalidArgument, "stencil dimension must be 1, 2 or 3");
    require(k >= 1, ErrorCode::InvalidArgument, "stencil radius must be at least 1");
    StencilSet s;
    s.dim = dim;
    s.radius = k;
    for_each_offset(dim, k, [&](const Index& o) {
        int g = 0;
        for (int a = 0; a < dim; ++a) g = std::gcd(g, std::abs(o[a]));
        if (g != 1) return;  // zero vector or non-primitive
        int first = 0;
        for (int a = 0; a < dim && first == 0; ++a) first = o[a];
        if (first > 0) s.directions.push_back(o);
    });
    std::sort(s.directions.begin(), s.directions.end());
    return s;
}

std::vector<Ray> signed_rays(const StencilSet& stencil, const GridSpec& grid)
{
    require(stencil.dim == grid.dim, ErrorCode::InvalidArgument,
            "stencil and grid dimensions differ");
    const auto strides = grid.strides();
    std::vector<Ray> rays;
    rays.reserve(2 * stencil.directions.size());
    for (const Index& e : stencil.directions) {
        for (int sign : {1, -1}) {
            Ray r;
            int nsq = 0;
            for (int a = 0; a < grid.dim; ++a) {
                r.offset[a] = sign * e[a];
                r.flat_offset += r.offset[a] * strides[a];
                nsq += e[a] * e[a];
            }
            r.norm_sq = nsq;
            r.length = grid.spacing() * std::sqrt(static_cast<double>(nsq));
            rays.push_back(r);
        }
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a.offset < b.offset; });
    return rays;
}

void check_rays_readable(const DomainMask& mask, const StencilSet& stencil)
{
    const GridSpec& grid = mask.grid();
    const auto rays = signed_rays(stencil, grid);
    for (NodeId n : mask.interior()) {
        const Index idx = grid.unflat(n);
        for (const Ray& r : rays) {
            const Index nb{idx[0] + r.offset[0], idx[1] + r.offset[1], idx[2] + r.offset[2]};
            if (!grid.contains(nb) || !mask.readable(grid.flat(nb)))
                throw Error(ErrorCode::MaskedRay, "stencil ray from an interior node hits an exterior node", n);
        }
    }
}

}  // namespace dclab
