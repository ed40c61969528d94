/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dclab/error.hpp"

namespace dclab {

using NodeId = std::size_t;

/// Physical coordinates; components past `dim` are zero.
using Point = std::array<double, 3>;

/// Integer lattice offsets or indices; components past `dim` are zero.
using Index = std::array<int, 3>;

/// Node-centered uniform lattice over a box. Node i along an axis sits at
/// origin + i*h for i = 0..cells, and the flat node order is row-major
/// (the last axis varies fastest).
struct GridSpec {
    int dim = 0;
    Point origin{};
    Point extent{};
    Index cells{};
    Point h{};

    [[nodiscard]] int nodes_along(int axis) const { return axis < dim ? cells[axis] + 1 : 1; }
    [[nodiscard]] std::size_t node_count() const;
    [[nodiscard]] std::array<std::ptrdiff_t, 3> strides() const;

    /// Common lattice spacing; every axis shares it.
    [[nodiscard]] double spacing() const { return h[0]; }

    [[nodiscard]] NodeId flat(const Index& idx) const;
    [[nodiscard]] Index unflat(NodeId id) const;
    [[nodiscard]] bool contains(const Index& idx) const;
    [[nodiscard]] Point coord(NodeId id) const;
    [[nodiscard]] Point coord(const Index& idx) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec make_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                   std::span<const int> cells);

/// Euclidean distance between two points of the same lattice.
double distance(const Point& a, const Point& b);

/// Gridded real-valued function over every node of a GridSpec.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridSpec grid, double fill = 0.0);
    ScalarField(GridSpec grid, std::vector<double> values);

    /// Samples `fn` at every node.
    static ScalarField sample(const GridSpec& grid, const std::function<double(const Point&)>& fn);

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    double& operator[](NodeId id) { return values_[id]; }
    double operator[](NodeId id) const { return values_[id]; }

    /// Throws InvalidArgument if any value is NaN or infinite.
    void check_finite() const;

private:
    GridSpec grid_{};
    std::vector<double> values_;
};

enum class NodeLabel : std::uint8_t { Exterior = 0, Interior = 1, DirichletBoundary = 2 };

/// Interior/boundary/exterior classification plus Dirichlet data. `reach`
/// is the collar thickness in nodes (max-norm), which bounds the stencil
/// radius that may be used with this mask.
class DomainMask {
public:
    DomainMask() = default;
    DomainMask(GridSpec grid, std::vector<NodeLabel> labels, std::vector<double> boundary_values,
               int reach);

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] NodeLabel label(NodeId id) const { return labels_[id]; }
    [[nodiscard]] std::span<const NodeLabel> labels() const { return labels_; }
    [[nodiscard]] double boundary_value(NodeId id) const { return boundary_values_[id]; }
    [[nodiscard]] std::span<const double> boundary_values() const { return boundary_values_; }
    [[nodiscard]] int reach() const { return reach_; }

    [[nodiscard]] bool readable(NodeId id) const { return labels_[id] != NodeLabel::Exterior; }

    /// Interior nodes in ascending flat order.
    [[nodiscard]] const std::vector<NodeId>& interior() const { return interior_; }
    [[nodiscard]] const std::vector<NodeId>& boundary() const { return boundary_; }

    /// Relabels a node as Dirichlet with the given value.
    void pin(NodeId id, double value);

    /// Replaces every Dirichlet value by fn(node coordinate).
    void set_boundary_values(const std::function<double(const Point&)>& fn);

    [[nodiscard]] double min_boundary_value() const;
    [[nodiscard]] double max_boundary_value() const;
    [[nodiscard]] double mean_boundary_value() const;

private:
    void index_nodes();

    GridSpec grid_{};
    std::vector<NodeLabel> labels_;
    std::vector<double> boundary_values_;
    std::vector<NodeId> interior_;
    std::vector<NodeId> boundary_;
    int reach_ = 1;
};

using BoundaryFn = std::function<double(const Point&)>;

/// Interior = open ball; boundary = non-interior nodes within max-norm
/// `reach` of an interior node.
DomainMask ball_mask(const GridSpec& grid, const Point& center, double radius,
                     const BoundaryFn& boundary_fn, int reach = 1);

/// Interior = every node at least `reach` nodes away from the grid faces.
DomainMask box_mask(const GridSpec& grid, const BoundaryFn& boundary_fn, int reach = 1);

/// Primitive integer directions of max-norm <= radius, one per line through
/// the origin (canonical sign: first nonzero coordinate positive), sorted
/// lexicographically.
/// Gradient surrogate G of the G^2 * D2 operator.
enum class GradientSurrogate {
    HalfSpread,  ///< (s+ - s-) / 2
    Monotone,    ///< max((s+ - s-) / 2, |s+ + s-|): non-decreasing in both slopes
};

struct StencilSet {
    int dim = 0;
    int radius = 1;
    std::vector<Index> directions;
    GradientSurrogate gradient = GradientSurrogate::HalfSpread;
};

StencilSet stencil_directions(int dim, int k);

/// One signed stencil ray resolved against a grid.
struct Ray {
    Index offset{};
    std::ptrdiff_t flat_offset = 0;
    double length = 0.0;     ///< h*|e|
    int norm_sq = 0;         ///< |e|^2 in lattice units
};

/// Both signs of every direction, sorted lexicographically by offset. The
/// position in this list is the tie-breaking order for slope extremes.
std::vector<Ray> signed_rays(const StencilSet& stencil, const GridSpec& grid);

/// Throws MaskedRay if some Interior node has a ray leaving the grid or
/// landing on an Exterior node.
void check_rays_readable(const DomainMask& mask, const StencilSet& stencil);

}  // namespace dclab
