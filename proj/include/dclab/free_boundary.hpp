/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dclab/grid.hpp"

namespace dclab {

/// Split of the readable nodes into {u > eps} and {u <= eps}. The free
/// boundary is the set of positive nodes with an axis neighbour in the dead core.
struct PositivityDecomposition {
    GridSpec grid;
    double epsilon = 0.0;
    std::vector<std::uint8_t> positive;   // per node, 1 if readable and u > eps
    std::vector<std::uint8_t> dead_core;  // per node, 1 if readable and u <= eps
    std::vector<NodeId> free_boundary;    // ascending

    [[nodiscard]] std::size_t positive_count() const;
    [[nodiscard]] std::size_t dead_core_count() const;
};

PositivityDecomposition decompose(const ScalarField& u, const DomainMask& mask, double epsilon);

/// max of u over nodes with |x - x0| <= r (restricted to readable nodes when
/// a mask is given). Throws InvalidArgument if no node qualifies.
double sup_over_ball(const ScalarField& u, const Point& x0, double r, const DomainMask* mask = nullptr);

struct ExponentFit {
    Point center{};
    std::vector<double> radii;
    std::vector<double> sups;
    double slope = 0.0;
    double intercept = 0.0;
    double constant = 0.0;  ///< exp(intercept)
    double r_squared = 0.0;
    double beta = 0.0;      ///< exponent used for `ratios`
    std::vector<double> ratios;  ///< sup / r^beta
};

/// Least-squares fit of log sup_{B_r(x0)} u against log r. Needs at least
/// five strictly increasing positive radii; throws DegenerateFit if some sup
/// is not positive.
ExponentFit growth_exponent_fit(const ScalarField& u, const Point& x0, std::span<const double> radii,
                                double beta, const DomainMask* mask = nullptr);

struct NondegeneracyConstants {
    double c_hat = 0.0;
    double C_hat = 0.0;
};

/// min and max over the radii of sup_{B_r(x0)} u / r^beta.
NondegeneracyConstants nondegeneracy_constants(const ScalarField& u, const Point& x0,
                                               std::span<const double> radii, double beta,
                                               const DomainMask* mask = nullptr);

struct PorosityEstimate {
    double sigma_hat = 0.0;
    NodeId worst_node = 0;
    double worst_radius = 0.0;
    std::vector<double> scales;
    std::vector<std::size_t> box_counts;
    double box_dimension = 0.0;
    int scales_fitted = 0;
};

/// sigma_hat = min over free-boundary nodes x and radii r of the largest
/// sigma with B_{sigma r}(y) inside B_r(x) and free of free-boundary nodes,
/// with y ranging over lattice nodes. Box dimension from occupied dyadic
/// boxes of side h 2^j, fitted over the scales holding at least 10 boxes.
PorosityEstimate porosity_estimate(const PositivityDecomposition& dec, std::span<const double> radii);

/// Euclidean distance from every node to the nearest marked node (infinite
/// when none is marked). Exact, separable in the axes.
std::vector<double> distance_transform(const GridSpec& grid, std::span<const std::uint8_t> marked);

}  // namespace dclab
