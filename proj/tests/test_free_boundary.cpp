/* SPDX-License-Identifier: Apache-2.0 */
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dclab/free_boundary.hpp"
#include "dclab/radial.hpp"
#include "helpers.hpp"

using namespace dclab;

namespace {

std::vector<double> geometric(double lo, double hi, int count)
{
    std::vector<double> r;
    for (int i = 0; i < count; ++i) r.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    return r;
}

}  // namespace

TEST(Decompose, TrivialFields)
{
    const GridSpec g = test::square_grid(1.0, 16);
    const DomainMask m = box_mask(g, [](const Point&) { return 0.0; }, 1);
    const auto ones = decompose(ScalarField(g, 1.0), m, 1e-6);
    EXPECT_EQ(ones.dead_core_count(), 0u);
    EXPECT_TRUE(ones.free_boundary.empty());
    const auto zeros = decompose(ScalarField(g, 0.0), m, 1e-6);
    EXPECT_EQ(zeros.positive_count(), 0u);
}

TEST(Decompose, ExactDeadCoreCircle)
{
    const auto sol = RadialDeadCoreSolution::make(1, 1, 1, upsilon(1, 1) / 4);
    const GridSpec g = test::square_grid(1.0, 128);
    const DomainMask m = box_mask(g, [&](const Point& x) { return sol.at(x); }, 1);
    const ScalarField u = ScalarField::sample(g, [&](const Point& x) { return sol.at(x); });
    const auto dec = decompose(u, m, 1e-6);
    ASSERT_FALSE(dec.free_boundary.empty());
    for (NodeId n : dec.free_boundary) EXPECT_NEAR(std::hypot(g.coord(n)[0], g.coord(n)[1]), 0.5, 2 * g.spacing());
    const double h = g.spacing();
    EXPECT_NEAR(dec.dead_core_count() * h * h, M_PI * 0.25, 0.05 * M_PI * 0.25);
}

TEST(SupOverBall, ProfileAndTrivialCases)
{
    const auto sol = RadialDeadCoreSolution::make(1, 1, 1, upsilon(1, 1) / 4);
    const GridSpec g = test::square_grid(1.0, 128);
    const double h = g.spacing();
    const ScalarField u = ScalarField::sample(g, [&](const Point& x) { return sol.at(x); });
    const double Y = sol.upsilon;
    const double s = sup_over_ball(u, Point{0.5, 0, 0}, 0.25);
    EXPECT_NEAR(s, Y * 0.0625, Y * ((0.25 + h) * (0.25 + h) - 0.0625));
    EXPECT_DOUBLE_EQ(sup_over_ball(ScalarField(g, 2.5), Point{}, 0.3), 2.5);
    EXPECT_DOUBLE_EQ(sup_over_ball(u, g.coord(test::node_at(g, 100, 64)), 0.4 * h), u[test::node_at(g, 100, 64)]);
}

TEST(GrowthExponentFit, SyntheticSquare)
{
    const GridSpec g = test::square_grid(1.0, 256);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; });
    const auto radii = geometric(4 * g.spacing(), 0.4, 8);
    const ExponentFit fit = growth_exponent_fit(u, Point{}, radii, 2.0);
    EXPECT_NEAR(fit.slope, 2.0, 0.02);
    // Lattice sups lose at most one spacing of radius: (r - h)^2 <= sup <= r^2.
    const auto nd = nondegeneracy_constants(u, Point{}, radii, 2.0);
    EXPECT_GE(nd.c_hat, 0.75 * 0.75);
    EXPECT_LE(nd.C_hat, 1.0 + 1e-12);
    EXPECT_NEAR(nd.C_hat, 1.0, 0.05);
}

TEST(GrowthExponentFit, ExactProfileAboutPlateauEdge)
{
    const auto sol = RadialDeadCoreSolution::make(1, 1, 1, upsilon(1, 1) / 4);
    const GridSpec g = test::square_grid(1.0, 256);
    const ScalarField u = ScalarField::sample(g, [&](const Point& x) { return sol.at(x); });
    const auto radii = geometric(4 * g.spacing(), 0.2, 8);
    const ExponentFit fit = growth_exponent_fit(u, Point{0.5, 0, 0}, radii, 2.0);
    EXPECT_NEAR(fit.slope, 2.0, 0.05);
    const auto nd = nondegeneracy_constants(u, Point{0.5, 0, 0}, radii, 2.0);
    EXPECT_GE(nd.c_hat, 0.75 * 0.75 * sol.upsilon);
    EXPECT_LE(nd.C_hat, sol.upsilon * (1.0 + 1e-12));
    EXPECT_NEAR(nd.C_hat, sol.upsilon, 0.1 * sol.upsilon);
}

TEST(GrowthExponentFit, DegenerateInsidePlateau)
{
    const GridSpec g = test::square_grid(1.0, 64);
    const ScalarField u(g, 0.0);
    const auto radii = geometric(0.05, 0.2, 5);
    try {
        (void)growth_exponent_fit(u, Point{}, radii, 2.0);
        FAIL() << "expected a throw";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateFit);
    }
    const std::vector<double> few{0.1, 0.2};
    EXPECT_THROW(growth_exponent_fit(ScalarField(g, 1.0), Point{}, few, 2.0), Error);
}

namespace {

PositivityDecomposition from_dead(const GridSpec& g, const std::function<bool(const Point&)>& dead)
{
    const DomainMask m = box_mask(g, [](const Point&) { return 1.0; }, 1);
    const ScalarField u = ScalarField::sample(g, [&](const Point& x) { return dead(x) ? 0.0 : 1.0; });
    return decompose(u, m, 1e-9);
}

}  // namespace

TEST(PorosityEstimate, StraightLine)
{
    const GridSpec g = test::square_grid(1.0, 128);
    const auto dec = from_dead(g, [](const Point& x) { return x[0] < 0.0; });
    const double h = g.spacing();
    const std::vector<double> radii{4 * h, 8 * h, 16 * h};
    const PorosityEstimate est = porosity_estimate(dec, radii);
    EXPECT_GE(est.sigma_hat, 0.4);
    EXPECT_LE(est.sigma_hat, 0.5);
    EXPECT_GE(est.box_dimension, 0.9);
    EXPECT_LE(est.box_dimension, 1.1);
}

TEST(PorosityEstimate, Circle)
{
    const GridSpec g = test::square_grid(1.0, 256);
    const auto dec = from_dead(g, [](const Point& x) { return std::hypot(x[0], x[1]) < 0.5; });
    const double h = g.spacing();
    const std::vector<double> radii{4 * h, 8 * h, 16 * h};
    const PorosityEstimate est = porosity_estimate(dec, radii);
    EXPECT_GE(est.box_dimension, 0.9);
    EXPECT_LE(est.box_dimension, 1.1);
}

TEST(PorosityEstimate, SingleNode)
{
    const GridSpec g = test::square_grid(1.0, 64);
    const NodeId mid = test::node_at(g, 32, 32);
    const DomainMask m = box_mask(g, [](const Point&) { return 1.0; }, 1);
    ScalarField u(g, 1.0);
    // One positive node beside a one-node dead core yields a single free-boundary node.
    PositivityDecomposition dec = decompose(u, m, 1e-9);
    dec.free_boundary = {mid};
    const double h = g.spacing();
    const std::vector<double> radii{4 * h, 8 * h};
    const PorosityEstimate est = porosity_estimate(dec, radii);
    EXPECT_GE(est.sigma_hat, 0.4);
    EXPECT_LE(est.sigma_hat, 0.5);
    EXPECT_NEAR(est.box_dimension, 0.0, 0.1);
}

TEST(DistanceTransform, MatchesBruteForce)
{
    const GridSpec g = test::square_grid(1.0, 16);
    std::vector<std::uint8_t> marked(g.node_count(), 0);
    marked[test::node_at(g, 3, 4)] = 1;
    marked[test::node_at(g, 12, 10)] = 1;
    const auto d = distance_transform(g, marked);
    for (NodeId n = 0; n < g.node_count(); ++n) {
        const double brute = std::min(distance(g.coord(n), g.coord(test::node_at(g, 3, 4))),
                                      distance(g.coord(n), g.coord(test::node_at(g, 12, 10))));
        EXPECT_NEAR(d[n], brute, 1e-12);
    }
}
