/* SPDX-License-Identifier: Apache-2.0 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dclab/inf_laplacian.hpp"
#include "dclab/radial.hpp"
#include "helpers.hpp"

using namespace dclab;

namespace {

struct Box {
    GridSpec grid;
    DomainMask mask;
};

Box box(double half, int cells, int reach, const BoundaryFn& fn)
{
    Box b{test::square_grid(half, cells), {}};
    b.mask = box_mask(b.grid, fn, reach);
    return b;
}

}  // namespace

TEST(SlopeExtremes, LinearField)
{
    auto fn = [](const Point& x) { return x[0]; };
    const Box b = box(1.0, 16, 1, fn);
    const ScalarField u = ScalarField::sample(b.grid, fn);
    const SlopeExtremes s = slope_extremes(u, b.mask, test::node_at(b.grid, 8, 8), stencil_directions(2, 1));
    EXPECT_DOUBLE_EQ(s.s_plus, 1.0);
    EXPECT_DOUBLE_EQ(s.s_minus, -1.0);
    EXPECT_EQ(s.dir_plus, (Index{1, 0, 0}));
}

TEST(SlopeExtremes, ConstantField)
{
    const Box b = box(1.0, 8, 1, [](const Point&) { return 3.0; });
    const ScalarField u(b.grid, 3.0);
    const SlopeExtremes s = slope_extremes(u, b.mask, test::node_at(b.grid, 4, 4), stencil_directions(2, 1));
    EXPECT_EQ(s.s_plus, 0.0);
    EXPECT_EQ(s.s_minus, 0.0);
}

// Hand evaluation: ((0.5 + h)^2 - 0.25) / h = 1 + h and ((0.5 - h)^2 - 0.25) / h = -1 + h.
TEST(SlopeExtremes, SquareOnAxisAtHalf)
{
    auto fn = [](const Point& x) { return x[0] * x[0]; };
    const Box b = box(1.0, 128, 1, fn);
    const double h = b.grid.spacing();
    const ScalarField u = ScalarField::sample(b.grid, fn);
    const SlopeExtremes s = slope_extremes(u, b.mask, test::node_at(b.grid, 96, 64), stencil_directions(2, 1));
    EXPECT_NEAR(s.s_plus, 1.0 + h, 1e-12);
    EXPECT_NEAR(s.s_minus, -1.0 + h, 1e-12);
    EXPECT_EQ(s.dir_plus, (Index{1, 0, 0}));
    EXPECT_EQ(s.dir_minus, (Index{-1, 0, 0}));
}

TEST(DiscreteInfLaplacian, SquareMatchesAnalyticValue)
{
    auto fn = [](const Point& x) { return x[0] * x[0]; };
    for (int k : {1, 2}) {
        const Box b = box(1.0, 128, k, fn);
        const ScalarField u = ScalarField::sample(b.grid, fn);
        EXPECT_NEAR(discrete_inf_laplacian(u, b.mask, test::node_at(b.grid, 96, 64), stencil_directions(2, k)), 2.0, 1e-9);
    }
}

TEST(DiscreteInfLaplacian, AffineFieldsVanish)
{
    auto fn = [](const Point& x) { return 0.3 * x[0] - 1.7 * x[1] + 0.25; };
    const Box b = box(1.0, 32, 2, fn);
    const ScalarField u = ScalarField::sample(b.grid, fn);
    const ScalarField op = apply_operator(u, b.mask, stencil_directions(2, 2));
    for (NodeId n : b.mask.interior()) EXPECT_NEAR(op[n], 0.0, 1e-12);
}

TEST(DiscreteInfLaplacian, CubicHomogeneity)
{
    const Box b = box(1.0, 24, 2, [](const Point&) { return 0.0; });
    const StencilSet st = stencil_directions(2, 2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField u(b.grid, 0.0);
    for (NodeId n = 0; n < u.size(); ++n) u[n] = d(rng);
    for (double c : {0.5, 2.0, 10.0}) {
        ScalarField cu = u;
        for (NodeId n = 0; n < u.size(); ++n) cu[n] = c * u[n];
        for (NodeId n : b.mask.interior()) {
            const double base = discrete_inf_laplacian(u, b.mask, n, st);
            const double scaled = discrete_inf_laplacian(cu, b.mask, n, st);
            EXPECT_NEAR(scaled, c * c * c * base, 1e-12 * std::max(1.0, std::abs(c * c * c * base)));
        }
    }
}

TEST(Residual, ZeroAndConstantFields)
{
    const Box b = box(1.0, 16, 1, [](const Point&) { return 0.0; });
    const StencilSet st = stencil_directions(2, 1);
    const SourceTerm f = SourceTerm::power(1, 1);
    EXPECT_EQ(residual(ScalarField(b.grid, 0.0), b.mask, f, st), 0.0);
    DomainMask m = box_mask(b.grid, [](const Point&) { return 0.4; }, 1);
    EXPECT_NEAR(residual(ScalarField(b.grid, 0.4), m, f, st), 0.4, 1e-15);
}

TEST(Residual, GammaZeroAcceptsSourceJumpAtZero)
{
    const Box b = box(1.0, 16, 1, [](const Point&) { return 0.0; });
    EXPECT_EQ(residual(ScalarField(b.grid, 0.0), b.mask, SourceTerm::power(1, 0), stencil_directions(2, 1)), 0.0);
}

// On the axes the gradient is a stencil direction and, once the stencil no
// longer reaches the free boundary, the operator is exact for the profile.
// Off the axes the error has an angular floor fixed by k.
TEST(ApplyOperator, ExactProfileMatchesSourceOnAxisUnderRefinement)
{
    const auto sol = RadialDeadCoreSolution::make(1.0, 1.0, 1.0, upsilon(1.0, 1.0) / 4.0);
    double previous = INFINITY, off_axis = 0.0;
    for (int cells : {32, 64, 128}) {
        auto fn = [&](const Point& x) { return sol.at(x); };
        const Box b = box(1.0, cells, 2, fn);
        const ScalarField u = ScalarField::sample(b.grid, fn);
        const ScalarField op = apply_operator(u, b.mask, stencil_directions(2, 2));
        double worst = 0.0;
        off_axis = 0.0;
        for (NodeId n : b.mask.interior()) {
            const Point x = b.grid.coord(n);
            const double rho = std::hypot(x[0], x[1]);
            if (rho <= 0.65 || rho >= 0.9) continue;
            const double rel = std::abs(op[n] - u[n]) / u[n];
            if (std::abs(x[1]) < 1e-12) worst = std::max(worst, rel);
            else off_axis = std::max(off_axis, rel);
        }
        EXPECT_LE(worst, std::max(previous, 1e-12)) << cells;
        EXPECT_LT(off_axis, 0.5) << cells;
        previous = worst;
    }
    EXPECT_LT(previous, 1e-9);
}

TEST(GradientSurrogate, MonotoneMatchesHalfSpreadAwayFromCriticalPoints)
{
    const double half = inf_laplacian_from_extremes(1.0 + 0.01, -1.0 + 0.01, 0.01, 0.01);
    EXPECT_EQ(inf_laplacian_from_extremes(1.01, -0.99, 0.01, 0.01, GradientSurrogate::Monotone), half);
    // Strict local minimum: both slopes positive, the switch engages.
    EXPECT_DOUBLE_EQ(inf_laplacian_from_extremes(0.3, 0.1, 1.0, 1.0, GradientSurrogate::Monotone), 0.16 * 0.4);
    EXPECT_DOUBLE_EQ(inf_laplacian_from_extremes(0.3, 0.1, 1.0, 1.0), 0.01 * 0.4);
}

TEST(GradientSurrogate, MonotoneIsNonDecreasingInNeighbours)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> slope(-1.0, 1.0), bump(0.0, 0.2);
    int half_spread_decreases = 0;
    for (int i = 0; i < 20000; ++i) {
        double a = slope(rng), b = slope(rng);
        const double sp = std::max(a, b), sm = std::min(a, b);
        const double d = bump(rng);
        for (GradientSurrogate g : {GradientSurrogate::HalfSpread, GradientSurrogate::Monotone}) {
            const double base = inf_laplacian_from_extremes(sp, sm, 1.0, 1.0, g);
            const double up_minus = inf_laplacian_from_extremes(sp, std::min(sm + d, sp), 1.0, 1.0, g);
            const double up_plus = inf_laplacian_from_extremes(sp + d, sm, 1.0, 1.0, g);
            if (g == GradientSurrogate::Monotone) {
                EXPECT_GE(up_minus, base - 1e-15);
                EXPECT_GE(up_plus, base - 1e-15);
            } else {
                half_spread_decreases += up_minus < base - 1e-12 || up_plus < base - 1e-12;
            }
        }
    }
    EXPECT_GT(half_spread_decreases, 0);
}

TEST(GradientSurrogate, KeepsHomogeneityAndAxisExactness)
{
    auto fn = [](const Point& x) { return x[0] * x[0]; };
    const Box b = box(1.0, 128, 2, fn);
    StencilSet st = stencil_directions(2, 2);
    st.gradient = GradientSurrogate::Monotone;
    const ScalarField u = ScalarField::sample(b.grid, fn);
    EXPECT_NEAR(discrete_inf_laplacian(u, b.mask, test::node_at(b.grid, 96, 64), st), 2.0, 1e-9);
    ScalarField cu = u;
    for (NodeId n = 0; n < u.size(); ++n) cu[n] = 3.0 * u[n];
    const NodeId n = test::node_at(b.grid, 65, 64);
    EXPECT_NEAR(discrete_inf_laplacian(cu, b.mask, n, st), 27.0 * discrete_inf_laplacian(u, b.mask, n, st), 1e-12);
}

TEST(OperatorRange, EqualsValueAwayFromTies)
{
    auto fn = [](const Point& x) { return 0.7 * x[0] * x[0] + 0.2 * x[1] + 0.05 * x[0] * x[1]; };
    const Box b = box(1.0, 16, 2, fn);
    const ScalarField u = ScalarField::sample(b.grid, fn);
    const InfLaplacianStencil st(b.mask, stencil_directions(2, 2));
    const NodeId n = test::node_at(b.grid, 11, 5);
    const auto [lo, hi] = st.operator_range(u.values(), n);
    EXPECT_LE(lo, st.value(u.values(), n));
    EXPECT_GE(hi, st.value(u.values(), n));
}
