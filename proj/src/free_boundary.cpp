/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace dclab {

namespace {

constexpr double kFar = 1e300;

// Squared distance transform of one line (Felzenszwalb-Huttenlocher).
void edt_line(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z)
{
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    auto cross = [&](int q, int p) { return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p)); };
    for (int q = 1; q < n; ++q) {
        double s = cross(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = cross(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
    f.swap(d);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y, double* intercept, double* r2)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (intercept) *intercept = my - slope * mx;
    if (r2) *r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return slope;
}

std::vector<double> checked_sups(const ScalarField& u, const Point& x0, std::span<const double> radii,
                                 const DomainMask* mask)
{
    require(radii.size() >= 5, ErrorCode::InvalidArgument, "growth fit needs at least five radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require(radii[i] > 0.0, ErrorCode::InvalidArgument, "radii must be positive");
        if (i) require(radii[i] > radii[i - 1], ErrorCode::InvalidArgument, "radii must increase strictly");
    }
    std::vector<double> sups;
    for (double r : radii) {
        const double s = sup_over_ball(u, x0, r, mask);
        if (!(s > 0.0)) raise(ErrorCode::DegenerateFit, "supremum vanishes on a ball; center lies inside the plateau");
        sups.push_back(s);
    }
    return sups;
}

}  // namespace

std::size_t PositivityDecomposition::positive_count() const
{
    return static_cast<std::size_t>(std::count(positive.begin(), positive.end(), 1));
}

std::size_t PositivityDecomposition::dead_core_count() const
{
    return static_cast<std::size_t>(std::count(dead_core.begin(), dead_core.end(), 1));
}

PositivityDecomposition decompose(const ScalarField& u, const DomainMask& mask, double epsilon)
{
    require(u.grid() == mask.grid(), ErrorCode::InvalidArgument, "field and mask live on different grids");
    require(epsilon >= 0.0, ErrorCode::InvalidArgument, "threshold must be non-negative");
    const GridSpec& g = u.grid();
    PositivityDecomposition dec;
    dec.grid = g;
    dec.epsilon = epsilon;
    dec.positive.assign(u.size(), 0);
    dec.dead_core.assign(u.size(), 0);
    for (NodeId n = 0; n < u.size(); ++n) {
        if (!mask.readable(n)) continue;
        (u[n] > epsilon ? dec.positive : dec.dead_core)[n] = 1;
    }
    for (NodeId n = 0; n < u.size(); ++n) {
        if (!dec.positive[n]) continue;
        const Index idx = g.unflat(n);
        bool touches = false;
        for (int a = 0; a < g.dim && !touches; ++a)
            for (int sgn : {-1, 1}) {
                Index nb = idx;
                nb[a] += sgn;
                if (g.contains(nb) && dec.dead_core[g.flat(nb)]) {
                    touches = true;
                    break;
                }
            }
        if (touches) dec.free_boundary.push_back(n);
    }
    return dec;
}

double sup_over_ball(const ScalarField& u, const Point& x0, double r, const DomainMask* mask)
{
    require(r >= 0.0, ErrorCode::InvalidArgument, "ball radius must be non-negative");
    const GridSpec& g = u.grid();
    Index lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = std::max(0, static_cast<int>(std::floor((x0[a] - r - g.origin[a]) / g.h[a])));
        hi[a] = std::min(g.cells[a], static_cast<int>(std::ceil((x0[a] + r - g.origin[a]) / g.h[a])));
    }
    const double lim = r * (1.0 + 1e-12) + 1e-15;
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = lo[0]; i <= hi[0]; ++i)
        for (int j = lo[1]; j <= hi[1]; ++j)
            for (int k = lo[2]; k <= hi[2]; ++k) {
                const Index idx{i, j, k};
                const NodeId n = g.flat(idx);
                if (mask && !mask->readable(n)) continue;
                if (distance(g.coord(idx), x0) > lim) continue;
                best = std::max(best, u[n]);
                any = true;
            }
    require(any, ErrorCode::InvalidArgument, "ball contains no readable node");
    return best;
}

ExponentFit growth_exponent_fit(const ScalarField& u, const Point& x0, std::span<const double> radii, double beta,
                                const DomainMask* mask)
{
    ExponentFit fit;
    fit.center = x0;
    fit.radii.assign(radii.begin(), radii.end());
    fit.sups = checked_sups(u, x0, radii, mask);
    fit.beta = beta;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(fit.sups[i]));
        fit.ratios.push_back(fit.sups[i] / std::pow(radii[i], beta));
    }
    fit.slope = least_squares_slope(lx, ly, &fit.intercept, &fit.r_squared);
    fit.constant = std::exp(fit.intercept);
    return fit;
}

NondegeneracyConstants nondegeneracy_constants(const ScalarField& u, const Point& x0, std::span<const double> radii,
                                               double beta, const DomainMask* mask)
{
    const std::vector<double> sups = checked_sups(u, x0, radii, mask);
    NondegeneracyConstants out{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double ratio = sups[i] / std::pow(radii[i], beta);
        out.c_hat = std::min(out.c_hat, ratio);
        out.C_hat = std::max(out.C_hat, ratio);
    }
    return out;
}

std::vector<double> distance_transform(const GridSpec& grid, std::span<const std::uint8_t> marked)
{
    require(marked.size() == grid.node_count(), ErrorCode::InvalidArgument, "mark vector does not match the grid");
    std::vector<double> sq(marked.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = marked[i] ? 0.0 : kFar;
    const auto strides = grid.strides();
    for (int a = 0; a < grid.dim; ++a) {
        const int n = grid.nodes_along(a);
        std::vector<double> f(n), d(n), z(n + 1);
        std::vector<int> v(n);
        for (NodeId base = 0; base < sq.size(); ++base) {
            if (grid.unflat(base)[a] != 0) continue;
            for (int i = 0; i < n; ++i) f[i] = sq[base + i * strides[a]];
            edt_line(f, d, v, z);
            for (int i = 0; i < n; ++i) sq[base + i * strides[a]] = f[i];
        }
    }
    const double h = grid.spacing();
    std::vector<double> out(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        out[i] = sq[i] >= 0.5 * kFar ? std::numeric_limits<double>::infinity() : h * std::sqrt(sq[i]);
    return out;
}

PorosityEstimate porosity_estimate(const PositivityDecomposition& dec, std::span<const double> radii)
{
    const GridSpec& g = dec.grid;
    require(!dec.free_boundary.empty(), ErrorCode::InvalidArgument, "free boundary is empty");
    require(!radii.empty(), ErrorCode::InvalidArgument, "porosity needs at least one radius");
    const double h = g.spacing();
    for (double r : radii)
        require(r >= 4.0 * h * (1.0 - 1e-12), ErrorCode::InvalidArgument, "porosity radii must be at least 4h");

    std::vector<std::uint8_t> marked(g.node_count(), 0);
    for (NodeId n : dec.free_boundary) marked[n] = 1;
    const std::vector<double> dist = distance_transform(g, marked);

    PorosityEstimate est;
    est.sigma_hat = std::numeric_limits<double>::infinity();
    for (NodeId x : dec.free_boundary) {
        const Index xi = g.unflat(x);
        const Point xc = g.coord(x);
        for (double r : radii) {
            const int reach = static_cast<int>(std::floor(r / h));
            Index lo{0, 0, 0}, hi{0, 0, 0};
            for (int a = 0; a < g.dim; ++a) {
                lo[a] = std::max(0, xi[a] - reach);
                hi[a] = std::min(g.cells[a], xi[a] + reach);
            }
            double best = 0.0;
            for (int i = lo[0]; i <= hi[0]; ++i)
                for (int j = lo[1]; j <= hi[1]; ++j)
                    for (int k = lo[2]; k <= hi[2]; ++k) {
                        const Index yi{i, j, k};
                        const double room = r - distance(g.coord(yi), xc);
                        if (room <= best) continue;
                        best = std::max(best, std::min(room, dist[g.flat(yi)]));
                    }
            const double sigma = best / r;
            if (sigma < est.sigma_hat) {
                est.sigma_hat = sigma;
                est.worst_node = x;
                est.worst_radius = r;
            }
        }
    }

    int max_cells = 0;
    for (int a = 0; a < g.dim; ++a) max_cells = std::max(max_cells, g.cells[a]);
    for (int j = 0; (1 << j) <= max_cells; ++j) {
        std::set<std::array<int, 3>> boxes;
        for (NodeId n : dec.free_boundary) {
            Index idx = g.unflat(n);
            for (int a = 0; a < g.dim; ++a) idx[a] >>= j;
            boxes.insert(idx);
        }
        est.scales.push_back(h * (1 << j));
        est.box_counts.push_back(boxes.size());
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < est.scales.size(); ++i)
        if (est.box_counts[i] >= 10) {
            lx.push_back(std::log(est.scales[i]));
            ly.push_back(std::log(static_cast<double>(est.box_counts[i])));
        }
    if (lx.size() < 2) {
        lx.clear();
        ly.clear();
        for (std::size_t i = 0; i < est.scales.size(); ++i) {
            lx.push_back(std::log(est.scales[i]));
            ly.push_back(std::log(static_cast<double>(est.box_counts[i])));
        }
    }
    est.scales_fitted = static_cast<int>(lx.size());
    est.box_dimension = lx.size() >= 2 ? std::clamp(-least_squares_slope(lx, ly, nullptr, nullptr), 0.0,
                                                    static_cast<double>(g.dim))
                                       : 0.0;
    return est;
}

}  // namespace dclab
