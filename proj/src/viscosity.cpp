/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace dclab {

namespace {

struct Neighbourhood {
    std::vector<Index> offsets;  // max-norm <= radius, origin excluded
};

Neighbourhood cube(int dim, int radius)
{
    Neighbourhood nb;
    const int r1 = dim > 1 ? radius : 0, r2 = dim > 2 ? radius : 0;
    for (int i = -radius; i <= radius; ++i)
        for (int j = -r1; j <= r1; ++j)
            for (int k = -r2; k <= r2; ++k)
                if (i || j || k) nb.offsets.push_back({i, j, k});
    return nb;
}

std::vector<NodeId> eligible_nodes(const DomainMask& mask, int radius)
{
    const GridSpec& g = mask.grid();
    const Neighbourhood nb = cube(g.dim, radius);
    std::vector<NodeId> out;
    for (NodeId n : mask.interior()) {
        const Index idx = g.unflat(n);
        bool ok = true;
        for (const Index& o : nb.offsets) {
            const Index y{idx[0] + o[0], idx[1] + o[1], idx[2] + o[2]};
            if (!g.contains(y) || !mask.readable(g.flat(y))) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(n);
    }
    return out;
}

double at(const ScalarField& u, const Index& idx) { return u[u.grid().flat(idx)]; }

// Central-difference gradient and Hessian at an interior node.
void local_jet(const ScalarField& u, NodeId node, std::array<double, 3>& grad,
               std::array<std::array<double, 3>, 3>& hess)
{
    const GridSpec& g = u.grid();
    const double h = g.spacing();
    const Index c = g.unflat(node);
    const double u0 = u[node];
    grad = {};
    hess = {};
    for (int a = 0; a < g.dim; ++a) {
        Index p = c, m = c;
        p[a] += 1;
        m[a] -= 1;
        grad[a] = (at(u, p) - at(u, m)) / (2.0 * h);
        hess[a][a] = (at(u, p) - 2.0 * u0 + at(u, m)) / (h * h);
        for (int b = a + 1; b < g.dim; ++b) {
            Index pp = c, pm = c, mp = c, mm = c;
            pp[a] += 1, pp[b] += 1;
            pm[a] += 1, pm[b] -= 1;
            mp[a] -= 1, mp[b] += 1;
            mm[a] -= 1, mm[b] -= 1;
            hess[a][b] = hess[b][a] = (at(u, pp) - at(u, pm) - at(u, mp) + at(u, mm)) / (4.0 * h * h);
        }
    }
}

Probe draw_probe(const ScalarField& u, const std::vector<NodeId>& eligible, std::uint64_t seed, int index)
{
    const GridSpec& g = u.grid();
    const double h = g.spacing();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    Probe pr;
    pr.node = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    std::array<double, 3> grad;
    std::array<std::array<double, 3>, 3> hess;
    local_jet(u, pr.node, grad, hess);
    const double log_lo = std::log(1e-3), log_hi = std::log(10.0 / h);
    const double scale = std::exp(log_lo + (log_hi - log_lo) * unit(rng));

    pr.targeted = unit(rng) < 0.5;
    if (pr.targeted) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        pr.p = grad;
        pr.Q = hess;
        for (int a = 0; a < g.dim; ++a) pr.Q[a][a] += sign * scale;
        return pr;
    }
    double slope = 0.0;
    for (int a = 0; a < g.dim; ++a) slope += grad[a] * grad[a];
    slope = std::sqrt(slope);
    const double radius = 2.0 * std::max(slope, 1e-12) * unit(rng);
    std::array<double, 3> dir{};
    double norm = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        dir[a] = normal(rng);
        norm += dir[a] * dir[a];
    }
    norm = std::sqrt(norm);
    for (int a = 0; a < g.dim; ++a) pr.p[a] = norm > 0.0 ? radius * dir[a] / norm : 0.0;
    double frob = 0.0;
    for (int a = 0; a < g.dim; ++a)
        for (int b = a; b < g.dim; ++b) {
            const double x = normal(rng);
            pr.Q[a][b] = pr.Q[b][a] = x;
            frob += (a == b ? 1.0 : 2.0) * x * x;
        }
    frob = std::sqrt(frob);
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b) pr.Q[a][b] = frob > 0.0 ? pr.Q[a][b] * scale / frob : 0.0;
    return pr;
}

}  // namespace

Probe make_probe(const ScalarField& u, const DomainMask& mask, int radius, std::uint64_t seed, int index)
{
    require(u.grid() == mask.grid(), ErrorCode::InvalidArgument, "field and mask live on different grids");
    require(radius >= 2, ErrorCode::InvalidArgument, "touching radius must be at least 2 nodes");
    const std::vector<NodeId> eligible = eligible_nodes(mask, radius);
    require(!eligible.empty(), ErrorCode::InvalidArgument, "no interior node has a readable neighbourhood");
    return draw_probe(u, eligible, seed, index);
}

TouchingReport verify_viscosity(const ScalarField& u, const DomainMask& mask, const SourceTerm& f, int probes,
                                int radius, double tol, std::uint64_t seed, double tol_f)
{
    require(u.grid() == mask.grid(), ErrorCode::InvalidArgument, "field and mask live on different grids");
    require(probes >= 100, ErrorCode::InvalidArgument, "at least 100 probes are required");
    require(radius >= 2, ErrorCode::InvalidArgument, "touching radius must be at least 2 nodes");
    require(tol >= 0.0, ErrorCode::InvalidArgument, "touching tolerance must be non-negative");
    const GridSpec& g = u.grid();
    const double h = g.spacing();
    const std::vector<NodeId> eligible = eligible_nodes(mask, radius);
    require(!eligible.empty(), ErrorCode::InvalidArgument, "no interior node has a readable neighbourhood");
    const Neighbourhood nb = cube(g.dim, radius);

    TouchingReport rep;
    rep.seed = seed;
    rep.probes = probes;
    rep.tol = tol;
    rep.tol_f = tol_f > 0.0 ? tol_f : 10.0 * h;
    rep.worst_super = rep.worst_sub = -std::numeric_limits<double>::infinity();
    std::map<NodeId, NodeTouching> per_node;
    const bool zero = f.family() == SourceFamily::Zero;

    for (int i = 0; i < probes; ++i) {
        const Probe pr = draw_probe(u, eligible, seed, i);
        const Index c = g.unflat(pr.node);
        const double u0 = u[pr.node];
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Index& o : nb.offsets) {
            double lin = 0.0, quad = 0.0;
            std::array<double, 3> d{};
            for (int a = 0; a < g.dim; ++a) d[a] = o[a] * h;
            for (int a = 0; a < g.dim; ++a) {
                lin += pr.p[a] * d[a];
                for (int b = 0; b < g.dim; ++b) quad += d[a] * pr.Q[a][b] * d[b];
            }
            const double diff = at(u, {c[0] + o[0], c[1] + o[1], c[2] + o[2]}) - (u0 + lin + 0.5 * quad);
            lo = std::min(lo, diff);
            hi = std::max(hi, diff);
        }
        const bool below = lo >= -tol, above = hi <= tol;
        NodeTouching& nt = per_node[pr.node];
        if (nt.probes == 0) {
            nt.node = pr.node;
            nt.worst_super = nt.worst_sub = -std::numeric_limits<double>::infinity();
        }
        ++nt.probes;
        if (!below && !above) continue;

        double lap = 0.0;
        for (int a = 0; a < g.dim; ++a)
            for (int b = 0; b < g.dim; ++b) lap += pr.p[a] * pr.Q[a][b] * pr.p[b];
        const double t = std::max(u0, 0.0);
        const double f_lo = zero ? 0.0 : f.eval_unchecked(t, pr.node);
        const double f_hi = (t == 0.0 && !zero) ? std::max(f_lo, f.limit_at_zero(pr.node)) : f_lo;

        auto record = [&](TouchSide side, double gap, double source) {
            if (gap <= rep.tol_f) return;
            ++rep.violation_count;
            if (rep.violations.size() < 100) rep.violations.push_back({pr, side, lap, source, gap - rep.tol_f});
        };
        if (below) {
            ++rep.touching_below;
            const double gap = lap - f_hi;
            nt.worst_super = std::max(nt.worst_super, gap);
            rep.worst_super = std::max(rep.worst_super, gap);
            record(TouchSide::Below, gap, f_hi);
        }
        if (above) {
            ++rep.touching_above;
            const double gap = f_lo - lap;
            nt.worst_sub = std::max(nt.worst_sub, gap);
            rep.worst_sub = std::max(rep.worst_sub, gap);
            record(TouchSide::Above, gap, f_lo);
        }
    }
    for (auto& [n, nt] : per_node) rep.nodes.push_back(nt);
    return rep;
}

}  // namespace dclab
