/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace dclab {

namespace {

// Per-node view of the stencil with neighbours collapsed to the extreme
// values of each ray-length class. For fixed neighbours the slope extremes
// as a function of the centre value t only depend on these.
class NodeKernel {
public:
    explicit NodeKernel(const InfLaplacianStencil& op) : op_(&op)
    {
        cand_.resize(op.classes().size());
        for (std::size_t c = 0; c < cand_.size(); ++c) cand_[c].len = op.classes()[c].length;
    }

    void gather(std::span<const double> u, NodeId node)
    {
        const auto& rays = op_->rays();
        const auto& classes = op_->classes();
        lo_ = std::numeric_limits<double>::infinity();
        hi_ = -lo_;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            Cand& k = cand_[c];
            k.vmax = -std::numeric_limits<double>::infinity();
            k.vmin = std::numeric_limits<double>::infinity();
            for (int r : classes[c].rays) {
                const double v = u[static_cast<std::ptrdiff_t>(node) + rays[r].flat_offset];
                if (v > k.vmax) {
                    k.vmax = v;
                    k.imax = r;
                }
                if (v < k.vmin) {
                    k.vmin = v;
                    k.imin = r;
                }
            }
            lo_ = std::min(lo_, k.vmin);
            hi_ = std::max(hi_, k.vmax);
        }
    }

    // Delta_inf^h at the gathered node with centre value t.
    [[nodiscard]] double op(double t) const
    {
        double sp = -std::numeric_limits<double>::infinity(), sm = -sp;
        double lp = 1.0, lm = 1.0;
        int ip = std::numeric_limits<int>::max(), im = ip;
        for (const Cand& k : cand_) {
            const double a = (k.vmax - t) / k.len;
            if (a > sp || (a == sp && k.imax < ip)) {
                sp = a;
                lp = k.len;
                ip = k.imax;
            }
            const double b = (k.vmin - t) / k.len;
            if (b < sm || (b == sm && k.imin < im)) {
                sm = b;
                lm = k.len;
                im = k.imin;
            }
        }
        return inf_laplacian_from_extremes(sp, sm, lp, lm, op_->gradient());
    }

    [[nodiscard]] double min_neighbor() const { return lo_; }
    [[nodiscard]] double max_neighbor() const { return hi_; }

private:
    struct Cand {
        double vmax = 0.0, vmin = 0.0, len = 1.0;
        int imax = 0, imin = 0;
    };
    const InfLaplacianStencil* op_;
    std::vector<Cand> cand_;
    double lo_ = 0.0, hi_ = 0.0;
};

struct RootContext {
    const NodeKernel& kernel;
    const SourceTerm& f;
    NodeId node;
    bool zero_source;
    bool nonneg_floor;
    int cap;

    [[nodiscard]] double source(double t) const { return zero_source ? 0.0 : f.eval_unchecked(t, node); }
    [[nodiscard]] double phi(double t) const { return kernel.op(t) - source(t); }
    [[nodiscard]] double mismatch(double t) const
    {
        return zero_source ? std::abs(kernel.op(t)) : source_mismatch(kernel.op(t), t, f, node);
    }
};

[[noreturn]] void bracket_failure(NodeId node, double lo, double hi)
{
    std::ostringstream msg;
    msg << "no sign change of the node equation at node " << node << " (searched [" << lo << ", "
        << hi << "])";
    throw Error(ErrorCode::BracketFailure, msg.str(), node);
}

// Root of phi nearest the current value. phi is >= 0 at the lower bracket
// end and <= 0 at the upper one.
double solve_node(const RootContext& ctx, double current)
{
    double lo = ctx.kernel.min_neighbor();
    double hi = ctx.kernel.max_neighbor();
    if (ctx.nonneg_floor) lo = std::max(lo, 0.0);
    double width = hi - lo;
    if (!(width > 0.0)) width = std::max(std::abs(hi), 1.0) * 1e-3;

    double phi_lo = ctx.phi(lo);
    if (phi_lo < 0.0) {
        double step = width;
        int j = 0;
        for (; j < ctx.cap && phi_lo < 0.0; ++j, step *= 2.0) {
            double cand = lo - step;
            if (ctx.nonneg_floor) cand = std::max(cand, 0.0);
            const double pc = ctx.phi(cand);
            if (pc >= 0.0) {
                lo = cand;
                phi_lo = pc;
                break;
            }
            if (ctx.nonneg_floor && cand == 0.0) break;
        }
        if (phi_lo < 0.0) bracket_failure(ctx.node, lo - step, hi);
    }
    double phi_hi = ctx.phi(hi);
    if (phi_hi > 0.0) {
        double step = width;
        int j = 0;
        for (; j < ctx.cap && phi_hi > 0.0; ++j, step *= 2.0) {
            const double cand = hi + step;
            const double pc = ctx.phi(cand);
            if (pc <= 0.0) {
                hi = cand;
                phi_hi = pc;
                break;
            }
        }
        if (phi_hi > 0.0) bracket_failure(ctx.node, lo, hi + step);
    }
    if (phi_lo == 0.0) return lo;
    if (phi_hi == 0.0) return hi;

    // Narrow to the sign change closest to the current value.
    const double c = std::clamp(current, lo, hi);
    const double phi_c = ctx.phi(c);
    if (phi_c == 0.0) return c;
    double a, b;
    double step = std::max((hi - lo) * 1e-6, 1e-14);
    if (phi_c > 0.0) {
        a = c;
        for (;;) {
            b = std::min(c + step, hi);
            if (b >= hi || ctx.phi(b) <= 0.0) break;
            a = b;
            step *= 2.0;
        }
    } else {
        b = c;
        for (;;) {
            a = std::max(c - step, lo);
            if (a <= lo || ctx.phi(a) >= 0.0) break;
            b = a;
            step *= 2.0;
        }
    }

    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double pm = ctx.phi(m);
        if (pm == 0.0) return m;
        if (pm > 0.0)
            a = m;
        else
            b = m;
    }
    return ctx.mismatch(a) <= ctx.mismatch(b) ? a : b;
}

bool all_nonneg(const DomainMask& mask)
{
    return mask.boundary().empty() || mask.min_boundary_value() >= 0.0;
}

std::vector<NodeId> sweep_order(const DomainMask& mask, const StencilSet& stencil, SweepOrder order,
                                std::vector<std::size_t>& color_starts)
{
    std::vector<NodeId> nodes = mask.interior();
    color_starts.assign({0, nodes.size()});
    if (order == SweepOrder::Lexicographic) return nodes;
    const GridSpec& grid = mask.grid();
    const int m = stencil.radius + 1;
    auto color = [&](NodeId n) {
        const Index idx = grid.unflat(n);
        int c = 0;
        for (int a = 0; a < grid.dim; ++a) c = c * m + idx[a] % m;
        return c;
    };
    std::stable_sort(nodes.begin(), nodes.end(), [&](NodeId x, NodeId y) { return color(x) < color(y); });
    color_starts.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (i == 0 || color(nodes[i]) != color(nodes[i - 1])) color_starts.push_back(i);
    color_starts.push_back(nodes.size());
    return nodes;
}

}  // namespace

double node_update(const ScalarField& u, const DomainMask& mask, NodeId node, const SourceTerm& f,
                   const StencilSet& stencil, double damping, int bracket_expansion_cap)
{
    require(u.grid() == mask.grid(), ErrorCode::InvalidArgument, "field and mask live on different grids");
    if (node >= u.size() || mask.label(node) != NodeLabel::Interior)
        throw Error(ErrorCode::InvalidArgument, "node update at a non-interior node", node);
    require(damping > 0.0 && damping <= 1.0, ErrorCode::InvalidArgument, "damping must lie in (0, 1]");
    const InfLaplacianStencil op(mask, stencil);
    NodeKernel kernel(op);
    kernel.gather(u.values(), node);
    const bool zero = f.family() == SourceFamily::Zero;
    const RootContext ctx{kernel, f, node, zero, !zero || kernel.min_neighbor() >= 0.0, bracket_expansion_cap};
    const double t = solve_node(ctx, u[node]);
    return (1.0 - damping) * u[node] + damping * t;
}

SolveResult solve_dirichlet(const DomainMask& mask, const SourceTerm& f, const StencilSet& stencil,
                            const SolveOptions& opts, const std::optional<ScalarField>& initial_guess)
{
    const auto start = std::chrono::steady_clock::now();
    require(opts.tol > 0.0, ErrorCode::InvalidArgument, "solver tolerance must be positive");
    require(opts.max_sweeps >= 1, ErrorCode::InvalidArgument, "max_sweeps must be at least 1");
    require(opts.stall_window >= 0, ErrorCode::InvalidArgument, "stall_window must be non-negative");
    require(opts.damping > 0.0 && opts.damping <= 1.0, ErrorCode::InvalidArgument, "damping must lie in (0, 1]");
    const bool zero = f.family() == SourceFamily::Zero;
    const bool nonneg = all_nonneg(mask);
    require(nonneg || zero, ErrorCode::InvalidArgument,
            "boundary data must be non-negative unless the source is identically zero");
    if (!opts.allow_nonmonotone && !zero) {
        const double t_max = std::max(1.0, mask.max_boundary_value());
        const ConditionReport mono = check_monotone(f, t_max, 1000);
        require(mono.pass, ErrorCode::InvalidArgument, "source term is not non-decreasing on the data range");
    }

    const InfLaplacianStencil op(mask, stencil);
    const GridSpec& grid = mask.grid();

    ScalarField u(grid, 0.0);
    if (initial_guess) {
        require(initial_guess->grid() == grid, ErrorCode::InvalidArgument, "initial guess lives on another grid");
        u = *initial_guess;
        for (NodeId n = 0; n < u.size(); ++n)
            if (mask.label(n) == NodeLabel::Exterior) u[n] = 0.0;
    } else {
        const double fill = mask.mean_boundary_value();
        for (NodeId n : mask.interior()) u[n] = fill;
    }
    for (NodeId n : mask.boundary()) u[n] = mask.boundary_value(n);
    if (nonneg)
        for (NodeId n : mask.interior()) u[n] = std::max(u[n], 0.0);

    std::vector<std::size_t> color_starts;
    const std::vector<NodeId> order = sweep_order(mask, stencil, opts.order, color_starts);
    const int threads = opts.order == SweepOrder::RedBlack ? std::max(1, opts.threads) : 1;

    bool reverse = false;
    auto update_range = [&](std::size_t begin, std::size_t end, double damping) {
        NodeKernel kernel(op);
        std::span<double> vals = u.values();
        const bool rev = reverse;
        for (std::size_t j = begin; j < end; ++j) {
            const std::size_t i = rev ? end - 1 - (j - begin) : j;
            const NodeId n = order[i];
            kernel.gather(vals, n);
            const RootContext ctx{kernel, f, n, zero, nonneg || kernel.min_neighbor() >= 0.0,
                                  opts.bracket_expansion_cap};
            const double t = solve_node(ctx, vals[n]);
            vals[n] = damping == 1.0 ? t : (1.0 - damping) * vals[n] + damping * t;
        }
    };

    auto current_residual = [&] {
        double worst = 0.0;
        for (NodeId n : mask.interior()) worst = std::max(worst, op.node_residual(u.values(), n, f));
        return worst;
    };

    SolveReport rep;
    double damping = opts.damping;
    double best = current_residual();
    int best_sweep = 0;
    int window = opts.stall_window;
    if (window == 0)
        for (int a = 0; a < grid.dim; ++a) window = std::max(window, 4 * grid.nodes_along(a));
    rep.residual = best;
    rep.converged = best <= opts.tol;
    // Best iterate so far; returned when the run ends unconverged.
    std::vector<double> best_values(u.values().begin(), u.values().end());
    double best_overall = best;
    int improved_at = 0;
    for (int sweep = 1; sweep <= opts.max_sweeps && !rep.converged; ++sweep) {
        reverse = opts.symmetric && opts.order == SweepOrder::Lexicographic && sweep % 2 == 0;
        for (std::size_t c = 0; c + 1 < color_starts.size(); ++c) {
            const std::size_t b = color_starts[c], e = color_starts[c + 1];
            if (threads == 1 || e - b < 256) {
                update_range(b, e, damping);
                continue;
            }
            std::vector<std::jthread> pool;
            const std::size_t chunk = (e - b + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const std::size_t cb = b + t * chunk, ce = std::min(e, cb + chunk);
                if (cb < ce) pool.emplace_back(update_range, cb, ce, damping);
            }
        }
        rep.sweeps = sweep;
        rep.residual = current_residual();
        rep.converged = rep.residual <= opts.tol;
        if (rep.residual < best_overall) {
            best_overall = rep.residual;
            improved_at = sweep;
            rep.best_sweep = sweep;
            if (!rep.converged) std::copy(u.values().begin(), u.values().end(), best_values.begin());
        }
        if (rep.residual < best) {
            best = rep.residual;
            best_sweep = sweep;
        } else if (opts.auto_damping && sweep - best_sweep >= window && damping > 0.5) {
            damping = std::max(0.5, 0.8 * damping);
            best_sweep = sweep;
        }
        if (opts.on_sweep) opts.on_sweep(sweep, rep.residual, damping);
        if (opts.stall_limit > 0 && sweep - improved_at >= opts.stall_limit) break;
    }
    if (!rep.converged && best_overall < rep.residual) {
        std::copy(best_values.begin(), best_values.end(), u.values().begin());
        rep.residual = best_overall;
    }

    rep.final_damping = damping;
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -rep.min_value;
    for (NodeId n = 0; n < u.size(); ++n) {
        if (!mask.readable(n)) continue;
        rep.min_value = std::min(rep.min_value, u[n]);
        rep.max_value = std::max(rep.max_value, u[n]);
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(u), rep};
}

ScalarField interpolate(const ScalarField& coarse, const GridSpec& fine)
{
    const GridSpec& cg = coarse.grid();
    require(cg.dim == fine.dim, ErrorCode::InvalidArgument, "interpolation between grids of different dimension");
    ScalarField out(fine, 0.0);
    const auto strides = cg.strides();
    for (NodeId n = 0; n < out.size(); ++n) {
        const Point p = fine.coord(n);
        Index base{0, 0, 0};
        Point w{0.0, 0.0, 0.0};
        for (int a = 0; a < cg.dim; ++a) {
            double s = (p[a] - cg.origin[a]) / cg.h[a];
            s = std::clamp(s, 0.0, static_cast<double>(cg.cells[a]));
            int i = std::min(static_cast<int>(std::floor(s)), cg.cells[a] - 1);
            base[a] = i;
            w[a] = s - i;
        }
        double acc = 0.0;
        const int corners = 1 << cg.dim;
        for (int c = 0; c < corners; ++c) {
            double weight = 1.0;
            std::ptrdiff_t off = 0;
            for (int a = 0; a < cg.dim; ++a) {
                const int bit = (c >> a) & 1;
                weight *= bit ? w[a] : 1.0 - w[a];
                off += bit * strides[a];
            }
            if (weight != 0.0) acc += weight * coarse[cg.flat(base) + off];
        }
        out[n] = acc;
    }
    return out;
}

}  // namespace dclab
