/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dclab/field_io.hpp"
#include "dclab/radial.hpp"
#include "dclab/viscosity.hpp"

namespace dclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x)
{
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

void check(ExperimentResult& r, std::string name, bool pass, std::string detail)
{
    r.assertions.push_back({std::move(name), pass, std::move(detail)});
}

Cell yes_no(bool b) { return std::string(b ? "true" : "false"); }

bool is_power(const SourceTerm& f) { return f.family() == SourceFamily::Power; }

double beta_of(const SourceTerm& f) { return 4.0 / (3.0 - f.gamma()); }

/// kappa^4-type rescaling for the homogeneous families.
SourceTerm scaled(const SourceTerm& f, double w)
{
    switch (f.family()) {
    case SourceFamily::Zero: return SourceTerm::zero();
    case SourceFamily::Power: return w == 0.0 ? SourceTerm::zero() : SourceTerm::power(w * f.lambda(), f.gamma());
    case SourceFamily::Cubic: return w == 0.0 ? SourceTerm::zero() : SourceTerm::cubic(w * f.lambda());
    default: break;
    }
    return SourceTerm::linear_combination({{w, f}});
}

double homogeneity_degree(const SourceTerm& f)
{
    switch (f.family()) {
    case SourceFamily::Power: return f.gamma();
    case SourceFamily::Cubic: return 3.0;
    case SourceFamily::Zero: return 3.0;
    default: break;
    }
    raise(ErrorCode::InvalidArgument, "flatness needs a homogeneous source (power, cubic or zero), got " + f.describe());
}

SolveOptions solve_options(const ExperimentConfig& cfg)
{
    SolveOptions o = cfg.solver;
    o.on_sweep = nullptr;
    return o;
}

double threshold(const ExperimentConfig& cfg)
{
    return cfg.analysis.epsilon > 0.0 ? cfg.analysis.epsilon : 10.0 * cfg.solver.tol;
}

NodeId nearest_node(const Problem& p, const Point& c)
{
    Index idx{0, 0, 0};
    for (int a = 0; a < p.grid.dim; ++a)
        idx[a] = static_cast<int>(std::lround((c[a] - p.grid.origin[a]) / p.grid.h[a]));
    return p.grid.flat(idx);
}

struct Linf {
    double abs = kNaN;
    double rel = kNaN;
};

Linf oracle_error(const Problem& p, const ScalarField& u)
{
    Linf e;
    if (!p.oracle) return e;
    e.abs = 0.0;
    for (NodeId n : p.mask.interior()) e.abs = std::max(e.abs, std::abs(u[n] - p.oracle(p.grid.coord(n))));
    e.rel = p.alpha > 0.0 ? e.abs / p.alpha : kNaN;
    return e;
}

struct GrowthOutcome {
    bool ok = false;
    std::string why;
    NodeId x0 = 0;
    ExponentFit fit;
    NondegeneracyConstants nd;
};

std::vector<double> fit_radii(const ExperimentConfig& cfg, double h)
{
    const double lo = cfg.analysis.fit_r_min > 0.0 ? cfg.analysis.fit_r_min : 4.0 * h;
    const double hi = cfg.analysis.fit_r_max;
    const int count = std::max(5, cfg.analysis.fit_count);
    std::vector<double> radii;
    if (!(hi > lo)) return radii;
    for (int i = 0; i < count; ++i) radii.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return radii;
}

// Growth fit about the predicted plateau edge on the first axis, or about the
// discrete free-boundary node nearest it (smallest u without a prediction).
GrowthOutcome growth_fit(const ExperimentConfig& cfg, const Problem& p, const ScalarField& u,
                         const PositivityDecomposition& dec, double beta, bool at_interface)
{
    GrowthOutcome g;
    const Point c = cfg.geometry.center;
    if (at_interface && p.plateau_radius > 0.0) {
        Point edge = c;
        edge[0] += p.plateau_radius;
        g.x0 = nearest_node(p, edge);
    } else {
        if (dec.free_boundary.empty()) {
            g.why = "free boundary is empty";
            return g;
        }
        auto key = [&](NodeId a) {
            return p.plateau_radius > 0.0 ? std::abs(distance(p.grid.coord(a), c) - p.plateau_radius) : u[a];
        };
        g.x0 = *std::min_element(dec.free_boundary.begin(), dec.free_boundary.end(),
                                 [&](NodeId a, NodeId b) { return key(a) < key(b); });
    }
    const std::vector<double> radii = fit_radii(cfg, p.h);
    if (radii.size() < 5) {
        g.why = "fit radii are empty (fit_r_max below 4h)";
        return g;
    }
    try {
        const Point x0 = p.grid.coord(g.x0);
        g.fit = growth_exponent_fit(u, x0, radii, beta, &p.mask);
        g.nd = nondegeneracy_constants(u, x0, radii, beta, &p.mask);
        g.ok = true;
    } catch (const Error& e) {
        g.why = e.what();
    }
    return g;
}

RadialProfile profile_covering(const SourceTerm& f, double reach)
{
    double v_max = 1.0;
    for (int i = 0; i < 200; ++i) {
        RadialProfile prof = quadrature_profile(f, v_max, 2000);
        if (prof.rho_max() >= reach) return prof;
        v_max *= 2.0;
    }
    raise(ErrorCode::OutOfRange, "radial profile does not reach radius " + num(reach));
}

}  // namespace

bool ExperimentResult::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

Problem build_problem(const ExperimentConfig& cfg, int n)
{
    require(n >= 2, ErrorCode::InvalidArgument, "resolution must be at least 2 nodes per unit length");
    const GeometryConfig& geo = cfg.geometry;
    const int k = cfg.stencil_k;
    Problem p;
    p.h = 1.0 / n;
    p.source = parse_source(cfg.source);
    p.stencil = stencil_directions(geo.dim, k);
    p.stencil.gradient = cfg.gradient;

    const int m = static_cast<int>(std::ceil(geo.radius * n - 1e-9));
    std::vector<double> origin(geo.dim), extent(geo.dim);
    std::vector<int> cells(geo.dim, 2 * (m + k));
    for (int a = 0; a < geo.dim; ++a) {
        origin[a] = geo.center[a] - (m + k) * p.h;
        extent[a] = cells[a] * p.h;
    }
    p.grid = make_grid(geo.dim, origin, extent, cells);

    const Point c = geo.center;
    const double r = geo.radius;
    const SourceTerm& f = p.source;
    BoundaryFn fn;
    switch (cfg.boundary.mode) {
    case BoundaryMode::Constant: {
        const double a = cfg.boundary.value;
        fn = [a](const Point&) { return a; };
        if (f.family() == SourceFamily::Zero) p.oracle = fn;
        p.alpha = a;
        if (is_power(f) && f.gamma() < 3.0 && a >= 0.0) {
            const auto sol = RadialDeadCoreSolution::make(f.lambda(), f.gamma(), r, a, c);
            p.plateau_radius = sol.empty_plateau ? -1.0 : sol.R;
        }
        break;
    }
    case BoundaryMode::Exact: {
        require(is_power(f), ErrorCode::InvalidArgument, "exact boundary data needs a power source");
        const double R = cfg.boundary.plateau_radius;
        require(R >= 0.0 && R < r, ErrorCode::InvalidArgument, "plateau radius must lie in [0, radius)");
        const double Y = upsilon(f.lambda(), f.gamma());
        const auto sol = RadialDeadCoreSolution::make(f.lambda(), f.gamma(), r, Y * std::pow(r - R, beta_of(f)), c);
        fn = [sol](const Point& x) { return sol.at(x); };
        p.oracle = fn;
        p.alpha = sol.alpha;
        p.plateau_radius = sol.R;
        break;
    }
    case BoundaryMode::Quadrature: {
        const double R = cfg.boundary.plateau_radius;
        require(R >= 0.0 && R < r, ErrorCode::InvalidArgument, "plateau radius must lie in [0, radius)");
        const double reach = r - R + (k + 1) * p.h * std::sqrt(static_cast<double>(geo.dim));
        const auto prof = std::make_shared<RadialProfile>(profile_covering(f, reach));
        fn = [prof, c, R](const Point& x) { return prof->value_at(std::max(distance(x, c) - R, 0.0)); };
        p.oracle = fn;
        p.alpha = prof->value_at(r - R);
        p.plateau_radius = R;
        break;
    }
    case BoundaryMode::Affine: {
        const Point s = cfg.boundary.slope;
        const double b = cfg.boundary.offset;
        const int dim = geo.dim;
        fn = [s, b, dim](const Point& x) {
            double v = b;
            for (int a = 0; a < dim; ++a) v += s[a] * x[a];
            return v;
        };
        if (f.family() == SourceFamily::Zero) p.oracle = fn;
        break;
    }
    }
    p.mask = ball_mask(p.grid, c, r, fn, k);
    if (cfg.boundary.mode == BoundaryMode::Affine) p.alpha = p.mask.max_boundary_value();
    return p;
}

double equivalent_radius(const PositivityDecomposition& dec, const DomainMask& mask)
{
    const GridSpec& g = dec.grid;
    std::size_t count = 0;
    for (NodeId n : mask.interior()) count += dec.dead_core[n];
    const double vol = static_cast<double>(count) * std::pow(g.spacing(), g.dim);
    switch (g.dim) {
    case 1: return vol / 2.0;
    case 2: return std::sqrt(vol / std::numbers::pi);
    default: return std::cbrt(3.0 * vol / (4.0 * std::numbers::pi));
    }
}

double lambda_from_source(const SourceTerm& f, double M, double bound)
{
    require(M > 0.0, ErrorCode::InvalidArgument, "growth constant must be positive");
    require(bound > 0.0, ErrorCode::InvalidArgument, "bound must be positive");
    return f(bound) / (M * std::pow(bound, f.declared().gamma));
}

// ---------------------------------------------------------------------------

ExperimentResult run_solve(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::Solve;
    const Problem p = build_problem(cfg, cfg.geometry.n);
    const SolveResult s = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg));
    const Linf err = oracle_error(p, s.field);
    const PositivityDecomposition dec = decompose(s.field, p.mask, threshold(cfg));
    const double R_meas = dec.dead_core_count() ? equivalent_radius(dec, p.mask) : 0.0;
    const bool power = is_power(p.source) && p.source.gamma() < 3.0;
    const bool at_interface = cfg.analysis.fit_center == "interface";
    GrowthOutcome g, g_alt;
    if (power) {
        g = growth_fit(cfg, p, s.field, dec, beta_of(p.source), at_interface);
        g_alt = growth_fit(cfg, p, s.field, dec, beta_of(p.source), !at_interface);
    }
    const GrowthOutcome& g_if = at_interface ? g : g_alt;
    const GrowthOutcome& g_fb = at_interface ? g_alt : g;

    res.table = ResultTable({"n", "h", "k", "gradient", "source", "sweeps", "residual", "converged", "wall_seconds", "min_u",
                             "max_u", "linf_error", "rel_error", "dead_core_nodes", "plateau_measured",
                             "plateau_predicted", "fit_center", "fit_slope", "fit_r_squared", "fit_slope_interface",
                             "fit_slope_free_boundary", "beta", "c_hat", "C_hat"});
    res.table.name = "solve";
    res.table.add_row({std::int64_t{cfg.geometry.n}, p.h, std::int64_t{cfg.stencil_k},
                       std::string(cfg.gradient == GradientSurrogate::Monotone ? "monotone" : "half_spread"),
                       p.source.describe(),
                       std::int64_t{s.report.sweeps}, s.report.residual, yes_no(s.report.converged),
                       s.report.wall_seconds, s.report.min_value, s.report.max_value, err.abs, err.rel,
                       static_cast<std::int64_t>(dec.dead_core_count()), R_meas, p.plateau_radius,
                       cfg.analysis.fit_center, g.ok ? g.fit.slope : kNaN, g.ok ? g.fit.r_squared : kNaN,
                       g_if.ok ? g_if.fit.slope : kNaN, g_fb.ok ? g_fb.fit.slope : kNaN, power ? beta_of(p.source) : kNaN, g.ok ? g.nd.c_hat : kNaN, g.ok ? g.nd.C_hat : kNaN});
    if (g.ok) {
        ResultTable fit({"radius", "sup", "ratio"});
        fit.name = "growth";
        for (std::size_t i = 0; i < g.fit.radii.size(); ++i)
            fit.add_row({g.fit.radii[i], g.fit.sups[i], g.fit.ratios[i]});
        res.extra_tables.push_back(std::move(fit));
    }

    const double tol = cfg.solver.tol;
    check(res, "converged", s.report.converged, "residual " + num(s.report.residual) + " after " +
                                                    std::to_string(s.report.sweeps) + " sweeps");
    if (p.mask.min_boundary_value() >= 0.0)
        check(res, "non_negative", s.report.min_value >= -tol, "min u = " + num(s.report.min_value));
    check(res, "maximum_principle", s.report.max_value <= p.mask.max_boundary_value() + tol,
          "max u = " + num(s.report.max_value) + ", max data = " + num(p.mask.max_boundary_value()));
    if (cfg.analysis.max_rel_error > 0.0 && p.oracle)
        check(res, "oracle_error", err.rel <= cfg.analysis.max_rel_error,
              "L-inf error / alpha = " + num(err.rel) + " (bound " + num(cfg.analysis.max_rel_error) + ")");
    if (cfg.analysis.plateau_tol_h > 0.0 && p.plateau_radius >= 0.0)
        check(res, "plateau_radius", std::abs(R_meas - p.plateau_radius) <= cfg.analysis.plateau_tol_h * p.h,
              "measured " + num(R_meas) + ", predicted " + num(p.plateau_radius));
    if (power && cfg.analysis.exponent_tol > 0.0 && !dec.free_boundary.empty())
        check(res, "growth_exponent", g.ok && std::abs(g.fit.slope - beta_of(p.source)) <= cfg.analysis.exponent_tol,
              g.ok ? "slope " + num(g.fit.slope) + " about the " + cfg.analysis.fit_center + " center vs " +
                         num(beta_of(p.source))
                   : g.why);
    if (cfg.output.dump_field) res.fields.push_back({"solution", s.field});
    return res;
}

ExperimentResult run_convergence(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::Convergence;
    res.table = ResultTable({"n", "h", "sweeps", "residual", "converged", "linf_error", "rel_error", "order"});
    res.table.name = "convergence";
    std::vector<double> errs;
    bool all_converged = true;
    bool have_oracle = true;
    ScalarField finest;
    for (int n : cfg.analysis.n_list) {
        const Problem p = build_problem(cfg, n);
        if (!p.oracle) {
            have_oracle = false;
            break;
        }
        const SolveResult s = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg));
        const Linf e = oracle_error(p, s.field);
        const double order = errs.empty() ? kNaN : std::log2(errs.back() / e.abs) / std::log2(static_cast<double>(n) / res.table.number(res.table.rows().size() - 1, "n"));
        errs.push_back(e.abs);
        all_converged = all_converged && s.report.converged;
        res.table.add_row({std::int64_t{n}, p.h, std::int64_t{s.report.sweeps}, s.report.residual,
                           yes_no(s.report.converged), e.abs, e.rel, order});
        finest = s.field;
    }
    check(res, "oracle_available", have_oracle, have_oracle ? "exact or quadrature data" : "boundary mode has no oracle");
    if (!have_oracle) return res;
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
    check(res, "errors_decrease", decreasing, "strictly decreasing along the refinement list");
    if (errs.size() >= 2) {
        const double last = res.table.number(res.table.rows().size() - 1, "order");
        check(res, "order", last >= cfg.analysis.min_order,
              "finest-pair order " + num(last) + " (required " + num(cfg.analysis.min_order) + ")");
    }
    check(res, "converged", all_converged, "every level reached the residual tolerance");
    if (cfg.output.dump_field && finest.size()) res.fields.push_back({"finest", finest});
    return res;
}

ExperimentResult run_flatness(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::Flatness;
    const SourceTerm g = parse_source(cfg.source);
    const double deg = homogeneity_degree(g);
    ExperimentConfig base = cfg;
    base.boundary.mode = BoundaryMode::Constant;
    base.boundary.value = 1.0;
    const Problem p = build_problem(base, cfg.geometry.n);
    const Point c = cfg.geometry.center;
    const NodeId mid = nearest_node(p, c);
    const double half = 0.5 * cfg.geometry.radius;
    const SolveOptions opts = solve_options(cfg);
    const double eps = cfg.analysis.flat_eps;

    res.table = ResultTable({"kappa", "a_star", "sup_half", "w_center", "sup_half_fixed", "solves", "trials_converged",
                             "accepted_converged", "fixed_converged"});
    res.table.name = "flatness";

    bool decreasing_kappa = true;
    bool all_converged = true, accepted_all = true;
    std::optional<ScalarField> warm;
    double a_prev = 1.0;
    std::vector<double> sups;
    for (std::size_t i = 0; i < cfg.analysis.kappa_list.size(); ++i) {
        const double kappa = cfg.analysis.kappa_list[i];
        require(kappa >= 0.0, ErrorCode::InvalidArgument, "kappa must be non-negative");
        if (i) decreasing_kappa = decreasing_kappa && kappa < cfg.analysis.kappa_list[i - 1];
        const double k4 = std::pow(kappa, 4.0);
        int solves = 0;
        bool pinned_converged = true, accepted_converged = false;

        // Pinned surrogate: v = a w with unit data and source kappa^4 a^(deg-3) g.
        double w_center = kNaN, a_star = 0.0, sup_half = 0.0;
        if (kappa > 0.0 && g.family() != SourceFamily::Zero) {
            ScalarField w_best;
            auto trial = [&](double a) {
                const SourceTerm src = scaled(g, k4 * std::pow(a, deg - 3.0));
                SolveResult s = solve_dirichlet(p.mask, src, p.stencil, opts, warm);
                ++solves;
                pinned_converged = pinned_converged && s.report.converged;
                warm = s.field;
                return s;
            };
            double lo = 0.0, hi = 0.0;
            double a = std::min(1.0, a_prev);
            SolveResult s = trial(a);
            if (s.field[mid] <= eps) {
                lo = a;
                w_best = s.field;
                accepted_converged = s.report.converged;
                hi = 0.0;
                while (lo < 1.0) {
                    const double up = std::min(1.0, 2.0 * lo);
                    SolveResult t = trial(up);
                    if (t.field[mid] > eps) {
                        hi = up;
                        break;
                    }
                    lo = up;
                    w_best = t.field;
                    accepted_converged = t.report.converged;
                }
            } else {
                hi = a;
                for (int j = 0; j < 60 && lo == 0.0; ++j) {
                    const double down = 0.5 * hi;
                    SolveResult t = trial(down);
                    if (t.field[mid] <= eps) {
                        lo = down;
                        w_best = t.field;
                        accepted_converged = t.report.converged;
                    } else {
                        hi = down;
                    }
                }
            }
            if (lo > 0.0 && hi > 0.0) {
                for (int j = 0; j < cfg.analysis.flat_bisections; ++j) {
                    const double m = std::sqrt(lo * hi);
                    SolveResult t = trial(m);
                    if (t.field[mid] <= eps) {
                        lo = m;
                        w_best = t.field;
                        accepted_converged = t.report.converged;
                    } else {
                        hi = m;
                    }
                }
            }
            a_star = lo;
            if (lo > 0.0) {
                w_center = w_best[mid];
                sup_half = a_star * sup_over_ball(w_best, c, half, &p.mask);
                a_prev = a_star;
            }
        }

        // Fixed data: source kappa^4 g with the configured boundary value.
        ExperimentConfig fixed_cfg = base;
        fixed_cfg.boundary.value = cfg.boundary.value;
        const Problem pf = build_problem(fixed_cfg, cfg.geometry.n);
        const SolveResult sf = solve_dirichlet(pf.mask, scaled(g, k4), pf.stencil, opts);
        ++solves;
        const double sup_fixed = sup_over_ball(sf.field, c, half, &pf.mask);

        all_converged = all_converged && pinned_converged && sf.report.converged;
        accepted_all = accepted_all && (a_star == 0.0 || accepted_converged);
        sups.push_back(sup_half);
        res.table.add_row({kappa, a_star, sup_half, w_center, sup_fixed, std::int64_t{solves}, yes_no(pinned_converged),
                           yes_no(accepted_converged), yes_no(sf.report.converged)});
    }

    const double tol = cfg.solver.tol;
    check(res, "kappa_decreasing", decreasing_kappa, "kappa list strictly decreasing");
    bool monotone = true;
    for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] <= sups[i - 1] + 2.0 * tol;
    check(res, "sup_non_increasing", monotone, "pinned sup over the half ball is non-increasing within 2 tol");
    if (!sups.empty())
        check(res, "final_below_mu", sups.back() <= cfg.analysis.mu,
              "final sup " + num(sups.back()) + " vs mu " + num(cfg.analysis.mu));
    check(res, "accepted_converged", accepted_all, "every accepted pinned solve reached the residual tolerance");
    check(res, "converged", all_converged, "every solve reached the residual tolerance");
    return res;
}

ExperimentResult run_borderline(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::Borderline;
    res.table = ResultTable({"term", "n", "h", "min_u", "dead_core_nodes", "plateau_measured", "plateau_predicted",
                             "sweeps", "residual", "converged"});
    res.table.name = "borderline";
    ExperimentConfig bcfg = cfg;
    bcfg.boundary.mode = BoundaryMode::Constant;
    const double eps = threshold(cfg);

    std::vector<double> mins;
    std::vector<std::size_t> counts;
    bool all_converged = true;
    for (int n : cfg.analysis.n_list) {
        const Problem p = build_problem(bcfg, n);
        const SolveResult s = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg));
        const PositivityDecomposition dec = decompose(s.field, p.mask, eps);
        double mn = std::numeric_limits<double>::infinity();
        for (NodeId v : p.mask.interior()) mn = std::min(mn, s.field[v]);
        mins.push_back(mn);
        counts.push_back(dec.dead_core_count());
        all_converged = all_converged && s.report.converged;
        res.table.add_row({p.source.describe(), std::int64_t{n}, p.h, mn, static_cast<std::int64_t>(dec.dead_core_count()),
                           kNaN, kNaN, std::int64_t{s.report.sweeps}, s.report.residual, yes_no(s.report.converged)});
    }

    ExperimentConfig ccfg = bcfg;
    ccfg.source = cfg.analysis.contrast_term;
    const Problem pc = build_problem(ccfg, cfg.analysis.contrast_n);
    const SolveResult sc = solve_dirichlet(pc.mask, pc.source, pc.stencil, solve_options(cfg));
    const PositivityDecomposition dc = decompose(sc.field, pc.mask, eps);
    const double R_meas = equivalent_radius(dc, pc.mask);
    const double R_pred = cfg.analysis.contrast_radius > 0.0 ? cfg.analysis.contrast_radius : pc.plateau_radius;
    double cmin = std::numeric_limits<double>::infinity();
    for (NodeId v : pc.mask.interior()) cmin = std::min(cmin, sc.field[v]);
    res.table.add_row({pc.source.describe(), std::int64_t{cfg.analysis.contrast_n}, pc.h, cmin,
                       static_cast<std::int64_t>(dc.dead_core_count()), R_meas, R_pred,
                       std::int64_t{sc.report.sweeps}, sc.report.residual, yes_no(sc.report.converged)});

    bool none_dead = std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; });
    bool positive = std::all_of(mins.begin(), mins.end(), [](double m) { return m > 0.0; });
    double worst_change = 0.0;
    for (std::size_t i = 1; i < mins.size(); ++i)
        worst_change = std::max(worst_change, std::abs(mins[i] - mins[i - 1]) / std::abs(mins[i - 1]));
    check(res, "no_dead_core", none_dead, "dead-core node count is zero at every level");
    check(res, "min_positive", positive, "min u > 0 at every level");
    check(res, "min_level_stable", positive && worst_change <= cfg.analysis.stability_tol,
          "largest relative change of min u between levels " + num(worst_change));
    check(res, "contrast_plateau", R_pred > 0.0 && std::abs(R_meas - R_pred) <= cfg.analysis.contrast_tol * R_pred,
          "contrast plateau " + num(R_meas) + " vs " + num(R_pred));
    check(res, "converged", all_converged && sc.report.converged, "every solve reached the residual tolerance");
    return res;
}

ExperimentResult run_liouville_plateau(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::LiouvillePlateau;
    const SourceTerm f = parse_source(cfg.source);
    require(is_power(f) && f.gamma() < 3.0, ErrorCode::InvalidArgument, "plateau scaling needs a power source with gamma < 3");
    const double theta = cfg.analysis.theta;
    require(theta > 0.0 && theta < 1.0, ErrorCode::InvalidArgument, "theta must lie in (0, 1)");
    const double Y = upsilon(f.lambda(), f.gamma());
    const double beta = beta_of(f);
    const double fraction_pred = 1.0 - std::pow(theta, 1.0 / beta);

    res.table = ResultTable({"r", "h", "alpha", "plateau_predicted", "plateau_measured", "fraction_measured",
                             "fraction_predicted", "lambda_cmp", "sweeps", "residual", "converged"});
    res.table.name = "liouville";
    std::vector<double> fractions;
    bool within = true, all_converged = true;
    std::string detail;
    for (double r : cfg.analysis.r_list) {
        ExperimentConfig rc = cfg;
        rc.geometry.radius = r;
        rc.boundary.mode = BoundaryMode::Exact;
        rc.boundary.plateau_radius = r * fraction_pred;
        const Problem p = build_problem(rc, cfg.geometry.n);
        const SolveResult s = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg));
        const PositivityDecomposition dec = decompose(s.field, p.mask, threshold(cfg));
        const double R_meas = equivalent_radius(dec, p.mask);
        const double alpha = theta * Y * std::pow(r, beta);
        fractions.push_back(R_meas / r);
        within = within && std::abs(R_meas - p.plateau_radius) <= 3.0 * p.h;
        all_converged = all_converged && s.report.converged;
        detail += "r=" + num(r) + ": " + num(R_meas) + " vs " + num(p.plateau_radius) + "; ";
        res.table.add_row({r, p.h, alpha, p.plateau_radius, R_meas, R_meas / r, fraction_pred,
                           lambda_from_source(f, f.declared().M, alpha), std::int64_t{s.report.sweeps},
                           s.report.residual, yes_no(s.report.converged)});
    }
    check(res, "plateau_within_3h", within, detail);
    if (!fractions.empty()) {
        const auto [lo, hi] = std::minmax_element(fractions.begin(), fractions.end());
        check(res, "fraction_scale_free", *hi - *lo <= cfg.analysis.fraction_tol,
              "plateau fractions spread " + num(*hi - *lo));
    }
    check(res, "converged", all_converged, "every solve reached the residual tolerance");
    return res;
}

ExperimentResult run_porosity_study(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::PorosityStudy;
    const Problem p = build_problem(cfg, cfg.geometry.n);
    const SolveResult s = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg));
    const PositivityDecomposition dec = decompose(s.field, p.mask, threshold(cfg));
    res.table = ResultTable({"n", "h", "free_boundary_nodes", "dead_core_nodes", "sigma_hat", "worst_radius",
                             "box_dimension", "scales_fitted", "c_hat", "C_hat", "sigma_from_constants", "residual",
                             "converged"});
    res.table.name = "porosity";
    if (dec.free_boundary.empty()) {
        check(res, "free_boundary_nonempty", false, "no free boundary in the solved field");
        return res;
    }
    std::vector<double> radii = cfg.analysis.porosity_radii;
    if (radii.empty()) radii = {4.0 * p.h, 8.0 * p.h, 16.0 * p.h};
    const PorosityEstimate est = porosity_estimate(dec, radii);
    double c_hat = kNaN, C_hat = kNaN, sigma_c = kNaN;
    if (is_power(p.source) && p.source.gamma() < 3.0) {
        const GrowthOutcome g = growth_fit(cfg, p, s.field, dec, beta_of(p.source),
                                           cfg.analysis.fit_center == "interface");
        if (g.ok) {
            c_hat = g.nd.c_hat;
            C_hat = g.nd.C_hat;
            sigma_c = 0.5 * std::pow(c_hat / C_hat, 1.0 / beta_of(p.source));
        }
    }
    res.table.add_row({std::int64_t{cfg.geometry.n}, p.h, static_cast<std::int64_t>(dec.free_boundary.size()),
                       static_cast<std::int64_t>(dec.dead_core_count()), est.sigma_hat, est.worst_radius,
                       est.box_dimension, std::int64_t{est.scales_fitted}, c_hat, C_hat, sigma_c,
                       s.report.residual, yes_no(s.report.converged)});
    ResultTable boxes({"scale", "boxes"});
    boxes.name = "boxes";
    for (std::size_t i = 0; i < est.scales.size(); ++i)
        boxes.add_row({est.scales[i], static_cast<std::int64_t>(est.box_counts[i])});
    res.extra_tables.push_back(std::move(boxes));

    check(res, "sigma_floor", est.sigma_hat >= cfg.analysis.sigma_floor,
          "sigma_hat " + num(est.sigma_hat) + " (floor " + num(cfg.analysis.sigma_floor) + ")");
    check(res, "box_dimension", est.box_dimension >= cfg.analysis.dim_min && est.box_dimension <= cfg.analysis.dim_max,
          "box dimension " + num(est.box_dimension));
    check(res, "converged", s.report.converged, "residual " + num(s.report.residual));
    if (cfg.output.dump_field) res.fields.push_back({"solution", s.field});
    return res;
}

ExperimentResult run_condition_audit(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::ConditionAudit;
    const AuditConfig& a = cfg.audit;
    res.table = ResultTable({"term", "condition", "gamma", "delta_max", "t_max", "empirical", "declared", "pass",
                             "worst_delta", "worst_t", "asserted"});
    res.table.name = "audit";
    for (const std::string& text : a.terms) {
        const SourceTerm f = parse_source(text);
        const bool asserted = std::find(a.report_only.begin(), a.report_only.end(), text) == a.report_only.end();
        for (const std::string& cond : a.conditions) {
            ConditionReport rep;
            if (cond == "upper")
                rep = check_condition(f, Condition::UpperGrowth, a.gamma, a.delta_max, a.t_max, a.samples);
            else if (cond == "lower")
                rep = check_condition(f, Condition::LowerGrowth, a.gamma, a.delta_max, a.t_max, a.samples);
            else if (cond == "borderline")
                rep = check_condition(f, Condition::Borderline, 3.0, a.delta_max, a.t_max, a.samples);
            else if (cond == "monotone")
                rep = check_monotone(f, a.t_max, std::max(100, a.samples));
            else
                raise(ErrorCode::InvalidArgument, "unknown audit condition '" + cond + "'");
            res.table.add_row({f.describe(), cond, rep.gamma, rep.delta_max, rep.t_max, rep.empirical, rep.declared,
                               yes_no(rep.pass), rep.worst_delta, rep.worst_t, yes_no(asserted)});
            if (asserted)
                check(res, f.describe() + ":" + cond, rep.pass,
                      "empirical " + num(rep.empirical) + ", declared " + num(rep.declared));
        }
    }
    return res;
}

ExperimentResult run_verify(const ExperimentConfig& cfg)
{
    ExperimentResult res;
    res.kind = ExperimentKind::Verify;
    const Problem p = build_problem(cfg, cfg.geometry.n);
    const std::string& cand = cfg.analysis.candidate;
    ScalarField u;
    if (cand == "exact") {
        require(static_cast<bool>(p.oracle), ErrorCode::InvalidArgument, "boundary mode has no exact candidate");
        u = ScalarField(p.grid, 0.0);
        for (NodeId n = 0; n < u.size(); ++n)
            if (p.mask.readable(n)) u[n] = p.oracle(p.grid.coord(n));
    } else if (cand == "solve") {
        u = solve_dirichlet(p.mask, p.source, p.stencil, solve_options(cfg)).field;
    } else if (cand.rfind("file:", 0) == 0) {
        const ScalarField loaded = read_field(cand.substr(5));
        const GridSpec& lg = loaded.grid();
        bool same = lg.dim == p.grid.dim;
        for (int a = 0; same && a < lg.dim; ++a)
            same = lg.cells[a] == p.grid.cells[a] && std::abs(lg.h[a] - p.grid.h[a]) <= 1e-12 * p.grid.h[a] &&
                   std::abs(lg.origin[a] - p.grid.origin[a]) <= 1e-12 * std::max(1.0, std::abs(p.grid.origin[a]));
        require(same, ErrorCode::InvalidArgument, "candidate field does not match the configured grid");
        u = ScalarField(p.grid, std::vector<double>(loaded.values().begin(), loaded.values().end()));
    } else {
        raise(ErrorCode::InvalidArgument, "unknown verify candidate '" + cand + "'");
    }

    const TouchingReport rep = verify_viscosity(u, p.mask, p.source, cfg.analysis.probes, cfg.analysis.probe_radius,
                                                cfg.analysis.probe_tol, cfg.seed, cfg.analysis.probe_tol_f);
    res.table = ResultTable({"seed", "probes", "touching_below", "touching_above", "violations", "worst_super",
                             "worst_sub", "tol", "tol_f"});
    res.table.name = "verify";
    res.table.add_row({static_cast<std::int64_t>(rep.seed), std::int64_t{rep.probes}, std::int64_t{rep.touching_below},
                       std::int64_t{rep.touching_above}, static_cast<std::int64_t>(rep.violation_count),
                       rep.worst_super, rep.worst_sub, rep.tol, rep.tol_f});
    ResultTable viol({"node", "side", "targeted", "inf_laplacian", "source", "excess"});
    viol.name = "violations";
    for (const ProbeViolation& v : rep.violations)
        viol.add_row({static_cast<std::int64_t>(v.probe.node), std::string(v.side == TouchSide::Below ? "below" : "above"),
                      yes_no(v.probe.targeted), v.inf_laplacian, v.source, v.excess});
    res.extra_tables.push_back(std::move(viol));
    check(res, "no_violations", rep.pass(), std::to_string(rep.violation_count) + " violations beyond tol_f " + num(rep.tol_f));
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.kind) {
    case ExperimentKind::Solve: return run_solve(cfg);
    case ExperimentKind::Convergence: return run_convergence(cfg);
    case ExperimentKind::Flatness: return run_flatness(cfg);
    case ExperimentKind::Borderline: return run_borderline(cfg);
    case ExperimentKind::LiouvillePlateau: return run_liouville_plateau(cfg);
    case ExperimentKind::PorosityStudy: return run_porosity_study(cfg);
    case ExperimentKind::ConditionAudit: return run_condition_audit(cfg);
    case ExperimentKind::Verify: return run_verify(cfg);
    }
    raise(ErrorCode::Internal, "unhandled experiment kind");
}

void write_result(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
    const std::string stem = (std::filesystem::path(dir) / to_string(result.kind)).string();
    auto emit = [&](ResultTable t, const std::string& path) {
        t.config_hash = cfg.hash;
        std::ofstream out(path + ".csv", std::ios::binary);
        require(static_cast<bool>(out), ErrorCode::Io, "cannot write '" + path + ".csv'");
        out << t.to_csv();
        if (cfg.output.json) {
            std::ofstream js(path + ".json", std::ios::binary);
            require(static_cast<bool>(js), ErrorCode::Io, "cannot write '" + path + ".json'");
            js << t.to_json();
        }
    };
    emit(result.table, stem);
    for (const ResultTable& t : result.extra_tables) emit(t, stem + "_" + t.name);
    ResultTable asserts({"assertion", "pass", "detail"});
    asserts.name = "assertions";
    for (const Assertion& a : result.assertions) asserts.add_row({a.name, yes_no(a.pass), a.detail});
    emit(asserts, stem + "_assertions");
    if (cfg.output.dump_field)
        for (const NamedField& f : result.fields)
            write_field(f.field, stem + "_" + f.name + ".dclab", cfg.output.binary);
}

}  // namespace dclab
