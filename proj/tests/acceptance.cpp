/* SPDX-License-Identifier: Apache-2.0 */
// Acceptance report: one PASS/FAIL line per criterion.
//
//   dclab_acceptance [--only 1,5,13] [--expect-fail 6]
//
// Exit status is nonzero when a criterion fails that is not listed in
// --expect-fail. Listed failures are still printed as FAIL.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dclab/experiments.hpp"
#include "dclab/inf_laplacian.hpp"
#include "dclab/radial.hpp"
#include "dclab/viscosity.hpp"

using namespace dclab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string g6(double a) { return fmt("%.6g", a); }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridSpec square(double half, int cells)
{
    const std::vector<double> origin{-half, -half}, extent{2 * half, 2 * half};
    const std::vector<int> c{cells, cells};
    return make_grid(2, origin, extent, c);
}

ExperimentConfig dead_core_config(double gamma, int n)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::Solve;
    c.geometry.n = n;
    c.boundary.mode = BoundaryMode::Exact;
    c.boundary.plateau_radius = 0.5;
    c.source = "power(1, " + g6(gamma) + ")";
    c.stencil_k = 2;
    c.solver.tol = 1e-8;
    c.output.dump_field = true;
    return c;
}

const Assertion* find(const ExperimentResult& r, const std::string& name)
{
    for (const Assertion& a : r.assertions)
        if (a.name == name) return &a;
    return nullptr;
}

// Shared between criteria 5 and 7 (same 129^2 gamma = 1 run) and 6 and 11.
std::optional<ExperimentResult> gamma1_129;
std::optional<ExperimentResult> refinement;
double gamma1_seconds = 0.0;

const ExperimentResult& gamma1_solve()
{
    if (!gamma1_129) {
        ExperimentConfig c = dead_core_config(1.0, 64);
        c.analysis.max_rel_error = 0.02;
        c.analysis.plateau_tol_h = 2.0;
        c.analysis.exponent_tol = 0.15;
        const auto t0 = std::chrono::steady_clock::now();
        gamma1_129 = run_solve(c);
        gamma1_seconds = seconds_since(t0);
    }
    return *gamma1_129;
}

Outcome criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> rho{0.01, 0.1, 0.5, 1.0, 2.0, 10.0};
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0})
        for (double gamma : {0.0, 1.0, 2.0, 2.9}) worst = std::max(worst, verify_ansatz(lambda, gamma, rho));
    const double t = seconds_since(t0);
    return {worst <= 1e-10 && t < 1.0, "max relative defect " + g6(worst) + ", " + g6(t) + " s"};
}

Outcome criterion2()
{
    const auto t0 = std::chrono::steady_clock::now();
    double quad_err = 0.0, affine_err = 0.0;
    for (int k : {1, 2}) {
        const GridSpec g = square(1.0, 128);
        auto sq = [](const Point& x) { return x[0] * x[0]; };
        const DomainMask m = box_mask(g, sq, k);
        const ScalarField u = ScalarField::sample(g, sq);
        const StencilSet st = stencil_directions(2, k);
        const NodeId at = g.flat(Index{96, 64, 0});
        quad_err = std::max(quad_err, std::abs(discrete_inf_laplacian(u, m, at, st) - 2.0));
        // Axis-aligned quadratic: the operator is exact at every interior node.
        for (NodeId n : m.interior()) {
            const double x = g.coord(n)[0];
            if (std::abs(x) > 4 * k * g.spacing())
                quad_err = std::max(quad_err, std::abs(discrete_inf_laplacian(u, m, n, st) - 8.0 * x * x) /
                                                  std::max(1.0, 8.0 * x * x));
        }
        auto aff = [](const Point& x) { return 0.75 * x[0] - 0.4 * x[1] + 0.3; };
        const DomainMask ma = box_mask(g, aff, k);
        const ScalarField ua = ScalarField::sample(g, aff);
        const ScalarField op = apply_operator(ua, ma, st);
        for (NodeId n : ma.interior()) affine_err = std::max(affine_err, std::abs(op[n]));
    }
    const double t = seconds_since(t0);
    return {quad_err <= 1e-9 && affine_err <= 1e-12 && t < 1.0,
            "quadratic error " + g6(quad_err) + ", affine max |op| " + g6(affine_err) + ", " + g6(t) + " s"};
}

Outcome criterion3()
{
    const GridSpec g = square(1.0, 32);
    const DomainMask m = box_mask(g, [](const Point&) { return 0.0; }, 2);
    const InfLaplacianStencil st(m, stencil_directions(2, 2));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> u(g.node_count());
        for (double& v : u) v = d(rng);
        for (double c : {0.5, 2.0, 10.0}) {
            std::vector<double> cu(u);
            for (double& v : cu) v *= c;
            for (NodeId n : m.interior()) {
                const double base = c * c * c * st.value(u, n);
                const double scaled = st.value(cu, n);
                if (base != 0.0) worst = std::max(worst, std::abs(scaled - base) / std::abs(base));
            }
        }
    }
    return {worst <= 1e-12, "max relative deviation " + g6(worst)};
}

Outcome criterion4()
{
    double worst = 0.0;
    for (double gamma : {1.0, 0.0}) {
        const RadialProfile prof = quadrature_profile(SourceTerm::power(1, gamma), 1.5, 4000);
        const double Y = upsilon(1.0, gamma);
        const double beta = 4.0 / (3.0 - gamma);
        for (int i = 0; i <= 400; ++i) {
            const double rho = 0.01 * std::pow(100.0, i / 400.0);
            const double exact = Y * std::pow(rho, beta);
            worst = std::max(worst, std::abs(prof.value_at(rho) - exact) / exact);
        }
    }
    return {worst <= 1e-6, "max relative deviation " + g6(worst)};
}

Outcome criterion5()
{
    const ExperimentResult& r = gamma1_solve();
    const double t = gamma1_seconds;
    const Assertion* conv = find(r, "converged");
    const Assertion* err = find(r, "oracle_error");
    const Assertion* plat = find(r, "plateau_radius");
    const bool pass = conv && conv->pass && err && err->pass && plat && plat->pass && t < 120.0;
    return {pass, "rel error " + g6(r.table.number(0, "rel_error")) + " (<= 0.02), plateau " +
                      g6(r.table.number(0, "plateau_measured")) + " vs 0.5 (2h = 0.03125), residual " +
                      g6(r.table.number(0, "residual")) + ", " + g6(t) + " s"};
}

Outcome criterion6()
{
    ExperimentConfig c = dead_core_config(1.0, 32);
    c.kind = ExperimentKind::Convergence;
    c.analysis.n_list = {32, 64, 128};
    c.analysis.min_order = 0.5;
    refinement = run_convergence(c);
    const ExperimentResult& r = *refinement;
    std::string detail = "errors";
    for (std::size_t i = 0; i < r.table.rows().size(); ++i) detail += " " + g6(r.table.number(i, "linf_error"));
    detail += ", finest order " + g6(r.table.number(r.table.rows().size() - 1, "order"));
    return {r.passed(), detail};
}

Outcome criterion7()
{
    const ExperimentResult& r1 = gamma1_solve();
    const double s1 = r1.table.number(0, "fit_slope");

    ExperimentConfig c = dead_core_config(0.0, 64);
    c.solver.stall_limit = 3000;
    c.analysis.exponent_tol = 0.15;
    const ExperimentResult r0 = run_solve(c);
    const double s0 = r0.table.number(0, "fit_slope");
    const bool pass = std::abs(s1 - 2.0) <= 0.15 && std::abs(s0 - 4.0 / 3.0) <= 0.15;
    return {pass, "gamma=1 slope " + g6(s1) + " (target 2), gamma=0 slope " + g6(s0) + " (target 1.3333, residual " +
                      g6(r0.table.number(0, "residual")) + ", converged " +
                      std::get<std::string>(r0.table.at(0, "converged")) + ")"};
}

Outcome criterion8()
{
    const double tol = 1e-8;
    const int n = 16;
    ExperimentConfig c = dead_core_config(1.0, n);
    // Random data is mostly positive; the monotone surrogate is the one whose
    // node map is order preserving there.
    c.gradient = GradientSurrogate::Monotone;
    const Problem p = build_problem(c, n);
    SolveOptions o;
    o.tol = tol;
    o.stall_limit = 3000;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), lift(0.0, 0.5);
    double worst_order = -INFINITY, worst_min = INFINITY, worst_residual = 0.0;
    int unconverged = 0;
    for (int pair = 0; pair < 20; ++pair) {
        const double a0 = 1.0 + coef(rng), a1 = coef(rng), a2 = coef(rng), a3 = coef(rng), w = 1.0 + 3.0 * lift(rng);
        const double b0 = lift(rng), b1 = lift(rng), b2 = 2.0 * lift(rng);
        auto phi1 = [=](const Point& x) {
            return std::max(0.0, 0.5 * a0 + 0.3 * a1 * x[0] + 0.3 * a2 * x[1] + 0.2 * a3 * std::sin(w * (x[0] - x[1])));
        };
        auto phi2 = [=](const Point& x) { return phi1(x) + b0 + b1 * std::abs(std::cos(b2 * x[0] * x[1])); };
        DomainMask m1 = p.mask, m2 = p.mask;
        m1.set_boundary_values(phi1);
        m2.set_boundary_values(phi2);
        const SolveResult u1 = solve_dirichlet(m1, p.source, p.stencil, o);
        const SolveResult u2 = solve_dirichlet(m2, p.source, p.stencil, o);
        unconverged += !u1.report.converged + !u2.report.converged;
        worst_residual = std::max({worst_residual, u1.report.residual, u2.report.residual});
        for (NodeId n : p.mask.interior()) worst_order = std::max(worst_order, u1.field[n] - u2.field[n]);
        worst_min = std::min({worst_min, u1.report.min_value, u2.report.min_value});
    }
    const bool pass = worst_order <= 1e-6 + 2 * tol && worst_min >= -tol && unconverged == 0;
    return {pass, "max(u1 - u2) " + g6(worst_order) + ", min u " + g6(worst_min) + ", unconverged solves " +
                      std::to_string(unconverged) + " of 40 (worst residual " + g6(worst_residual) + ")"};
}

Outcome criterion9()
{
    ExperimentConfig c;
    c.kind = ExperimentKind::Borderline;
    c.boundary.mode = BoundaryMode::Constant;
    c.boundary.value = 1.0;
    c.source = "cubic(1)";
    c.gradient = GradientSurrogate::Monotone;
    c.solver.stall_limit = 2000;
    c.analysis.n_list = {32, 64, 128};
    c.analysis.contrast_term = "power(32, 1)";
    c.analysis.contrast_n = 64;
    const ExperimentResult r = run_borderline(c);
    std::string detail = "min u";
    const std::size_t levels = c.analysis.n_list.size();
    for (std::size_t i = 0; i < levels; ++i) detail += " " + g6(r.table.number(i, "min_u"));
    detail += ", dead nodes";
    for (std::size_t i = 0; i < levels; ++i) detail += " " + g6(r.table.number(i, "dead_core_nodes"));
    detail += ", contrast radius " + g6(r.table.number(levels, "plateau_measured")) + " vs " +
              g6(r.table.number(levels, "plateau_predicted"));
    // The criterion covers the dead-core counts, positivity, level stability and the contrast radius.
    bool pass = true;
    for (const char* name : {"no_dead_core", "min_positive", "min_level_stable", "contrast_plateau"})
        pass = pass && find(r, name) && find(r, name)->pass;
    const Assertion* conv = find(r, "converged");
    detail += std::string(", all solves converged: ") + (conv && conv->pass ? "yes" : "no");
    return {pass, detail};
}

Outcome criterion10()
{
    ExperimentConfig c = dead_core_config(1.0, 64);
    c.kind = ExperimentKind::LiouvillePlateau;
    c.analysis.theta = 0.25;
    c.analysis.r_list = {1.0, 2.0};
    const ExperimentResult r = run_liouville_plateau(c);
    const double h = 1.0 / 64;
    const double f1 = r.table.number(0, "fraction_measured"), f2 = r.table.number(1, "fraction_measured");
    const bool pass = std::abs(f1 - 0.5) <= 3 * h / 1.0 && std::abs(f2 - 0.5) <= 3 * h / 2.0 &&
                      std::abs(f1 - f2) <= 0.02;
    return {pass, "fractions " + g6(f1) + " (r=1, bound " + g6(3 * h) + "), " + g6(f2) + " (r=2, bound " +
                      g6(1.5 * h) + "), spread " + g6(std::abs(f1 - f2))};
}

Outcome criterion11()
{
    if (!refinement || refinement->fields.empty()) return {false, "needs the 1/128 field of criterion 6"};
    const ExperimentConfig c = dead_core_config(1.0, 128);
    const Problem p = build_problem(c, 128);
    const ScalarField& u = refinement->fields.front().field;
    const PositivityDecomposition dec = decompose(u, p.mask, 10.0 * c.solver.tol);
    const double h = p.h;
    const std::vector<double> radii{4 * h, 8 * h, 16 * h};
    const PorosityEstimate est = porosity_estimate(dec, radii);
    const bool pass = est.box_dimension >= 0.8 && est.box_dimension <= 1.4 && est.sigma_hat >= 0.05;
    return {pass, "box dimension " + g6(est.box_dimension) + ", sigma " + g6(est.sigma_hat) + " on " +
                      std::to_string(u.grid().nodes_along(0)) + "^2 nodes (collar included)"};
}

Outcome criterion12()
{
    const ConditionReport e = check_condition(SourceTerm::exp_minus_one(), Condition::UpperGrowth, 0.0, 1.0, 5.0, 200);
    const ConditionReport l =
        check_condition(SourceTerm::log_one_plus_square(), Condition::UpperGrowth, 0.0, 1.0, 5.0, 200);
    double power_dev = 0.0;
    bool power_pass = true;
    for (double lambda : {0.5, 1.0, 2.0})
        for (double gamma : {0.0, 1.0, 2.0}) {
            const SourceTerm f = SourceTerm::power(lambda, gamma);
            const ConditionReport up = check_condition(f, Condition::UpperGrowth, gamma, 1.0, 5.0, 200);
            const ConditionReport lo = check_condition(f, Condition::LowerGrowth, gamma, 1.0, 5.0, 200);
            power_dev = std::max({power_dev, std::abs(up.empirical - 1.0), std::abs(lo.empirical - 1.0)});
            power_pass = power_pass && up.pass && lo.pass;
        }
    const ConditionReport cube =
        check_condition(SourceTerm::log_one_plus_cube(), Condition::Borderline, 3.0, 1.0, 2.0, 200);
    const bool pass = e.pass && e.empirical <= 1.0 + 1e-9 && l.pass && l.empirical <= 1.0 + 1e-9 && power_pass &&
                      power_dev <= 1e-12 && std::isfinite(cube.empirical);
    return {pass, "exp_minus_one M " + g6(e.empirical) + ", log_one_plus_square M " + g6(l.empirical) +
                      ", power max |M-1|,|N-1| " + g6(power_dev) + ", log_one_plus_cube borderline M " +
                      g6(cube.empirical) + " (reported)"};
}

Outcome criterion13()
{
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = dead_core_config(1.0, 64);
    c.kind = ExperimentKind::Verify;
    c.seed = 13;
    c.analysis.candidate = "exact";
    c.analysis.probes = 10000;
    const ExperimentResult r = run_verify(c);
    const double t = seconds_since(t0);
    return {r.passed() && t < 30.0, "violations " + g6(r.table.number(0, "violations")) + " of 10000 probes (tol_f " +
                                        g6(r.table.number(0, "tol_f")) + "), " + g6(t) + " s"};
}

Outcome criterion14()
{
    ExperimentConfig c;
    c.kind = ExperimentKind::Flatness;
    c.geometry.n = 16;
    c.source = "power(1, 1)";
    c.analysis.kappa_list = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    c.analysis.mu = 0.25;
    // Constant data keeps most trials positive; see the comparison criterion.
    c.gradient = GradientSurrogate::Monotone;
    c.solver.stall_limit = 500;
    const ExperimentResult r = run_flatness(c);
    std::string detail = "sup column";
    for (std::size_t i = 0; i < r.table.rows().size(); ++i) detail += " " + g6(r.table.number(i, "sup_half"));
    const Assertion* mono = find(r, "sup_non_increasing");
    const Assertion* mu = find(r, "final_below_mu");
    const Assertion* accepted = find(r, "accepted_converged");
    const Assertion* all = find(r, "converged");
    detail += std::string(", accepted solves converged: ") + (accepted && accepted->pass ? "yes" : "no") +
              ", every trial converged: " + (all && all->pass ? "yes" : "no");
    return {mono && mono->pass && mu && mu->pass && accepted && accepted->pass, detail};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria report"};
    std::vector<int> only, expect_fail;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail; reported but not fatal")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"ansatz identity", criterion1},      {"operator exactness", criterion2},
        {"operator homogeneity", criterion3}, {"oracle agreement", criterion4},
        {"dead-core reproduction", criterion5}, {"convergence", criterion6},
        {"sharp exponent", criterion7},       {"comparison", criterion8},
        {"borderline", criterion9},           {"plateau scaling", criterion10},
        {"porosity", criterion11},            {"condition audit", criterion12},
        {"viscosity probe", criterion13},     {"flatness sweep", criterion14},
    };
    const std::set<int> selected(only.begin(), only.end());
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        // Criterion 11 reads the finest field of criterion 6.
        if (!selected.empty() && !selected.count(id) && !(id == 6 && selected.count(11))) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!selected.empty() && !selected.count(id)) continue;
        const char* tag = o.pass ? "PASS" : "FAIL";
        std::string note;
        if (!o.pass && expected.count(id)) note = " [known failure]";
        if (!o.pass && !expected.count(id)) ++unexpected;
        std::printf("criterion %2d %s %-22s %s (%.1f s)%s\n", id, tag, criteria[i].first, o.detail.c_str(),
                    seconds_since(t0), note.c_str());
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
