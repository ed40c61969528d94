/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dclab/config.hpp"
#include "dclab/free_boundary.hpp"
#include "dclab/solver.hpp"
#include "dclab/table.hpp"

namespace dclab {

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct NamedField {
    std::string name;
    ScalarField field;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::Solve;
    ResultTable table;
    std::vector<ResultTable> extra_tables;
    std::vector<Assertion> assertions;
    std::vector<NamedField> fields;

    /// True iff every assertion holds.
    [[nodiscard]] bool passed() const;
};

/// Ball problem of the config at resolution n: grid padded by the stencil
/// reach, Dirichlet data from the boundary mode, and the radial oracle when
/// the mode provides one.
struct Problem {
    GridSpec grid;
    DomainMask mask;
    SourceTerm source;
    StencilSet stencil;
    double h = 0.0;
    /// Exact or quadrature solution; empty for constant data with a nonzero source.
    std::function<double(const Point&)> oracle;
    /// Oracle on the sphere |x - center| = radius; the nominal boundary value.
    double alpha = 0.0;
    /// Predicted plateau radius; negative when no dead core is predicted.
    double plateau_radius = -1.0;
};

Problem build_problem(const ExperimentConfig& cfg, int n);

/// Radius of the ball with the same volume as the dead-core nodes.
double equivalent_radius(const PositivityDecomposition& dec, const DomainMask& mask);

/// lambda = bound^(-gamma) f(bound) / M: the power-source coefficient that
/// lies below f on [0, bound] under the upper growth condition with constant M.
double lambda_from_source(const SourceTerm& f, double M, double bound);

ExperimentResult run_solve(const ExperimentConfig& cfg);
ExperimentResult run_convergence(const ExperimentConfig& cfg);
ExperimentResult run_flatness(const ExperimentConfig& cfg);
ExperimentResult run_borderline(const ExperimentConfig& cfg);
ExperimentResult run_liouville_plateau(const ExperimentConfig& cfg);
ExperimentResult run_porosity_study(const ExperimentConfig& cfg);
ExperimentResult run_condition_audit(const ExperimentConfig& cfg);
ExperimentResult run_verify(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes <dir>/<kind>.csv (plus .json), extra tables, an assertions table
/// and, when enabled, DCLAB1 dumps of the result fields. Creates `dir`.
void write_result(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& dir);

}  // namespace dclab
