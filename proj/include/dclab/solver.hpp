/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <functional>
#include <optional>

#include "dclab/grid.hpp"
#include "dclab/inf_laplacian.hpp"
#include "dclab/source_terms.hpp"

namespace dclab {

enum class SweepOrder {
    Lexicographic,
    /// Multicolour ordering: nodes are coloured by (index mod (k+1)) per axis,
    /// so no two nodes of one colour see each other through a radius-k
    /// stencil. For k = 1 in 1D this is the classic red-black split.
    RedBlack,
};

struct SolveOptions {
    double tol = 1e-8;
    int max_sweeps = 200000;
    double damping = 1.0;
    SweepOrder order = SweepOrder::Lexicographic;
    /// Lexicographic only: alternate forward and backward passes.
    bool symmetric = true;
    int bracket_expansion_cap = 60;
    /// Multiply damping by 0.8 (down to 0.5) whenever the residual has not
    /// improved on its best value for `stall_window` sweeps. A window of 0
    /// means four times the longest grid axis in nodes.
    bool auto_damping = true;
    int stall_window = 0;
    /// Stop once the residual has not reached a new minimum for this many
    /// sweeps; 0 disables. The run is then reported unconverged.
    int stall_limit = 0;
    /// Skip the monotone-source precondition.
    bool allow_nonmonotone = false;
    /// Worker threads for RedBlack sweeps; Lexicographic always runs on one.
    int threads = 1;
    /// Called after every sweep with (sweep, residual, damping).
    std::function<void(int, double, double)> on_sweep;
};

struct SolveReport {
    int sweeps = 0;
    double residual = 0.0;
    double wall_seconds = 0.0;
    bool converged = false;
    double min_value = 0.0;
    double max_value = 0.0;
    double final_damping = 1.0;
    /// Sweep that produced the returned iterate. Unconverged runs return
    /// the smallest-residual iterate seen, not the last one.
    int best_sweep = 0;
};

struct SolveResult {
    ScalarField field;
    SolveReport report;
};

/// Relaxed value for one interior node with all neighbours frozen: a root of
/// phi(t) = Delta_inf^h[u with u(node)=t] - f(t), blended with the current
/// value by `damping`.
double node_update(const ScalarField& u, const DomainMask& mask, NodeId node, const SourceTerm& f,
                   const StencilSet& stencil, double damping = 1.0, int bracket_expansion_cap = 60);

/// Nonlinear Gauss-Seidel for Delta_inf u = f(u) with the mask's Dirichlet data.
/// Lexicographic runs alternate forward and backward passes unless
/// `symmetric` is off. Non-convergence is reported, not thrown.
SolveResult solve_dirichlet(const DomainMask& mask, const SourceTerm& f, const StencilSet& stencil,
                            const SolveOptions& opts = {},
                            const std::optional<ScalarField>& initial_guess = std::nullopt);

/// Multilinear interpolation of `coarse` at every node of `fine`; points
/// outside the coarse grid are clamped to it.
ScalarField interpolate(const ScalarField& coarse, const GridSpec& fine);

}  // namespace dclab
