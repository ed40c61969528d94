/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dclab/grid.hpp"

namespace dclab {

enum class SourceFamily {
    Zero,
    Power,             ///< lambda * t_+^gamma, with 0^0 taken as 0
    ExpMinusOne,       ///< e^t - 1
    LogOnePlusSquare,  ///< log(1 + t^2)
    LogOnePlusCube,    ///< log(1 + t^3)
    Cubic,             ///< lambda * t^3
    SpatiallyScaled,   ///< g(x) * base(t)
    LinearCombination, ///< sum of w_i * f_i(t), w_i >= 0
};

/// Growth constants a term claims for itself. N is NaN when the term makes
/// no lower-growth claim. `M` is also the constant claimed for the
/// borderline (cubic) condition by terms whose gamma_decl is 3 or that are
/// known to satisfy it.
struct GrowthDecl {
    double gamma = 0.0;
    double M = 1.0;
    double N = 1.0;
    double M_borderline = 1.0;
};

/// Non-negative absorption term f(t), t >= 0. Immutable and cheap to copy.
class SourceTerm {
public:
    SourceTerm();  // Zero

    static SourceTerm zero();
    static SourceTerm power(double lambda, double gamma);
    static SourceTerm exp_minus_one();
    static SourceTerm log_one_plus_square();
    static SourceTerm log_one_plus_cube();
    static SourceTerm cubic(double lambda);
    static SourceTerm spatially_scaled(ScalarField weight, SourceTerm base);
    static SourceTerm linear_combination(std::vector<std::pair<double, SourceTerm>> terms);

    [[nodiscard]] SourceFamily family() const;
    [[nodiscard]] double lambda() const;
    [[nodiscard]] double gamma() const;
    [[nodiscard]] const GrowthDecl& declared() const;
    [[nodiscard]] SourceTerm with_declared(GrowthDecl decl) const;

    /// True when evaluation needs a lattice node (some SpatiallyScaled part).
    [[nodiscard]] bool is_spatial() const;

    /// f(t); throws Domain for t < 0 and InvalidArgument if the term is spatial.
    [[nodiscard]] double operator()(double t) const;
    /// f(t) at a lattice node; the node is ignored by non-spatial parts.
    [[nodiscard]] double operator()(double t, NodeId node) const;

    /// Same as operator() without the t >= 0 check, for hot loops that
    /// guarantee it.
    [[nodiscard]] double eval_unchecked(double t, NodeId node) const;

    /// lim_{t->0+} f(t); nonzero only for the gamma = 0 power term.
    [[nodiscard]] double limit_at_zero(NodeId node = 0) const;

    /// F(s) = integral of f over [0, s] (non-spatial terms only).
    [[nodiscard]] double antiderivative(double s) const;

    /// Textual descriptor, e.g. "power(1, 1)" or "0.5*exp_minus_one + 2*cubic(1)".
    /// Spatially scaled terms render their weight as "scaled(<tag>, base)".
    [[nodiscard]] std::string describe() const;

    /// The base term and weight of a SpatiallyScaled term.
    [[nodiscard]] const SourceTerm& base() const;
    [[nodiscard]] const ScalarField& weight() const;
    [[nodiscard]] const std::vector<std::pair<double, SourceTerm>>& terms() const;

    struct Impl;

private:
    explicit SourceTerm(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Parses the descriptor grammar produced by describe() (spatial terms excluded).
SourceTerm parse_source(const std::string& text);

double eval(const SourceTerm& f, double t, std::optional<NodeId> node = std::nullopt);

enum class Condition { UpperGrowth, LowerGrowth, Borderline, Monotone };

const char* to_string(Condition c);

struct ConditionReport {
    Condition condition = Condition::UpperGrowth;
    double gamma = 0.0;
    double delta_max = 1.0;
    double t_max = 1.0;
    /// Minimal admissible M (upper/borderline), maximal admissible N (lower),
    /// or the largest observed drop f(t1) - f(t2) (monotone). NaN when no
    /// sample contributed a ratio.
    double empirical = 0.0;
    double declared = 0.0;
    bool pass = false;
    double worst_delta = 0.0;
    double worst_t = 0.0;
    /// For Monotone reports: the later sample where the drop was seen.
    double worst_t2 = 0.0;
    std::size_t ratios_used = 0;
};

/// Samples delta and t log-uniformly on [1e-6, delta_max] x [1e-6, t_max]
/// (`samples` points per axis) and reports sup/inf of f(delta t) / (delta^g f(t)).
/// Borderline uses g = 3 regardless of `gamma`.
ConditionReport check_condition(const SourceTerm& f, Condition condition, double gamma,
                                double delta_max, double t_max, int samples);

/// Checks f(t1) <= f(t2) + 1e-12 for t1 < t2 on a uniform sample of [0, t_max].
ConditionReport check_monotone(const SourceTerm& f, double t_max, int samples);

}  // namespace dclab
