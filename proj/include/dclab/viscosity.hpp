/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dclab/grid.hpp"
#include "dclab/source_terms.hpp"

namespace dclab {

/// One quadratic test function phi(x) = u(x0) + p.(x - x0) + 1/2 (x - x0)^T Q (x - x0).
struct Probe {
    NodeId node = 0;
    std::array<double, 3> p{};
    std::array<std::array<double, 3>, 3> Q{};
    bool targeted = false;
};

enum class TouchSide : std::uint8_t { Below, Above };

struct ProbeViolation {
    Probe probe;
    TouchSide side = TouchSide::Below;
    double inf_laplacian = 0.0;  ///< p^T Q p
    double source = 0.0;         ///< f at u(x0), the relevant end of its value set
    double excess = 0.0;         ///< amount beyond tol_f
};

struct NodeTouching {
    NodeId node = 0;
    /// max over touching-from-below probes of p^T Q p - f(u(x0)); -inf if none touched.
    double worst_super = 0.0;
    /// max over touching-from-above probes of f(u(x0)) - p^T Q p; -inf if none touched.
    double worst_sub = 0.0;
    int probes = 0;
};

struct TouchingReport {
    std::uint64_t seed = 0;
    int probes = 0;
    int touching_below = 0;
    int touching_above = 0;
    double tol = 0.0;
    double tol_f = 0.0;
    std::vector<NodeTouching> nodes;  ///< ascending node id
    std::size_t violation_count = 0;
    std::vector<ProbeViolation> violations;  ///< first 100, in probe order
    double worst_super = 0.0;
    double worst_sub = 0.0;

    [[nodiscard]] bool pass() const { return violation_count == 0; }
};

/// Regenerates probe number `index` of a run with this seed on the given
/// candidate; the verifier draws probes through the same routine.
Probe make_probe(const ScalarField& u, const DomainMask& mask, int radius, std::uint64_t seed, int index);

/// Seeded touching test of the viscosity inequalities on the interior nodes
/// whose radius-neighbourhood is readable. A probe touches from below when
/// u - phi >= -tol on the neighbourhood, and then must satisfy
/// p^T Q p <= f(u(x0)) + tol_f; touching from above is mirrored.
/// tol_f <= 0 selects 10 h.
TouchingReport verify_viscosity(const ScalarField& u, const DomainMask& mask, const SourceTerm& f, int probes,
                                int radius, double tol, std::uint64_t seed, double tol_f = 0.0);

}  // namespace dclab
