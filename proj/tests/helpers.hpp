/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <vector>

#include "dclab/grid.hpp"

namespace dclab::test {

/// Square 2D grid on [-half, half]^2 with `cells` cells per axis.
inline GridSpec square_grid(double half, int cells)
{
    const std::vector<double> origin{-half, -half}, extent{2 * half, 2 * half};
    const std::vector<int> c{cells, cells};
    return make_grid(2, origin, extent, c);
}

/// 1D grid on [lo, lo + length].
inline GridSpec line_grid(double lo, double length, int cells)
{
    const std::vector<double> origin{lo}, extent{length};
    const std::vector<int> c{cells};
    return make_grid(1, origin, extent, c);
}

inline NodeId node_at(const GridSpec& g, int i, int j = 0, int k = 0) { return g.flat(Index{i, j, k}); }

}  // namespace dclab::test
