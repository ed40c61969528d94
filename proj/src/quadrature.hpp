/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace dclab::detail {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
inline GaussLegendre gauss_legendre(int n)
{
    GaussLegendre g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = g.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

inline const GaussLegendre& gl16()
{
    static const GaussLegendre g = gauss_legendre(16);
    return g;
}

/// Integral of fn over [a, b] split into `panels` equal 16-point panels.
template <class Fn>
double integrate(Fn&& fn, double a, double b, int panels = 1)
{
    const GaussLegendre& g = gl16();
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double mid = lo + 0.5 * w;
        double s = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * fn(mid + 0.5 * w * g.nodes[i]);
        total += 0.5 * w * s;
    }
    return total;
}

}  // namespace dclab::detail
