/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dclab/error.hpp"

namespace dclab::detail {

// Steffen's monotone piecewise cubic through (x_i, y_i), x strictly increasing.
// Monotone data give a monotone interpolant; linear data are reproduced exactly.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        const std::size_t n = x_.size();
        require(n >= 2 && y_.size() == n, ErrorCode::InvalidArgument, "interpolation needs two or more points");
        for (std::size_t i = 1; i < n; ++i)
            require(x_[i] > x_[i - 1], ErrorCode::InvalidArgument, "interpolation abscissae must increase");
        std::vector<double> h(n - 1), s(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            s[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        d_.assign(n, 0.0);
        if (n == 2) {
            d_[0] = d_[1] = s[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double p = (s[i - 1] * h[i] + s[i] * h[i - 1]) / (h[i - 1] + h[i]);
            if (s[i - 1] * s[i] <= 0.0)
                d_[i] = 0.0;
            else
                d_[i] = 2.0 * std::copysign(1.0, s[i]) *
                        std::min({std::abs(s[i - 1]), std::abs(s[i]), 0.5 * std::abs(p)});
        }
        d_[0] = end_slope(s[0], s[1], h[0], h[1]);
        d_[n - 1] = end_slope(s[n - 2], s[n - 3], h[n - 2], h[n - 3]);
    }

    [[nodiscard]] double operator()(double x) const
    {
        const std::size_t n = x_.size();
        std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = x - x_[i];
        const double s = (y_[i + 1] - y_[i]) / h;
        const double a = (d_[i] + d_[i + 1] - 2.0 * s) / (h * h);
        const double b = (3.0 * s - 2.0 * d_[i] - d_[i + 1]) / h;
        return y_[i] + t * (d_[i] + t * (b + t * a));
    }

    [[nodiscard]] double x_min() const { return x_.front(); }
    [[nodiscard]] double x_max() const { return x_.back(); }

private:
    static double end_slope(double s0, double s1, double h0, double h1)
    {
        const double p = s0 * (1.0 + h0 / (h0 + h1)) - s1 * h0 / (h0 + h1);
        if (p * s0 <= 0.0) return 0.0;
        if (std::abs(p) > 2.0 * std::abs(s0)) return 2.0 * s0;
        return p;
    }

    std::vector<double> x_, y_, d_;
};

}  // namespace dclab::detail
