// Copyright 2026 The weakmeter authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace weakmeter {

// Uniform reading grid. The point count is kept odd so composite Simpson
// quadrature applies directly.
struct Grid {
    double f_min;
    double f_max;
    int n_points;

    Grid(double f_min_in, double f_max_in, int n_points_in)
        : f_min(f_min_in), f_max(f_max_in), n_points(n_points_in) {
        if (!std::isfinite(f_min) || !std::isfinite(f_max) || !(f_min < f_max)) {
            throw std::invalid_argument("Grid: requires finite f_min < f_max");
        }
        if (n_points < 3 || n_points % 2 == 0) {
            throw std::invalid_argument("Grid: point count must be odd and >= 3");
        }
    }

    double step() const { return (f_max - f_min) / (n_points - 1); }

    double point(int k) const { return f_min + step() * k; }

    // Span check with a small relative slack, so grids constructed to sit
    // exactly on a required bound are not rejected for rounding.
    bool covers(double lo, double hi) const {
        const double slack = 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
        return f_min <= lo + slack && f_max >= hi - slack;
    }
};

// Neumaier-compensated accumulator; keeps long quadrature sums at O(eps)
// instead of O(n*eps).
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Composite Simpson rule over uniformly spaced samples (odd count).
inline double simpson(std::span<const double> values, double h) {
    const std::size_t n = values.size();
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("simpson: needs an odd number of samples >= 3");
    }
    KahanSum acc;
    acc.add(values.front());
    acc.add(values.back());
    for (std::size_t k = 1; k + 1 < n; ++k) {
        acc.add((k % 2 == 1 ? 4.0 : 2.0) * values[k]);
    }
    return acc.value() * h / 3.0;
}

// Simpson coefficient of sample k (without the h/3 factor).
inline double simpson_coefficient(std::size_t k, std::size_t n) {
    if (k == 0 || k + 1 == n) return 1.0;
    return k % 2 == 1 ? 4.0 : 2.0;
}

}  // namespace weakmeter
