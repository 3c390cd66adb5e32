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
#include <cstdint>
#include <stdexcept>

#include "weakmeter/errors.hpp"
#include "weakmeter/rng.hpp"

namespace weakmeter {

// ---------------------------------------------------------------------------
// Classical coin with post-selection
// ---------------------------------------------------------------------------
//
// A coin sent out heads up may flip in transit with probability alpha. The
// receiver records +1 for heads, -1 for tails, and returns the coin, which
// flips again with probability 1 - delta. The record is kept only when the
// coin arrives back heads up. The kept records average to
//   p1 - p2,   p1 = (1-alpha) delta / D,  p2 = alpha (1-delta) / D,
//   D = (1-alpha) delta + alpha (1-delta),
// with non-negative weights, so no choice of alpha and delta pushes the mean
// outside [-1, 1].

struct CoinProtocol {
    double alpha;  // outbound flip probability
    double delta;  // 1 - delta is the return flip probability

    CoinProtocol(double alpha_in, double delta_in) : alpha(alpha_in), delta(delta_in) {
        if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) {
            throw std::invalid_argument("CoinProtocol: alpha must lie in [0, 1]");
        }
        if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0) {
            throw std::invalid_argument("CoinProtocol: delta must lie in [0, 1]");
        }
    }
};

struct CoinWeights {
    double p1;  // weight of the +1 record
    double p2;  // weight of the -1 record
};

inline CoinWeights coin_weights(const CoinProtocol& p) {
    const double x = (1.0 - p.alpha) * p.delta;
    const double y = p.alpha * (1.0 - p.delta);
    const double denom = x + y;
    if (denom == 0.0) {
        throw NoPostSelectedEvents("coin_weights: no outcome survives post-selection");
    }
    return CoinWeights{std::clamp(x / denom, 0.0, 1.0), std::clamp(y / denom, 0.0, 1.0)};
}

inline double coin_mean(const CoinProtocol& p) {
    const CoinWeights w = coin_weights(p);
    return std::clamp(w.p1 - w.p2, -1.0, 1.0);
}

struct CoinStats {
    std::uint64_t kept;  // records surviving post-selection
    std::int64_t sum;    // sum of the kept +-1 records
    double mean;
};

// Runs the two-leg protocol `trials` times. Deterministic for a fixed seed:
// two uniform draws per trial (outbound flip, return flip) from Rng(seed).
inline CoinStats coin_simulate(const CoinProtocol& p, std::uint64_t trials,
                               std::uint64_t seed) {
    if (trials == 0) {
        throw std::invalid_argument("coin_simulate: needs at least one trial");
    }
    Rng rng(seed);
    std::uint64_t kept = 0;
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        bool heads = true;
        if (rng.bernoulli(p.alpha)) heads = !heads;
        const int record = heads ? 1 : -1;
        if (rng.bernoulli(1.0 - p.delta)) heads = !heads;
        if (heads) {
            ++kept;
            sum += record;
        }
    }
    if (kept == 0) {
        throw NoPostSelectedEvents("coin_simulate: no trial survived post-selection");
    }
    return CoinStats{kept, sum, static_cast<double>(sum) / static_cast<double>(kept)};
}

// Mean of the rescaled record s / lambda. Dividing a bounded mean by lambda
// can produce any magnitude, but the result is the normal mean of a variable
// with values +-1/lambda, never outside [-1/lambda, 1/lambda].
inline double recalibrated_mean(const CoinProtocol& p, double lambda) {
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("recalibrated_mean: lambda must be finite");
    }
    if (lambda == 0.0) {
        throw ZeroLambda("recalibrated_mean: lambda must be nonzero");
    }
    return coin_mean(p) / lambda;
}

}  // namespace weakmeter
