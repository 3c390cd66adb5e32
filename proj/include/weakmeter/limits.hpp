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
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "weakmeter/core.hpp"
#include "weakmeter/errors.hpp"
#include "weakmeter/grid.hpp"
#include "weakmeter/pointer.hpp"

namespace weakmeter {

// ---------------------------------------------------------------------------
// Strong / weak limits and signed quasi-probability weights
// ---------------------------------------------------------------------------
//
// A weighted average sum_n s_n P_n with sum_n P_n = 1 is "normal" when it
// lies in the closed interval [s_N, s_1] spanned by the values, and
// "anomalous" otherwise. Anomalous averages require at least one negative
// weight: the signed weights cancel almost completely in the normalization
// sum, but multiplying by the values destroys the cancellation.

// Values in strictly decreasing order, their weights, and the classified mean.
struct WeightedAverage {
    std::vector<double> values;
    std::vector<double> weights;
    double mean;
    bool anomalous;
};

// Classifies an arbitrary signed-weight decomposition. Weights must sum to 1
// within 1e-9; values must be strictly decreasing.
inline WeightedAverage anomalous_decomposition(std::vector<double> values,
                                               std::vector<double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw std::invalid_argument("anomalous_decomposition: values and weights must be nonempty and equal-length");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || !std::isfinite(weights[i])) {
            throw std::invalid_argument("anomalous_decomposition: entries must be finite");
        }
        if (i > 0 && !(values[i - 1] > values[i])) {
            throw std::invalid_argument("anomalous_decomposition: values must be strictly decreasing");
        }
    }
    KahanSum wsum;
    for (double w : weights) wsum.add(w);
    if (std::abs(wsum.value() - 1.0) > 1e-9) {
        throw WeightsNotNormalized("anomalous_decomposition: weights sum to " +
                                   std::to_string(wsum.value()) + ", expected 1 within 1e-9");
    }
    KahanSum msum;
    for (std::size_t i = 0; i < values.size(); ++i) msum.add(values[i] * weights[i]);
    const double mean = msum.value();
    const bool anomalous = mean > values.front() || mean < values.back();
    return WeightedAverage{std::move(values), std::move(weights), mean, anomalous};
}

// Accurate-meter weights P_i = |A_i|^2 / (|A1|^2 + |A2|^2). Non-negative by
// construction, so the strong mean always sits between the eigenvalues; the
// clamps only strip rounding dust off that algebraic containment.
inline WeightedAverage strong_weights(const PathAmplitudes& pa,
                                      const DichotomicObservable& obs) {
    const double aa = std::norm(pa.a1);
    const double bb = std::norm(pa.a2);
    const double denom = aa + bb;
    if (!(denom > 1e-24)) {
        throw BlockedTransition("strong_weights: both path amplitudes vanish");
    }
    const double p1 = std::clamp(aa / denom, 0.0, 1.0);
    const double p2 = std::clamp(bb / denom, 0.0, 1.0);
    const double mean = std::clamp(obs.s2 + obs.spacing() * p1, obs.s2, obs.s1);
    return WeightedAverage{{obs.s1, obs.s2}, {p1, p2}, mean, false};
}

// Weak value with its signed weights P_i = Re[A_i / (A1 + A2)].
struct WeakValue {
    Complex value;
    std::array<double, 2> weights;
    bool anomalous;  // Re(value) strictly outside [s2, s1]
};

// sbar_weak = (s1 A1 + s2 A2) / (A1 + A2). Undefined (error) when the
// selection is orthogonal.
inline WeakValue weak_value(const PathAmplitudes& pa, const DichotomicObservable& obs) {
    const Complex s = pa.sum();
    if (std::abs(s) < 1e-12) {
        throw OrthogonalSelection("weak_value: |A1 + A2| below 1e-12");
    }
    const Complex value = (obs.s1 * pa.a1 + obs.s2 * pa.a2) / s;
    const std::array<double, 2> weights{(pa.a1 / s).real(), (pa.a2 / s).real()};
    const bool anomalous = value.real() > obs.s1 || value.real() < obs.s2;
    return WeakValue{value, weights, anomalous};
}

// Product of the selection ratios that places the real weak value at z for
// s = +-1: ab = (1 - z) / (1 + z).
inline double ratio_product_for_target(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("ratio_product_for_target: target must be finite");
    }
    if (z == -1.0) {
        throw SingularTarget("ratio_product_for_target: z = -1 has no finite ratio product");
    }
    return (1.0 - z) / (1.0 + z);
}

// Real weak value (A1 - A2)/(A1 + A2) = (1 - ab)/(1 + ab) for real selection
// ratios a, b and eigenvalues +-1. Inverse of ratio_product_for_target.
inline double weak_real_from_ratios(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("weak_real_from_ratios: ratios must be finite");
    }
    const double ab = a * b;
    if (std::abs(1.0 + ab) < 1e-12) {
        throw OrthogonalSelection("weak_real_from_ratios: ab = -1 gives orthogonal selection");
    }
    return (1.0 - ab) / (1.0 + ab);
}

// The three equivalent ways of making the coupling weak.
struct CouplingConvention {
    enum class Mode {
        ReduceStrength,   // scale the coupling: eigenvalue shifts become lambda * s_i
        RescalePointer,   // unit coupling, pointer width df / lambda; report in weak-value units
        RescaleOperator,  // measure S' = lambda * S with eigenvalues lambda * s_i
    };

    Mode mode;
    double lambda;

    CouplingConvention(Mode mode_in, double lambda_in) : mode(mode_in), lambda(lambda_in) {
        if (!std::isfinite(lambda) || !(lambda > 0.0)) {
            throw std::invalid_argument("CouplingConvention: lambda must be positive and finite");
        }
    }
};

// Expected pointer reading under the chosen weakness convention. Reducing
// the coupling and rescaling the operator shift the profile by lambda * s_i
// either way, so their raw means are identical; the rescaled-pointer mean
// equals that same raw mean divided by lambda, which converges on
// Re(sbar_weak) as lambda -> 0.
inline double convention_mean(const Transition& t, const DichotomicObservable& obs,
                              const GaussianPointer& base_pointer,
                              const CouplingConvention& conv) {
    switch (conv.mode) {
        case CouplingConvention::Mode::ReduceStrength:
        case CouplingConvention::Mode::RescaleOperator:
            return mean_reading_closed(
                t, DichotomicObservable(conv.lambda * obs.s1, conv.lambda * obs.s2),
                base_pointer);
        case CouplingConvention::Mode::RescalePointer:
            return mean_reading_closed(t, obs,
                                       GaussianPointer(base_pointer.delta_f / conv.lambda));
    }
    throw std::logic_error("convention_mean: unknown mode");
}

}  // namespace weakmeter
