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

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "weakmeter/core.hpp"
#include "weakmeter/errors.hpp"

namespace weakmeter {

// ---------------------------------------------------------------------------
// Two-qubit "cat and smile" construction
// ---------------------------------------------------------------------------
//
// A pair of two-level degrees of freedom: a location (left/right) and a spin
// (up/down). Pre- and post-selection connect through four virtual routes,
// one per product eigenstate, and the local weak values
//   Pi_L     = (A_L+ + A_L-) / sum A
//   Pi_R     = (A_R+ + A_R-) / sum A
//   sigma_L  = (A_L+ - A_L-) / sum A
//   sigma_R  = (A_R+ - A_R-) / sum A
// can place the location entirely on the left while distributing the spin
// arbitrarily between the two sides.

// Normalized state over the ordered basis (L+, L-, R+, R-).
struct FourLevelState {
    std::array<Complex, 4> amps;

    explicit FourLevelState(const std::array<Complex, 4>& amps_in) : amps(amps_in) {
        double n2 = 0.0;
        for (const Complex& c : amps) {
            if (!is_finite(c)) {
                throw std::invalid_argument("FourLevelState: amplitudes must be finite");
            }
            n2 += std::norm(c);
        }
        if (std::abs(n2 - 1.0) > kNormTolerance) {
            throw std::invalid_argument("FourLevelState: squared amplitudes sum to " +
                                        std::to_string(n2) + ", expected 1 within 1e-12");
        }
    }

    static FourLevelState normalized(const std::array<Complex, 4>& amps) {
        double n2 = 0.0;
        for (const Complex& c : amps) {
            if (!is_finite(c)) {
                throw std::invalid_argument("FourLevelState: amplitudes must be finite");
            }
            n2 += std::norm(c);
        }
        if (n2 == 0.0) {
            throw std::invalid_argument("FourLevelState: zero vector cannot be normalized");
        }
        const double n = std::sqrt(n2);
        return FourLevelState({amps[0] / n, amps[1] / n, amps[2] / n, amps[3] / n});
    }
};

// Amplitudes of the four routes; their sum is the four-level overlap.
struct RouteAmplitudes {
    Complex l_plus;
    Complex l_minus;
    Complex r_plus;
    Complex r_minus;

    Complex sum() const { return l_plus + l_minus + r_plus + r_minus; }
};

struct LocalWeakValues {
    Complex pi_left;
    Complex pi_right;
    Complex sigma_left;
    Complex sigma_right;
};

// Requested weak values for the spin on the left (x) and right (y) side.
// x = -1 makes the construction singular.
struct SmileTargets {
    double x;
    double y;

    SmileTargets(double x_in, double y_in) : x(x_in), y(y_in) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("SmileTargets: targets must be finite");
        }
        if (x == -1.0) {
            throw SingularTarget("SmileTargets: x = -1 is not constructible");
        }
    }
};

// A_ij = <phi|ij><ij|psi> componentwise over (L+, L-, R+, R-).
inline RouteAmplitudes route_amplitudes(const FourLevelState& pre, const FourLevelState& post) {
    return RouteAmplitudes{std::conj(post.amps[0]) * pre.amps[0],
                           std::conj(post.amps[1]) * pre.amps[1],
                           std::conj(post.amps[2]) * pre.amps[2],
                           std::conj(post.amps[3]) * pre.amps[3]};
}

inline LocalWeakValues local_weak_values(const RouteAmplitudes& r) {
    const Complex s = r.sum();
    if (std::abs(s) < 1e-12) {
        throw OrthogonalSelection("local_weak_values: route amplitudes sum below 1e-12");
    }
    return LocalWeakValues{(r.l_plus + r.l_minus) / s, (r.r_plus + r.r_minus) / s,
                           (r.l_plus - r.l_minus) / s, (r.r_plus - r.r_minus) / s};
}

// Projective route probabilities |A_ij|^2 / sum |A_kl|^2, ordered as the
// basis. A strong measurement makes the four routes real, and any local spin
// operator scores zero on the routes through the opposite side.
inline std::array<double, 4> strong_route_weights(const RouteAmplitudes& r) {
    const std::array<double, 4> sq{std::norm(r.l_plus), std::norm(r.l_minus),
                                   std::norm(r.r_plus), std::norm(r.r_minus)};
    const double denom = sq[0] + sq[1] + sq[2] + sq[3];
    if (!(denom > 1e-24)) {
        throw BlockedTransition("strong_route_weights: all route amplitudes vanish");
    }
    return {sq[0] / denom, sq[1] / denom, sq[2] / denom, sq[3] / denom};
}

namespace detail {

// Principal-branch square root of a real number: non-negative real result
// for w >= 0, positive imaginary axis for w < 0.
inline Complex sqrt_real(double w) {
    return w >= 0.0 ? Complex(std::sqrt(w), 0.0) : Complex(0.0, std::sqrt(-w));
}

}  // namespace detail

// Pre/post pair whose local weak values are (Pi_L, Pi_R, sigma_L, sigma_R)
// = (1, 0, x, y):
//   alpha_1 = beta_1 = 1,
//   alpha_2 = beta_2* = sqrt((1 - x) / (1 + x)),
//   alpha_3 = beta_3* = sqrt(y / (1 + x)),
//   alpha_4 = alpha_3,  beta_4* = -alpha_4,
// with principal-branch roots, then both states normalized (the weak values
// are ratios, so normalization does not move them).
inline std::pair<FourLevelState, FourLevelState> construct_states(const SmileTargets& targets) {
    const Complex u = detail::sqrt_real((1.0 - targets.x) / (1.0 + targets.x));
    const Complex v = detail::sqrt_real(targets.y / (1.0 + targets.x));
    const std::array<Complex, 4> alpha{Complex(1.0, 0.0), u, v, v};
    const std::array<Complex, 4> beta{Complex(1.0, 0.0), std::conj(u), std::conj(v),
                                      -std::conj(v)};
    return {FourLevelState::normalized(alpha), FourLevelState::normalized(beta)};
}

}  // namespace weakmeter
