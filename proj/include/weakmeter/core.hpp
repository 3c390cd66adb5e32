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

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "weakmeter/errors.hpp"

namespace weakmeter {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Tolerance for stored-state normalization checks.
inline constexpr double kNormTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Two-level system in the measurement eigenbasis
// ---------------------------------------------------------------------------
//
// The eigenbasis of the measured dichotomic observable is fixed as the
// computational basis, so a state is just its pair of amplitudes on the
// |s1>, |s2> eigenstates.

struct TwoLevelState {
    Complex c1;  // amplitude on |s1>
    Complex c2;  // amplitude on |s2>

    TwoLevelState(Complex c1_in, Complex c2_in) : c1(c1_in), c2(c2_in) {
        if (!is_finite(c1) || !is_finite(c2)) {
            throw std::invalid_argument("TwoLevelState: amplitudes must be finite");
        }
        const double n2 = std::norm(c1) + std::norm(c2);
        if (std::abs(n2 - 1.0) > kNormTolerance) {
            throw std::invalid_argument(
                "TwoLevelState: |c1|^2 + |c2|^2 = " + std::to_string(n2) +
                ", expected 1 within 1e-12 (use TwoLevelState::normalized)");
        }
    }

    // Rescales an arbitrary nonzero amplitude pair onto the unit sphere.
    static TwoLevelState normalized(Complex c1, Complex c2) {
        if (!is_finite(c1) || !is_finite(c2)) {
            throw std::invalid_argument("TwoLevelState: amplitudes must be finite");
        }
        const double n = std::hypot(std::abs(c1), std::abs(c2));
        if (n == 0.0) {
            throw std::invalid_argument("TwoLevelState: zero vector cannot be normalized");
        }
        return TwoLevelState(c1 / n, c2 / n);
    }
};

// Eigenvalue pair s1 > s2 attached to the fixed eigenbasis.
struct DichotomicObservable {
    double s1;
    double s2;

    DichotomicObservable(double s1_in, double s2_in) : s1(s1_in), s2(s2_in) {
        if (!std::isfinite(s1) || !std::isfinite(s2)) {
            throw std::invalid_argument("DichotomicObservable: eigenvalues must be finite");
        }
        if (!(s1 > s2)) {
            throw std::invalid_argument("DichotomicObservable: requires s1 > s2 strictly");
        }
    }

    double spacing() const { return s1 - s2; }

    static DichotomicObservable spin_z() { return DichotomicObservable(1.0, -1.0); }
};

// Pre-selected state psi and post-selected state phi. Orthogonal pairs are
// legal data; operations that divide by their overlap reject them instead.
struct Transition {
    TwoLevelState pre;
    TwoLevelState post;
};

// Amplitudes of the two virtual routes psi -> s_i -> phi. Their sum equals
// the transition overlap <phi|psi>.
struct PathAmplitudes {
    Complex a1;
    Complex a2;

    Complex sum() const { return a1 + a2; }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// (|1> + r|2>) / sqrt(1 + |r|^2), with the first amplitude real positive.
// The ratio form cannot express |2> itself; pass amplitudes directly for that.
inline TwoLevelState state_from_ratio(Complex r) {
    if (!is_finite(r)) {
        throw InvalidRatio("state_from_ratio: ratio must be finite");
    }
    const double n = std::hypot(1.0, std::abs(r));
    return TwoLevelState(Complex(1.0 / n, 0.0), r / n);
}

// a_i = <phi|s_i><s_i|psi>, written in the eigenbasis.
inline PathAmplitudes path_amplitudes(const Transition& t) {
    return PathAmplitudes{std::conj(t.post.c1) * t.pre.c1,
                          std::conj(t.post.c2) * t.pre.c2};
}

// <phi|psi>; equal to the sum of the two path amplitudes.
inline Complex overlap(const Transition& t) {
    return std::conj(t.post.c1) * t.pre.c1 + std::conj(t.post.c2) * t.pre.c2;
}

}  // namespace weakmeter
