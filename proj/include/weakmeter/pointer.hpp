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
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "weakmeter/core.hpp"
#include "weakmeter/errors.hpp"
#include "weakmeter/grid.hpp"
#include "weakmeter/rng.hpp"

namespace weakmeter {

// ---------------------------------------------------------------------------
// Gaussian von Neumann pointer
// ---------------------------------------------------------------------------
//
// The meter is a continuous pointer prepared in the amplitude profile
//   G(f) = (2 / (pi df^2))^(1/4) * exp(-f^2 / df^2),
// normalized so that the reading density integrates to one. The impulsive
// coupling shifts the profile by the observable's eigenvalue along each
// virtual route, so an exact final reading f arrives with (unnormalized)
// probability
//   P(f) = |B1(f) + B2(f)|^2,   B_i(f) = G(f - s_i) * A_i.
// The |G|^2 reading density of the bare pointer has standard deviation df/2.

struct GaussianPointer {
    double delta_f;  // pointer width, same units as the eigenvalues

    explicit GaussianPointer(double delta_f_in) : delta_f(delta_f_in) {
        if (!std::isfinite(delta_f) || !(delta_f > 0.0)) {
            throw std::invalid_argument("GaussianPointer: width must be positive and finite");
        }
    }
};

inline double gaussian_profile(double f, const GaussianPointer& p) {
    const double d2 = p.delta_f * p.delta_f;
    return std::pow(2.0 / (std::numbers::pi * d2), 0.25) * std::exp(-f * f / d2);
}

// Gridded unnormalized reading density with its quadrature norm.
struct PointerDistribution {
    Grid grid;
    std::vector<double> values;
    double norm;
};

// The three pointwise contributions |B1|^2, |B2|^2 and 2 Re[B1 B2*]; their
// sum reproduces the reading density exactly.
struct DistributionComponents {
    Grid grid;
    std::vector<double> direct1;
    std::vector<double> direct2;
    std::vector<double> interference;
};

// Unnormalized spin amplitudes conditioned on an exact pointer reading f:
// c_i = G(f - s_i) <s_i|psi>.
struct ConditionalSpinState {
    Complex c1;
    Complex c2;
};

// Symmetric classical uncertainty of the pointer's initial setting. The
// Gaussian profile uses `width` as its standard deviation; the uniform
// profile is flat on [-width, width].
class ClassicalNoise {
  public:
    enum class Profile { Gaussian, Uniform };

    static ClassicalNoise gaussian(double width) { return ClassicalNoise(Profile::Gaussian, width); }
    static ClassicalNoise uniform(double width) { return ClassicalNoise(Profile::Uniform, width); }

    Profile profile() const { return profile_; }
    double width() const { return width_; }

    double density(double x) const {
        if (profile_ == Profile::Gaussian) {
            const double z = x / width_;
            return std::exp(-0.5 * z * z) / (width_ * std::sqrt(2.0 * std::numbers::pi));
        }
        return std::abs(x) <= width_ ? 0.5 / width_ : 0.0;
    }

    double std_dev() const {
        return profile_ == Profile::Gaussian ? width_ : width_ / std::sqrt(3.0);
    }

    // Radius outside which the profile carries negligible mass (< 1e-11 for
    // the Gaussian, zero for the uniform).
    double support_radius() const {
        return profile_ == Profile::Gaussian ? 7.0 * width_ : width_;
    }

    double sample(Rng& rng) const {
        if (profile_ == Profile::Gaussian) {
            return width_ * rng.normal();
        }
        return width_ * (2.0 * rng.uniform() - 1.0);
    }

  private:
    ClassicalNoise(Profile profile, double width) : profile_(profile), width_(width) {
        if (!std::isfinite(width_) || !(width_ > 0.0)) {
            throw std::invalid_argument("ClassicalNoise: width must be positive and finite");
        }
    }

    Profile profile_;
    double width_;
};

namespace detail {

// Reading density sampled on a grid, no span preconditions applied.
inline std::vector<double> density_values(const Transition& t,
                                          const DichotomicObservable& obs,
                                          const GaussianPointer& p, const Grid& g) {
    const PathAmplitudes amps = path_amplitudes(t);
    std::vector<double> values(static_cast<std::size_t>(g.n_points));
    for (int k = 0; k < g.n_points; ++k) {
        const double f = g.point(k);
        const Complex b = gaussian_profile(f - obs.s1, p) * amps.a1 +
                          gaussian_profile(f - obs.s2, p) * amps.a2;
        values[static_cast<std::size_t>(k)] = std::norm(b);
    }
    return values;
}

inline void require_covers(const Grid& g, double lo, double hi, const char* op) {
    if (!g.covers(lo, hi)) {
        throw GridTooNarrow(std::string(op) + ": grid [" + std::to_string(g.f_min) + ", " +
                            std::to_string(g.f_max) + "] must span [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
    }
}

}  // namespace detail

// Default grid for a given observable/pointer pair: centered between the
// eigenvalues, wide enough both for the quadrature span used by the mean
// (8 * (df/2 + spacing) per side) and for the 5*df margin around each
// eigenvalue required of reading distributions.
inline Grid default_grid(const DichotomicObservable& obs, const GaussianPointer& p,
                         int n_points = 4001) {
    const double center = 0.5 * (obs.s1 + obs.s2);
    const double half = std::max(8.0 * (0.5 * p.delta_f + obs.spacing()),
                                 5.0 * p.delta_f + 0.5 * obs.spacing());
    return Grid(center - half, center + half, n_points);
}

// P(f) = |B1(f) + B2(f)|^2 on the grid, with its Simpson norm.
inline PointerDistribution reading_distribution(const Transition& t,
                                                const DichotomicObservable& obs,
                                                const GaussianPointer& p, const Grid& g) {
    detail::require_covers(g, obs.s2 - 5.0 * p.delta_f, obs.s1 + 5.0 * p.delta_f,
                           "reading_distribution");
    std::vector<double> values = detail::density_values(t, obs, p, g);
    const double norm = simpson(values, g.step());
    if (norm < 1e-300) {
        throw BlockedTransition("reading_distribution: post-selection norm vanishes");
    }
    return PointerDistribution{g, std::move(values), norm};
}

inline DistributionComponents distribution_components(const Transition& t,
                                                      const DichotomicObservable& obs,
                                                      const GaussianPointer& p,
                                                      const Grid& g) {
    detail::require_covers(g, obs.s2 - 5.0 * p.delta_f, obs.s1 + 5.0 * p.delta_f,
                           "distribution_components");
    const PathAmplitudes amps = path_amplitudes(t);
    const std::size_t n = static_cast<std::size_t>(g.n_points);
    DistributionComponents out{g, std::vector<double>(n), std::vector<double>(n),
                               std::vector<double>(n)};
    KahanSum total;
    for (int k = 0; k < g.n_points; ++k) {
        const double f = g.point(k);
        const Complex b1 = gaussian_profile(f - obs.s1, p) * amps.a1;
        const Complex b2 = gaussian_profile(f - obs.s2, p) * amps.a2;
        const std::size_t i = static_cast<std::size_t>(k);
        out.direct1[i] = std::norm(b1);
        out.direct2[i] = std::norm(b2);
        out.interference[i] = 2.0 * (b1 * std::conj(b2)).real();
        total.add(simpson_coefficient(i, n) * (out.direct1[i] + out.direct2[i] + out.interference[i]));
    }
    if (total.value() * g.step() / 3.0 < 1e-300) {
        throw BlockedTransition("distribution_components: post-selection norm vanishes");
    }
    return out;
}

// Post-selection norm N = |A1|^2 + |A2|^2 + 2 Re[A1 A2*] e, with
// e = exp(-(s1-s2)^2 / (2 df^2)); the denominator of the closed-form mean.
inline double post_selection_norm(const Transition& t, const DichotomicObservable& obs,
                                  const GaussianPointer& p) {
    const PathAmplitudes amps = path_amplitudes(t);
    const double e = std::exp(-obs.spacing() * obs.spacing() /
                              (2.0 * p.delta_f * p.delta_f));
    return std::norm(amps.a1) + std::norm(amps.a2) +
           2.0 * (amps.a1 * std::conj(amps.a2)).real() * e;
}

// Closed-form expected reading,
//   fbar = { s1|A1|^2 + s2|A2|^2 + Re[A1 A2*] (s1+s2) e } / N.
inline double mean_reading_closed(const Transition& t, const DichotomicObservable& obs,
                                  const GaussianPointer& p) {
    const PathAmplitudes amps = path_amplitudes(t);
    const double e = std::exp(-obs.spacing() * obs.spacing() /
                              (2.0 * p.delta_f * p.delta_f));
    const double aa = std::norm(amps.a1);
    const double bb = std::norm(amps.a2);
    const double r = (amps.a1 * std::conj(amps.a2)).real();
    const double n = aa + bb + 2.0 * r * e;
    if (n < 1e-12) {
        throw BlockedTransition("mean_reading_closed: post-selection norm below 1e-12");
    }
    return (obs.s1 * aa + obs.s2 * bb + r * (obs.s1 + obs.s2) * e) / n;
}

// Simpson-quadrature mean of f over the reading density; the independent
// cross-check of the closed form.
inline double mean_reading_numeric(const Transition& t, const DichotomicObservable& obs,
                                   const GaussianPointer& p, const Grid& g) {
    const double center = 0.5 * (obs.s1 + obs.s2);
    const double half = 8.0 * (0.5 * p.delta_f + obs.spacing());
    detail::require_covers(g, center - half, center + half, "mean_reading_numeric");
    const std::vector<double> values = detail::density_values(t, obs, p, g);
    const double h = g.step();
    const double norm = simpson(values, h);
    if (norm < 1e-12) {
        throw BlockedTransition("mean_reading_numeric: post-selection norm below 1e-12");
    }
    std::vector<double> weighted(values.size());
    for (int k = 0; k < g.n_points; ++k) {
        weighted[static_cast<std::size_t>(k)] = g.point(k) * values[static_cast<std::size_t>(k)];
    }
    return simpson(weighted, h) / norm;
}

inline double distribution_mean(const PointerDistribution& d) {
    std::vector<double> weighted(d.values.size());
    for (int k = 0; k < d.grid.n_points; ++k) {
        weighted[static_cast<std::size_t>(k)] = d.grid.point(k) * d.values[static_cast<std::size_t>(k)];
    }
    return simpson(weighted, d.grid.step()) / d.norm;
}

inline double distribution_stddev(const PointerDistribution& d) {
    const double m = distribution_mean(d);
    std::vector<double> weighted(d.values.size());
    for (int k = 0; k < d.grid.n_points; ++k) {
        const double df = d.grid.point(k) - m;
        weighted[static_cast<std::size_t>(k)] = df * df * d.values[static_cast<std::size_t>(k)];
    }
    return std::sqrt(simpson(weighted, d.grid.step()) / d.norm);
}

namespace detail {

// Cumulative integral of a gridded density under a C1 piecewise-cubic
// (Hermite) model, evaluable at arbitrary points. Used where plain panel
// quadrature cannot cope with a kinked or discontinuous convolution kernel.
class CubicCumulative {
  public:
    CubicCumulative(const Grid& g, const std::vector<double>& v)
        : f_min_(g.f_min), h_(g.step()), values_(v) {
        const std::size_t n = v.size();
        slopes_.resize(n);
        slopes_.front() = (v[1] - v[0]) / h_;
        slopes_.back() = (v[n - 1] - v[n - 2]) / h_;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            slopes_[j] = (v[j + 1] - v[j - 1]) / (2.0 * h_);
        }
        cumulative_.resize(n);
        cumulative_.front() = 0.0;
        KahanSum acc;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            acc.add(0.5 * h_ * (v[j] + v[j + 1]) +
                    h_ * h_ * (slopes_[j] - slopes_[j + 1]) / 12.0);
            cumulative_[j + 1] = acc.value();
        }
    }

    double total() const { return cumulative_.back(); }

    // Integral of the model from the grid start to x, clamped to the grid.
    double operator()(double x) const {
        const std::size_t n = values_.size();
        const double pos = (x - f_min_) / h_;
        if (pos <= 0.0) return 0.0;
        if (pos >= static_cast<double>(n - 1)) return total();
        const std::size_t j = static_cast<std::size_t>(pos);
        const double t = pos - static_cast<double>(j);
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double t4 = t3 * t;
        // Antiderivatives of the cubic Hermite basis on [0, 1].
        const double i00 = 0.5 * t4 - t3 + t;
        const double i10 = 0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2;
        const double i01 = -0.5 * t4 + t3;
        const double i11 = 0.25 * t4 - t3 / 3.0;
        return cumulative_[j] + h_ * (values_[j] * i00 + h_ * slopes_[j] * i10 +
                                      values_[j + 1] * i01 + h_ * slopes_[j + 1] * i11);
    }

  private:
    double f_min_;
    double h_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<double> cumulative_;
};

}  // namespace detail

// Convolves a reading distribution with a symmetric classical setting error:
//   P_smeared(f) = integral P(f - f') W(f') df'.
// The output grid extends past the input by the noise support (at least
// 5 * width, enough that the norm is preserved to better than 1e-8) and its
// step is coarsened to the scale the smearing can still resolve. The smooth
// Gaussian profile integrates by Simpson over the input grid; the flat
// profile's edges would defeat panel quadrature, so it goes through the
// exact window integral of a piecewise-cubic model instead.
inline PointerDistribution smear(const PointerDistribution& d, const ClassicalNoise& w) {
    const Grid& in = d.grid;
    const double h_in = in.step();
    const double pad = std::max(5.0 * w.width(), w.support_radius());
    const double h_out = std::max(h_in, w.std_dev() / 8.0);
    const double lo = in.f_min - pad;
    const double hi = in.f_max + pad;
    int n_out = static_cast<int>(std::ceil((hi - lo) / h_out)) + 1;
    if (n_out < 3) n_out = 3;
    if (n_out % 2 == 0) ++n_out;
    const Grid out_grid(lo, hi, n_out);

    const std::size_t n_in = d.values.size();
    std::vector<double> out(static_cast<std::size_t>(n_out));
    if (w.profile() == ClassicalNoise::Profile::Uniform) {
        const detail::CubicCumulative cumulative(in, d.values);
        for (int k = 0; k < n_out; ++k) {
            const double f = out_grid.point(k);
            out[static_cast<std::size_t>(k)] =
                (cumulative(f + w.width()) - cumulative(f - w.width())) / (2.0 * w.width());
        }
    } else {
        for (int k = 0; k < n_out; ++k) {
            const double f = out_grid.point(k);
            KahanSum acc;
            for (std::size_t j = 0; j < n_in; ++j) {
                const double u = in.point(static_cast<int>(j));
                acc.add(simpson_coefficient(j, n_in) * d.values[j] * w.density(f - u));
            }
            out[static_cast<std::size_t>(k)] = acc.value() * h_in / 3.0;
        }
    }
    const double norm = simpson(out, out_grid.step());
    return PointerDistribution{out_grid, std::move(out), norm};
}

// Spin state left by an exact reading f, before post-selection. Its squared
// overlap with the post-selected state reproduces P(f) pointwise.
inline ConditionalSpinState conditional_spin_state(double f, const Transition& t,
                                                   const DichotomicObservable& obs,
                                                   const GaussianPointer& p) {
    return ConditionalSpinState{gaussian_profile(f - obs.s1, p) * t.pre.c1,
                                gaussian_profile(f - obs.s2, p) * t.pre.c2};
}

// Unnormalized weights of the diagonal spin mixture left by a strong meter
// whose initial setting was classically uncertain: (W(f - s1), W(f - s2)).
// Valid in the strong regime df << s1 - s2, where the eigenstate correlation
// is exact.
inline std::pair<double, double> final_spin_mixture(double f, const DichotomicObservable& obs,
                                                    const ClassicalNoise& noise) {
    return {noise.density(f - obs.s1), noise.density(f - obs.s2)};
}

}  // namespace weakmeter
