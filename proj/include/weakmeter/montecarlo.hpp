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
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "weakmeter/core.hpp"
#include "weakmeter/errors.hpp"
#include "weakmeter/grid.hpp"
#include "weakmeter/pointer.hpp"
#include "weakmeter/rng.hpp"

namespace weakmeter {

// ---------------------------------------------------------------------------
// Stochastic three-step measurement protocol
// ---------------------------------------------------------------------------
//
// Each attempt plays the measurement as it would run in the lab:
//   1. the meter couples, and a reading f is drawn from the marginal density
//      sum_i |G(f - s_i)|^2 |<s_i|psi>|^2 (an exact two-Gaussian mixture);
//   2. the reading leaves the spin in the conditional state
//      (G(f - s1) <s1|psi>, G(f - s2) <s2|psi>);
//   3. the post-selection projector fires with the squared overlap of that
//      (normalized) state with phi, and the reading is kept on success.
// Kept readings are therefore distributed exactly as P(f) / N, without any
// reference to the quadrature code this sampler is used to validate.

struct SampleRun {
    std::vector<double> readings;
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    double empirical_mean = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

struct SampleTask {
    double s1, s2;
    double inv_d2;        // 1 / df^2
    double sigma;         // df / 2, std dev of each |G|^2 hump
    double branch1_prob;  // |<s1|psi>|^2
    double pop1, pop2;    // |<s1|psi>|^2, |<s2|psi>|^2
    Complex a1, a2;       // path amplitudes
    const ClassicalNoise* noise;  // optional classical offset of the initial setting
};

// Acceptance-rate floor: below one in 1e6 after ten million attempts the run
// aborts rather than spinning forever. Checked per worker.
inline constexpr std::uint64_t kAcceptanceCheckAttempts = 10'000'000;

inline void sample_worker(const SampleTask& task, std::uint64_t quota, Rng rng,
                          std::vector<double>& readings, std::uint64_t& attempted) {
    readings.clear();
    readings.reserve(quota);
    attempted = 0;
    while (readings.size() < quota) {
        ++attempted;
        const bool branch1 = rng.uniform() < task.branch1_prob;
        const double center = branch1 ? task.s1 : task.s2;
        const double f = center + task.sigma * rng.normal();
        const double offset = task.noise != nullptr ? task.noise->sample(rng) : 0.0;
        // Post-selection probability |<phi|chi(f)>|^2 with chi normalized.
        // The profile factors reduce to the single ratio of the farther to
        // the nearer hump, which never overflows.
        const double d1 = (f - task.s1) * (f - task.s1) * task.inv_d2;
        const double d2 = (f - task.s2) * (f - task.s2) * task.inv_d2;
        double num, den;
        if (d1 <= d2) {
            const double r = std::exp(d1 - d2);  // G(f-s2)/G(f-s1) <= 1
            num = std::norm(task.a1 + r * task.a2);
            den = task.pop1 + r * r * task.pop2;
        } else {
            const double r = std::exp(d2 - d1);  // G(f-s1)/G(f-s2) <= 1
            num = std::norm(r * task.a1 + task.a2);
            den = r * r * task.pop1 + task.pop2;
        }
        if (rng.uniform() * den < num) {
            readings.push_back(f + offset);
        }
        if (attempted % kAcceptanceCheckAttempts == 0 &&
            readings.size() < static_cast<std::uint64_t>(1e-6 * static_cast<double>(attempted))) {
            throw AcceptanceTooLow("sample_readings: acceptance rate below 1e-6 after " +
                                   std::to_string(attempted) + " attempts");
        }
    }
}

inline SampleRun sample_impl(const Transition& t, const DichotomicObservable& obs,
                             const GaussianPointer& p, const ClassicalNoise* noise,
                             std::uint64_t n_accept, std::uint64_t seed,
                             unsigned shards) {
    if (n_accept == 0) {
        throw std::invalid_argument("sample_readings: needs at least one accepted sample");
    }
    if (shards == 0) {
        throw std::invalid_argument("sample_readings: shard count must be positive");
    }
    if (post_selection_norm(t, obs, p) < 1e-12) {
        throw BlockedTransition("sample_readings: post-selection norm below 1e-12");
    }
    const PathAmplitudes amps = path_amplitudes(t);
    SampleTask task{obs.s1,
                    obs.s2,
                    1.0 / (p.delta_f * p.delta_f),
                    0.5 * p.delta_f,
                    std::norm(t.pre.c1),
                    std::norm(t.pre.c1),
                    std::norm(t.pre.c2),
                    amps.a1,
                    amps.a2,
                    noise};

    if (shards > n_accept) shards = static_cast<unsigned>(n_accept);
    std::vector<std::vector<double>> shard_readings(shards);
    std::vector<std::uint64_t> shard_attempted(shards, 0);

    auto run_shard = [&](unsigned shard) {
        const std::uint64_t quota =
            n_accept / shards + (shard < n_accept % shards ? 1 : 0);
        sample_worker(task, quota, Rng::for_shard(seed, shard), shard_readings[shard],
                      shard_attempted[shard]);
    };

    if (shards == 1) {
        run_shard(0);
    } else {
        std::vector<std::exception_ptr> errors(shards);
        std::vector<std::thread> threads;
        threads.reserve(shards);
        for (unsigned shard = 0; shard < shards; ++shard) {
            threads.emplace_back([&, shard] {
                try {
                    run_shard(shard);
                } catch (...) {
                    errors[shard] = std::current_exception();
                }
            });
        }
        for (std::thread& th : threads) th.join();
        for (const std::exception_ptr& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    SampleRun run;
    run.seed = seed;
    for (unsigned shard = 0; shard < shards; ++shard) {
        run.attempted += shard_attempted[shard];
        run.readings.insert(run.readings.end(), shard_readings[shard].begin(),
                            shard_readings[shard].end());
    }
    run.accepted = run.readings.size();
    KahanSum sum;
    for (double f : run.readings) sum.add(f);
    run.empirical_mean = sum.value() / static_cast<double>(run.accepted);
    return run;
}

}  // namespace detail

// Draws `n_accept` post-selected readings. Deterministic for fixed
// (inputs, seed, shards): shard sub-streams come from Rng::for_shard and the
// merged readings keep shard order. `shards` > 1 runs the attempt loops on
// that many threads.
inline SampleRun sample_readings(const Transition& t, const DichotomicObservable& obs,
                                 const GaussianPointer& p, std::uint64_t n_accept,
                                 std::uint64_t seed, unsigned shards = 1) {
    return detail::sample_impl(t, obs, p, nullptr, n_accept, seed, shards);
}

// Same protocol with the meter's initial setting classically offset: each
// attempt draws f' from the noise profile and shifts the kept reading by it.
// The offset does not touch the acceptance decision, which depends only on
// the reading relative to the initial setting.
inline SampleRun sample_with_noise(const Transition& t, const DichotomicObservable& obs,
                                   const GaussianPointer& p, const ClassicalNoise& noise,
                                   std::uint64_t n_accept, std::uint64_t seed,
                                   unsigned shards = 1) {
    return detail::sample_impl(t, obs, p, &noise, n_accept, seed, shards);
}

}  // namespace weakmeter
