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
//
// Command line front end. Subcommands:
//   dist    reading distribution and its three contributions (CSV/JSON)
//   mean    expected pointer reading, closed form or Simpson quadrature
//   sweep   mean reading vs pointer width for a list of weak-value targets
//   weak    weak value with its signed weights
//   strong  projective weights and the strong mean
//   cat     two-qubit pre/post pair realizing chosen local weak values
//   coin    classical post-selected coin: analytic weights and simulation
//   sample  Monte Carlo run of the three-step measurement protocol

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "weakmeter/weakmeter.hpp"

namespace {

using nlohmann::json;
using namespace weakmeter;

// One pre/post state supplied either as a component ratio or as four reals
// (c1.re, c1.im, c2.re, c2.im); exactly one style per state.
struct StateInput {
    std::string ratio;
    std::vector<double> amps;

    TwoLevelState resolve(const char* which) const {
        if (!ratio.empty()) {
            return state_from_ratio(parse_complex(ratio));
        }
        if (amps.size() == 4) {
            return TwoLevelState::normalized(Complex(amps[0], amps[1]),
                                             Complex(amps[2], amps[3]));
        }
        throw std::invalid_argument(std::string("missing --") + which + "-ratio or --" +
                                    which + " amplitudes");
    }
};

void add_state_options(CLI::App* cmd, StateInput& pre, StateInput& post) {
    auto* pre_ratio = cmd->add_option("--pre-ratio", pre.ratio,
                                      "Pre-selected state as the ratio c2/c1 (complex literal)");
    auto* pre_amps = cmd->add_option("--pre", pre.amps,
                                     "Pre-selected state as c1.re c1.im c2.re c2.im")
                         ->expected(4);
    auto* post_ratio = cmd->add_option("--post-ratio", post.ratio,
                                       "Post-selected state as the ratio c2/c1 (complex literal)");
    auto* post_amps = cmd->add_option("--post", post.amps,
                                      "Post-selected state as c1.re c1.im c2.re c2.im")
                          ->expected(4);
    pre_ratio->excludes(pre_amps);
    post_ratio->excludes(post_amps);
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
    if (seed_opt->count() > 0) return seed_flag;
    if (const char* env = std::getenv("WEAKMETER_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
        throw std::invalid_argument("WEAKMETER_SEED is not an unsigned integer");
    }
    return 1;
}

// Stream that is either stdout or an owned output file ("-" means stdout).
class Output {
  public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw std::ios_base::failure("cannot open output file '" + path + "'");
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

    void finish() {
        if (file_) {
            file_->flush();
            if (!*file_) throw std::ios_base::failure("write to output file failed");
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
};

void emit_json(Output& out, const json& doc) {
    out.stream() << doc.dump(2) << '\n';
    out.finish();
}

json weak_value_json(const WeakValue& wv) {
    return json{{"re", wv.value.real()},
                {"im", wv.value.imag()},
                {"weights", {wv.weights[0], wv.weights[1]}},
                {"anomalous", wv.anomalous}};
}

Grid resolve_grid(const DichotomicObservable& obs, const GaussianPointer& p,
                  const CLI::Option* min_opt, double grid_min, double grid_max,
                  int grid_points) {
    if (min_opt->count() > 0) {
        return Grid(grid_min, grid_max, grid_points);
    }
    return default_grid(obs, p, grid_points);
}

int run(CLI::App& app, int argc, char** argv) {
    app.require_subcommand(1);

    // ----- dist ------------------------------------------------------------
    auto* dist_cmd = app.add_subcommand("dist", "Reading distribution P(f) with its three contributions");
    StateInput dist_pre, dist_post;
    add_state_options(dist_cmd, dist_pre, dist_post);
    double dist_s1 = 1.0, dist_s2 = -1.0, dist_deltaf = 0.0;
    double dist_gmin = 0.0, dist_gmax = 0.0;
    int dist_gpoints = 4001;
    std::string dist_out = "-", dist_format = "csv";
    dist_cmd->add_option("--s1", dist_s1, "Upper eigenvalue")->capture_default_str();
    dist_cmd->add_option("--s2", dist_s2, "Lower eigenvalue")->capture_default_str();
    dist_cmd->add_option("--deltaf", dist_deltaf, "Pointer width")->required();
    auto* dist_gmin_opt = dist_cmd->add_option("--grid-min", dist_gmin, "Grid lower edge");
    dist_cmd->add_option("--grid-max", dist_gmax, "Grid upper edge")->needs(dist_gmin_opt);
    dist_gmin_opt->needs(dist_cmd->get_option("--grid-max"));
    dist_cmd->add_option("--grid-points", dist_gpoints, "Odd grid point count")->capture_default_str();
    dist_cmd->add_option("--out", dist_out, "Output path, '-' for stdout")->capture_default_str();
    dist_cmd->add_option("--format", dist_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    dist_cmd->callback([&] {
        const Transition t{dist_pre.resolve("pre"), dist_post.resolve("post")};
        const DichotomicObservable obs(dist_s1, dist_s2);
        const GaussianPointer p(dist_deltaf);
        const Grid g = resolve_grid(obs, p, dist_gmin_opt, dist_gmin, dist_gmax, dist_gpoints);
        const PointerDistribution d = reading_distribution(t, obs, p, g);
        const DistributionComponents comps = distribution_components(t, obs, p, g);
        Output out(dist_out);
        if (dist_format == "csv") {
            write_distribution_csv(out.stream(), d, comps);
            out.finish();
        } else {
            json doc{{"delta_f", p.delta_f},
                     {"norm", d.norm},
                     {"f", json::array()},
                     {"P", d.values},
                     {"B1sq", comps.direct1},
                     {"B2sq", comps.direct2},
                     {"interference", comps.interference}};
            for (int k = 0; k < g.n_points; ++k) doc["f"].push_back(g.point(k));
            emit_json(out, doc);
        }
    });

    // ----- mean ------------------------------------------------------------
    auto* mean_cmd = app.add_subcommand("mean", "Expected pointer reading");
    StateInput mean_pre, mean_post;
    add_state_options(mean_cmd, mean_pre, mean_post);
    double mean_s1 = 1.0, mean_s2 = -1.0, mean_deltaf = 0.0;
    double mean_gmin = 0.0, mean_gmax = 0.0;
    int mean_gpoints = 4001;
    bool mean_numeric = false;
    std::string mean_out = "-";
    mean_cmd->add_option("--s1", mean_s1, "Upper eigenvalue")->capture_default_str();
    mean_cmd->add_option("--s2", mean_s2, "Lower eigenvalue")->capture_default_str();
    mean_cmd->add_option("--deltaf", mean_deltaf, "Pointer width")->required();
    mean_cmd->add_flag("--numeric", mean_numeric, "Use Simpson quadrature instead of the closed form");
    auto* mean_gmin_opt = mean_cmd->add_option("--grid-min", mean_gmin, "Grid lower edge");
    mean_cmd->add_option("--grid-max", mean_gmax, "Grid upper edge")->needs(mean_gmin_opt);
    mean_gmin_opt->needs(mean_cmd->get_option("--grid-max"));
    mean_cmd->add_option("--grid-points", mean_gpoints, "Odd grid point count")->capture_default_str();
    mean_cmd->add_option("--out", mean_out, "Output path, '-' for stdout")->capture_default_str();
    mean_cmd->callback([&] {
        const Transition t{mean_pre.resolve("pre"), mean_post.resolve("post")};
        const DichotomicObservable obs(mean_s1, mean_s2);
        const GaussianPointer p(mean_deltaf);
        double mean = 0.0, norm = 0.0;
        if (mean_numeric) {
            const Grid g = resolve_grid(obs, p, mean_gmin_opt, mean_gmin, mean_gmax, mean_gpoints);
            mean = mean_reading_numeric(t, obs, p, g);
            norm = reading_distribution(t, obs, p, g).norm;
        } else {
            mean = mean_reading_closed(t, obs, p);
            norm = post_selection_norm(t, obs, p);
        }
        Output out(mean_out);
        emit_json(out, json{{"mean", mean}, {"norm", norm}, {"delta_f", p.delta_f}});
    });

    // ----- sweep -----------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Mean reading across pointer widths, one column per weak-value target");
    std::vector<double> sweep_targets;
    double sweep_a = 1.0, sweep_s1 = 1.0, sweep_s2 = -1.0;
    double sweep_dmin = 0.01, sweep_dmax = 1000.0;
    int sweep_steps = 61;
    std::string sweep_out = "-", sweep_format = "csv";
    sweep_cmd->add_option("--targets", sweep_targets,
                          "Weak-value targets Z (default -20..20 excluding -1)");
    sweep_cmd->add_option("--a", sweep_a, "Real pre-selection ratio")->capture_default_str();
    sweep_cmd->add_option("--s1", sweep_s1, "Upper eigenvalue")->capture_default_str();
    sweep_cmd->add_option("--s2", sweep_s2, "Lower eigenvalue")->capture_default_str();
    sweep_cmd->add_option("--deltaf-min", sweep_dmin, "Smallest pointer width")->capture_default_str();
    sweep_cmd->add_option("--deltaf-max", sweep_dmax, "Largest pointer width")->capture_default_str();
    sweep_cmd->add_option("--steps", sweep_steps, "Number of log-spaced widths")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "Output path, '-' for stdout")->capture_default_str();
    sweep_cmd->add_option("--format", sweep_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep_cmd->callback([&] {
        if (sweep_targets.empty()) {
            for (int z = -20; z <= 20; ++z) {
                if (z != -1) sweep_targets.push_back(z);
            }
        }
        if (sweep_steps < 2 || !(sweep_dmin > 0.0) || !(sweep_dmin < sweep_dmax)) {
            throw std::invalid_argument("sweep: needs 0 < deltaf-min < deltaf-max and steps >= 2");
        }
        const DichotomicObservable obs(sweep_s1, sweep_s2);
        const TwoLevelState pre = state_from_ratio(Complex(sweep_a, 0.0));
        std::vector<TwoLevelState> posts;
        posts.reserve(sweep_targets.size());
        for (double z : sweep_targets) {
            posts.push_back(state_from_ratio(Complex(ratio_product_for_target(z) / sweep_a, 0.0)));
        }
        std::vector<double> widths(static_cast<std::size_t>(sweep_steps));
        const double log_min = std::log(sweep_dmin);
        const double log_step = (std::log(sweep_dmax) - log_min) / (sweep_steps - 1);
        for (int i = 0; i < sweep_steps; ++i) {
            widths[static_cast<std::size_t>(i)] = std::exp(log_min + log_step * i);
        }
        widths.front() = sweep_dmin;
        widths.back() = sweep_dmax;

        std::vector<std::vector<double>> means(widths.size());
        for (std::size_t i = 0; i < widths.size(); ++i) {
            const GaussianPointer p(widths[i]);
            means[i].reserve(posts.size());
            for (const TwoLevelState& post : posts) {
                means[i].push_back(mean_reading_closed(Transition{pre, post}, obs, p));
            }
        }
        Output out(sweep_out);
        if (sweep_format == "csv") {
            std::ostream& os = out.stream();
            os << "deltaf";
            for (double z : sweep_targets) {
                char label[32];
                std::snprintf(label, sizeof(label), "Z=%g", z);
                os << ',' << label;
            }
            os << '\n';
            for (std::size_t i = 0; i < widths.size(); ++i) {
                os << format_full(widths[i]);
                for (double m : means[i]) os << ',' << format_full(m);
                os << '\n';
            }
            out.finish();
        } else {
            emit_json(out, json{{"deltaf", widths}, {"targets", sweep_targets}, {"means", means}});
        }
    });

    // ----- weak ------------------------------------------------------------
    auto* weak_cmd = app.add_subcommand("weak", "Weak value and its signed weights");
    StateInput weak_pre, weak_post;
    add_state_options(weak_cmd, weak_pre, weak_post);
    double weak_s1 = 1.0, weak_s2 = -1.0;
    std::string weak_out = "-";
    weak_cmd->add_option("--s1", weak_s1, "Upper eigenvalue")->capture_default_str();
    weak_cmd->add_option("--s2", weak_s2, "Lower eigenvalue")->capture_default_str();
    weak_cmd->add_option("--out", weak_out, "Output path, '-' for stdout")->capture_default_str();
    weak_cmd->callback([&] {
        const Transition t{weak_pre.resolve("pre"), weak_post.resolve("post")};
        const DichotomicObservable obs(weak_s1, weak_s2);
        const WeakValue wv = weak_value(path_amplitudes(t), obs);
        Output out(weak_out);
        emit_json(out, weak_value_json(wv));
    });

    // ----- strong ----------------------------------------------------------
    auto* strong_cmd = app.add_subcommand("strong", "Projective weights and strong mean");
    StateInput strong_pre, strong_post;
    add_state_options(strong_cmd, strong_pre, strong_post);
    double strong_s1 = 1.0, strong_s2 = -1.0;
    std::string strong_out = "-";
    strong_cmd->add_option("--s1", strong_s1, "Upper eigenvalue")->capture_default_str();
    strong_cmd->add_option("--s2", strong_s2, "Lower eigenvalue")->capture_default_str();
    strong_cmd->add_option("--out", strong_out, "Output path, '-' for stdout")->capture_default_str();
    strong_cmd->callback([&] {
        const Transition t{strong_pre.resolve("pre"), strong_post.resolve("post")};
        const DichotomicObservable obs(strong_s1, strong_s2);
        const WeightedAverage wa = strong_weights(path_amplitudes(t), obs);
        Output out(strong_out);
        emit_json(out, json{{"mean", wa.mean},
                            {"weights", wa.weights},
                            {"values", wa.values},
                            {"anomalous", wa.anomalous}});
    });

    // ----- cat -------------------------------------------------------------
    auto* cat_cmd = app.add_subcommand(
        "cat", "Two-qubit pre/post pair with local weak values (1, 0, x, y)");
    double cat_x = 0.0, cat_y = 0.0;
    std::string cat_out = "-";
    cat_cmd->add_option("--x", cat_x, "Target spin weak value on the left")->required();
    cat_cmd->add_option("--y", cat_y, "Target spin weak value on the right")->required();
    cat_cmd->add_option("--out", cat_out, "Output path, '-' for stdout")->capture_default_str();
    cat_cmd->callback([&] {
        const auto [pre, post] = construct_states(SmileTargets(cat_x, cat_y));
        const LocalWeakValues wv = local_weak_values(route_amplitudes(pre, post));
        Output out(cat_out);
        emit_json(out, json{{"x", cat_x},
                            {"y", cat_y},
                            {"pre", state_to_json(pre)},
                            {"post", state_to_json(post)},
                            {"weak_values",
                             {{"pi_l", complex_to_json(wv.pi_left)},
                              {"pi_r", complex_to_json(wv.pi_right)},
                              {"sigma_l", complex_to_json(wv.sigma_left)},
                              {"sigma_r", complex_to_json(wv.sigma_right)}}}});
    });

    // ----- coin ------------------------------------------------------------
    auto* coin_cmd = app.add_subcommand("coin", "Classical post-selected coin toss");
    double coin_alpha = 0.0, coin_delta = 0.0, coin_lambda = 0.0;
    std::uint64_t coin_trials = 1'000'000, coin_seed = 0;
    std::string coin_out = "-";
    coin_cmd->add_option("--alpha", coin_alpha, "Outbound flip probability")->required();
    coin_cmd->add_option("--delta", coin_delta, "1 - return flip probability")->required();
    coin_cmd->add_option("--trials", coin_trials, "Simulated trials")->capture_default_str();
    auto* coin_seed_opt = coin_cmd->add_option("--seed", coin_seed, "RNG seed (falls back to WEAKMETER_SEED)");
    auto* coin_lambda_opt =
        coin_cmd->add_option("--lambda", coin_lambda, "Also report the mean of s / lambda");
    coin_cmd->add_option("--out", coin_out, "Output path, '-' for stdout")->capture_default_str();
    coin_cmd->callback([&] {
        const CoinProtocol protocol(coin_alpha, coin_delta);
        const CoinWeights w = coin_weights(protocol);
        const CoinStats stats =
            coin_simulate(protocol, coin_trials, resolve_seed(coin_seed_opt, coin_seed));
        json doc{{"p1", w.p1},
                 {"p2", w.p2},
                 {"mean", coin_mean(protocol)},
                 {"empirical_mean", stats.mean},
                 {"kept", stats.kept}};
        if (coin_lambda_opt->count() > 0) {
            doc["lambda"] = coin_lambda;
            doc["recalibrated_mean"] = recalibrated_mean(protocol, coin_lambda);
        }
        Output out(coin_out);
        emit_json(out, doc);
    });

    // ----- sample ----------------------------------------------------------
    auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo three-step measurement run");
    StateInput sample_pre, sample_post;
    add_state_options(sample_cmd, sample_pre, sample_post);
    double sample_s1 = 1.0, sample_s2 = -1.0, sample_deltaf = 0.0, sample_noise_width = 0.0;
    std::uint64_t sample_n = 100'000, sample_seed = 0;
    unsigned sample_shards = 1;
    std::string sample_noise, sample_dump, sample_out = "-";
    sample_cmd->add_option("--s1", sample_s1, "Upper eigenvalue")->capture_default_str();
    sample_cmd->add_option("--s2", sample_s2, "Lower eigenvalue")->capture_default_str();
    sample_cmd->add_option("--deltaf", sample_deltaf, "Pointer width")->required();
    sample_cmd->add_option("--n", sample_n, "Accepted readings to collect")->capture_default_str();
    auto* sample_seed_opt =
        sample_cmd->add_option("--seed", sample_seed, "RNG seed (falls back to WEAKMETER_SEED)");
    sample_cmd->add_option("--shards", sample_shards, "Worker threads")->capture_default_str();
    auto* sample_noise_opt = sample_cmd->add_option("--noise", sample_noise, "Classical setting noise")
                                 ->check(CLI::IsMember({"gaussian", "uniform"}));
    sample_cmd->add_option("--noise-width", sample_noise_width, "Noise width")
        ->needs(sample_noise_opt);
    sample_noise_opt->needs(sample_cmd->get_option("--noise-width"));
    sample_cmd->add_option("--dump", sample_dump, "Write accepted readings to this CSV file");
    sample_cmd->add_option("--out", sample_out, "Output path, '-' for stdout")->capture_default_str();
    sample_cmd->callback([&] {
        const Transition t{sample_pre.resolve("pre"), sample_post.resolve("post")};
        const DichotomicObservable obs(sample_s1, sample_s2);
        const GaussianPointer p(sample_deltaf);
        const std::uint64_t seed = resolve_seed(sample_seed_opt, sample_seed);
        SampleRun run;
        if (sample_noise_opt->count() > 0) {
            const ClassicalNoise noise = sample_noise == "gaussian"
                                             ? ClassicalNoise::gaussian(sample_noise_width)
                                             : ClassicalNoise::uniform(sample_noise_width);
            run = sample_with_noise(t, obs, p, noise, sample_n, seed, sample_shards);
        } else {
            run = sample_readings(t, obs, p, sample_n, seed, sample_shards);
        }
        if (!sample_dump.empty()) {
            Output dump(sample_dump);
            dump.stream() << "f\n";
            for (double f : run.readings) dump.stream() << format_full(f) << '\n';
            dump.finish();
        }
        Output out(sample_out);
        emit_json(out, json{{"empirical_mean", run.empirical_mean},
                            {"accepted", run.accepted},
                            {"attempted", run.attempted},
                            {"acceptance_rate", static_cast<double>(run.accepted) /
                                                    static_cast<double>(run.attempted)},
                            {"seed", run.seed},
                            {"delta_f", p.delta_f}});
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"von Neumann pointer measurements on pre- and post-selected two-level systems"};
    try {
        return run(app, argc, argv);
    } catch (const weakmeter::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 9;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
