// SPDX-License-Identifier: Apache-2.0
//
// gmmce - Gaussian mixture model channel estimation library
// Copyright (C) 2026 gmmce contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Command-line front end: dataset generation, GMM fitting, single-point
// estimation, and the SNR / mixture-size sweep experiments.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "gmmce/dataset_io.hpp"
#include "gmmce/parallel.hpp"
#include "gmmce/errors.hpp"
#include "gmmce/estimators.hpp"
#include "gmmce/harness.hpp"

namespace {

constexpr double kDeg2Rad = 3.14159265358979323846 / 180.0;

void echo_config(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        std::cerr << "[config] " << line << "\n";
}

void echo_kv(const std::string &key, const std::string &value) {
    std::cerr << "[config] " << key << " = " << value << "\n";
}

int run_generate(const std::string &out_path, std::size_t samples, int antennas, int clusters,
                 double spread_deg, int quadrature, std::uint64_t seed, bool retain_cov,
                 int threads) {
    gmmce::ModelConfig cfg;
    cfg.antennas = antennas;
    cfg.clusters = clusters;
    cfg.spread = spread_deg * kDeg2Rad;
    cfg.quadrature_points = quadrature;
    cfg.seed = seed;
    cfg.retain_covariances = retain_cov;

    echo_kv("out", out_path);
    echo_kv("samples", std::to_string(samples));
    echo_kv("antennas", std::to_string(antennas));
    echo_kv("clusters", std::to_string(clusters));
    echo_kv("spread_deg", std::to_string(spread_deg));
    echo_kv("quadrature_points", std::to_string(quadrature));
    echo_kv("retain_covariances", retain_cov ? "true" : "false");
    echo_kv("seed", std::to_string(seed));
    echo_kv("threads", std::to_string(threads));

    const gmmce::ChannelDataset ds = gmmce::generate_dataset(cfg, samples, threads);
    gmmce::write_dataset(ds, out_path);
    std::cerr << "wrote " << ds.size() << " samples (N = " << ds.n_antennas << ") to "
              << out_path << "\n";
    return 0;
}

int run_fit(const std::string &dataset_path, int components, const std::string &out_path,
            int max_iters, double tol, double ridge_scale, const std::string &init,
            std::uint64_t seed, int threads) {
    gmmce::EmConfig em;
    em.max_iterations = max_iters;
    em.rel_tolerance = tol;
    em.ridge_scale = ridge_scale;
    em.seed = seed;
    if (init == "random-responsibility")
        em.init = gmmce::InitStrategy::kRandomResponsibility;
    else if (init == "kmeans")
        em.init = gmmce::InitStrategy::kKMeansSeeded;
    else
        throw gmmce::ConfigError("unknown init strategy '" + init + "'");

    echo_kv("dataset", dataset_path);
    echo_kv("components", std::to_string(components));
    echo_kv("max_iterations", std::to_string(max_iters));
    echo_kv("rel_tolerance", std::to_string(tol));
    echo_kv("ridge_scale", std::to_string(ridge_scale));
    echo_kv("init", init);
    echo_kv("seed", std::to_string(seed));
    echo_kv("threads", std::to_string(threads));

    const gmmce::ChannelDataset ds = gmmce::read_dataset(dataset_path);
    const gmmce::FitResult fit = gmmce::fit_em(ds, components, em, threads);
    gmmce::save_model(fit.model, out_path);
    std::cerr << "converged after " << fit.iterations << " iterations, avg log-likelihood "
              << fit.log_likelihood_trace.back() << "\n";
    std::cerr << "wrote model (K = " << components << ", N = " << ds.n_antennas << ") to "
              << out_path << "\n";
    return 0;
}

int run_estimate(const std::string &model_path, const std::string &dataset_path, double snr_db,
                 std::uint64_t seed, const std::string &out_path, int threads) {
    echo_kv("model", model_path);
    echo_kv("dataset", dataset_path);
    echo_kv("snr_db", std::to_string(snr_db));
    echo_kv("seed", std::to_string(seed));
    echo_kv("out", out_path);
    echo_kv("threads", std::to_string(threads));

    const gmmce::GmmModel model = gmmce::load_model(model_path);
    const gmmce::ChannelDataset ds = gmmce::read_dataset(dataset_path);
    if (model.dim() != ds.n_antennas)
        throw gmmce::ConfigError("model dimension differs from dataset");
    const int n = ds.n_antennas;
    const gmmce::NoiseModel noise = gmmce::NoiseModel::from_snr_db(snr_db, n);
    const double sigma = std::sqrt(noise.sigma_sq);
    const gmmce::GmmCmeEngine engine(model, noise);

    std::vector<double> nmse(ds.size(), 0.0);
    gmmce::parallel_chunks(ds.size(), 64, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        Eigen::VectorXcd y(n);
        for (std::size_t m = begin; m < end; ++m) {
            gmmce::Rng rng(gmmce::derive_seed(seed, {0x455354u, m}));
            for (int i = 0; i < n; ++i)
                y(i) = ds.samples[m].channel(i) + sigma * rng.cnormal();
            const Eigen::VectorXcd h_hat = engine.estimate(y).channel;
            nmse[m] = (ds.samples[m].channel - h_hat).squaredNorm() / n;
        }
    });

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw gmmce::IoError("cannot open for writing: " + out_path);
    out << "sample,nmse\n";
    double total = 0.0;
    for (std::size_t m = 0; m < ds.size(); ++m) {
        total += nmse[m];
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", nmse[m]);
        out << m << ',' << buf << '\n';
    }
    std::cerr << "mean normalized MSE over " << ds.size() << " samples: "
              << total / static_cast<double>(ds.size()) << "\n";
    return 0;
}

int run_sweep(bool k_sweep, const std::string &config_path, const CLI::Option *seed_opt,
              std::uint64_t seed, const CLI::Option *out_opt, const std::string &out_path,
              const CLI::Option *threads_opt, int threads) {
    gmmce::ExperimentConfig cfg = gmmce::parse_config_file(config_path);
    if (seed_opt->count() > 0)
        cfg.seed = seed;
    if (out_opt->count() > 0)
        cfg.output_path = out_path;
    if (threads_opt->count() > 0)
        cfg.threads = threads;
    if (cfg.output_path.empty())
        throw gmmce::ConfigError("no output path: set 'out' in the config or pass --out");

    echo_config(gmmce::effective_config_string(cfg));

    const gmmce::SweepResult result = k_sweep ? gmmce::run_k_sweep(cfg)
                                              : gmmce::run_snr_sweep(cfg);
    gmmce::emit_csv(result, cfg.output_path);
    std::cerr << "wrote " << result.axis_values.size() << " rows x " << result.mse.size()
              << " estimator columns to " << cfg.output_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"GMM conditional-mean channel estimation benchmark"};
    app.require_subcommand(1);

    // generate
    auto *generate = app.add_subcommand("generate", "Generate a spatial-model channel dataset");
    std::string gen_out;
    std::size_t gen_samples = 1000;
    int gen_antennas = 16, gen_clusters = 1, gen_quadrature = 0, gen_threads = 0;
    double gen_spread_deg = 2.0;
    std::uint64_t gen_seed = 1;
    bool gen_retain = true;
    generate->add_option("--out", gen_out, "Output dataset file")->required();
    generate->add_option("--samples", gen_samples, "Number of samples");
    generate->add_option("--antennas", gen_antennas, "Antenna count N");
    generate->add_option("--clusters", gen_clusters, "Propagation clusters per sample");
    generate->add_option("--spread-deg", gen_spread_deg, "Laplace angle spread in degrees");
    generate->add_option("--quadrature", gen_quadrature, "Quadrature points (0 = auto)");
    generate->add_option("--seed", gen_seed, "Random seed");
    generate->add_flag("--retain-cov,!--no-retain-cov", gen_retain,
                       "Keep per-sample covariances (genie baselines)");
    generate->add_option("--threads", gen_threads, "Worker threads (0 = hardware)");

    // fit
    auto *fit = app.add_subcommand("fit", "Fit a complex GMM to a dataset with EM");
    std::string fit_dataset, fit_out, fit_init = "random-responsibility";
    int fit_k = 16, fit_max_iters = 500, fit_threads = 0;
    double fit_tol = 1e-6, fit_ridge = 1e-6;
    std::uint64_t fit_seed = 1;
    fit->add_option("--dataset", fit_dataset, "Training dataset file")->required();
    fit->add_option("--components,-k", fit_k, "Number of mixture components")->required();
    fit->add_option("--out", fit_out, "Output model file")->required();
    fit->add_option("--max-iters", fit_max_iters, "EM iteration cap");
    fit->add_option("--tol", fit_tol, "Relative log-likelihood tolerance");
    fit->add_option("--ridge-scale", fit_ridge, "Covariance diagonal loading scale");
    fit->add_option("--init", fit_init, "Init strategy: random-responsibility | kmeans");
    fit->add_option("--seed", fit_seed, "Random seed");
    fit->add_option("--threads", fit_threads, "Worker threads (0 = hardware)");

    // estimate
    auto *estimate = app.add_subcommand("estimate", "Per-sample GMM estimation errors at one SNR");
    std::string est_model, est_dataset, est_out;
    double est_snr = 10.0;
    std::uint64_t est_seed = 1;
    int est_threads = 0;
    estimate->add_option("--model", est_model, "Fitted model file")->required();
    estimate->add_option("--dataset", est_dataset, "Test dataset file")->required();
    estimate->add_option("--snr-db", est_snr, "SNR in dB")->required();
    estimate->add_option("--seed", est_seed, "Random seed");
    estimate->add_option("--out", est_out, "Output CSV of per-sample errors")->required();
    estimate->add_option("--threads", est_threads, "Worker threads (0 = hardware)");

    // sweeps
    std::string snr_config, snr_out;
    std::uint64_t snr_seed = 0;
    int snr_threads = 0;
    auto *sweep_snr = app.add_subcommand("sweep-snr", "Run an SNR sweep from a config file");
    auto *snr_config_opt = sweep_snr->add_option("--config", snr_config, "Config file");
    snr_config_opt->required();
    auto *snr_seed_opt = sweep_snr->add_option("--seed", snr_seed, "Override seed");
    auto *snr_out_opt = sweep_snr->add_option("--out", snr_out, "Override output CSV path");
    auto *snr_threads_opt = sweep_snr->add_option("--threads", snr_threads, "Override threads");

    std::string k_config, k_out;
    std::uint64_t k_seed = 0;
    int k_threads = 0;
    auto *sweep_k = app.add_subcommand("sweep-k", "Run a mixture-size sweep from a config file");
    auto *k_config_opt = sweep_k->add_option("--config", k_config, "Config file");
    k_config_opt->required();
    auto *k_seed_opt = sweep_k->add_option("--seed", k_seed, "Override seed");
    auto *k_out_opt = sweep_k->add_option("--out", k_out, "Override output CSV path");
    auto *k_threads_opt = sweep_k->add_option("--threads", k_threads, "Override threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return run_generate(gen_out, gen_samples, gen_antennas, gen_clusters, gen_spread_deg,
                                gen_quadrature, gen_seed, gen_retain, gen_threads);
        if (fit->parsed())
            return run_fit(fit_dataset, fit_k, fit_out, fit_max_iters, fit_tol, fit_ridge,
                           fit_init, fit_seed, fit_threads);
        if (estimate->parsed())
            return run_estimate(est_model, est_dataset, est_snr, est_seed, est_out, est_threads);
        if (sweep_snr->parsed())
            return run_sweep(false, snr_config, snr_seed_opt, snr_seed, snr_out_opt, snr_out,
                             snr_threads_opt, snr_threads);
        if (sweep_k->parsed())
            return run_sweep(true, k_config, k_seed_opt, k_seed, k_out_opt, k_out,
                             k_threads_opt, k_threads);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
