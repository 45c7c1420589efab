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
// Experiment engine: SNR sweeps and mixture-size sweeps over a fixed test
// set, with paired noise realizations for every estimator and deterministic
// output for any thread count.

#ifndef GMMCE_HARNESS_HPP
#define GMMCE_HARNESS_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gmmce/channel_model.hpp"
#include "gmmce/dataset.hpp"
#include "gmmce/gmm.hpp"

namespace gmmce {

// Known estimator names accepted in configuration files.
//   ls, sample-cov, genie-lmmse, gmm, genie-omp
bool is_known_estimator(const std::string &name);

struct ExperimentConfig {
    // Dataset sources: file paths (binary dataset or .csv import), or, when
    // empty, generation settings below.
    std::string train_dataset;
    std::string test_dataset;
    ModelConfig model;                  // generation settings (seed derived per run)
    std::size_t train_samples = 20000;
    std::size_t test_samples = 2000;

    std::vector<std::string> estimators = {"ls", "sample-cov", "gmm"};
    int gmm_components = 16;
    std::string gmm_model;              // optional pre-fitted model file
    EmConfig em;
    int omp_oversampling = 4;
    int omp_max_sparsity = 0;           // 0 -> min(N, 64)

    std::vector<double> snr_grid_db = {-10, -5, 0, 5, 10, 15, 20};
    std::vector<int> k_grid;            // sweep-k only

    std::string output_path;
    std::uint64_t seed = 1;
    int threads = 0;                    // 0 -> hardware concurrency
};

// Parses the flat key-value config format ("key = value", '#' comments).
// Unknown keys raise ConfigError.
ExperimentConfig parse_config_file(const std::filesystem::path &path);
ExperimentConfig parse_config_text(const std::string &text);

// Cross-field checks: non-empty strictly increasing SNR grid, unique known
// estimator names, positive sizes. Throws ConfigError.
void validate_config(const ExperimentConfig &cfg);

// Canonical "key = value" echo of the effective configuration.
std::string effective_config_string(const ExperimentConfig &cfg);

enum class SweepAxis { kSnrDb, kComponents };

struct SweepResult {
    SweepAxis axis = SweepAxis::kSnrDb;
    std::vector<double> axis_values;
    // Ordered estimator-name -> MSE-per-axis-value columns.
    std::vector<std::pair<std::string, std::vector<double>>> mse;
    std::string metadata; // config echo + seed + runtime
};

// (1/(M*N)) sum_m ||h_m - h_hat_m||^2.
double normalized_mse(const std::vector<Eigen::VectorXcd> &truths,
                      const std::vector<Eigen::VectorXcd> &estimates);

// Runs every configured estimator over the SNR grid. All estimators at one
// grid point see identical observations y = h + n; noise is seeded per
// (seed, snr index, sample index).
SweepResult run_snr_sweep(const ExperimentConfig &cfg);

// Fits (or reuses) one GMM per k_grid entry on the same training set and
// evaluates at each configured SNR; baselines appear as K-independent
// columns. Result axis is the component count.
SweepResult run_k_sweep(const ExperimentConfig &cfg);

// CSV with header "axis,<estimator1>,..."; one row per axis value, floats
// at 17 significant digits, LF line endings.
void emit_csv(const SweepResult &result, const std::filesystem::path &path);

// Named presets. The desk-scale preset is what the test suite exercises;
// the full-scale preset reproduces the full experiment geometry and runs
// for hours.
ExperimentConfig desk_scale_preset();
ExperimentConfig full_scale_preset();

} // namespace gmmce

#endif
