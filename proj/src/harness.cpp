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

#include "gmmce/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "gmmce/dataset_io.hpp"
#include "gmmce/errors.hpp"
#include "gmmce/estimators.hpp"
#include "gmmce/parallel.hpp"

namespace gmmce {

namespace {

// Stream tags for seed derivation.
constexpr std::uint64_t kStreamGenerate = 0x47454eu;
constexpr std::uint64_t kStreamSplit = 0x53504cu;
constexpr std::uint64_t kStreamFit = 0x464954u;
constexpr std::uint64_t kStreamNoise = 0x4e4f49u;

constexpr std::array<const char *, 5> kEstimatorNames = {"ls", "sample-cov", "genie-lmmse",
                                                         "gmm", "genie-omp"};

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(s);
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double parse_double(const std::string &key, const std::string &value) {
    double v = 0.0;
    const char *begin = value.data();
    const char *end = value.data() + value.size();
    const auto [next, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || next != end)
        throw ConfigError("config key '" + key + "': invalid number '" + value + "'");
    return v;
}

long long parse_int(const std::string &key, const std::string &value) {
    long long v = 0;
    const char *begin = value.data();
    const char *end = value.data() + value.size();
    const auto [next, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || next != end)
        throw ConfigError("config key '" + key + "': invalid integer '" + value + "'");
    return v;
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw ConfigError("config key '" + key + "': invalid boolean '" + value + "'");
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Loads a dataset path, importing CSV files by extension.
ChannelDataset load_any(const std::string &path, int n_antennas) {
    const std::filesystem::path p(path);
    if (p.extension() == ".csv")
        return import_csv(p, n_antennas);
    return read_dataset(p);
}

struct PreparedData {
    ChannelDataset train;
    ChannelDataset test;
};

// Loaded datasets are normalized over the union of train and test when
// either part lacks normalization; generated datasets are normalized at the
// source and then split.
PreparedData prepare_datasets(const ExperimentConfig &cfg) {
    PreparedData data;
    if (!cfg.train_dataset.empty() || !cfg.test_dataset.empty()) {
        if (cfg.train_dataset.empty() || cfg.test_dataset.empty())
            throw ConfigError("train_dataset and test_dataset must both be set (or neither)");
        data.train = load_any(cfg.train_dataset, cfg.model.antennas);
        data.test = load_any(cfg.test_dataset, cfg.model.antennas);
        if (data.train.n_antennas != data.test.n_antennas)
            throw ConfigError("train/test antenna counts differ");
        if (!data.train.normalized || !data.test.normalized) {
            double total = 0.0;
            std::size_t count = data.train.size() + data.test.size();
            for (const auto *part : {&data.train, &data.test})
                for (const auto &s : part->samples)
                    total += s.channel.squaredNorm();
            if (total <= 0.0 || count == 0)
                throw DegenerateDataset("loaded datasets contain no signal");
            const double c = std::sqrt(static_cast<double>(data.train.n_antennas) *
                                       static_cast<double>(count) / total);
            for (auto *part : {&data.train, &data.test}) {
                for (auto &s : part->samples) {
                    s.channel *= c;
                    if (s.covariance)
                        s.covariance = HermitianMatrix(c * c * s.covariance->mat());
                }
            }
        }
    } else {
        ModelConfig gen = cfg.model;
        gen.seed = derive_seed(cfg.seed, {kStreamGenerate});
        const std::size_t total = cfg.train_samples + cfg.test_samples;
        if (cfg.train_samples == 0 || cfg.test_samples == 0)
            throw ConfigError("train_samples and test_samples must be positive");
        ChannelDataset all = generate_dataset(gen, total, cfg.threads);
        Rng split_rng(derive_seed(cfg.seed, {kStreamSplit}));
        const double fraction =
            static_cast<double>(cfg.train_samples) / static_cast<double>(total);
        auto parts = split_dataset(all, fraction, split_rng);
        data.train = std::move(parts.first);
        data.test = std::move(parts.second);
    }
    return data;
}

struct EstimatorSetup {
    std::vector<std::string> names;
    std::optional<GmmModel> gmm;
    std::optional<HermitianMatrix> scov;
    std::optional<Dictionary> dict;
    int omp_max_sparsity = 0;
};

bool wants(const std::vector<std::string> &names, const std::string &name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

EstimatorSetup prepare_estimators(const ExperimentConfig &cfg, const PreparedData &data,
                                  std::optional<int> k_override) {
    EstimatorSetup setup;
    setup.names = cfg.estimators;

    if (wants(setup.names, "genie-lmmse") && !data.test.has_covariances())
        throw ConfigError("genie-lmmse requires a test dataset with retained covariances");

    if (wants(setup.names, "gmm")) {
        if (!cfg.gmm_model.empty() && !k_override) {
            setup.gmm = load_model(cfg.gmm_model);
            if (setup.gmm->dim() != data.train.n_antennas)
                throw ConfigError("loaded GMM dimension differs from dataset");
        } else {
            const int k = k_override.value_or(cfg.gmm_components);
            EmConfig em = cfg.em;
            em.seed = derive_seed(cfg.seed, {kStreamFit, static_cast<std::uint64_t>(k)});
            setup.gmm = fit_em(data.train, k, em, cfg.threads).model;
        }
    }
    if (wants(setup.names, "sample-cov"))
        setup.scov = sample_covariance(data.train);
    if (wants(setup.names, "genie-omp")) {
        setup.dict = dft_dictionary(data.test.n_antennas, cfg.omp_oversampling);
        setup.omp_max_sparsity = cfg.omp_max_sparsity > 0
                                     ? cfg.omp_max_sparsity
                                     : std::min(data.test.n_antennas, 64);
    }
    return setup;
}

// Evaluates all configured estimators at every SNR grid point on paired
// observations. Returned columns follow the configured estimator order;
// entry [e][si] is the normalized MSE of estimator e at grid point si.
std::vector<std::vector<double>> evaluate_over_snr(const ExperimentConfig &cfg,
                                                   const PreparedData &data,
                                                   const EstimatorSetup &setup) {
    const int n = data.test.n_antennas;
    const std::size_t m = data.test.size();
    if (m == 0)
        throw EmptyDataset("sweep: empty test dataset");
    const std::size_t n_est = setup.names.size();

    std::vector<std::vector<double>> mse(n_est,
                                         std::vector<double>(cfg.snr_grid_db.size(), 0.0));

    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const NoiseModel noise = NoiseModel::from_snr_db(cfg.snr_grid_db[si], n);
        const double sigma = std::sqrt(noise.sigma_sq);

        std::optional<GmmCmeEngine> gmm_engine;
        if (setup.gmm)
            gmm_engine.emplace(*setup.gmm, noise);
        std::optional<LmmseEngine> scov_engine;
        if (setup.scov)
            scov_engine.emplace(*setup.scov, noise);

        constexpr std::size_t kChunk = 64;
        const std::size_t n_chunks = (m + kChunk - 1) / kChunk;
        std::vector<std::vector<double>> chunk_err(n_chunks, std::vector<double>(n_est, 0.0));

        parallel_chunks(m, kChunk, cfg.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            std::vector<double> &err = chunk_err[chunk];
            Eigen::VectorXcd y(n);
            for (std::size_t s = begin; s < end; ++s) {
                const auto &sample = data.test.samples[s];
                Rng rng(derive_seed(cfg.seed, {kStreamNoise, si, s}));
                for (int i = 0; i < n; ++i)
                    y(i) = sample.channel(i) + sigma * rng.cnormal();

                for (std::size_t e = 0; e < n_est; ++e) {
                    const std::string &name = setup.names[e];
                    Eigen::VectorXcd h_hat;
                    if (name == "ls") {
                        h_hat = y;
                    } else if (name == "sample-cov") {
                        h_hat = scov_engine->estimate(y).channel;
                    } else if (name == "genie-lmmse") {
                        h_hat = lmmse_estimate(*sample.covariance, noise, y).channel;
                    } else if (name == "gmm") {
                        h_hat = gmm_engine->estimate(y).channel;
                    } else { // genie-omp
                        h_hat = omp_genie(y, *setup.dict, sample.channel,
                                          setup.omp_max_sparsity)
                                    .channel;
                    }
                    err[e] += (sample.channel - h_hat).squaredNorm();
                }
            }
        });

        for (std::size_t e = 0; e < n_est; ++e) {
            double total = 0.0;
            for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
                total += chunk_err[chunk][e];
            mse[e][si] = total / (static_cast<double>(m) * static_cast<double>(n));
        }
    }
    return mse;
}

std::string make_metadata(const ExperimentConfig &cfg, double runtime_seconds) {
    std::ostringstream out;
    out << effective_config_string(cfg);
    out << "runtime_seconds = " << format_g(runtime_seconds) << "\n";
    return out.str();
}

} // namespace

bool is_known_estimator(const std::string &name) {
    return std::find(kEstimatorNames.begin(), kEstimatorNames.end(), name) !=
           kEstimatorNames.end();
}

ExperimentConfig parse_config_text(const std::string &text) {
    ExperimentConfig cfg;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "train_dataset") {
            cfg.train_dataset = value;
        } else if (key == "test_dataset") {
            cfg.test_dataset = value;
        } else if (key == "antennas") {
            cfg.model.antennas = static_cast<int>(parse_int(key, value));
        } else if (key == "clusters") {
            cfg.model.clusters = static_cast<int>(parse_int(key, value));
        } else if (key == "spread_deg") {
            cfg.model.spread = parse_double(key, value) * 3.14159265358979323846 / 180.0;
        } else if (key == "quadrature_points") {
            cfg.model.quadrature_points = static_cast<int>(parse_int(key, value));
        } else if (key == "retain_covariances") {
            cfg.model.retain_covariances = parse_bool(key, value);
        } else if (key == "train_samples") {
            cfg.train_samples = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "test_samples") {
            cfg.test_samples = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "estimators") {
            cfg.estimators = split_list(value);
        } else if (key == "gmm_components") {
            cfg.gmm_components = static_cast<int>(parse_int(key, value));
        } else if (key == "gmm_model") {
            cfg.gmm_model = value;
        } else if (key == "em_max_iterations") {
            cfg.em.max_iterations = static_cast<int>(parse_int(key, value));
        } else if (key == "em_rel_tolerance") {
            cfg.em.rel_tolerance = parse_double(key, value);
        } else if (key == "em_ridge_scale") {
            cfg.em.ridge_scale = parse_double(key, value);
        } else if (key == "em_init") {
            if (value == "random-responsibility")
                cfg.em.init = InitStrategy::kRandomResponsibility;
            else if (value == "kmeans")
                cfg.em.init = InitStrategy::kKMeansSeeded;
            else
                throw ConfigError("config key 'em_init': unknown strategy '" + value + "'");
        } else if (key == "omp_oversampling") {
            cfg.omp_oversampling = static_cast<int>(parse_int(key, value));
        } else if (key == "omp_max_sparsity") {
            cfg.omp_max_sparsity = static_cast<int>(parse_int(key, value));
        } else if (key == "snr_db") {
            cfg.snr_grid_db.clear();
            for (const auto &item : split_list(value))
                cfg.snr_grid_db.push_back(parse_double(key, item));
        } else if (key == "k_grid") {
            cfg.k_grid.clear();
            for (const auto &item : split_list(value))
                cfg.k_grid.push_back(static_cast<int>(parse_int(key, item)));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(key, value));
        } else if (key == "out") {
            cfg.output_path = value;
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void validate_config(const ExperimentConfig &cfg) {
    if (cfg.snr_grid_db.empty())
        throw ConfigError("snr_db must be non-empty");
    for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
        if (!(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1]))
            throw ConfigError("snr_db must be strictly increasing");
    if (cfg.estimators.empty())
        throw ConfigError("estimators must be non-empty");
    std::set<std::string> seen;
    for (const auto &name : cfg.estimators) {
        if (name.find(',') != std::string::npos)
            throw ConfigError("estimator name contains a comma: '" + name + "'");
        if (!is_known_estimator(name))
            throw ConfigError("unknown estimator '" + name + "'");
        if (!seen.insert(name).second)
            throw ConfigError("duplicate estimator '" + name + "'");
    }
    if (cfg.gmm_components < 1)
        throw ConfigError("gmm_components must be >= 1");
    for (int k : cfg.k_grid)
        if (k < 1)
            throw ConfigError("k_grid entries must be >= 1");
    if (cfg.model.antennas < 1 || cfg.model.clusters < 1)
        throw ConfigError("antennas and clusters must be >= 1");
    if (cfg.threads < 0)
        throw ConfigError("threads must be >= 0");
}

std::string effective_config_string(const ExperimentConfig &cfg) {
    std::ostringstream out;
    if (!cfg.train_dataset.empty())
        out << "train_dataset = " << cfg.train_dataset << "\n";
    if (!cfg.test_dataset.empty())
        out << "test_dataset = " << cfg.test_dataset << "\n";
    out << "antennas = " << cfg.model.antennas << "\n";
    out << "clusters = " << cfg.model.clusters << "\n";
    out << "spread_deg = " << format_g(cfg.model.spread * 180.0 / 3.14159265358979323846) << "\n";
    out << "quadrature_points = " << cfg.model.quadrature_points << "\n";
    out << "retain_covariances = " << (cfg.model.retain_covariances ? "true" : "false") << "\n";
    out << "train_samples = " << cfg.train_samples << "\n";
    out << "test_samples = " << cfg.test_samples << "\n";
    out << "estimators = ";
    for (std::size_t i = 0; i < cfg.estimators.size(); ++i)
        out << (i ? "," : "") << cfg.estimators[i];
    out << "\n";
    out << "gmm_components = " << cfg.gmm_components << "\n";
    if (!cfg.gmm_model.empty())
        out << "gmm_model = " << cfg.gmm_model << "\n";
    out << "em_max_iterations = " << cfg.em.max_iterations << "\n";
    out << "em_rel_tolerance = " << format_g(cfg.em.rel_tolerance) << "\n";
    out << "em_ridge_scale = " << format_g(cfg.em.ridge_scale) << "\n";
    out << "em_init = "
        << (cfg.em.init == InitStrategy::kRandomResponsibility ? "random-responsibility" : "kmeans")
        << "\n";
    out << "omp_oversampling = " << cfg.omp_oversampling << "\n";
    out << "omp_max_sparsity = " << cfg.omp_max_sparsity << "\n";
    out << "snr_db = ";
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
        out << (i ? "," : "") << format_g(cfg.snr_grid_db[i]);
    out << "\n";
    if (!cfg.k_grid.empty()) {
        out << "k_grid = ";
        for (std::size_t i = 0; i < cfg.k_grid.size(); ++i)
            out << (i ? "," : "") << cfg.k_grid[i];
        out << "\n";
    }
    out << "seed = " << cfg.seed << "\n";
    out << "threads = " << cfg.threads << "\n";
    if (!cfg.output_path.empty())
        out << "out = " << cfg.output_path << "\n";
    return out.str();
}

double normalized_mse(const std::vector<Eigen::VectorXcd> &truths,
                      const std::vector<Eigen::VectorXcd> &estimates) {
    if (truths.size() != estimates.size())
        throw LengthMismatch("normalized_mse: truth/estimate counts differ");
    if (truths.empty())
        throw LengthMismatch("normalized_mse: empty inputs");
    const Eigen::Index n = truths.front().size();
    double acc = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i].size() != n || estimates[i].size() != n)
            throw DimensionMismatch("normalized_mse: vector dimension mismatch");
        acc += (truths[i] - estimates[i]).squaredNorm();
    }
    return acc / (static_cast<double>(truths.size()) * static_cast<double>(n));
}

SweepResult run_snr_sweep(const ExperimentConfig &cfg) {
    const auto start = std::chrono::steady_clock::now();
    validate_config(cfg);
    const PreparedData data = prepare_datasets(cfg);
    const EstimatorSetup setup = prepare_estimators(cfg, data, std::nullopt);
    const auto mse = evaluate_over_snr(cfg, data, setup);

    SweepResult result;
    result.axis = SweepAxis::kSnrDb;
    result.axis_values = cfg.snr_grid_db;
    for (std::size_t e = 0; e < setup.names.size(); ++e)
        result.mse.emplace_back(setup.names[e], mse[e]);
    const auto stop = std::chrono::steady_clock::now();
    result.metadata = make_metadata(cfg, std::chrono::duration<double>(stop - start).count());
    return result;
}

SweepResult run_k_sweep(const ExperimentConfig &cfg) {
    const auto start = std::chrono::steady_clock::now();
    validate_config(cfg);
    if (cfg.k_grid.empty())
        throw ConfigError("sweep-k requires a non-empty k_grid");
    const PreparedData data = prepare_datasets(cfg);

    SweepResult result;
    result.axis = SweepAxis::kComponents;
    for (int k : cfg.k_grid)
        result.axis_values.push_back(static_cast<double>(k));

    // Baseline estimators do not depend on K: evaluate them once and emit
    // constant columns. The GMM column is refit per K on the same training
    // set and the same noise realizations.
    ExperimentConfig base = cfg;
    base.estimators.clear();
    for (const auto &name : cfg.estimators)
        if (name != "gmm")
            base.estimators.push_back(name);

    std::vector<std::vector<double>> base_mse;
    if (!base.estimators.empty()) {
        const EstimatorSetup setup = prepare_estimators(base, data, std::nullopt);
        base_mse = evaluate_over_snr(base, data, setup);
    }

    std::vector<std::vector<double>> gmm_mse; // [k_index][snr_index]
    if (wants(cfg.estimators, "gmm")) {
        ExperimentConfig gmm_only = cfg;
        gmm_only.estimators = {"gmm"};
        for (int k : cfg.k_grid) {
            const EstimatorSetup setup = prepare_estimators(gmm_only, data, k);
            gmm_mse.push_back(evaluate_over_snr(gmm_only, data, setup)[0]);
        }
    }

    // Columns in configured estimator order, one per (estimator, SNR) pair.
    for (const auto &name : cfg.estimators) {
        for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
            const std::string column = name + "@" + format_g(cfg.snr_grid_db[si]) + "dB";
            std::vector<double> values;
            values.reserve(cfg.k_grid.size());
            if (name == "gmm") {
                for (std::size_t ki = 0; ki < cfg.k_grid.size(); ++ki)
                    values.push_back(gmm_mse[ki][si]);
            } else {
                std::size_t e = 0;
                while (base.estimators[e] != name)
                    ++e;
                values.assign(cfg.k_grid.size(), base_mse[e][si]);
            }
            result.mse.emplace_back(column, std::move(values));
        }
    }
    const auto stop = std::chrono::steady_clock::now();
    result.metadata = make_metadata(cfg, std::chrono::duration<double>(stop - start).count());
    return result;
}

void emit_csv(const SweepResult &result, const std::filesystem::path &path) {
    for (const auto &[name, values] : result.mse) {
        if (name.find(',') != std::string::npos)
            throw ConfigError("emit_csv: estimator name contains a comma: '" + name + "'");
        if (values.size() != result.axis_values.size())
            throw LengthMismatch("emit_csv: column '" + name + "' length differs from axis");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());

    out << "axis";
    for (const auto &[name, values] : result.mse)
        out << ',' << name;
    out << '\n';
    for (std::size_t row = 0; row < result.axis_values.size(); ++row) {
        out << format_g17(result.axis_values[row]);
        for (const auto &[name, values] : result.mse)
            out << ',' << format_g17(values[row]);
        out << '\n';
    }
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

ExperimentConfig desk_scale_preset() {
    ExperimentConfig cfg;
    cfg.model.antennas = 16;
    cfg.model.clusters = 1;
    cfg.model.retain_covariances = true;
    cfg.train_samples = 20000;
    cfg.test_samples = 2000;
    cfg.gmm_components = 16;
    cfg.estimators = {"ls", "sample-cov", "genie-lmmse", "gmm"};
    cfg.snr_grid_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
    cfg.em.max_iterations = 200;
    cfg.em.rel_tolerance = 1e-5;
    cfg.seed = 1;
    return cfg;
}

ExperimentConfig full_scale_preset() {
    ExperimentConfig cfg;
    cfg.model.antennas = 128;
    cfg.model.clusters = 1;
    // Covariance retention at this scale costs ~64 GiB for the training
    // half; genie baselines need them on the (small) test set only, so the
    // preset trades genie-lmmse away by default.
    cfg.model.retain_covariances = false;
    cfg.train_samples = 190000;
    cfg.test_samples = 10000;
    cfg.gmm_components = 128;
    cfg.estimators = {"ls", "sample-cov", "gmm", "genie-omp"};
    cfg.snr_grid_db = {-15, -10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
    cfg.em.max_iterations = 500;
    cfg.em.rel_tolerance = 1e-6;
    cfg.seed = 1;
    return cfg;
}

} // namespace gmmce
