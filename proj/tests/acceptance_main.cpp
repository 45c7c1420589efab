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
// Acceptance suite: one pass/fail line per criterion, non-zero exit when
// any criterion fails. Criteria pin an analytic anchor plus the qualitative
// structure of the benchmark figures at desk scale (N = 16, K = 16,
// M = 20k/2k) with fixed tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gmmce/channel_model.hpp"
#include "gmmce/dataset_io.hpp"
#include "gmmce/estimators.hpp"
#include "gmmce/gmm.hpp"
#include "gmmce/harness.hpp"
#include "gmmce/linalg.hpp"
#include "test_util.hpp"

using namespace gmmce;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// --- criterion 1: LS normalized MSE equals 1/SNR -------------------------

Outcome criterion_ls_anchor() {
    ExperimentConfig cfg;
    cfg.model.antennas = 16;
    cfg.model.clusters = 1;
    cfg.model.retain_covariances = false;
    cfg.train_samples = 1000;
    cfg.test_samples = 2000; // M >= 10^3 at N >= 16
    cfg.estimators = {"ls"};
    cfg.snr_grid_db = {-10, 0, 10, 20};
    cfg.seed = 101;
    cfg.threads = 0;

    const auto result = run_snr_sweep(cfg);
    Outcome o;
    std::ostringstream detail;
    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const double expected = std::pow(10.0, -cfg.snr_grid_db[si] / 10.0);
        const double got = result.mse[0].second[si];
        const double rel = std::abs(got / expected - 1.0);
        if (rel > 0.05)
            o.pass = false;
        detail << (si ? ", " : "") << fmt(cfg.snr_grid_db[si]) << "dB:" << fmt(got)
               << " vs " << fmt(expected);
    }
    o.detail = detail.str();
    return o;
}

// --- criterion 2: K = 1 GMM equals the sample-covariance LMMSE -----------

Outcome criterion_k1_equivalence() {
    ExperimentConfig cfg;
    cfg.model.antennas = 16;
    cfg.model.clusters = 1;
    cfg.model.retain_covariances = false;
    cfg.train_samples = 20000;
    cfg.test_samples = 2000;
    cfg.estimators = {"gmm", "sample-cov"};
    cfg.k_grid = {1};
    cfg.snr_grid_db = {0, 10};
    cfg.em.max_iterations = 100;
    cfg.em.rel_tolerance = 1e-6;
    cfg.seed = 202;
    cfg.threads = 0;

    const auto result = run_k_sweep(cfg);
    // columns: gmm@0dB, gmm@10dB, sample-cov@0dB, sample-cov@10dB
    Outcome o;
    std::ostringstream detail;
    for (std::size_t si = 0; si < 2; ++si) {
        const double gmm = result.mse[si].second[0];
        const double scov = result.mse[2 + si].second[0];
        const double ratio = gmm / scov;
        if (std::abs(ratio - 1.0) > 0.01)
            o.pass = false;
        detail << (si ? ", " : "") << fmt(cfg.snr_grid_db[si]) << "dB ratio " << fmt(ratio);
    }
    o.detail = detail.str();
    return o;
}

// --- criterion 3: closed form vs brute-force posterior integration -------

Outcome criterion_integration_oracle() {
    const std::vector<double> weights = {0.4, 0.6};
    const std::vector<cxd> means = {cxd(1.8, -0.7), cxd(-1.2, 1.1)};
    const std::vector<double> vars = {0.9, 0.45};
    const double sigma_sq = 0.5;

    GmmModel g;
    g.weights = weights;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        Eigen::VectorXcd mu(1);
        mu << means[k];
        g.means.push_back(mu);
        g.covariances.emplace_back(vars[k] * Eigen::MatrixXcd::Identity(1, 1));
    }
    const GmmCmeEngine engine(g, NoiseModel::isotropic(sigma_sq, 1));

    Rng rng(303);
    const auto receive = receive_pdf(g, NoiseModel::isotropic(sigma_sq, 1).covariance);
    const auto ys = sample_gmm(receive, rng, 120);

    double worst = 0.0;
    for (const auto &yv : ys) {
        const cxd closed = engine.estimate(yv).channel(0);
        const cxd oracle = test::cme_integration_oracle(yv(0), weights, means, vars, sigma_sq, 512);
        worst = std::max(worst, std::abs(closed - oracle) / std::abs(oracle));
    }
    Outcome o;
    o.pass = worst < 1e-6;
    o.detail = "worst relative deviation " + fmt(worst) + " over 120 observations";
    return o;
}

// --- criterion 4: single-cluster figure structure at desk scale ----------

Outcome criterion_fig1_structure() {
    ExperimentConfig cfg = desk_scale_preset();
    cfg.snr_grid_db = {0, 10, 20};
    cfg.seed = 404;
    cfg.threads = 0;

    const auto result = run_snr_sweep(cfg);
    // columns: ls, sample-cov, genie-lmmse, gmm
    const auto &ls = result.mse[0].second;
    const auto &scov = result.mse[1].second;
    const auto &genie = result.mse[2].second;
    const auto &gmm = result.mse[3].second;

    Outcome o;
    const double factor_10db = gmm[1] / genie[1];
    if (factor_10db > 1.3)
        o.pass = false;
    for (std::size_t si = 0; si < 3; ++si)
        if (!(gmm[si] < scov[si]) || !(gmm[si] < ls[si]))
            o.pass = false;
    std::ostringstream detail;
    detail << "gmm/genie at 10dB " << fmt(factor_10db) << "; gmm " << fmt(gmm[0]) << "/"
           << fmt(gmm[1]) << "/" << fmt(gmm[2]) << " vs sample-cov " << fmt(scov[0]) << "/"
           << fmt(scov[1]) << "/" << fmt(scov[2]);
    o.detail = detail.str();
    return o;
}

// --- criterion 5: mixture-size sweep improves the MSE --------------------

Outcome criterion_fig4_structure() {
    ExperimentConfig cfg;
    cfg.model.antennas = 16;
    cfg.model.clusters = 3;
    cfg.model.retain_covariances = false;
    cfg.train_samples = 20000;
    cfg.test_samples = 2000;
    cfg.estimators = {"gmm"};
    cfg.k_grid = {1, 4, 16};
    cfg.snr_grid_db = {0, 10};
    cfg.em.max_iterations = 200;
    cfg.em.rel_tolerance = 1e-5;
    cfg.seed = 505;
    cfg.threads = 0;

    const auto result = run_k_sweep(cfg);
    Outcome o;
    std::ostringstream detail;
    for (std::size_t si = 0; si < 2; ++si) {
        const auto &curve = result.mse[si].second;
        detail << (si ? "; " : "") << fmt(cfg.snr_grid_db[si]) << "dB:";
        for (std::size_t ki = 0; ki < curve.size(); ++ki) {
            detail << " " << fmt(curve[ki]);
            if (ki > 0 && curve[ki] > curve[ki - 1] * 1.03)
                o.pass = false;
        }
    }
    o.detail = detail.str();
    return o;
}

// --- criterion 6: EM log-likelihood is non-decreasing --------------------

Outcome criterion_em_monotone() {
    Outcome o;
    int violations = 0;
    for (int run = 0; run < 50; ++run) {
        Rng rng(derive_seed(606, {static_cast<std::uint64_t>(run)}));
        const int n = 2 + static_cast<int>(rng.uniform_int(7));   // N <= 8
        const int k_true = 1 + static_cast<int>(rng.uniform_int(3));
        const int k_fit = 1 + static_cast<int>(rng.uniform_int(4)); // K <= 4

        GmmModel truth;
        for (int c = 0; c < k_true; ++c) {
            truth.weights.push_back(1.0);
            truth.means.push_back(3.0 * test::random_vector(n, rng));
            truth.covariances.emplace_back(test::random_psd(n, rng, 0.5));
        }
        for (auto &w : truth.weights)
            w /= k_true;

        ChannelDataset ds;
        ds.n_antennas = n;
        for (auto &h : sample_gmm(truth, rng, 400))
            ds.samples.push_back({std::move(h), std::nullopt});

        EmConfig cfg;
        cfg.seed = derive_seed(707, {static_cast<std::uint64_t>(run)});
        cfg.max_iterations = 80;
        const auto fit = fit_em(ds, k_fit, cfg, 1);
        for (std::size_t i = 1; i < fit.log_likelihood_trace.size(); ++i) {
            const double prev = fit.log_likelihood_trace[i - 1];
            if (fit.log_likelihood_trace[i] < prev - 1e-9 * std::abs(prev))
                ++violations;
        }
    }
    o.pass = violations == 0;
    o.detail = std::to_string(violations) + " slack violations over 50 fits";
    return o;
}

// --- criterion 7: numerics suite ------------------------------------------

Outcome criterion_numerics() {
    Outcome o;
    std::ostringstream detail;
    Rng rng(808);

    // Cholesky reconstruction and PSD solve residual
    {
        const Eigen::MatrixXcd a = test::random_psd(8, rng, 0.3);
        const auto f = hermitian_cholesky(HermitianMatrix(a));
        const double rec = (f.lower * f.lower.adjoint() - a).norm() / a.norm();
        if (rec > 1e-9)
            o.pass = false;
        const Eigen::VectorXcd b = test::random_vector(8, rng);
        const Eigen::VectorXcd x = solve_psd(f, b);
        const double res = (a * x - b).norm() / b.norm();
        if (res > 1e-9)
            o.pass = false;
        detail << "chol " << fmt(rec) << ", solve " << fmt(res);
    }

    // log density vs the dense-elimination oracle
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const Eigen::MatrixXcd cov = test::random_psd(3, rng, 0.25);
            const Eigen::VectorXcd mean = test::random_vector(3, rng);
            const Eigen::VectorXcd x = test::random_vector(3, rng);
            worst = std::max(worst, std::abs(log_gauss_density(x, mean, HermitianMatrix(cov)) -
                                             test::dense_log_gauss_density(x, mean, cov)));
        }
        if (worst > 1e-9)
            o.pass = false;
        detail << ", density " << fmt(worst);
    }

    // responsibility normalization
    {
        GmmModel g;
        g.weights = {0.2, 0.5, 0.3};
        for (int c = 0; c < 3; ++c) {
            g.means.push_back(test::random_vector(4, rng));
            g.covariances.emplace_back(test::random_psd(4, rng, 0.4));
        }
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto r = responsibilities(g, test::random_vector(4, rng),
                                            HermitianMatrix::identity(4));
            worst = std::max(worst, std::abs(r.sum() - 1.0));
            if (r.minCoeff() < 0.0)
                o.pass = false;
        }
        if (worst > 1e-12)
            o.pass = false;
        detail << ", resp " << fmt(worst);
    }

    // covariance Toeplitz structure and unit diagonal
    {
        const auto params = draw_cluster_params(3, kDefaultAngleSpread, rng);
        const int n = 16;
        const auto cov = cluster_covariance(params, n, default_quadrature_points(n));
        double toeplitz_dev = 0.0, diag_dev = 0.0;
        for (int d = 0; d < n; ++d)
            for (int i = 0; i + d < n; ++i) {
                toeplitz_dev = std::max(toeplitz_dev,
                                        std::abs(cov.mat()(i, i + d) - cov.mat()(0, d)));
                toeplitz_dev = std::max(toeplitz_dev,
                                        std::abs(cov.mat()(i + d, i) - cov.mat()(d, 0)));
            }
        for (int i = 0; i < n; ++i)
            diag_dev = std::max(diag_dev, std::abs(cov.mat()(i, i).real() - 1.0));
        if (toeplitz_dev > 1e-10 || diag_dev > 1e-6)
            o.pass = false;
        detail << ", toeplitz " << fmt(toeplitz_dev) << ", diag " << fmt(diag_dev);
    }

    // file roundtrips are bitwise
    {
        ModelConfig mc;
        mc.antennas = 6;
        mc.clusters = 2;
        mc.seed = 909;
        const auto ds = generate_dataset(mc, 64, 1);
        const auto ds_path = fs::temp_directory_path() / "gmmce_accept_ds.chds";
        write_dataset(ds, ds_path);
        const auto ds_back = read_dataset(ds_path);
        bool same = ds_back.size() == ds.size();
        for (std::size_t m = 0; same && m < ds.size(); ++m)
            same = (ds.samples[m].channel - ds_back.samples[m].channel).norm() == 0.0 &&
                   (ds.samples[m].covariance->mat() - ds_back.samples[m].covariance->mat())
                           .norm() == 0.0;
        fs::remove(ds_path);

        EmConfig em;
        em.seed = 11;
        const auto fit = fit_em(ds, 2, em, 1);
        const auto model_path = fs::temp_directory_path() / "gmmce_accept_model.cgmm";
        save_model(fit.model, model_path);
        const auto back = load_model(model_path);
        same = same && back.weights == fit.model.weights;
        for (int c = 0; same && c < 2; ++c)
            same = (back.means[static_cast<std::size_t>(c)] -
                    fit.model.means[static_cast<std::size_t>(c)])
                           .norm() == 0.0 &&
                   (back.covariances[static_cast<std::size_t>(c)].mat() -
                    fit.model.covariances[static_cast<std::size_t>(c)].mat())
                           .norm() == 0.0;
        fs::remove(model_path);
        if (!same)
            o.pass = false;
        detail << ", roundtrips " << (same ? "bitwise" : "MISMATCH");
    }

    o.detail = detail.str();
    return o;
}

// --- criterion 8: byte-identical CSV for any thread count ----------------

Outcome criterion_determinism() {
    ExperimentConfig cfg;
    cfg.model.antennas = 8;
    cfg.model.clusters = 2;
    cfg.train_samples = 4000;
    cfg.test_samples = 800;
    cfg.estimators = {"ls", "sample-cov", "genie-lmmse", "gmm"};
    cfg.gmm_components = 4;
    cfg.snr_grid_db = {0, 10};
    cfg.em.max_iterations = 60;
    cfg.em.rel_tolerance = 1e-5;
    cfg.seed = 1001;

    const auto p1 = fs::temp_directory_path() / "gmmce_det1.csv";
    const auto p2 = fs::temp_directory_path() / "gmmce_det2.csv";
    cfg.threads = 1;
    emit_csv(run_snr_sweep(cfg), p1);
    cfg.threads = 4;
    emit_csv(run_snr_sweep(cfg), p2);
    const bool snr_same = read_file(p1) == read_file(p2);

    ExperimentConfig kcfg = cfg;
    kcfg.estimators = {"gmm", "sample-cov"};
    kcfg.k_grid = {1, 4};
    kcfg.snr_grid_db = {10};
    kcfg.threads = 2;
    emit_csv(run_k_sweep(kcfg), p1);
    kcfg.threads = 1;
    emit_csv(run_k_sweep(kcfg), p2);
    const bool k_same = read_file(p1) == read_file(p2);
    fs::remove(p1);
    fs::remove(p2);

    Outcome o;
    o.pass = snr_same && k_same;
    o.detail = std::string("snr sweep ") + (snr_same ? "identical" : "DIFFERS") +
               ", k sweep " + (k_same ? "identical" : "DIFFERS");
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"C1 LS anchor: normalized MSE = 1/SNR within 5%", criterion_ls_anchor},
        {"C2 K=1 GMM vs sample-covariance LMMSE within 1%", criterion_k1_equivalence},
        {"C3 closed form vs numeric posterior mean within 1e-6", criterion_integration_oracle},
        {"C4 single-cluster sweep structure (genie factor 1.3)", criterion_fig1_structure},
        {"C5 K sweep non-increasing within 3% per step", criterion_fig4_structure},
        {"C6 EM log-likelihood non-decreasing (50 fits)", criterion_em_monotone},
        {"C7 numerics suite at module tolerances", criterion_numerics},
        {"C8 byte-identical CSV across thread counts", criterion_determinism},
    };

    int failures = 0;
    for (const auto &criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception &e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%s; %.1fs)\n", outcome.pass ? "PASS" : "FAIL", criterion.name,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass)
            ++failures;
    }
    if (failures > 0)
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
