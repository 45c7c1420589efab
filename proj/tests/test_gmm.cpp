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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gmmce/errors.hpp"
#include "gmmce/gmm.hpp"
#include "test_util.hpp"

using namespace gmmce;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

ChannelDataset dataset_from(const std::vector<Eigen::VectorXcd> &samples) {
    ChannelDataset ds;
    ds.n_antennas = static_cast<int>(samples.front().size());
    for (const auto &s : samples)
        ds.samples.push_back({s, std::nullopt});
    return ds;
}

GmmModel two_component_model(Eigen::Index n, const Eigen::VectorXcd &mu, double w1) {
    GmmModel g;
    g.weights = {w1, 1.0 - w1};
    g.means = {mu, -mu};
    g.covariances = {HermitianMatrix::identity(n), HermitianMatrix::identity(n)};
    return g;
}

} // namespace

TEST_CASE("single-component fit is the closed-form ML estimate") {
    Rng rng(12);
    std::vector<Eigen::VectorXcd> samples;
    for (int m = 0; m < 400; ++m)
        samples.push_back(test::random_vector(3, rng) + Eigen::VectorXcd::Constant(3, cxd(0.7, -0.2)));
    const auto ds = dataset_from(samples);

    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(3);
    for (const auto &s : samples)
        mean += s;
    mean /= static_cast<double>(samples.size());
    Eigen::MatrixXcd scatter = Eigen::MatrixXcd::Zero(3, 3);
    for (const auto &s : samples)
        scatter += (s - mean) * (s - mean).adjoint();
    scatter /= static_cast<double>(samples.size());

    EmConfig cfg;
    cfg.seed = 5;
    const auto fit = fit_em(ds, 1, cfg, 1);
    REQUIRE(fit.model.n_components() == 1);
    CHECK(fit.model.weights[0] == 1.0);
    CHECK((fit.model.means[0] - mean).norm() / mean.norm() < 1e-12);

    const double ridge = cfg.ridge_scale * scatter.trace().real() / 3.0;
    Eigen::MatrixXcd expected = scatter;
    expected.diagonal().array() += ridge;
    CHECK((fit.model.covariances[0].mat() - expected).norm() / expected.norm() < 1e-12);

    // closed form is init- and seed-independent
    EmConfig kmeans_cfg = cfg;
    kmeans_cfg.init = InitStrategy::kKMeansSeeded;
    kmeans_cfg.seed = 999;
    const auto fit2 = fit_em(ds, 1, kmeans_cfg, 1);
    CHECK((fit2.model.means[0] - fit.model.means[0]).norm() < 1e-12);
    CHECK((fit2.model.covariances[0].mat() - fit.model.covariances[0].mat()).norm() < 1e-12);
}

TEST_CASE("EM recovers two well-separated components") {
    const Eigen::Index n = 2;
    Eigen::VectorXcd mu1(n), mu2(n);
    mu1 << cxd(10.0, 0.0), cxd(0.0, 10.0);
    mu2 << cxd(-10.0, 0.0), cxd(0.0, -10.0);
    const double w1 = 0.35;

    Rng rng(321);
    std::vector<Eigen::VectorXcd> samples;
    for (int m = 0; m < 2000; ++m) {
        const bool first = rng.uniform() < w1;
        samples.push_back((first ? mu1 : mu2) + test::random_vector(n, rng));
    }
    const auto ds = dataset_from(samples);

    EmConfig cfg;
    cfg.seed = 77;
    const auto fit = fit_em(ds, 2, cfg, 1);

    // match components to truth by nearest mean
    const int i1 = ((fit.model.means[0] - mu1).norm() < (fit.model.means[1] - mu1).norm()) ? 0 : 1;
    const int i2 = 1 - i1;
    CHECK((fit.model.means[static_cast<std::size_t>(i1)] - mu1).norm() / mu1.norm() < 0.05);
    CHECK((fit.model.means[static_cast<std::size_t>(i2)] - mu2).norm() / mu2.norm() < 0.05);
    CHECK(std::abs(fit.model.weights[static_cast<std::size_t>(i1)] - w1) < 0.05);
    validate_model(fit.model);
}

TEST_CASE("log-likelihood trace is monotone non-decreasing") {
    Rng rng(66);
    GmmModel truth = two_component_model(3, Eigen::VectorXcd::Constant(3, cxd(2.0, 1.0)), 0.5);
    const auto samples = sample_gmm(truth, rng, 600);
    const auto ds = dataset_from(samples);

    EmConfig cfg;
    cfg.seed = 31;
    cfg.max_iterations = 60;
    const auto fit = fit_em(ds, 3, cfg, 1);
    REQUIRE(fit.log_likelihood_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.log_likelihood_trace.size(); ++i) {
        const double prev = fit.log_likelihood_trace[i - 1];
        CHECK(fit.log_likelihood_trace[i] >= prev - 1e-9 * std::abs(prev));
    }
}

TEST_CASE("fit_em validates inputs") {
    Rng rng(1);
    const auto ds = dataset_from({test::random_vector(2, rng), test::random_vector(2, rng)});
    EmConfig cfg;
    CHECK_THROWS_AS(fit_em(ds, 0, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_em(ds, 3, cfg, 1), std::invalid_argument);
    EmConfig bad = cfg;
    bad.rel_tolerance = 1.5;
    CHECK_THROWS_AS(fit_em(ds, 1, bad, 1), std::invalid_argument);
}

TEST_CASE("log-likelihood of a unit Gaussian at the origin is -log pi") {
    GmmModel g;
    g.weights = {1.0};
    g.means = {Eigen::VectorXcd::Zero(1)};
    g.covariances = {HermitianMatrix::identity(1)};
    ChannelDataset ds;
    ds.n_antennas = 1;
    ds.samples.push_back({Eigen::VectorXcd::Zero(1), std::nullopt});
    CHECK(log_likelihood(g, ds) == doctest::Approx(-std::log(kPi)).epsilon(1e-14));
}

TEST_CASE("a duplicated component mixture collapses to the single-component value") {
    Rng rng(14);
    const Eigen::VectorXcd mu = test::random_vector(2, rng);
    const HermitianMatrix cov{test::random_psd(2, rng, 0.3)};

    GmmModel one;
    one.weights = {1.0};
    one.means = {mu};
    one.covariances = {cov};

    GmmModel two;
    two.weights = {0.5, 0.5};
    two.means = {mu, mu};
    two.covariances = {cov, cov};

    ChannelDataset ds;
    ds.n_antennas = 2;
    for (int m = 0; m < 10; ++m)
        ds.samples.push_back({test::random_vector(2, rng), std::nullopt});

    CHECK(log_likelihood(two, ds) == doctest::Approx(log_likelihood(one, ds)).epsilon(1e-12));
}

TEST_CASE("log-sum-exp likelihood equals the naive direct sum at small scale") {
    Rng rng(2718);
    GmmModel g;
    g.weights = {0.2, 0.5, 0.3};
    for (int c = 0; c < 3; ++c) {
        g.means.push_back(test::random_vector(2, rng));
        g.covariances.emplace_back(test::random_psd(2, rng, 0.4));
    }
    ChannelDataset ds;
    ds.n_antennas = 2;
    for (int m = 0; m < 10; ++m)
        ds.samples.push_back({test::random_vector(2, rng), std::nullopt});

    double naive = 0.0;
    for (const auto &s : ds.samples) {
        double p = 0.0;
        for (int c = 0; c < 3; ++c)
            p += g.weights[static_cast<std::size_t>(c)] *
                 std::exp(test::dense_log_gauss_density(s.channel, g.means[static_cast<std::size_t>(c)],
                                                        g.covariances[static_cast<std::size_t>(c)].mat()));
        naive += std::log(p);
    }
    CHECK(log_likelihood(g, ds) == doctest::Approx(naive).epsilon(1e-9));
}

TEST_CASE("responsibilities of a single component are exactly one") {
    GmmModel g;
    g.weights = {1.0};
    g.means = {Eigen::VectorXcd::Zero(2)};
    g.covariances = {HermitianMatrix::identity(2)};
    const auto r = responsibilities(g, Eigen::VectorXcd::Ones(2), HermitianMatrix::identity(2));
    REQUIRE(r.size() == 1);
    CHECK(r(0) == 1.0);
}

TEST_CASE("a far observation assigns its responsibility to the matching mean") {
    const Eigen::Index n = 2;
    const Eigen::VectorXcd mu = Eigen::VectorXcd::Constant(n, cxd(8.0, 0.0));
    const GmmModel g = two_component_model(n, mu, 0.5);
    const auto r = responsibilities(g, mu, HermitianMatrix::identity(n));
    CHECK(r(0) > 0.99);
    CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-weight components receive exactly zero responsibility") {
    const Eigen::Index n = 2;
    GmmModel g = two_component_model(n, Eigen::VectorXcd::Ones(n), 1.0);
    const auto r = responsibilities(g, Eigen::VectorXcd::Ones(n), HermitianMatrix::identity(n));
    CHECK(r(0) == 1.0);
    CHECK(r(1) == 0.0);
}

TEST_CASE("responsibilities are invariant to a common weight rescaling") {
    Rng rng(5);
    const Eigen::Index n = 2;
    GmmModel g;
    g.weights = {0.3, 0.7};
    g.means = {test::random_vector(n, rng), test::random_vector(n, rng)};
    g.covariances = {HermitianMatrix{test::random_psd(n, rng, 0.2)},
                     HermitianMatrix{test::random_psd(n, rng, 0.2)}};
    const Eigen::VectorXcd y = test::random_vector(n, rng);
    const auto r1 = responsibilities(g, y, HermitianMatrix::identity(n));

    GmmModel scaled = g;
    scaled.weights = {0.3 * 5.0, 0.7 * 5.0}; // unnormalized on purpose
    const auto r2 = responsibilities(scaled, y, HermitianMatrix::identity(n));
    CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("receive mixture adds the noise covariance per component") {
    Rng rng(8);
    GmmModel g = two_component_model(3, test::random_vector(3, rng), 0.4);

    const auto same = receive_pdf(g, HermitianMatrix::zero(3));
    for (int c = 0; c < 2; ++c)
        CHECK((same.covariances[static_cast<std::size_t>(c)].mat() -
               g.covariances[static_cast<std::size_t>(c)].mat())
                  .norm() == 0.0);

    const double sigma_sq = 0.37;
    const auto inflated = receive_pdf(g, HermitianMatrix(sigma_sq * Eigen::MatrixXcd::Identity(3, 3)));
    for (int c = 0; c < 2; ++c) {
        const Eigen::MatrixXcd diff = inflated.covariances[static_cast<std::size_t>(c)].mat() -
                                      g.covariances[static_cast<std::size_t>(c)].mat();
        CHECK((diff - sigma_sq * Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-15);
    }
    CHECK(inflated.weights == g.weights);
}

TEST_CASE("monte carlo receive histogram matches the receive density") {
    // N=1, K=2: simulate y = h + n and compare a 2-d histogram of y against
    // the receive mixture on a 10x5 bin grid (50 cells).
    GmmModel g;
    g.weights = {0.4, 0.6};
    Eigen::VectorXcd m1(1), m2(1);
    m1 << cxd(-1.5, 0.0);
    m2 << cxd(1.0, 0.5);
    g.means = {m1, m2};
    g.covariances = {HermitianMatrix(0.3 * Eigen::MatrixXcd::Identity(1, 1)),
                     HermitianMatrix(0.5 * Eigen::MatrixXcd::Identity(1, 1))};
    const double sigma_sq = 0.25;
    const HermitianMatrix noise(sigma_sq * Eigen::MatrixXcd::Identity(1, 1));
    const GmmModel ypdf = receive_pdf(g, noise);

    const std::size_t draws = 100000;
    Rng rng(1234);
    const auto hs = sample_gmm(g, rng, draws);

    const double re_lo = -4.5, re_hi = 4.0, im_lo = -2.0, im_hi = 3.0;
    const int nre = 10, nim = 5;
    Eigen::MatrixXd hist = Eigen::MatrixXd::Zero(nre, nim);
    std::size_t inside = 0;
    for (const auto &h : hs) {
        const cxd y = h(0) + std::sqrt(sigma_sq) * rng.cnormal();
        const int i = static_cast<int>((y.real() - re_lo) / (re_hi - re_lo) * nre);
        const int j = static_cast<int>((y.imag() - im_lo) / (im_hi - im_lo) * nim);
        if (i < 0 || i >= nre || j < 0 || j >= nim)
            continue;
        hist(i, j) += 1.0;
        ++inside;
    }
    REQUIRE(inside > draws * 95 / 100);
    hist /= static_cast<double>(draws);

    // model probability per bin by midpoint sub-quadrature
    const auto f1 = hermitian_cholesky(ypdf.covariances[0]);
    const auto f2 = hermitian_cholesky(ypdf.covariances[1]);
    auto density = [&](const cxd y) {
        Eigen::VectorXcd v(1);
        v << y;
        return ypdf.weights[0] * std::exp(log_gauss_density(v, ypdf.means[0], f1)) +
               ypdf.weights[1] * std::exp(log_gauss_density(v, ypdf.means[1], f2));
    };
    const double dre = (re_hi - re_lo) / nre, dim = (im_hi - im_lo) / nim;
    const int sub = 8;
    double tv = 0.0;
    for (int i = 0; i < nre; ++i)
        for (int j = 0; j < nim; ++j) {
            double p = 0.0;
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b) {
                    const double re = re_lo + (i + (a + 0.5) / sub) * dre;
                    const double im = im_lo + (j + (b + 0.5) / sub) * dim;
                    p += density(cxd(re, im));
                }
            p *= dre * dim / (sub * sub);
            tv += std::abs(p - hist(i, j));
        }
    CHECK(0.5 * tv < 0.05);
}

TEST_CASE("mixture sampling respects the weights") {
    const Eigen::Index n = 1;
    Eigen::VectorXcd mu(1);
    mu << cxd(20.0, 0.0);
    GmmModel g = two_component_model(n, mu, 0.3);

    Rng rng(55);
    const std::size_t draws = 100000;
    std::size_t first = 0;
    for (const auto &s : sample_gmm(g, rng, draws))
        if (s(0).real() > 0.0)
            ++first;
    CHECK(std::abs(static_cast<double>(first) / draws - 0.3) < 0.02);

    // degenerate weights: the zero-weight component is never drawn
    GmmModel sure = two_component_model(n, mu, 1.0);
    Rng rng2(56);
    for (const auto &s : sample_gmm(sure, rng2, 100000))
        CHECK(s(0).real() > 0.0);
}

TEST_CASE("model files roundtrip bitwise and reject corruption") {
    Rng rng(404);
    GmmModel g;
    g.weights = {0.25, 0.75};
    g.means = {test::random_vector(3, rng), test::random_vector(3, rng)};
    g.covariances = {HermitianMatrix{test::random_psd(3, rng, 0.2)},
                     HermitianMatrix{test::random_psd(3, rng, 0.2)}};

    const auto path = fs::temp_directory_path() / "gmmce_model.cgmm";
    save_model(g, path);
    const auto back = load_model(path);
    REQUIRE(back.n_components() == 2);
    CHECK(back.weights == g.weights);
    for (int c = 0; c < 2; ++c) {
        CHECK((back.means[static_cast<std::size_t>(c)] - g.means[static_cast<std::size_t>(c)]).norm() == 0.0);
        CHECK((back.covariances[static_cast<std::size_t>(c)].mat() -
               g.covariances[static_cast<std::size_t>(c)].mat())
                  .norm() == 0.0);
    }

    // identical log-likelihood to the last bit
    ChannelDataset ds;
    ds.n_antennas = 3;
    for (int m = 0; m < 25; ++m)
        ds.samples.push_back({test::random_vector(3, rng), std::nullopt});
    CHECK(log_likelihood(g, ds) == log_likelihood(back, ds));

    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "XXXX" << std::string(16, '\0');
    }
    CHECK_THROWS_AS(load_model(path), CorruptFile);
    fs::remove(path);
}
