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

#include "gmmce/estimators.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "gmmce/errors.hpp"

namespace gmmce {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

NoiseModel NoiseModel::isotropic(double sigma_sq, Eigen::Index dim) {
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("NoiseModel: sigma_sq must be > 0");
    NoiseModel n;
    n.sigma_sq = sigma_sq;
    n.covariance = HermitianMatrix(sigma_sq * Eigen::MatrixXcd::Identity(dim, dim));
    return n;
}

NoiseModel NoiseModel::from_snr_db(double snr_db, Eigen::Index dim) {
    return isotropic(std::pow(10.0, -snr_db / 10.0), dim);
}

GmmCmeEngine::GmmCmeEngine(GmmModel model, NoiseModel noise)
    : model_(std::move(model)), noise_(std::move(noise)) {
    const Eigen::Index n = model_.dim();
    if (noise_.dim() != n)
        throw DimensionMismatch("GmmCmeEngine: noise dimension differs from model");
    const int k = model_.n_components();
    factors_.resize(static_cast<std::size_t>(k));
    log_weights_.resize(static_cast<std::size_t>(k), kNegInf);
    log_norm_consts_.resize(static_cast<std::size_t>(k), kNegInf);
    for (int c = 0; c < k; ++c) {
        const double w = model_.weights[static_cast<std::size_t>(c)];
        if (w <= 0.0)
            continue;
        log_weights_[static_cast<std::size_t>(c)] = std::log(w);
        factors_[static_cast<std::size_t>(c)] = hermitian_cholesky(
            HermitianMatrix(model_.covariances[static_cast<std::size_t>(c)].mat() + noise_.covariance.mat()));
        if (factors_[static_cast<std::size_t>(c)].singular())
            throw NotPositiveDefinite("GmmCmeEngine: degenerate C_k + Sigma");
        log_norm_consts_[static_cast<std::size_t>(c)] =
            -static_cast<double>(n) * std::log(kPi) - factors_[static_cast<std::size_t>(c)].log_det;
    }
}

Eigen::VectorXd GmmCmeEngine::responsibilities(const Eigen::VectorXcd &y) const {
    const int k = model_.n_components();
    if (y.size() != model_.dim())
        throw DimensionMismatch("GmmCmeEngine: observation dimension mismatch");

    std::vector<double> logp(static_cast<std::size_t>(k), kNegInf);
    for (int c = 0; c < k; ++c) {
        if (model_.weights[static_cast<std::size_t>(c)] <= 0.0)
            continue;
        const auto &f = factors_[static_cast<std::size_t>(c)];
        const Eigen::VectorXcd w =
            f.lower.triangularView<Eigen::Lower>().solve(y - model_.means[static_cast<std::size_t>(c)]);
        logp[static_cast<std::size_t>(c)] = log_weights_[static_cast<std::size_t>(c)] +
                                            log_norm_consts_[static_cast<std::size_t>(c)] -
                                            w.squaredNorm();
    }
    const double norm = log_sum_exp(logp);
    Eigen::VectorXd r(k);
    for (int c = 0; c < k; ++c)
        r(c) = std::isfinite(logp[static_cast<std::size_t>(c)])
                   ? std::exp(logp[static_cast<std::size_t>(c)] - norm)
                   : 0.0;
    r /= r.sum();
    return r;
}

Estimate GmmCmeEngine::estimate(const Eigen::VectorXcd &y) const {
    const Eigen::VectorXd r = responsibilities(y);
    assert(std::abs(r.sum() - 1.0) < 1e-9);
    const int k = model_.n_components();

    Eigen::VectorXcd h_hat = Eigen::VectorXcd::Zero(y.size());
    double dominant = 0.0;
    for (int c = 0; c < k; ++c) {
        const double rc = r(c);
        dominant = std::max(dominant, rc);
        if (rc <= 0.0)
            continue;
        const auto &mu = model_.means[static_cast<std::size_t>(c)];
        Eigen::VectorXcd z = solve_psd(factors_[static_cast<std::size_t>(c)], y - mu);
        h_hat.noalias() += rc * (model_.covariances[static_cast<std::size_t>(c)].mat() * z + mu);
    }
    Estimate e;
    e.channel = std::move(h_hat);
    e.estimator_name = "gmm";
    e.aux["dominant_responsibility"] = dominant;
    return e;
}

Estimate gmm_cme_estimate(const GmmModel &model, const NoiseModel &noise,
                          const Eigen::VectorXcd &y) {
    return GmmCmeEngine(model, noise).estimate(y);
}

Estimate ls_estimate(const Eigen::VectorXcd &y) {
    return Estimate{y, "ls", {}};
}

HermitianMatrix sample_covariance(const ChannelDataset &ds) {
    if (ds.samples.empty())
        throw EmptyDataset("sample_covariance: dataset has no samples");
    const Eigen::Index n = ds.n_antennas;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &s : ds.samples) {
        if (s.channel.size() != n)
            throw DimensionMismatch("sample_covariance: sample dimension mismatch");
        acc.noalias() += s.channel * s.channel.adjoint();
    }
    acc /= static_cast<double>(ds.samples.size());
    return HermitianMatrix(std::move(acc));
}

Estimate lmmse_estimate(const HermitianMatrix &cov, const NoiseModel &noise,
                        const Eigen::VectorXcd &y) {
    return LmmseEngine(cov, noise).estimate(y);
}

LmmseEngine::LmmseEngine(HermitianMatrix cov, NoiseModel noise) : cov_(std::move(cov)) {
    if (noise.dim() != cov_.dim())
        throw DimensionMismatch("LmmseEngine: covariance/noise dimension mismatch");
    factor_ = hermitian_cholesky(HermitianMatrix(cov_.mat() + noise.covariance.mat()));
    if (factor_.singular())
        throw NotPositiveDefinite("LmmseEngine: degenerate C + Sigma");
}

Estimate LmmseEngine::estimate(const Eigen::VectorXcd &y) const {
    if (y.size() != cov_.dim())
        throw DimensionMismatch("LmmseEngine: observation dimension mismatch");
    Eigen::VectorXcd z = solve_psd(factor_, y);
    Estimate e;
    e.channel = cov_.mat() * z;
    e.estimator_name = "lmmse";
    return e;
}

Dictionary dft_dictionary(int n_antennas, int oversampling) {
    if (n_antennas < 1 || oversampling < 1)
        throw std::invalid_argument("dft_dictionary: n_antennas and oversampling must be >= 1");
    const int l_atoms = oversampling * n_antennas;
    Dictionary d;
    d.n_antennas = n_antennas;
    d.n_atoms = l_atoms;
    d.atoms.resize(n_antennas, l_atoms);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (int l = 0; l < l_atoms; ++l) {
        const double sin_theta = -1.0 + 2.0 * static_cast<double>(l) / static_cast<double>(l_atoms);
        for (int i = 0; i < n_antennas; ++i)
            d.atoms(i, l) = std::polar(scale, kPi * sin_theta * static_cast<double>(i));
    }
    return d;
}

Estimate omp_genie(const Eigen::VectorXcd &y, const Dictionary &dict,
                   const Eigen::VectorXcd &h_true, int max_sparsity) {
    const Eigen::Index n = dict.atoms.rows();
    const Eigen::Index l_atoms = dict.atoms.cols();
    if (y.size() != n || h_true.size() != n)
        throw DimensionMismatch("omp_genie: observation/truth dimension mismatch");
    if (max_sparsity < 1 || max_sparsity > std::min<Eigen::Index>(n, l_atoms))
        throw std::invalid_argument("omp_genie: max_sparsity must be in [1, min(N, L)]");

    std::vector<Eigen::Index> support;
    std::vector<char> used(static_cast<std::size_t>(l_atoms), 0);
    Eigen::VectorXcd residual = y;
    Eigen::MatrixXcd selected(n, max_sparsity);

    Eigen::VectorXcd best_estimate;
    double best_error = std::numeric_limits<double>::infinity();
    int best_sparsity = 0;
    // Errors below this floor are exact recoveries up to rounding; among
    // them the smallest sparsity wins the argmin.
    const double exact_floor = 1e-12 * h_true.norm();

    for (int s = 1; s <= max_sparsity; ++s) {
        // Greedy pick: atom with maximal |<d_l, residual>| not yet selected.
        Eigen::Index pick = -1;
        double best_corr = -1.0;
        for (Eigen::Index l = 0; l < l_atoms; ++l) {
            if (used[static_cast<std::size_t>(l)])
                continue;
            const double corr = std::abs(dict.atoms.col(l).dot(residual));
            if (corr > best_corr) {
                best_corr = corr;
                pick = l;
            }
        }
        if (pick < 0)
            break;
        used[static_cast<std::size_t>(pick)] = 1;
        support.push_back(pick);
        selected.col(s - 1) = dict.atoms.col(pick);

        // Least-squares refit over the selected support via the Gram system.
        const auto sub = selected.leftCols(s);
        Eigen::MatrixXcd gram = sub.adjoint() * sub;
        CholeskyFactor gf;
        try {
            gf = hermitian_cholesky(HermitianMatrix(std::move(gram)));
            if (gf.singular())
                throw NotPositiveDefinite("singular Gram");
        } catch (const NotPositiveDefinite &) {
            // Numerically dependent atoms: stop early, keep recorded iterates.
            break;
        }
        Eigen::VectorXcd rhs = sub.adjoint() * y;
        Eigen::VectorXcd coeff = solve_psd(gf, rhs);
        Eigen::VectorXcd h_s = sub * coeff;
        residual = y - h_s;

        const double err = std::max((h_true - h_s).norm(), exact_floor);
        if (err < best_error) {
            best_error = err;
            best_estimate = std::move(h_s);
            best_sparsity = s;
        }
    }

    if (best_sparsity == 0)
        throw RankDeficientSupport("omp_genie: no usable support found");

    Estimate e;
    e.channel = std::move(best_estimate);
    e.estimator_name = "genie-omp";
    e.aux["sparsity"] = static_cast<double>(best_sparsity);
    return e;
}

} // namespace gmmce
