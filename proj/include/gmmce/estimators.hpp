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
// Channel estimators operating on noisy observations y = h + n: the GMM
// conditional-mean estimator plus the classical baselines (least squares,
// sample-covariance LMMSE, genie LMMSE, genie-aided OMP).

#ifndef GMMCE_ESTIMATORS_HPP
#define GMMCE_ESTIMATORS_HPP

#include <map>
#include <string>

#include "gmmce/dataset.hpp"
#include "gmmce/gmm.hpp"
#include "gmmce/linalg.hpp"

namespace gmmce {

// Additive noise description: covariance Sigma (sigma^2 * I by default) with
// the SNR convention snr = 1 / sigma^2.
struct NoiseModel {
    double sigma_sq = 1.0;
    HermitianMatrix covariance;

    static NoiseModel isotropic(double sigma_sq, Eigen::Index dim);
    static NoiseModel from_snr_db(double snr_db, Eigen::Index dim);

    double snr() const { return 1.0 / sigma_sq; }
    Eigen::Index dim() const { return covariance.dim(); }
};

// Overcomplete dictionary with unit-norm columns.
struct Dictionary {
    int n_antennas = 0;
    int n_atoms = 0;
    Eigen::MatrixXcd atoms; // N x L
};

// Estimator output: the channel estimate, the estimator label, and optional
// per-call diagnostics (e.g. chosen sparsity, dominant responsibility).
struct Estimate {
    Eigen::VectorXcd channel;
    std::string estimator_name;
    std::map<std::string, double> aux;
};

// GMM conditional-mean estimator
//   h_hat = sum_k p(k|y) (C_k (C_k + Sigma)^{-1} (y - mu_k) + mu_k)
// with responsibilities from the noise-inflated mixture. The per-component
// Cholesky factors of C_k + Sigma are computed once per (model, noise) pair
// and reused across observations.
class GmmCmeEngine {
  public:
    GmmCmeEngine(GmmModel model, NoiseModel noise);

    Estimate estimate(const Eigen::VectorXcd &y) const;
    Eigen::VectorXd responsibilities(const Eigen::VectorXcd &y) const;

    const GmmModel &model() const { return model_; }
    const NoiseModel &noise() const { return noise_; }

  private:
    GmmModel model_;
    NoiseModel noise_;
    std::vector<CholeskyFactor> factors_;   // of C_k + Sigma
    std::vector<double> log_weights_;
    std::vector<double> log_norm_consts_;   // -N log pi - log det(C_k + Sigma)
};

// Single-shot convenience wrapper around GmmCmeEngine.
Estimate gmm_cme_estimate(const GmmModel &model, const NoiseModel &noise,
                          const Eigen::VectorXcd &y);

// Least squares, here the identity map.
Estimate ls_estimate(const Eigen::VectorXcd &y);

// Non-central second moment (1/M) sum_m h_m h_m^H, Hermitian-symmetrized.
HermitianMatrix sample_covariance(const ChannelDataset &ds);

// LMMSE estimate C (C + Sigma)^{-1} y for a fixed channel covariance; used
// with the sample covariance ("sample cov.") or a per-sample generative
// covariance ("genie LMMSE").
Estimate lmmse_estimate(const HermitianMatrix &cov, const NoiseModel &noise,
                        const Eigen::VectorXcd &y);

// Cached-factor variant for batch evaluation against one fixed covariance.
class LmmseEngine {
  public:
    LmmseEngine(HermitianMatrix cov, NoiseModel noise);
    Estimate estimate(const Eigen::VectorXcd &y) const;

  private:
    HermitianMatrix cov_;
    CholeskyFactor factor_; // of C + Sigma
};

// Oversampled DFT dictionary: L = oversampling * N atoms, column l the unit
// norm steering vector with sin(theta_l) = -1 + 2l/L.
Dictionary dft_dictionary(int n_antennas, int oversampling);

// Genie-aided orthogonal matching pursuit: greedy atom selection by residual
// correlation with least-squares refit per step; returns the recorded iterate
// closest to the true channel, aux["sparsity"] the chosen order.
Estimate omp_genie(const Eigen::VectorXcd &y, const Dictionary &dict,
                   const Eigen::VectorXcd &h_true, int max_sparsity);

} // namespace gmmce

#endif
