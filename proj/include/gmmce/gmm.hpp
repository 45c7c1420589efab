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
// K-component circularly-symmetric complex Gaussian mixtures: EM fitting on
// channel samples and mixture inference (log-likelihood, noise-inflated
// responsibilities, receive-signal mixture). All densities are evaluated in
// the log domain and combined with log-sum-exp.

#ifndef GMMCE_GMM_HPP
#define GMMCE_GMM_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gmmce/dataset.hpp"
#include "gmmce/linalg.hpp"
#include "gmmce/rng.hpp"

namespace gmmce {

inline constexpr std::uint32_t kModelFormatVersion = 1;

enum class InitStrategy {
    kRandomResponsibility, // random soft posteriors, then one M-step
    kKMeansSeeded,         // k-means on stacked real/imag coordinates
};

struct EmConfig {
    int max_iterations = 500;
    double rel_tolerance = 1e-6;
    double ridge_scale = 1e-6; // per M-step diagonal loading, scaled by trace/N
    InitStrategy init = InitStrategy::kRandomResponsibility;
    std::uint64_t seed = 0;
};

// Mixture with full (unstructured) Hermitian covariances.
struct GmmModel {
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> means;
    std::vector<HermitianMatrix> covariances;

    int n_components() const { return static_cast<int>(weights.size()); }
    Eigen::Index dim() const { return means.empty() ? 0 : means.front().size(); }
};

// Throws when a GmmModel invariant is broken: weights nonnegative summing to
// one, consistent dimensions, covariances PSD under the default ridge.
void validate_model(const GmmModel &model);

struct FitResult {
    GmmModel model;
    // Per-sample average log-likelihood, one entry per EM iteration,
    // evaluated on the parameters entering that iteration.
    std::vector<double> log_likelihood_trace;
    int iterations = 0;
};

// Standard EM for complex Gaussians in the log domain. The E-step is
// parallel over samples and the M-step over components; results are
// identical for any thread count. Throws DegenerateComponent when a
// component collapses twice (a single collapse is answered by
// reinitializing the component from a random sample).
FitResult fit_em(const ChannelDataset &ds, int n_components, const EmConfig &cfg,
                 int n_threads = 1);

// Total log-likelihood sum_m log sum_k w_k N(h_m; mu_k, C_k).
double log_likelihood(const GmmModel &model, const ChannelDataset &ds);

// Posterior component probabilities of an observation y = h + n given the
// noise covariance: p(k|y) proportional to w_k N(y; mu_k, C_k + Sigma).
// Nonnegative, sums to one; zero-weight components get exactly zero.
Eigen::VectorXd responsibilities(const GmmModel &model, const Eigen::VectorXcd &y,
                                 const HermitianMatrix &noise);

// Mixture of the receive signal y = h + n: identical weights and means,
// covariances C_k + Sigma.
GmmModel receive_pdf(const GmmModel &model, const HermitianMatrix &noise);

// Ancestral sampling: component index by weight, then a Gaussian draw.
std::vector<Eigen::VectorXcd> sample_gmm(const GmmModel &model, Rng &rng, std::size_t count);

// Binary model persistence, same encoding conventions as the dataset format:
// magic "CGMM" | version u32 | K u32 | N u32 | weights f64[K] |
// per component: mean complex[N], covariance upper triangle.
void save_model(const GmmModel &model, const std::filesystem::path &path);
GmmModel load_model(const std::filesystem::path &path);

} // namespace gmmce

#endif
