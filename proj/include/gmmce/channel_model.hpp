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
// 3GPP-style spatial channel sample generator for a uniform linear array
// with half-wavelength spacing. Channels are conditionally Gaussian: random
// per-sample cluster parameters define an angular power density (sum of
// weighted Laplace densities), the covariance follows by quadrature over the
// array manifold, and the sample is drawn from that covariance.

#ifndef GMMCE_CHANNEL_MODEL_HPP
#define GMMCE_CHANNEL_MODEL_HPP

#include <cstdint>

#include "gmmce/dataset.hpp"
#include "gmmce/linalg.hpp"
#include "gmmce/rng.hpp"

namespace gmmce {

// Default per-cluster angle spread: 2 degrees, a typical urban macro value.
inline constexpr double kDefaultAngleSpread = 2.0 * 3.14159265358979323846 / 180.0;

// Default number of quadrature nodes when the configured value is 0.
int default_quadrature_points(int n_antennas);

// Per-sample cluster parameters: center angles, path gains and the common
// Laplace angle spread. Angles live in the 120-degree sector [-pi/3, pi/3];
// gains are nonnegative and sum to one.
struct ClusterParams {
    std::vector<double> angles; // radians
    std::vector<double> gains;  // sum to 1
    double spread = kDefaultAngleSpread;
};

// Throws std::invalid_argument when a ClusterParams invariant is broken.
void validate(const ClusterParams &params);

// Generator settings. quadrature_points = 0 selects max(3600, 16*antennas).
struct ModelConfig {
    int antennas = 16;
    int clusters = 1;
    double spread = kDefaultAngleSpread;
    int quadrature_points = 0;
    std::uint64_t seed = 0;
    bool retain_covariances = true;
};

// ULA steering vector, entry i = exp(j pi i sin(theta)), i = 0..N-1.
Eigen::VectorXcd steering_vector(double theta, int n_antennas);

// Angular power density: gain-weighted Laplace kernels around the cluster
// centers, truncated to [-pi, pi] and renormalized so the trapezoidal
// quadrature integral over the sector equals one on the given grid.
double laplace_power_density(double theta, const ClusterParams &params,
                             int quadrature_points = 3600);

// Covariance of the cluster density by trapezoidal quadrature of
// g(theta) a(theta) a(theta)^H over [-pi, pi]. The result is Hermitian PSD
// Toeplitz with unit diagonal.
HermitianMatrix cluster_covariance(const ClusterParams &params, int n_antennas,
                                   int quadrature_points);

// Draws cluster parameters: angles i.i.d. uniform over the sector, raw gains
// i.i.d. uniform on (0,1] normalized to sum one.
ClusterParams draw_cluster_params(int n_clusters, double spread, Rng &rng);

// Generates n_samples independent (params, channel) pairs and rescales the
// whole dataset so the empirical mean of ||h||^2 equals the antenna count
// exactly; retained covariances are rescaled by the squared factor.
// Deterministic given config.seed, for any thread count.
ChannelDataset generate_dataset(const ModelConfig &config, std::size_t n_samples,
                                int n_threads = 1);

} // namespace gmmce

#endif
