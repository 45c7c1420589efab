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

#include "gmmce/channel_model.hpp"

#include <cmath>
#include <stdexcept>

#include "gmmce/errors.hpp"
#include "gmmce/parallel.hpp"

namespace gmmce {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSector = kPi / 3.0; // 120-degree sector half-width

// Stream tags for seed derivation (arbitrary fixed constants).
constexpr std::uint64_t kStreamSample = 0x5350u; // per-sample generation

// Trapezoidal rule on q uniform nodes over [-pi, pi]: node i at
// -pi + i * step, endpoint weights halved.
struct TrapezoidGrid {
    double step;
    int points;

    explicit TrapezoidGrid(int quadrature_points) : points(quadrature_points) {
        if (quadrature_points < 2)
            throw std::invalid_argument("quadrature grid needs at least 2 points");
        step = 2.0 * kPi / static_cast<double>(quadrature_points - 1);
    }

    double node(int i) const { return -kPi + step * static_cast<double>(i); }
    double weight(int i) const {
        return (i == 0 || i == points - 1) ? 0.5 * step : step;
    }
};

// Unnormalized density: gain-weighted Laplace kernels.
double raw_density(double theta, const ClusterParams &params) {
    const double inv_2s = 1.0 / (2.0 * params.spread);
    double g = 0.0;
    for (std::size_t p = 0; p < params.angles.size(); ++p)
        g += params.gains[p] * inv_2s * std::exp(-std::abs(theta - params.angles[p]) / params.spread);
    return g;
}

double quadrature_mass(const ClusterParams &params, const TrapezoidGrid &grid) {
    double z = 0.0;
    for (int i = 0; i < grid.points; ++i)
        z += grid.weight(i) * raw_density(grid.node(i), params);
    return z;
}

} // namespace

int default_quadrature_points(int n_antennas) {
    return std::max(3600, 16 * n_antennas);
}

void validate(const ClusterParams &params) {
    if (params.angles.empty() || params.angles.size() != params.gains.size())
        throw std::invalid_argument("ClusterParams: angles/gains must be non-empty and equal-sized");
    if (!(params.spread > 0.0))
        throw std::invalid_argument("ClusterParams: spread must be > 0");
    double sum = 0.0;
    for (double g : params.gains) {
        if (g < 0.0)
            throw std::invalid_argument("ClusterParams: gains must be >= 0");
        sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("ClusterParams: gains must sum to 1");
    for (double a : params.angles)
        if (std::abs(a) > kSector + 1e-12)
            throw std::invalid_argument("ClusterParams: angles must lie in [-pi/3, pi/3]");
}

Eigen::VectorXcd steering_vector(double theta, int n_antennas) {
    if (n_antennas < 1)
        throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
    Eigen::VectorXcd a(n_antennas);
    const double phase = kPi * std::sin(theta);
    for (int i = 0; i < n_antennas; ++i)
        a(i) = std::polar(1.0, phase * static_cast<double>(i));
    return a;
}

double laplace_power_density(double theta, const ClusterParams &params, int quadrature_points) {
    validate(params);
    const TrapezoidGrid grid(quadrature_points);
    return raw_density(theta, params) / quadrature_mass(params, grid);
}

HermitianMatrix cluster_covariance(const ClusterParams &params, int n_antennas,
                                   int quadrature_points) {
    validate(params);
    if (n_antennas < 1)
        throw std::invalid_argument("cluster_covariance: n_antennas must be >= 1");
    if (quadrature_points < 16 * n_antennas)
        throw std::invalid_argument("cluster_covariance: quadrature_points must be >= 16 * n_antennas");

    const TrapezoidGrid grid(quadrature_points);
    const double mass = quadrature_mass(params, grid);

    // The integrand entry (i,l) depends on i-l only, so accumulate the first
    // column t_d = sum_q w_q g_q exp(j pi d sin(theta_q)) and fill the
    // Toeplitz matrix from it. The phase powers are built by running
    // products, one complex multiply per (d, q).
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n_antennas);
    std::vector<cxd> phase(static_cast<std::size_t>(grid.points));
    std::vector<cxd> power(static_cast<std::size_t>(grid.points));
    std::vector<double> coeff(static_cast<std::size_t>(grid.points));
    for (int q = 0; q < grid.points; ++q) {
        const double theta = grid.node(q);
        coeff[q] = grid.weight(q) * raw_density(theta, params) / mass;
        phase[q] = std::polar(1.0, kPi * std::sin(theta));
        power[q] = 1.0;
    }
    for (int d = 0; d < n_antennas; ++d) {
        cxd acc = 0.0;
        for (int q = 0; q < grid.points; ++q) {
            acc += coeff[q] * power[q];
            power[q] *= phase[q];
        }
        t(d) = acc;
    }

    Eigen::MatrixXcd c(n_antennas, n_antennas);
    for (int i = 0; i < n_antennas; ++i)
        for (int l = 0; l < n_antennas; ++l)
            c(i, l) = (i >= l) ? t(i - l) : std::conj(t(l - i));
    return HermitianMatrix(std::move(c));
}

ClusterParams draw_cluster_params(int n_clusters, double spread, Rng &rng) {
    if (n_clusters < 1)
        throw std::invalid_argument("draw_cluster_params: n_clusters must be >= 1");
    ClusterParams params;
    params.spread = spread;
    params.angles.resize(static_cast<std::size_t>(n_clusters));
    params.gains.resize(static_cast<std::size_t>(n_clusters));
    for (int p = 0; p < n_clusters; ++p)
        params.angles[p] = rng.uniform(-kSector, kSector);
    double sum = 0.0;
    for (int p = 0; p < n_clusters; ++p) {
        // Uniform on (0, 1]: flip the [0, 1) draw.
        params.gains[p] = 1.0 - rng.uniform();
        sum += params.gains[p];
    }
    for (int p = 0; p < n_clusters; ++p)
        params.gains[p] /= sum;
    // Exact renormalization of the largest gain absorbs rounding residue.
    double resum = 0.0;
    for (double g : params.gains)
        resum += g;
    std::size_t argmax = 0;
    for (std::size_t p = 1; p < params.gains.size(); ++p)
        if (params.gains[p] > params.gains[argmax])
            argmax = p;
    params.gains[argmax] += 1.0 - resum;
    return params;
}

ChannelDataset generate_dataset(const ModelConfig &config, std::size_t n_samples,
                                int n_threads) {
    if (config.antennas < 1 || config.clusters < 1)
        throw std::invalid_argument("generate_dataset: antennas and clusters must be >= 1");
    if (!(config.spread > 0.0))
        throw std::invalid_argument("generate_dataset: spread must be > 0");
    const int quad = config.quadrature_points > 0 ? config.quadrature_points
                                                  : default_quadrature_points(config.antennas);
    if (quad < 16 * config.antennas)
        throw std::invalid_argument("generate_dataset: quadrature_points must be >= 16 * antennas");

    ChannelDataset ds;
    ds.n_antennas = config.antennas;
    ds.samples.resize(n_samples);

    // Embarrassingly parallel: each sample derives its own random stream
    // from (seed, index), so output is identical for any thread count.
    parallel_chunks(n_samples, 64, n_threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            Rng rng(derive_seed(config.seed, {kStreamSample, m}));
            const ClusterParams delta = draw_cluster_params(config.clusters, config.spread, rng);
            HermitianMatrix cov = cluster_covariance(delta, config.antennas, quad);
            auto draw = sample_gaussian(Eigen::VectorXcd::Zero(config.antennas), cov, rng, 1);
            ds.samples[m].channel = std::move(draw.front());
            if (config.retain_covariances)
                ds.samples[m].covariance = std::move(cov);
        }
    });

    // Global rescale: empirical mean of ||h||^2 becomes exactly n_antennas.
    double total = 0.0;
    for (const auto &s : ds.samples)
        total += s.channel.squaredNorm();
    if (n_samples > 0 && total > 0.0) {
        const double c = std::sqrt(static_cast<double>(config.antennas) *
                                   static_cast<double>(n_samples) / total);
        const double c2 = c * c;
        for (auto &s : ds.samples) {
            s.channel *= c;
            if (s.covariance)
                s.covariance = HermitianMatrix(c2 * s.covariance->mat());
        }
        ds.normalized = true;
    }
    return ds;
}

} // namespace gmmce
