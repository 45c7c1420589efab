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

#include "gmmce/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "gmmce/detail/binary_io.hpp"
#include "gmmce/errors.hpp"
#include "gmmce/parallel.hpp"

namespace gmmce {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr char kModelMagic[4] = {'C', 'G', 'M', 'M'};

// Stream tags for seed derivation.
constexpr std::uint64_t kStreamInit = 0x454d49u;   // per-sample init posteriors
constexpr std::uint64_t kStreamKmeans = 0x4b4d53u; // k-means seeding
constexpr std::uint64_t kStreamReinit = 0x524549u; // collapsed-component reset

constexpr std::size_t kSampleChunk = 1024;

Eigen::MatrixXcd dataset_matrix(const ChannelDataset &ds) {
    const Eigen::Index n = ds.n_antennas;
    Eigen::MatrixXcd x(n, static_cast<Eigen::Index>(ds.samples.size()));
    for (std::size_t m = 0; m < ds.samples.size(); ++m) {
        if (ds.samples[m].channel.size() != n)
            throw DimensionMismatch("fit_em: sample dimension differs from n_antennas");
        x.col(static_cast<Eigen::Index>(m)) = ds.samples[m].channel;
    }
    return x;
}

struct ComponentFactors {
    std::vector<CholeskyFactor> factors;
    std::vector<double> log_weights;
};

ComponentFactors factor_components(const GmmModel &model, const HermitianMatrix *noise) {
    ComponentFactors out;
    const int k = model.n_components();
    out.factors.resize(static_cast<std::size_t>(k));
    out.log_weights.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        out.log_weights[c] = model.weights[c] > 0.0 ? std::log(model.weights[c]) : kNegInf;
        if (model.weights[c] <= 0.0)
            continue; // never evaluated
        if (noise == nullptr) {
            out.factors[c] = hermitian_cholesky(model.covariances[c]);
        } else {
            if (noise->dim() != model.covariances[c].dim())
                throw DimensionMismatch("noise covariance dimension differs from model");
            out.factors[c] =
                hermitian_cholesky(HermitianMatrix(model.covariances[c].mat() + noise->mat()));
        }
    }
    return out;
}

// Per-sample component log-densities for a block of samples:
// row k of the result holds log N(x_m; mu_k, C_k) for the block columns.
Eigen::MatrixXd block_log_densities(const Eigen::MatrixXcd &block, const GmmModel &model,
                                    const ComponentFactors &cf) {
    const Eigen::Index n = block.rows();
    const int k = model.n_components();
    Eigen::MatrixXd logdens(k, block.cols());
    for (int c = 0; c < k; ++c) {
        if (model.weights[c] <= 0.0) {
            logdens.row(c).setConstant(kNegInf);
            continue;
        }
        const CholeskyFactor &f = cf.factors[static_cast<std::size_t>(c)];
        if (f.singular())
            throw NotPositiveDefinite("gmm: singular component covariance");
        Eigen::MatrixXcd centered = block.colwise() - model.means[static_cast<std::size_t>(c)];
        f.lower.triangularView<Eigen::Lower>().solveInPlace(centered);
        const double cnst = -static_cast<double>(n) * std::log(kPi) - f.log_det;
        logdens.row(c) = (-centered.colwise().squaredNorm()).array() + cnst;
    }
    return logdens;
}

// E-step over all samples: fills the responsibility matrix (M x K) and
// returns the total log-likelihood. Chunked over samples; every chunk's
// output lands in preassigned slots, so any thread count gives identical
// results.
double e_step(const Eigen::MatrixXcd &x, const GmmModel &model, Eigen::MatrixXd &resp,
              int n_threads) {
    const std::size_t m = static_cast<std::size_t>(x.cols());
    const int k = model.n_components();
    const ComponentFactors cf = factor_components(model, nullptr);

    const std::size_t n_chunks = (m + kSampleChunk - 1) / kSampleChunk;
    std::vector<double> chunk_ll(n_chunks, 0.0);

    parallel_chunks(m, kSampleChunk, n_threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        const Eigen::Index cols = static_cast<Eigen::Index>(end - begin);
        Eigen::MatrixXd logdens = block_log_densities(
            x.middleCols(static_cast<Eigen::Index>(begin), cols), model, cf);
        double ll = 0.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            double mx = kNegInf;
            for (int c = 0; c < k; ++c) {
                logdens(c, j) += cf.log_weights[static_cast<std::size_t>(c)];
                mx = std::max(mx, logdens(c, j));
            }
            double norm = 0.0;
            for (int c = 0; c < k; ++c)
                norm += std::exp(logdens(c, j) - mx);
            const double log_norm = mx + std::log(norm);
            ll += log_norm;
            const Eigen::Index row = static_cast<Eigen::Index>(begin) + j;
            for (int c = 0; c < k; ++c)
                resp(row, c) = std::exp(logdens(c, j) - log_norm);
        }
        chunk_ll[chunk] = ll;
    });

    double total = 0.0;
    for (double v : chunk_ll)
        total += v;
    return total;
}

// M-step: weights from mean posteriors, means from posterior-weighted sample
// means, covariances from posterior-weighted central outer products with
// scale-invariant diagonal loading. The loading is floored at a small
// multiple of the per-antenna data power so a component concentrated on a
// single sample (zero central scatter) still stays factorable. Parallel over
// components; each component's reductions run sequentially in sample order.
void m_step(const Eigen::MatrixXcd &x, const Eigen::MatrixXd &resp, double ridge_scale,
            double data_power, GmmModel &model, std::vector<double> &effective_counts,
            int n_threads) {
    const Eigen::Index n = x.rows();
    const Eigen::Index m = x.cols();
    const int k = model.n_components();
    effective_counts.assign(static_cast<std::size_t>(k), 0.0);

    parallel_chunks(static_cast<std::size_t>(k), 1, n_threads, [&](std::size_t, std::size_t kb, std::size_t ke) {
        for (std::size_t c = kb; c < ke; ++c) {
            const Eigen::VectorXd r = resp.col(static_cast<Eigen::Index>(c));
            const double count = r.sum();
            effective_counts[c] = count;
            if (count <= 0.0)
                continue; // collapse handled by the caller

            const Eigen::VectorXcd mean = (x * r.cast<cxd>()) / count;
            Eigen::MatrixXcd scatter = Eigen::MatrixXcd::Zero(n, n);
            for (Eigen::Index begin = 0; begin < m; begin += static_cast<Eigen::Index>(kSampleChunk)) {
                const Eigen::Index cols = std::min<Eigen::Index>(static_cast<Eigen::Index>(kSampleChunk), m - begin);
                Eigen::MatrixXcd centered = x.middleCols(begin, cols).colwise() - mean;
                centered = centered * r.segment(begin, cols).cwiseSqrt().cast<cxd>().asDiagonal();
                scatter.noalias() += centered * centered.adjoint();
            }
            scatter /= count;
            HermitianMatrix cov{std::move(scatter)};
            const double ridge = ridge_scale * std::max(cov.trace_real() / static_cast<double>(n),
                                                        1e-6 * data_power);
            Eigen::MatrixXcd loaded = cov.mat();
            loaded.diagonal().array() += ridge;

            model.means[c] = mean;
            model.covariances[c] = HermitianMatrix(std::move(loaded));
        }
    });

    double total = 0.0;
    for (double v : effective_counts)
        total += v;
    for (int c = 0; c < k; ++c)
        model.weights[static_cast<std::size_t>(c)] = effective_counts[static_cast<std::size_t>(c)] / total;
}

// Random soft posteriors: per-sample uniform draws normalized across
// components, one derived stream per sample.
Eigen::MatrixXd random_responsibilities(std::size_t m, int k, std::uint64_t seed) {
    Eigen::MatrixXd resp(static_cast<Eigen::Index>(m), k);
    for (std::size_t row = 0; row < m; ++row) {
        Rng rng(derive_seed(seed, {kStreamInit, row}));
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            const double v = 1.0 - rng.uniform(); // (0, 1]
            resp(static_cast<Eigen::Index>(row), c) = v;
            sum += v;
        }
        resp.row(static_cast<Eigen::Index>(row)) /= sum;
    }
    return resp;
}

// k-means on stacked real/imag coordinates; returns hard assignments as a
// 0/1 responsibility matrix. k-means++ seeding, Lloyd refinement.
Eigen::MatrixXd kmeans_responsibilities(const Eigen::MatrixXcd &x, int k, std::uint64_t seed) {
    const Eigen::Index n = x.rows();
    const Eigen::Index m = x.cols();
    Eigen::MatrixXd pts(2 * n, m);
    pts.topRows(n) = x.real();
    pts.bottomRows(n) = x.imag();

    Rng rng(derive_seed(seed, {kStreamKmeans}));
    Eigen::MatrixXd centers(2 * n, k);
    Eigen::VectorXd dist2 = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::max());

    centers.col(0) = pts.col(static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(m))));
    for (int c = 1; c < k; ++c) {
        for (Eigen::Index j = 0; j < m; ++j)
            dist2(j) = std::min(dist2(j), (pts.col(j) - centers.col(c - 1)).squaredNorm());
        const double total = dist2.sum();
        Eigen::Index pick = m - 1;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (Eigen::Index j = 0; j < m; ++j) {
                target -= dist2(j);
                if (target <= 0.0) {
                    pick = j;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(m)));
        }
        centers.col(c) = pts.col(pick);
    }

    std::vector<int> assign(static_cast<std::size_t>(m), 0);
    for (int iter = 0; iter < 25; ++iter) {
        bool changed = false;
        for (Eigen::Index j = 0; j < m; ++j) {
            int best = 0;
            double best_d = (pts.col(j) - centers.col(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (pts.col(j) - centers.col(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(j)] != best) {
                assign[static_cast<std::size_t>(j)] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0)
            break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(2 * n, k);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index j = 0; j < m; ++j) {
            sums.col(assign[static_cast<std::size_t>(j)]) += pts.col(j);
            counts(assign[static_cast<std::size_t>(j)]) += 1.0;
        }
        for (int c = 0; c < k; ++c) {
            if (counts(c) > 0.0) {
                centers.col(c) = sums.col(c) / counts(c);
            } else {
                // Empty cluster: restart it at the point farthest from its
                // current center (first index on ties).
                Eigen::Index far = 0;
                double far_d = -1.0;
                for (Eigen::Index j = 0; j < m; ++j) {
                    const double d = (pts.col(j) - centers.col(assign[static_cast<std::size_t>(j)])).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = j;
                    }
                }
                centers.col(c) = pts.col(far);
            }
        }
    }

    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(m, k);
    for (Eigen::Index j = 0; j < m; ++j)
        resp(j, assign[static_cast<std::size_t>(j)]) = 1.0;
    return resp;
}

} // namespace

void validate_model(const GmmModel &model) {
    const int k = model.n_components();
    if (k < 1)
        throw std::invalid_argument("GmmModel: needs at least one component");
    if (model.means.size() != static_cast<std::size_t>(k) ||
        model.covariances.size() != static_cast<std::size_t>(k))
        throw DimensionMismatch("GmmModel: weights/means/covariances size mismatch");
    const Eigen::Index n = model.dim();
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
        if (model.weights[static_cast<std::size_t>(c)] < 0.0)
            throw std::invalid_argument("GmmModel: negative weight");
        sum += model.weights[static_cast<std::size_t>(c)];
        if (model.means[static_cast<std::size_t>(c)].size() != n ||
            model.covariances[static_cast<std::size_t>(c)].dim() != n)
            throw DimensionMismatch("GmmModel: component dimension mismatch");
        // PSD check: factorization must succeed under the default ridge.
        (void)hermitian_cholesky(model.covariances[static_cast<std::size_t>(c)],
                                 default_ridge(model.covariances[static_cast<std::size_t>(c)]));
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("GmmModel: weights must sum to 1");
}

FitResult fit_em(const ChannelDataset &ds, int n_components, const EmConfig &cfg, int n_threads) {
    if (n_components < 1)
        throw std::invalid_argument("fit_em: n_components must be >= 1");
    if (ds.samples.size() < static_cast<std::size_t>(n_components))
        throw std::invalid_argument("fit_em: need at least n_components samples");
    if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance < 1.0))
        throw std::invalid_argument("fit_em: rel_tolerance must be in (0, 1)");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("fit_em: max_iterations must be >= 1");

    const Eigen::MatrixXcd x = dataset_matrix(ds);
    const std::size_t m = ds.samples.size();
    const Eigen::Index n = x.rows();
    const int k = n_components;

    GmmModel model;
    model.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
    model.means.assign(static_cast<std::size_t>(k), Eigen::VectorXcd::Zero(n));
    model.covariances.assign(static_cast<std::size_t>(k), HermitianMatrix::identity(n));

    const double data_power = x.squaredNorm() / static_cast<double>(m * static_cast<std::size_t>(n));

    Eigen::MatrixXd resp = (cfg.init == InitStrategy::kRandomResponsibility)
                               ? random_responsibilities(m, k, cfg.seed)
                               : kmeans_responsibilities(x, k, cfg.seed);
    std::vector<double> counts;
    m_step(x, resp, cfg.ridge_scale, data_power, model, counts, n_threads);

    FitResult result;
    const double collapse_threshold = 0.1; // effective count below 1/10 sample
    std::vector<char> reinitialized(static_cast<std::size_t>(k), 0);
    double prev_ll = kNegInf;

    int it = 0;
    for (it = 1; it <= cfg.max_iterations; ++it) {
        const double ll = e_step(x, model, resp, n_threads);
        result.log_likelihood_trace.push_back(ll / static_cast<double>(m));

        if (it > 1 && std::isfinite(prev_ll)) {
            const double denom = std::max(std::abs(prev_ll), 1e-12);
            if ((ll - prev_ll) / denom < cfg.rel_tolerance)
                break;
        }
        prev_ll = ll;

        m_step(x, resp, cfg.ridge_scale, data_power, model, counts, n_threads);

        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] >= collapse_threshold)
                continue;
            if (reinitialized[static_cast<std::size_t>(c)])
                throw DegenerateComponent("fit_em: component " + std::to_string(c) +
                                          " collapsed again after reinitialization");
            reinitialized[static_cast<std::size_t>(c)] = 1;
            Rng rng(derive_seed(cfg.seed, {kStreamReinit, static_cast<std::uint64_t>(c),
                                           static_cast<std::uint64_t>(it)}));
            const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(m));
            // Restart the component on the drawn sample itself: its outer
            // product gives a covariance sharp enough to compete with the
            // specialized surviving components; a broad restart would win no
            // posterior mass and starve again immediately.
            const Eigen::VectorXcd h = x.col(static_cast<Eigen::Index>(pick));
            Eigen::MatrixXcd local = h * h.adjoint();
            const double tr = std::max(h.squaredNorm(), 1e-30);
            local.diagonal().array() +=
                std::max(cfg.ridge_scale, 1e-10) * tr / static_cast<double>(n);
            model.means[static_cast<std::size_t>(c)] = h;
            model.covariances[static_cast<std::size_t>(c)] = HermitianMatrix(std::move(local));
            double wsum = 0.0;
            model.weights[static_cast<std::size_t>(c)] = 1.0 / static_cast<double>(k);
            for (double w : model.weights)
                wsum += w;
            for (double &w : model.weights)
                w /= wsum;
            prev_ll = kNegInf; // the reset invalidates the convergence window
        }
    }

    result.iterations = std::min(it, cfg.max_iterations);
    result.model = std::move(model);
    return result;
}

double log_likelihood(const GmmModel &model, const ChannelDataset &ds) {
    if (model.dim() != ds.n_antennas)
        throw DimensionMismatch("log_likelihood: model/dataset dimension mismatch");
    const Eigen::MatrixXcd x = dataset_matrix(ds);
    const ComponentFactors cf = factor_components(model, nullptr);
    const int k = model.n_components();

    double total = 0.0;
    std::vector<double> terms(static_cast<std::size_t>(k));
    Eigen::MatrixXd logdens = block_log_densities(x, model, cf);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (int c = 0; c < k; ++c)
            terms[static_cast<std::size_t>(c)] =
                cf.log_weights[static_cast<std::size_t>(c)] + logdens(c, j);
        total += log_sum_exp(terms);
    }
    return total;
}

Eigen::VectorXd responsibilities(const GmmModel &model, const Eigen::VectorXcd &y,
                                 const HermitianMatrix &noise) {
    if (model.dim() != y.size() || noise.dim() != y.size())
        throw DimensionMismatch("responsibilities: dimension mismatch");
    const ComponentFactors cf = factor_components(model, &noise);
    const int k = model.n_components();

    std::vector<double> logp(static_cast<std::size_t>(k), kNegInf);
    for (int c = 0; c < k; ++c) {
        if (model.weights[static_cast<std::size_t>(c)] <= 0.0)
            continue;
        logp[static_cast<std::size_t>(c)] =
            cf.log_weights[static_cast<std::size_t>(c)] +
            log_gauss_density(y, model.means[static_cast<std::size_t>(c)],
                              cf.factors[static_cast<std::size_t>(c)]);
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

GmmModel receive_pdf(const GmmModel &model, const HermitianMatrix &noise) {
    if (noise.dim() != model.dim())
        throw DimensionMismatch("receive_pdf: noise dimension mismatch");
    GmmModel out = model;
    for (auto &cov : out.covariances)
        cov = HermitianMatrix(cov.mat() + noise.mat());
    return out;
}

std::vector<Eigen::VectorXcd> sample_gmm(const GmmModel &model, Rng &rng, std::size_t count) {
    const int k = model.n_components();
    const Eigen::Index n = model.dim();
    std::vector<CholeskyFactor> factors(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        if (model.weights[static_cast<std::size_t>(c)] > 0.0)
            factors[static_cast<std::size_t>(c)] =
                hermitian_cholesky(model.covariances[static_cast<std::size_t>(c)],
                                   default_ridge(model.covariances[static_cast<std::size_t>(c)]));

    std::vector<Eigen::VectorXcd> out;
    out.reserve(count);
    Eigen::VectorXcd z(n);
    for (std::size_t s = 0; s < count; ++s) {
        const double u = rng.uniform();
        int pick = k - 1;
        double cum = 0.0;
        for (int c = 0; c < k; ++c) {
            cum += model.weights[static_cast<std::size_t>(c)];
            if (u < cum) {
                pick = c;
                break;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i)
            z(i) = rng.cnormal();
        out.emplace_back(model.means[static_cast<std::size_t>(pick)] +
                         factors[static_cast<std::size_t>(pick)].lower.triangularView<Eigen::Lower>() * z);
    }
    return out;
}

void save_model(const GmmModel &model, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    const int k = model.n_components();
    const Eigen::Index n = model.dim();

    out.write(kModelMagic, 4);
    detail::write_u32(out, kModelFormatVersion);
    detail::write_u32(out, static_cast<std::uint32_t>(k));
    detail::write_u32(out, static_cast<std::uint32_t>(n));
    for (int c = 0; c < k; ++c)
        detail::write_f64(out, model.weights[static_cast<std::size_t>(c)]);
    for (int c = 0; c < k; ++c) {
        const auto &mean = model.means[static_cast<std::size_t>(c)];
        for (Eigen::Index i = 0; i < n; ++i) {
            detail::write_f64(out, mean(i).real());
            detail::write_f64(out, mean(i).imag());
        }
        const auto &cov = model.covariances[static_cast<std::size_t>(c)].mat();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) {
                detail::write_f64(out, cov(i, j).real());
                detail::write_f64(out, cov(i, j).imag());
            }
    }
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

GmmModel load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());

    char magic[4];
    if (!in.read(magic, 4) || std::char_traits<char>::compare(magic, kModelMagic, 4) != 0)
        throw CorruptFile("bad model magic: " + path.string());
    const std::uint32_t version = detail::read_u32(in);
    if (version != kModelFormatVersion)
        throw CorruptFile("unsupported model version " + std::to_string(version));
    const std::uint32_t k = detail::read_u32(in);
    const std::uint32_t n = detail::read_u32(in);
    if (k == 0 || n == 0)
        throw CorruptFile("model header declares zero components or dimension");

    GmmModel model;
    model.weights.resize(k);
    for (std::uint32_t c = 0; c < k; ++c)
        model.weights[c] = detail::read_f64(in);
    model.means.reserve(k);
    model.covariances.reserve(k);
    for (std::uint32_t c = 0; c < k; ++c) {
        Eigen::VectorXcd mean(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const double re = detail::read_f64(in);
            const double im = detail::read_f64(in);
            mean(i) = cxd(re, im);
        }
        model.means.push_back(std::move(mean));
        Eigen::MatrixXcd cov(n, n);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i; j < n; ++j) {
                const double re = detail::read_f64(in);
                const double im = detail::read_f64(in);
                cov(i, j) = cxd(re, im);
                cov(j, i) = std::conj(cov(i, j));
            }
        model.covariances.emplace_back(std::move(cov));
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw CorruptFile("trailing bytes after last component: " + path.string());
    validate_model(model);
    return model;
}

} // namespace gmmce
