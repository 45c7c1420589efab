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

#include "gmmce/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gmmce/errors.hpp"

namespace gmmce {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("HermitianMatrix: input is not square");
    m_ = 0.5 * (m + m.adjoint().eval());
    m_.diagonal() = m_.diagonal().real().cast<cxd>();
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
    return HermitianMatrix(Eigen::MatrixXcd::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
    return HermitianMatrix(Eigen::MatrixXcd::Zero(n, n));
}

bool CholeskyFactor::singular() const {
    for (Eigen::Index i = 0; i < lower.rows(); ++i)
        if (lower(i, i).real() <= 0.0)
            return true;
    return false;
}

double default_ridge(const HermitianMatrix &m) {
    if (m.dim() == 0)
        return 0.0;
    return 1e-6 * m.trace_real() / static_cast<double>(m.dim());
}

CholeskyFactor hermitian_cholesky(const HermitianMatrix &m, double ridge) {
    if (ridge < 0.0)
        throw std::invalid_argument("hermitian_cholesky: ridge must be >= 0");
    const Eigen::Index n = m.dim();
    Eigen::MatrixXcd a = m.mat();
    a.diagonal().array() += ridge;

    // Pivot tolerance relative to the loaded diagonal scale.
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(a(i, i).real()));
    const double zero_tol = (scale == 0.0 ? 0.0 : 1e-14 * scale);
    const double neg_tol = std::max(1e-10 * scale, 1e-300);

    CholeskyFactor factor;
    factor.lower = Eigen::MatrixXcd::Zero(n, n);
    factor.log_det = 0.0;
    auto &L = factor.lower;

    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k)
            pivot -= std::norm(L(j, k));

        if (pivot < -neg_tol)
            throw NotPositiveDefinite("hermitian_cholesky: negative pivot at index " +
                                      std::to_string(j));
        if (pivot <= zero_tol) {
            // PSD but singular: null direction, zero pivot and column.
            factor.log_det = kNegInf;
            continue;
        }

        const double d = std::sqrt(pivot);
        L(j, j) = d;
        factor.log_det += 2.0 * std::log(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            cxd acc = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                acc -= L(i, k) * std::conj(L(j, k));
            L(i, j) = acc / d;
        }
    }
    return factor;
}

Eigen::VectorXcd solve_psd(const CholeskyFactor &factor, const Eigen::VectorXcd &rhs) {
    if (factor.dim() != rhs.size())
        throw DimensionMismatch("solve_psd: factor dim " + std::to_string(factor.dim()) +
                                " vs rhs dim " + std::to_string(rhs.size()));
    if (factor.singular())
        throw NotPositiveDefinite("solve_psd: factor is singular");
    Eigen::VectorXcd x = factor.lower.triangularView<Eigen::Lower>().solve(rhs);
    factor.lower.adjoint().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

void solve_psd_in_place(const CholeskyFactor &factor, Eigen::MatrixXcd &rhs) {
    if (factor.dim() != rhs.rows())
        throw DimensionMismatch("solve_psd: factor dim " + std::to_string(factor.dim()) +
                                " vs rhs rows " + std::to_string(rhs.rows()));
    if (factor.singular())
        throw NotPositiveDefinite("solve_psd: factor is singular");
    factor.lower.triangularView<Eigen::Lower>().solveInPlace(rhs);
    factor.lower.adjoint().triangularView<Eigen::Upper>().solveInPlace(rhs);
}

double log_gauss_density(const Eigen::VectorXcd &x, const Eigen::VectorXcd &mean,
                         const HermitianMatrix &cov, double ridge) {
    return log_gauss_density(x, mean, hermitian_cholesky(cov, ridge));
}

double log_gauss_density(const Eigen::VectorXcd &x, const Eigen::VectorXcd &mean,
                         const CholeskyFactor &factor) {
    const Eigen::Index n = factor.dim();
    if (x.size() != n || mean.size() != n)
        throw DimensionMismatch("log_gauss_density: dimension mismatch");
    if (factor.singular())
        throw NotPositiveDefinite("log_gauss_density: singular covariance");
    Eigen::VectorXcd w = factor.lower.triangularView<Eigen::Lower>().solve(x - mean);
    return -static_cast<double>(n) * std::log(kPi) - factor.log_det - w.squaredNorm();
}

std::vector<Eigen::VectorXcd> sample_gaussian(const Eigen::VectorXcd &mean,
                                              const HermitianMatrix &cov, Rng &rng,
                                              std::size_t count) {
    const Eigen::Index n = mean.size();
    if (cov.dim() != n)
        throw DimensionMismatch("sample_gaussian: mean/cov dimension mismatch");
    // Sampling tolerates near-singular covariances via the default loading;
    // a zero trace keeps the ridge at zero, so a zero covariance still maps
    // every draw to the mean.
    const CholeskyFactor factor = hermitian_cholesky(cov, default_ridge(cov));

    std::vector<Eigen::VectorXcd> out;
    out.reserve(count);
    Eigen::VectorXcd z(n);
    for (std::size_t s = 0; s < count; ++s) {
        for (Eigen::Index i = 0; i < n; ++i)
            z(i) = rng.cnormal();
        out.emplace_back(mean + factor.lower.triangularView<Eigen::Lower>() * z);
    }
    return out;
}

double log_sum_exp(std::span<const double> values) {
    double m = kNegInf;
    for (double v : values)
        m = std::max(m, v);
    if (!std::isfinite(m))
        return m; // all -inf (or empty)
    double acc = 0.0;
    for (double v : values)
        acc += std::exp(v - m);
    return m + std::log(acc);
}

} // namespace gmmce
