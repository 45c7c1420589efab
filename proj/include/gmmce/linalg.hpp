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
// Dense Hermitian linear algebra and circularly-symmetric complex Gaussian
// density evaluation and sampling. All Gaussians in this library are
// circularly symmetric (zero pseudo-covariance); densities are always
// handled in the log domain and combined with log-sum-exp.

#ifndef GMMCE_LINALG_HPP
#define GMMCE_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gmmce/rng.hpp"

namespace gmmce {

using cxd = std::complex<double>;

// Dense Hermitian matrix. Construction symmetrizes the input, (A + A^H)/2,
// so entries (i,j) and conj((j,i)) agree to rounding afterwards.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(Eigen::MatrixXcd m);

    static HermitianMatrix identity(Eigen::Index n);
    static HermitianMatrix zero(Eigen::Index n);

    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXcd &mat() const { return m_; }
    double trace_real() const { return m_.trace().real(); }

  private:
    Eigen::MatrixXcd m_;
};

// Lower-triangular Cholesky factor of a Hermitian PSD matrix, together with
// the log-determinant of the factored (ridge-loaded) matrix. The diagonal of
// `lower` is real and nonnegative; zero pivots mark a singular but valid PSD
// factorization, in which case log_det is -inf.
struct CholeskyFactor {
    Eigen::MatrixXcd lower;
    double log_det = 0.0;

    Eigen::Index dim() const { return lower.rows(); }
    bool singular() const;
};

// Scale-invariant default diagonal loading: 1e-6 * trace/N.
double default_ridge(const HermitianMatrix &m);

// Factors m + ridge*I. Pivots within rounding of zero are clamped to zero
// (PSD input); throws NotPositiveDefinite when a pivot is genuinely negative
// after loading, in which case the caller may retry with a larger ridge.
CholeskyFactor hermitian_cholesky(const HermitianMatrix &m, double ridge = 0.0);

// Solves (L L^H) x = rhs for the factored matrix. Throws DimensionMismatch
// on size disagreement and NotPositiveDefinite when the factor is singular.
Eigen::VectorXcd solve_psd(const CholeskyFactor &factor, const Eigen::VectorXcd &rhs);

// Multi-right-hand-side variant, rhs columns solved in place.
void solve_psd_in_place(const CholeskyFactor &factor, Eigen::MatrixXcd &rhs);

// Log of the circularly-symmetric complex Gaussian density
//   -N log(pi) - log det(cov) - (x-mean)^H cov^{-1} (x-mean).
double log_gauss_density(const Eigen::VectorXcd &x, const Eigen::VectorXcd &mean,
                         const HermitianMatrix &cov, double ridge = 0.0);

// Same density evaluated against a precomputed factor of the covariance.
double log_gauss_density(const Eigen::VectorXcd &x, const Eigen::VectorXcd &mean,
                         const CholeskyFactor &factor);

// Draws `count` vectors mean + L z, z with i.i.d. standard circularly
// symmetric complex Gaussian entries; the covariance is factored under the
// default ridge. Deterministic given the rng state.
std::vector<Eigen::VectorXcd> sample_gaussian(const Eigen::VectorXcd &mean,
                                              const HermitianMatrix &cov, Rng &rng,
                                              std::size_t count);

// log(sum_i exp(v_i)), stable against underflow; -inf for an all -inf input.
double log_sum_exp(std::span<const double> values);

} // namespace gmmce

#endif
