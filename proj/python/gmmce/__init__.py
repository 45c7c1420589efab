# SPDX-License-Identifier: Apache-2.0
"""GMM conditional-mean channel estimation toolkit.

Thin Python wrapper over the C++ core: spatial channel generation, complex
GMM fitting via EM, the GMM conditional-mean estimator and classical
baselines, plus SNR / mixture-size sweep experiments.
"""

from ._gmmce import (
    Dataset,
    Error,
    Gmm,
    __version__,
    cluster_covariance,
    dft_dictionary,
    lmmse_estimate,
    normalized_mse,
    omp_genie,
    sample_covariance,
    steering_vector,
    sweep_k,
    sweep_snr,
)

__all__ = [
    "Dataset",
    "Error",
    "Gmm",
    "__version__",
    "cluster_covariance",
    "dft_dictionary",
    "lmmse_estimate",
    "normalized_mse",
    "omp_genie",
    "sample_covariance",
    "steering_vector",
    "sweep_k",
    "sweep_snr",
]
