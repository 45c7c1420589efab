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

#ifndef GMMCE_DATASET_HPP
#define GMMCE_DATASET_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "gmmce/linalg.hpp"

namespace gmmce {

// One channel realization, optionally with the covariance it was drawn from
// (retained for genie baselines).
struct ChannelSample {
    Eigen::VectorXcd channel;
    std::optional<HermitianMatrix> covariance;
};

// A set of channel vectors of common dimension. `normalized` marks datasets
// whose empirical mean squared norm equals n_antennas.
struct ChannelDataset {
    int n_antennas = 0;
    std::vector<ChannelSample> samples;
    bool normalized = false;

    std::size_t size() const { return samples.size(); }

    bool has_covariances() const {
        return !samples.empty() && samples.front().covariance.has_value();
    }

    double mean_squared_norm() const {
        if (samples.empty())
            return 0.0;
        double acc = 0.0;
        for (const auto &s : samples)
            acc += s.channel.squaredNorm();
        return acc / static_cast<double>(samples.size());
    }
};

} // namespace gmmce

#endif
