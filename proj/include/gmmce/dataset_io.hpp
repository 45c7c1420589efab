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
// Bit-exact persistence for channel datasets plus the CSV import path for
// externally simulated samples.
//
// Binary dataset format (all integers and floats little-endian):
//   magic "CHDS" | version u32 | n_antennas u32 | n_samples u64 |
//   has_covariances u8 | records...
// Each record holds n_antennas complex values as interleaved (re, im) f64;
// when has_covariances is set it is followed by the row-major upper triangle
// of the sample covariance in the same encoding.

#ifndef GMMCE_DATASET_IO_HPP
#define GMMCE_DATASET_IO_HPP

#include <filesystem>

#include "gmmce/dataset.hpp"
#include "gmmce/rng.hpp"

namespace gmmce {

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

void write_dataset(const ChannelDataset &ds, const std::filesystem::path &path);

ChannelDataset read_dataset(const std::filesystem::path &path);

// One sample per line, 2*n_antennas comma-separated decimal floats
// (re, im alternating), no header. Throws ParseError naming the line.
ChannelDataset import_csv(const std::filesystem::path &path, int n_antennas);

// Rescales every sample by c = sqrt(N*M / sum ||h_m||^2) so the empirical
// mean squared norm equals n_antennas; covariances scale by c^2.
ChannelDataset normalize_dataset(const ChannelDataset &ds);

// Random disjoint partition into (train, test); the union preserves all
// samples and the split is deterministic given the rng state.
std::pair<ChannelDataset, ChannelDataset> split_dataset(const ChannelDataset &ds,
                                                        double train_fraction, Rng &rng);

} // namespace gmmce

#endif
