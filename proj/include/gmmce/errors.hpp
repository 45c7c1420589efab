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

#ifndef GMMCE_ERRORS_HPP
#define GMMCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gmmce {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A matrix that should be positive (semi-)definite has a negative pivot.
class NotPositiveDefinite : public Error {
  public:
    using Error::Error;
};

// Operands have incompatible dimensions.
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

// Paired containers differ in length.
class LengthMismatch : public Error {
  public:
    using Error::Error;
};

// Underlying file operation failed (open/read/write).
class IoError : public Error {
  public:
    using Error::Error;
};

// File exists but its content is not a valid dataset/model (bad magic,
// version, or truncated payload).
class CorruptFile : public Error {
  public:
    using Error::Error;
};

// Text input could not be parsed; message names the offending line.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Dataset carries no usable signal (e.g. all samples are zero).
class DegenerateDataset : public Error {
  public:
    using Error::Error;
};

// Dataset is empty where at least one sample is required.
class EmptyDataset : public Error {
  public:
    using Error::Error;
};

// A mixture component collapsed during EM and recovery failed.
class DegenerateComponent : public Error {
  public:
    using Error::Error;
};

// Greedy support selection hit numerically dependent atoms.
class RankDeficientSupport : public Error {
  public:
    using Error::Error;
};

// Experiment configuration is inconsistent or incomplete.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace gmmce

#endif
