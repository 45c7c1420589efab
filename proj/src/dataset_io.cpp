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

#include "gmmce/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "gmmce/detail/binary_io.hpp"
#include "gmmce/errors.hpp"

namespace gmmce {

namespace {

constexpr char kMagic[4] = {'C', 'H', 'D', 'S'};

void write_complex(std::ostream &out, const cxd &v) {
    detail::write_f64(out, v.real());
    detail::write_f64(out, v.imag());
}

cxd read_complex(std::istream &in) {
    const double re = detail::read_f64(in);
    const double im = detail::read_f64(in);
    return {re, im};
}

} // namespace

void write_dataset(const ChannelDataset &ds, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());

    const bool with_cov = ds.has_covariances();
    out.write(kMagic, 4);
    detail::write_u32(out, kDatasetFormatVersion);
    detail::write_u32(out, static_cast<std::uint32_t>(ds.n_antennas));
    detail::write_u64(out, static_cast<std::uint64_t>(ds.samples.size()));
    detail::write_u8(out, with_cov ? 1 : 0);

    const int n = ds.n_antennas;
    for (const auto &s : ds.samples) {
        if (s.channel.size() != n)
            throw DimensionMismatch("write_dataset: sample dimension differs from n_antennas");
        for (int i = 0; i < n; ++i)
            write_complex(out, s.channel(i));
        if (with_cov) {
            if (!s.covariance)
                throw DimensionMismatch("write_dataset: covariance missing on some samples");
            const auto &c = s.covariance->mat();
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    write_complex(out, c(i, j));
        }
    }
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

ChannelDataset read_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());

    char magic[4];
    if (!in.read(magic, 4) || std::char_traits<char>::compare(magic, kMagic, 4) != 0)
        throw CorruptFile("bad dataset magic: " + path.string());
    const std::uint32_t version = detail::read_u32(in);
    if (version != kDatasetFormatVersion)
        throw CorruptFile("unsupported dataset version " + std::to_string(version));
    const std::uint32_t n = detail::read_u32(in);
    const std::uint64_t count = detail::read_u64(in);
    const bool with_cov = detail::read_u8(in) != 0;
    if (n == 0)
        throw CorruptFile("dataset header declares zero antennas");

    ChannelDataset ds;
    ds.n_antennas = static_cast<int>(n);
    ds.samples.resize(count);
    for (std::uint64_t m = 0; m < count; ++m) {
        Eigen::VectorXcd h(n);
        for (std::uint32_t i = 0; i < n; ++i)
            h(i) = read_complex(in);
        ds.samples[m].channel = std::move(h);
        if (with_cov) {
            Eigen::MatrixXcd c(n, n);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = i; j < n; ++j) {
                    const cxd v = read_complex(in);
                    c(i, j) = v;
                    c(j, i) = std::conj(v);
                }
            ds.samples[m].covariance = HermitianMatrix(std::move(c));
        }
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw CorruptFile("trailing bytes after last record: " + path.string());

    // The header does not carry the normalized flag; recover it from the
    // stored values themselves.
    ds.normalized = !ds.samples.empty() &&
                    std::abs(ds.mean_squared_norm() / static_cast<double>(ds.n_antennas) - 1.0) <= 1e-9;
    return ds;
}

ChannelDataset import_csv(const std::filesystem::path &path, int n_antennas) {
    if (n_antennas < 1)
        throw std::invalid_argument("import_csv: n_antennas must be >= 1");
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());

    ChannelDataset ds;
    ds.n_antennas = n_antennas;
    std::string line;
    std::size_t line_no = 0;
    const std::size_t n_fields = 2 * static_cast<std::size_t>(n_antennas);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::vector<double> fields;
        fields.reserve(n_fields);
        const char *ptr = line.data();
        const char *end = line.data() + line.size();
        for (;;) {
            while (ptr < end && (*ptr == ' ' || *ptr == '\t'))
                ++ptr;
            double value = 0.0;
            const auto [next, ec] = std::from_chars(ptr, end, value);
            if (ec != std::errc())
                throw ParseError("csv line " + std::to_string(line_no) + ": invalid float");
            fields.push_back(value);
            ptr = next;
            while (ptr < end && (*ptr == ' ' || *ptr == '\t'))
                ++ptr;
            if (ptr == end)
                break;
            if (*ptr != ',')
                throw ParseError("csv line " + std::to_string(line_no) + ": expected comma");
            ++ptr;
        }
        if (fields.size() != n_fields)
            throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_fields) + " fields, got " +
                             std::to_string(fields.size()));

        Eigen::VectorXcd h(n_antennas);
        for (int i = 0; i < n_antennas; ++i)
            h(i) = cxd(fields[2 * static_cast<std::size_t>(i)], fields[2 * static_cast<std::size_t>(i) + 1]);
        ds.samples.push_back({std::move(h), std::nullopt});
    }
    return ds;
}

ChannelDataset normalize_dataset(const ChannelDataset &ds) {
    if (ds.samples.empty())
        throw EmptyDataset("normalize_dataset: dataset has no samples");
    double total = 0.0;
    for (const auto &s : ds.samples)
        total += s.channel.squaredNorm();
    if (total <= 0.0)
        throw DegenerateDataset("normalize_dataset: all samples are zero");

    const double c = std::sqrt(static_cast<double>(ds.n_antennas) *
                               static_cast<double>(ds.samples.size()) / total);
    const double c2 = c * c;
    ChannelDataset out;
    out.n_antennas = ds.n_antennas;
    out.normalized = true;
    out.samples.reserve(ds.samples.size());
    for (const auto &s : ds.samples) {
        ChannelSample copy;
        copy.channel = c * s.channel;
        if (s.covariance)
            copy.covariance = HermitianMatrix(c2 * s.covariance->mat());
        out.samples.push_back(std::move(copy));
    }
    return out;
}

std::pair<ChannelDataset, ChannelDataset> split_dataset(const ChannelDataset &ds,
                                                        double train_fraction, Rng &rng) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split_dataset: train_fraction must be in (0, 1)");

    const std::size_t m = ds.samples.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the explicit rng keeps the permutation deterministic.
    for (std::size_t i = m; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
        std::swap(order[i - 1], order[j]);
    }

    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(m)));
    ChannelDataset train, test;
    train.n_antennas = test.n_antennas = ds.n_antennas;
    train.samples.reserve(n_train);
    test.samples.reserve(m - n_train);
    for (std::size_t i = 0; i < m; ++i) {
        const auto &src = ds.samples[order[i]];
        (i < n_train ? train : test).samples.push_back(src);
    }
    // The population was normalized as a whole; a subset carries the flag
    // only if it happens to satisfy the normalization identity itself.
    for (ChannelDataset *part : {&train, &test})
        part->normalized =
            !part->samples.empty() &&
            std::abs(part->mean_squared_norm() / static_cast<double>(ds.n_antennas) - 1.0) <= 1e-9;
    return {std::move(train), std::move(test)};
}

} // namespace gmmce
