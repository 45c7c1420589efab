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
// Endian-fixed (little-endian) stream encoding shared by the dataset and
// model file formats. Byte-level encoding keeps files identical across
// platforms regardless of host endianness.

#ifndef GMMCE_DETAIL_BINARY_IO_HPP
#define GMMCE_DETAIL_BINARY_IO_HPP

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "gmmce/errors.hpp"

namespace gmmce::detail {

inline void write_u8(std::ostream &out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

inline void write_u32(std::ostream &out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 4);
}

inline void write_u64(std::ostream &out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 8);
}

inline void write_f64(std::ostream &out, double v) {
    write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline std::uint8_t read_u8(std::istream &in) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof())
        throw CorruptFile("unexpected end of file");
    return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32(std::istream &in) {
    char b[4];
    if (!in.read(b, 4))
        throw CorruptFile("unexpected end of file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream &in) {
    char b[8];
    if (!in.read(b, 8))
        throw CorruptFile("unexpected end of file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

inline double read_f64(std::istream &in) {
    return std::bit_cast<double>(read_u64(in));
}

} // namespace gmmce::detail

#endif
