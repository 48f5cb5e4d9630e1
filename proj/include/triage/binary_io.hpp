// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "triage/error.hpp"

// Little-endian primitives shared by the model file formats. Tensors are
// written as rank, then each dimension, then the 64-bit float payload.
namespace triage::binary {

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw DataError("model file truncated");
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_le<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, std::size_t limit = 1u << 28) {
  const auto n = read_le<std::uint64_t>(in);
  if (n > limit) throw DataError("model file: string length out of range");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), static_cast<std::streamsize>(n)))
    throw DataError("model file truncated");
  return s;
}

inline void write_tensor(std::ostream& out,
                         const std::vector<std::uint64_t>& shape,
                         const std::vector<double>& data) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(shape.size()));
  for (auto d : shape) write_le<std::uint64_t>(out, d);
  for (double v : data) write_le<double>(out, v);
}

struct RawTensor {
  std::vector<std::uint64_t> shape;
  std::vector<double> data;
};

inline RawTensor read_tensor(std::istream& in) {
  RawTensor t;
  const auto rank = read_le<std::uint32_t>(in);
  if (rank > 8) throw DataError("model file: tensor rank out of range");
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    t.shape.push_back(read_le<std::uint64_t>(in));
    count *= t.shape.back();
    if (count > (1ull << 32)) throw DataError("model file: tensor too large");
  }
  t.data.resize(count);
  for (auto& v : t.data) v = read_le<double>(in);
  return t;
}

}  // namespace triage::binary
