// Copyright 2026 The Noiseguard Authors.
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

#ifndef NOISEGUARD_SRC_BINARY_IO_HPP_
#define NOISEGUARD_SRC_BINARY_IO_HPP_

// Little-endian encoding helpers shared by the binary artifact formats.

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "noiseguard/error.hpp"

namespace noiseguard::detail {

class LeWriter {
 public:
  explicit LeWriter(std::string* out) : out_(out) {}

  template <typename T>
  void put(T value) {
    using U = std::make_unsigned_t<T>;
    auto bits = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_->push_back(static_cast<char>(bits & 0xff));
      bits = static_cast<U>(bits >> 8);
    }
  }
  void put_f32(float value) { put(std::bit_cast<std::uint32_t>(value)); }
  void put_f64(double value) { put(std::bit_cast<std::uint64_t>(value)); }
  void put_bytes(std::string_view bytes) { out_->append(bytes); }

 private:
  std::string* out_;
};

class LeReader {
 public:
  explicit LeReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    using U = std::make_unsigned_t<T>;
    need(sizeof(T));
    U value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value = static_cast<U>(
          value | (static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i]))
                   << (8 * i)));
    }
    pos_ += sizeof(T);
    return static_cast<T>(value);
  }
  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string_view get_bytes(std::size_t n) {
    need(n);
    auto view = bytes_.substr(pos_, n);
    pos_ += n;
    return view;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw DataError("truncated input at byte " + std::to_string(pos_));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace noiseguard::detail

#endif  // NOISEGUARD_SRC_BINARY_IO_HPP_
