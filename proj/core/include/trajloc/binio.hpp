// core/include/trajloc/binio.hpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trajloc {

// Little-endian binary writer over an in-memory buffer.  All trajloc file
// formats are written through this so the byte layout never depends on host
// endianness or struct padding.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }
  void put_u16(std::uint16_t v);
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f32(float v);
  void put_f64(double v);
  void put_bytes(const void* p, std::size_t n);
  void put_magic(const char magic[4]) { put_bytes(magic, 4); }
  void put_string(const std::string& s);  // u16 length + bytes

  const std::vector<std::uint8_t>& buffer() const { return buf_; }
  std::size_t size() const { return buf_.size(); }

  // Writes the buffer to `path` atomically (temp file + rename).
  void save(const std::string& path) const;

 private:
  std::vector<std::uint8_t> buf_;
};

// Little-endian binary reader.  Throws FormatError carrying the byte offset
// on truncation or a failed expectation.
class ByteReader {
 public:
  explicit ByteReader(std::vector<std::uint8_t> data)
      : buf_(std::move(data)) {}

  // Loads the whole file; throws DataError if unreadable.
  static ByteReader from_file(const std::string& path);

  std::uint8_t get_u8();
  std::uint16_t get_u16();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  float get_f32();
  double get_f64();
  void get_bytes(void* p, std::size_t n);
  std::string get_string();

  // Consumes 4 bytes and checks them against `magic`.
  void expect_magic(const char magic[4], const std::string& what);

  std::uint64_t offset() const { return pos_; }
  bool at_end() const { return pos_ == buf_.size(); }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n);

  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

// FNV-1a over a byte range / file contents; used for artifact manifests.
std::uint64_t content_hash(std::span<const std::uint8_t> bytes);
std::uint64_t file_hash(const std::string& path);

bool file_exists(const std::string& path);

}  // namespace trajloc
