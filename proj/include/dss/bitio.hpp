#pragma once

// Little-endian byte IO and MSB-first bit packing for the binary container
// formats.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dss/common.hpp"

namespace dss::bitio {

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
  }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void bytes(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void str(const std::string& s) { bytes(s.data(), s.size()); }

  const std::vector<uint8_t>& data() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<uint8_t>& v)
      : ByteReader(v.data(), v.size()) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    const uint8_t* p = take(2);
    return uint16_t(p[0]) | uint16_t(p[1]) << 8;
  }
  uint32_t u32() {
    const uint8_t* p = take(4);
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
           uint32_t(p[3]) << 24;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::string str(size_t n) {
    const uint8_t* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  const uint8_t* take(size_t n) {
    if (pos_ + n > size_)
      throw FormatError(FormatError::Code::truncated,
                        "truncated input: need " + std::to_string(n) +
                            " bytes at offset " + std::to_string(pos_) +
                            ", have " + std::to_string(size_ - pos_) +
                            " (missing " +
                            std::to_string(pos_ + n - size_) + ")");
    const uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  size_t remaining() const { return size_ - pos_; }
  size_t pos() const { return pos_; }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

// MSB-first bit packer; final byte zero-padded on flush.
class BitWriter {
 public:
  void put(uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) {
      cur_ = uint8_t(cur_ << 1 | ((value >> i) & 1));
      if (++fill_ == 8) {
        buf_.push_back(cur_);
        cur_ = 0;
        fill_ = 0;
      }
    }
  }
  std::vector<uint8_t> finish() {
    if (fill_ > 0) {
      buf_.push_back(uint8_t(cur_ << (8 - fill_)));
      cur_ = 0;
      fill_ = 0;
    }
    return std::move(buf_);
  }

 private:
  std::vector<uint8_t> buf_;
  uint8_t cur_ = 0;
  int fill_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint32_t get(int bits) {
    uint32_t v = 0;
    for (int i = 0; i < bits; ++i) {
      size_t byte = bitpos_ >> 3;
      if (byte >= size_)
        throw FormatError(FormatError::Code::truncated,
                          "truncated payload: bit " + std::to_string(bitpos_) +
                              " past end");
      int shift = 7 - int(bitpos_ & 7);
      v = v << 1 | ((data_[byte] >> shift) & 1);
      ++bitpos_;
    }
    return v;
  }

  // All bits from the cursor to the end of the buffer are zero.
  bool padding_is_zero() const {
    for (size_t b = bitpos_; b < size_ * 8; ++b) {
      if ((data_[b >> 3] >> (7 - (b & 7))) & 1) return false;
    }
    return true;
  }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t bitpos_ = 0;
};

inline std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path,
                       const std::vector<uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size()));
  if (!out) throw Error("write failed: " + path);
}

}  // namespace dss::bitio
