#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vixify {

using Bytes = std::vector<uint8_t>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);  // throws std::invalid_argument

// Minimal-length big-endian magnitude encoding; empty string encodes zero.
Bytes bigint_to_bytes(const BigInt& value);
BigInt bytes_to_bigint(const Bytes& data);
// Rejects encodings with a leading zero byte (non-minimal).
BigInt bytes_to_bigint_strict(const Bytes& data);

// Parse "a/b" or "a" or a decimal like "1.01" into an exact rational.
Rational parse_rational(const std::string& text);
// Exact inverse-friendly rendering: "num" or "num/den".
std::string rational_to_string(const Rational& value);
// Render as an exact decimal string with `digits` fractional digits
// (round half toward even), using integer arithmetic only.
std::string rational_to_decimal(const Rational& value, int digits);

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v);
  void u32(uint32_t v);
  void u64(uint64_t v);
  void i64(int64_t v);
  void raw(const Bytes& data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void raw(const uint8_t* data, size_t len) { buf_.insert(buf_.end(), data, data + len); }
  // u16 length prefix + payload
  void var_bytes(const Bytes& data);
  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const Bytes& data) : data_(data) {}
  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  int64_t i64();
  Bytes raw(size_t len);
  Bytes var_bytes();
  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(size_t n) const;
  const Bytes& data_;
  size_t pos_ = 0;
};

}  // namespace vixify
