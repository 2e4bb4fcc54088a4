#include "vixify/bytes.hpp"

#include <algorithm>

namespace vixify {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("invalid hex character");
}
}  // namespace

std::string to_hex(const Bytes& data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<uint8_t>((hex_nibble(hex[i]) << 4) | hex_nibble(hex[i + 1])));
  }
  return out;
}

Bytes bigint_to_bytes(const BigInt& value) {
  if (value < 0) throw std::invalid_argument("negative big integer");
  if (value == 0) return {};
  Bytes out;
  BigInt v = value;
  while (v > 0) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    v >>= 8;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

BigInt bytes_to_bigint(const Bytes& data) {
  BigInt v = 0;
  for (uint8_t b : data) {
    v <<= 8;
    v |= b;
  }
  return v;
}

BigInt bytes_to_bigint_strict(const Bytes& data) {
  if (!data.empty() && data[0] == 0) {
    throw std::invalid_argument("non-minimal big integer encoding");
  }
  return bytes_to_bigint(data);
}

namespace {
BigInt parse_digits(const std::string& text, bool allow_sign) {
  size_t start = allow_sign && !text.empty() && text[0] == '-' ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("malformed rational: " + text);
  for (size_t i = start; i < text.size(); i++) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed rational: " + text);
    }
  }
  return BigInt(text);
}
}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_digits(text.substr(0, slash), true);
    BigInt den = parse_digits(text.substr(slash + 1), false);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("malformed decimal");
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); i++) scale *= 10;
    BigInt num = parse_digits(whole, false) * scale + parse_digits(frac, false);
    if (neg) num = -num;
    return Rational(num, scale);
  }
  return Rational(parse_digits(text, true), 1);
}

std::string rational_to_string(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

std::string rational_to_decimal(const Rational& value, int digits) {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < digits; i++) scale *= 10;
  // round half to even on scaled = num*scale/den
  BigInt q = num * scale / den;
  BigInt r2 = (num * scale % den) * 2;
  if (r2 > den || (r2 == den && (q & 1) == 1)) q += 1;
  BigInt whole = q / scale;
  BigInt frac = q % scale;
  std::string out = neg && q != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += "." + std::string(digits - f.size(), '0') + f;
  }
  return out;
}

void ByteWriter::u16(uint16_t v) {
  buf_.push_back(static_cast<uint8_t>(v >> 8));
  buf_.push_back(static_cast<uint8_t>(v));
}

void ByteWriter::u32(uint32_t v) {
  for (int i = 3; i >= 0; i--) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v) {
  for (int i = 7; i >= 0; i--) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::i64(int64_t v) { u64(static_cast<uint64_t>(v)); }

void ByteWriter::var_bytes(const Bytes& data) {
  if (data.size() > 0xffff) throw std::invalid_argument("var_bytes payload too long");
  u16(static_cast<uint16_t>(data.size()));
  raw(data);
}

void ByteReader::need(size_t n) const {
  if (data_.size() - pos_ < n) throw std::out_of_range("byte reader underflow");
}

uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

uint16_t ByteReader::u16() {
  need(2);
  uint16_t v = static_cast<uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
  pos_ += 2;
  return v;
}

uint32_t ByteReader::u32() {
  need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; i++) v = (v << 8) | data_[pos_ + i];
  pos_ += 4;
  return v;
}

uint64_t ByteReader::u64() {
  need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; i++) v = (v << 8) | data_[pos_ + i];
  pos_ += 8;
  return v;
}

int64_t ByteReader::i64() { return static_cast<int64_t>(u64()); }

Bytes ByteReader::raw(size_t len) {
  need(len);
  Bytes out(data_.begin() + pos_, data_.begin() + pos_ + len);
  pos_ += len;
  return out;
}

Bytes ByteReader::var_bytes() {
  uint16_t len = u16();
  return raw(len);
}

}  // namespace vixify
