#include "siderand/conditioning.hpp"

#include <algorithm>
#include <stdexcept>

#include <openssl/crypto.h>
#include <openssl/sha.h>

#include "siderand/error.hpp"

namespace siderand {

namespace {

void put_u64be(std::vector<std::uint8_t>& out, std::uint64_t value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t get_u64be(std::span<const std::uint8_t> in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < 8; ++i) value = (value << 8) | in[i];
  return value;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Seed256::~Seed256() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

std::optional<Seed256> Seed256::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) return std::nullopt;
  std::array<std::uint8_t, kSize> bytes{};
  for (std::size_t i = 0; i < kSize; ++i) {
    const int hi = hex_digit(hex[2 * i]);
    const int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  Seed256 seed(bytes);
  OPENSSL_cleanse(bytes.data(), bytes.size());
  return seed;
}

std::string Seed256::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * kSize);
  for (const std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::vector<std::uint8_t> serialize_series(std::span<const std::uint64_t> durations) {
  if (durations.empty()) throw EmptySeries();
  std::vector<std::uint8_t> out;
  out.reserve(kSeriesHeaderSize + 8 * durations.size());
  out.insert(out.end(), kSeriesTag.begin(), kSeriesTag.end());
  out.push_back(0x00);
  put_u64be(out, durations.size());
  for (const std::uint64_t d : durations) put_u64be(out, d);
  return out;
}

std::vector<std::uint8_t> serialize_series(const TimingSeries& series) {
  return serialize_series(series.durations());
}

std::vector<std::uint64_t> parse_serialized_series(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSeriesHeaderSize ||
      !std::equal(kSeriesTag.begin(), kSeriesTag.end(), bytes.begin()) ||
      bytes[kSeriesTag.size()] != 0x00) {
    throw std::invalid_argument("missing series header");
  }
  const std::uint64_t count = get_u64be(bytes.subspan(kSeriesTag.size() + 1, 8));
  const auto body = bytes.subspan(kSeriesHeaderSize);
  if (count == 0 || body.size() % 8 != 0 || body.size() / 8 != count) {
    throw std::invalid_argument("series length does not match its header");
  }
  std::vector<std::uint64_t> durations;
  durations.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    durations.push_back(get_u64be(body.subspan(8 * i, 8)));
  }
  return durations;
}

Seed256 condition(std::span<const std::uint64_t> durations) {
  std::vector<std::uint8_t> encoded = serialize_series(durations);
  std::array<std::uint8_t, Seed256::kSize> digest{};
  SHA256(encoded.data(), encoded.size(), digest.data());
  OPENSSL_cleanse(encoded.data(), encoded.size());
  Seed256 seed(digest);
  OPENSSL_cleanse(digest.data(), digest.size());
  return seed;
}

Seed256 condition(const TimingSeries& series) {
  return condition(series.durations());
}

}  // namespace siderand
