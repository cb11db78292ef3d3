#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "siderand/collector.hpp"

namespace siderand {

/// 256-bit conditioned seed. Wiped on destruction; rendered only through
/// an explicit to_hex() call.
class Seed256 {
 public:
  static constexpr std::size_t kSize = 32;

  Seed256() = default;
  explicit Seed256(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}
  Seed256(const Seed256&) = default;
  Seed256& operator=(const Seed256&) = default;
  ~Seed256();

  /// Parses 64 hex digits (either case). Returns nullopt on malformed input.
  static std::optional<Seed256> from_hex(std::string_view hex);

  std::span<const std::uint8_t, kSize> bytes() const { return bytes_; }

  /// 64 lowercase hex characters.
  std::string to_hex() const;

  friend bool operator==(const Seed256&, const Seed256&) = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

/// Domain tag that opens every serialized series, followed by one 0x00.
inline constexpr std::string_view kSeriesTag = "SIDERAND-v1";
inline constexpr std::size_t kSeriesHeaderSize = kSeriesTag.size() + 1 + 8;

/// tag || 0x00 || u64be(count) || u64be(duration)...
/// Throws EmptySeries for an empty input.
std::vector<std::uint8_t> serialize_series(std::span<const std::uint64_t> durations);
std::vector<std::uint8_t> serialize_series(const TimingSeries& series);

/// Inverse of serialize_series. Throws std::invalid_argument if the layout
/// is malformed.
std::vector<std::uint64_t> parse_serialized_series(std::span<const std::uint8_t> bytes);

/// SHA-256 of the serialized series.
Seed256 condition(std::span<const std::uint64_t> durations);
Seed256 condition(const TimingSeries& series);

}  // namespace siderand
