#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "siderand/conditioning.hpp"

namespace siderand {

__extension__ typedef unsigned __int128 BlockCounter;

inline constexpr std::size_t kBlockSize = 16;
inline constexpr std::size_t kKeySize = 32;

/// Output bytes between key replacements.
inline constexpr std::uint64_t kRekeyInterval = 64 * 1024;

/// Produces counter-mode keystream: block i of `out` is the encryption of
/// the 128-bit big-endian counter `first_block + i` under `key`.
class KeystreamCipher {
 public:
  virtual ~KeystreamCipher() = default;
  /// `out.size()` is always a multiple of kBlockSize.
  virtual void keystream(std::span<const std::uint8_t, kKeySize> key,
                         BlockCounter first_block,
                         std::span<std::uint8_t> out) const = 0;
};

/// AES-256 in counter mode.
const KeystreamCipher& aes256_ctr();

/// Deterministic stream expanded from a Seed256 with fast key erasure:
/// after every kRekeyInterval output bytes the next 32 keystream bytes
/// become the new key and are never emitted.
///
/// A state is owned by one thread at a time and cannot be copied, since a
/// copy would replay the same (key, counter) pairs.
class StreamState {
 public:
  explicit StreamState(const Seed256& seed, const KeystreamCipher& cipher = aes256_ctr());
  StreamState(const StreamState&) = delete;
  StreamState& operator=(const StreamState&) = delete;
  StreamState(StreamState&& other) noexcept;
  StreamState& operator=(StreamState&& other) noexcept;
  ~StreamState();

  void fill(std::span<std::uint8_t> out);
  std::vector<std::uint8_t> fill(std::size_t n);

  /// Restarts as if freshly constructed from `seed`; the old key is wiped.
  void reseed(const Seed256& seed);

  std::span<const std::uint8_t, kKeySize> current_key() const { return key_; }
  BlockCounter counter() const { return counter_; }
  std::uint64_t bytes_emitted() const { return bytes_emitted_; }

 private:
  void rekey();
  void wipe() noexcept;

  const KeystreamCipher* cipher_;
  std::array<std::uint8_t, kKeySize> key_{};
  BlockCounter counter_ = 0;
  std::uint64_t bytes_emitted_ = 0;
  std::uint64_t since_rekey_ = 0;
  // Unused tail of the last partially consumed keystream block.
  std::array<std::uint8_t, kBlockSize> pending_{};
  std::size_t pending_len_ = 0;
};

StreamState new_stream(const Seed256& seed);

}  // namespace siderand
