#include "siderand/generator.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include <openssl/crypto.h>
#include <openssl/evp.h>

namespace siderand {

namespace {

class OpenSslAes256Ctr final : public KeystreamCipher {
 public:
  void keystream(std::span<const std::uint8_t, kKeySize> key, BlockCounter first_block,
                 std::span<std::uint8_t> out) const override {
    if (out.empty()) return;
    std::array<std::uint8_t, kBlockSize> iv{};
    for (std::size_t i = 0; i < kBlockSize; ++i) {
      iv[kBlockSize - 1 - i] = static_cast<std::uint8_t>(first_block >> (8 * i));
    }

    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
        EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
    if (!ctx ||
        EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.data(), iv.data()) != 1) {
      throw std::runtime_error("AES-256-CTR initialisation failed");
    }

    // Encrypting zeros yields the raw keystream.
    std::fill(out.begin(), out.end(), std::uint8_t{0});
    std::size_t done = 0;
    while (done < out.size()) {
      const int chunk = static_cast<int>(std::min<std::size_t>(out.size() - done, 1 << 20));
      int written = 0;
      if (EVP_EncryptUpdate(ctx.get(), out.data() + done, &written, out.data() + done,
                            chunk) != 1 ||
          written != chunk) {
        throw std::runtime_error("AES-256-CTR encryption failed");
      }
      done += static_cast<std::size_t>(chunk);
    }
  }
};

}  // namespace

const KeystreamCipher& aes256_ctr() {
  static const OpenSslAes256Ctr cipher;
  return cipher;
}

StreamState::StreamState(const Seed256& seed, const KeystreamCipher& cipher)
    : cipher_(&cipher) {
  reseed(seed);
}

StreamState::StreamState(StreamState&& other) noexcept
    : cipher_(other.cipher_),
      key_(other.key_),
      counter_(other.counter_),
      bytes_emitted_(other.bytes_emitted_),
      since_rekey_(other.since_rekey_),
      pending_(other.pending_),
      pending_len_(other.pending_len_) {
  other.wipe();
}

StreamState& StreamState::operator=(StreamState&& other) noexcept {
  if (this != &other) {
    wipe();
    cipher_ = other.cipher_;
    key_ = other.key_;
    counter_ = other.counter_;
    bytes_emitted_ = other.bytes_emitted_;
    since_rekey_ = other.since_rekey_;
    pending_ = other.pending_;
    pending_len_ = other.pending_len_;
    other.wipe();
  }
  return *this;
}

StreamState::~StreamState() { wipe(); }

void StreamState::wipe() noexcept {
  OPENSSL_cleanse(key_.data(), key_.size());
  OPENSSL_cleanse(pending_.data(), pending_.size());
  pending_len_ = 0;
}

void StreamState::reseed(const Seed256& seed) {
  wipe();
  std::copy(seed.bytes().begin(), seed.bytes().end(), key_.begin());
  counter_ = 0;
  bytes_emitted_ = 0;
  since_rekey_ = 0;
}

void StreamState::rekey() {
  std::array<std::uint8_t, kKeySize> next{};
  cipher_->keystream(key_, counter_, next);
  counter_ += kKeySize / kBlockSize;
  OPENSSL_cleanse(key_.data(), key_.size());
  key_ = next;
  OPENSSL_cleanse(next.data(), next.size());
  since_rekey_ = 0;
}

void StreamState::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    const std::size_t remaining = out.size() - pos;

    if (pending_len_ > 0) {
      const std::size_t take = std::min(pending_len_, remaining);
      const std::size_t offset = kBlockSize - pending_len_;
      std::copy_n(pending_.begin() + static_cast<std::ptrdiff_t>(offset), take,
                  out.begin() + static_cast<std::ptrdiff_t>(pos));
      OPENSSL_cleanse(pending_.data() + offset, take);
      pending_len_ -= take;
      pos += take;
      since_rekey_ += take;
      bytes_emitted_ += take;
    } else {
      const std::size_t chunk =
          static_cast<std::size_t>(std::min<std::uint64_t>(remaining, kRekeyInterval - since_rekey_));
      const std::size_t whole = chunk - chunk % kBlockSize;
      if (whole > 0) {
        cipher_->keystream(key_, counter_, out.subspan(pos, whole));
        counter_ += whole / kBlockSize;
        pos += whole;
        since_rekey_ += whole;
        bytes_emitted_ += whole;
      }
      const std::size_t tail = chunk - whole;
      if (tail > 0) {
        cipher_->keystream(key_, counter_, pending_);
        counter_ += 1;
        std::copy_n(pending_.begin(), tail, out.begin() + static_cast<std::ptrdiff_t>(pos));
        OPENSSL_cleanse(pending_.data(), tail);
        pending_len_ = kBlockSize - tail;
        pos += tail;
        since_rekey_ += tail;
        bytes_emitted_ += tail;
      }
    }

    if (since_rekey_ == kRekeyInterval) rekey();
  }
}

std::vector<std::uint8_t> StreamState::fill(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  fill(std::span<std::uint8_t>(out));
  return out;
}

StreamState new_stream(const Seed256& seed) { return StreamState(seed); }

}  // namespace siderand
