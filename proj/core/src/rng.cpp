#include "absa/rng.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace absa {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below requires bound >= 1");
  // Reject the tail of the 64-bit range that would bias the modulus.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

namespace {

void append_u64_le(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view campaign,
                          std::span<const std::string> context, std::uint64_t run_index) {
  // Canonical message: versioned tag, then every field terminated by a unit
  // separator so adjacent labels cannot alias each other.
  std::string msg = "absa-seed/1";
  msg.push_back('\x1f');
  append_u64_le(msg, master_seed);
  msg.push_back('\x1f');
  msg.append(campaign);
  msg.push_back('\x1f');
  for (const std::string& label : context) {
    msg.append(label);
    msg.push_back('\x1f');
  }
  append_u64_le(msg, run_index);

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_Digest(msg.data(), msg.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1 ||
      digest_len < 8) {
    throw std::runtime_error("SHA-256 digest failed");
  }

  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed |= static_cast<std::uint64_t>(digest[i]) << (8 * i);
  return seed;
}

}  // namespace absa
