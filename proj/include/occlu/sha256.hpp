#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace occlu {

// Minimal SHA-256 (FIPS 180-4), used for determinism checks and the
// train/dev integrity audit. Verified against the standard test vectors.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  // Hex digest; the object must not be updated afterwards.
  std::string hex_digest();

 private:
  void process_block(const uint8_t* p);
  uint32_t state_[8];
  uint64_t total_ = 0;
  uint8_t buf_[64];
  size_t buf_len_ = 0;
};

std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::string& path);
// Digest over (path-basename, content) pairs in the given order, so a set of
// files can be fingerprinted as one value.
std::string sha256_files_hex(const std::vector<std::string>& paths);

}  // namespace occlu
