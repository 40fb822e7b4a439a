#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace afrrcast {

/// Incremental SHA-256 (FIPS 180-2).
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  /// Hex digest, lower case. Finalizes; no further updates allowed.
  std::string hex_digest();

  static std::string of_string(const std::string& text);
  static std::string of_file(const std::filesystem::path& path);

 private:
  void process_block(const std::uint8_t* block);
  std::uint32_t state_[8];
  std::uint8_t buffer_[64];
  std::uint64_t total_len_ = 0;
  std::size_t buffer_len_ = 0;
  bool finalized_ = false;
};

}  // namespace afrrcast
