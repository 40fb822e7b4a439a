#pragma once

#include <filesystem>
#include <string>

namespace afrrcast {

/// Downloads `url` into `dest_dir` (filename taken from the URL path) and
/// verifies the SHA-256 checksum. On mismatch the partial file is removed and
/// a DataError raised; transport failures raise NetworkError. Nothing else in
/// the pipeline depends on this; ingestion always reads local files.
std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& dest_dir,
                                    const std::string& sha256_hex);

}  // namespace afrrcast
