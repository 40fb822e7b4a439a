#include "afrrcast/dataset/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <httplib.h>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/sha256.hpp"

namespace afrrcast {

namespace {

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl u;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("malformed URL: " + url);
  u.scheme = url.substr(0, scheme_end);
  if (u.scheme != "http" && u.scheme != "https")
    throw UsageError("unsupported URL scheme '" + u.scheme + "'");
  std::string rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  u.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.find(':');
  if (colon != std::string::npos) {
    u.host = authority.substr(0, colon);
    u.port = std::stoi(authority.substr(colon + 1));
  } else {
    u.host = authority;
    u.port = u.scheme == "https" ? 443 : 80;
  }
  if (u.host.empty()) throw UsageError("malformed URL: " + url);
  return u;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& dest_dir,
                                    const std::string& sha256_hex) {
  if (sha256_hex.size() != 64)
    throw UsageError("checksum must be a 64-character SHA-256 hex digest");
  const ParsedUrl u = parse_url(url);

  std::string filename = u.path.substr(u.path.find_last_of('/') + 1);
  if (filename.empty()) filename = "download";
  std::filesystem::create_directories(dest_dir);
  const std::filesystem::path dest = dest_dir / filename;
  const std::filesystem::path partial = dest_dir / (filename + ".partial");

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (u.scheme == "https")
    throw NetworkError("this build has no TLS support; provide an http URL or a local file");
#endif

  httplib::Client client(u.scheme + "://" + u.host + ":" + std::to_string(u.port));
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(120);

  std::ofstream out(partial, std::ios::binary);
  if (!out) throw DataError("cannot write to " + partial.string());
  Sha256 hash;
  auto result = client.Get(u.path, [&](const char* data, std::size_t len) {
    out.write(data, static_cast<std::streamsize>(len));
    hash.update(data, len);
    return static_cast<bool>(out);
  });
  out.close();

  if (!result || result.error() != httplib::Error::Success) {
    std::filesystem::remove(partial);
    throw NetworkError("failed to reach " + u.host + ": " +
                       httplib::to_string(result ? result.error() : httplib::Error::Connection));
  }
  if (result->status != 200) {
    std::filesystem::remove(partial);
    throw NetworkError("HTTP " + std::to_string(result->status) + " fetching " + url);
  }

  const std::string digest = hash.hex_digest();
  if (digest != lower(sha256_hex)) {
    std::filesystem::remove(partial);
    throw DataError("checksum mismatch for " + filename + ": expected " + lower(sha256_hex) +
                    ", got " + digest);
  }
  std::filesystem::rename(partial, dest);
  return dest;
}

}  // namespace afrrcast
