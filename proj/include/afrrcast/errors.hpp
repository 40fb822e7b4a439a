#pragma once

#include <stdexcept>
#include <string>

namespace afrrcast {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command line, malformed config, missing mandatory setting. Exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad input data: missing files, schema violations, misaligned series,
/// checksum mismatches. Exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Transport failures while fetching remote data. Exit code 3.
class NetworkError : public Error {
 public:
  using Error::Error;
};

}  // namespace afrrcast
