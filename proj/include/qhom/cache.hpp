#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qhom/linalg.hpp"

namespace qhom {

/// A cache file exists but fails validation: unrecognized header,
/// malformed body, checksum mismatch, or a key that contradicts the
/// request.  Callers map this to the integrity exit status.
class integrity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hex SHA-256 digest (FIPS 180-4) of a byte string.
std::string sha256_hex(const std::string& data);

/// One cached single-step matrix with its parameter key.
struct CachedMatrix {
  int64_t q = 0;
  int64_t n = 0;
  int64_t k = 0;
  int64_t p = 0;
  SparseMatModP matrix;
};

/// Canonical file name for the key (q, n, k, p) under dir.
std::string cache_path(const std::string& dir, int64_t q, int64_t n,
                       int64_t k, int64_t p);

/// Text serialization:
///   qhom-matrix v1
///   q n k p rows cols
///   row col value          (one nonzero per line, 0-based, column-major)
///   end <sha256 of all preceding bytes>
std::string serialize_matrix_cache(const CachedMatrix& entry);

/// Writes the serialization to path, creating parent directories.
/// Throws std::runtime_error when the file cannot be written.
void write_matrix_cache(const std::string& path, const CachedMatrix& entry);

/// Parses and fully validates one serialized cache entry.
CachedMatrix parse_matrix_cache(const std::string& text);

/// Reads a cache file.  Throws std::runtime_error when it cannot be
/// opened and integrity_error when its content fails validation.
CachedMatrix read_matrix_cache(const std::string& path);

}  // namespace qhom
