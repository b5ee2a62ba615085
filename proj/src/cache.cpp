#include "qhom/cache.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace qhom {

namespace {

constexpr std::array<uint32_t, 64> kRound = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

uint32_t rotr(uint32_t x, int s) { return (x >> s) | (x << (32 - s)); }

const char kHeader[] = "qhom-matrix v1";

[[noreturn]] void corrupt(const std::string& what) {
  throw integrity_error("matrix cache: " + what);
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                               0xa54ff53a, 0x510e527f, 0x9b05688c,
                               0x1f83d9ab, 0x5be0cd19};
  std::string msg = data;
  uint64_t bits = static_cast<uint64_t>(data.size()) * 8;
  msg.push_back('\x80');
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int s = 56; s >= 0; s -= 8) {
    msg.push_back(static_cast<char>((bits >> s) & 0xff));
  }
  for (size_t off = 0; off < msg.size(); off += 64) {
    uint32_t w[64];
    for (int t = 0; t < 16; ++t) {
      w[t] = 0;
      for (int b = 0; b < 4; ++b) {
        w[t] = (w[t] << 8) |
               static_cast<uint8_t>(msg[off + static_cast<size_t>(4 * t + b)]);
      }
    }
    for (int t = 16; t < 64; ++t) {
      uint32_t s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
      uint32_t s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
      w[t] = w[t - 16] + s0 + w[t - 7] + s1;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
    uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int t = 0; t < 64; ++t) {
      uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = hh + s1 + ch + kRound[static_cast<size_t>(t)] + w[t];
      uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }
  std::string hex;
  for (uint32_t v : h) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    hex += buf;
  }
  return hex;
}

std::string cache_path(const std::string& dir, int64_t q, int64_t n,
                       int64_t k, int64_t p) {
  std::ostringstream os;
  os << "boundary-q" << q << "-n" << n << "-k" << k << "-p" << p << ".qm";
  return (std::filesystem::path(dir) / os.str()).string();
}

std::string serialize_matrix_cache(const CachedMatrix& entry) {
  const SparseMatModP& m = entry.matrix;
  std::ostringstream os;
  os << kHeader << "\n"
     << entry.q << " " << entry.n << " " << entry.k << " " << entry.p << " "
     << m.rows << " " << m.cols << "\n";
  for (int64_t c = 0; c < m.cols; ++c) {
    for (int64_t t = m.col_ptr[static_cast<size_t>(c)];
         t < m.col_ptr[static_cast<size_t>(c + 1)]; ++t) {
      os << m.row_idx[static_cast<size_t>(t)] << " " << c << " "
         << static_cast<int>(m.val[static_cast<size_t>(t)]) << "\n";
    }
  }
  std::string body = os.str();
  return body + "end " + sha256_hex(body) + "\n";
}

void write_matrix_cache(const std::string& path, const CachedMatrix& entry) {
  std::filesystem::path fp(path);
  if (fp.has_parent_path()) {
    std::filesystem::create_directories(fp.parent_path());
  }
  std::ofstream out(fp, std::ios::binary | std::ios::trunc);
  out << serialize_matrix_cache(entry);
  out.flush();
  if (!out) throw std::runtime_error("cannot write cache file " + path);
}

CachedMatrix parse_matrix_cache(const std::string& text) {
  size_t tail = text.size();
  if (tail > 0 && text[tail - 1] == '\n') --tail;
  size_t line_start = text.rfind('\n', tail == 0 ? std::string::npos : tail - 1);
  line_start = (line_start == std::string::npos) ? 0 : line_start + 1;
  std::string last = text.substr(line_start, tail - line_start);
  std::istringstream le(last);
  std::string word, digest, extra;
  if (!(le >> word >> digest) || word != "end" || (le >> extra)) {
    corrupt("missing end line");
  }
  std::string body = text.substr(0, line_start);
  if (sha256_hex(body) != digest) corrupt("checksum mismatch");

  std::istringstream in(body);
  std::string header;
  if (!std::getline(in, header) || header != kHeader) {
    corrupt("unrecognized header");
  }
  CachedMatrix entry;
  int64_t rows = 0, cols = 0;
  std::string keyline;
  if (!std::getline(in, keyline)) corrupt("missing key line");
  {
    std::istringstream ke(keyline);
    if (!(ke >> entry.q >> entry.n >> entry.k >> entry.p >> rows >> cols) ||
        (ke >> extra)) {
      corrupt("malformed key line");
    }
  }
  if (entry.q < 1 || entry.n < 0 || entry.p < 2 || entry.p > 251 ||
      rows < 0 || cols < 0) {
    corrupt("key out of range");
  }
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips;
  std::string line;
  int64_t prev_col = -1, prev_row = -1;
  while (std::getline(in, line)) {
    std::istringstream te(line);
    int64_t r = 0, c = 0, v = 0;
    if (!(te >> r >> c >> v) || (te >> extra)) corrupt("malformed entry line");
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      corrupt("entry outside matrix shape");
    }
    if (v <= 0 || v >= entry.p) corrupt("entry value outside [1, p)");
    if (c < prev_col || (c == prev_col && r <= prev_row)) {
      corrupt("entries out of column-major order");
    }
    prev_col = c;
    prev_row = r;
    trips.emplace_back(r, c, v);
  }
  entry.matrix = SparseMatModP::from_triplets(rows, cols, entry.p, trips);
  return entry;
}

CachedMatrix read_matrix_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cache file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_cache(buf.str());
}

}  // namespace qhom
