#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qhom/cache.hpp"
#include "qhom/homology.hpp"
#include "qhom/linalg.hpp"

using qhom::CachedMatrix;
using qhom::HomologyEngine;
using qhom::SparseMatModP;
using qhom::integrity_error;

namespace fs = std::filesystem;

namespace {

// Rebuilds a valid trailer so parse-level checks fire instead of the
// checksum check.
std::string reseal(const std::string& body) {
  return body + "end " + qhom::sha256_hex(body) + "\n";
}

std::string strip_trailer(const std::string& text) {
  auto pos = text.rfind("end ");
  REQUIRE(pos != std::string::npos);
  return text.substr(0, pos);
}

std::string corruption_message(const std::string& text) {
  try {
    qhom::parse_matrix_cache(text);
  } catch (const integrity_error& e) {
    return e.what();
  }
  return "(accepted)";
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sha256 matches published and independently computed digests") {
  CHECK(qhom::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(qhom::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(qhom::sha256_hex("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
  CHECK(qhom::sha256_hex(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // Padding boundaries: 55 and 56 bytes straddle the one-block limit,
  // 64 forces a second block.
  CHECK(qhom::sha256_hex(std::string(55, 'x')) ==
        "d5e285683cd4efc02d021a5c62014694958901005d6f71e89e0989fac77e4072");
  CHECK(qhom::sha256_hex(std::string(56, 'y')) ==
        "4877e564e5e36e367c7c8d59670774becd3350610b6df4c399c9fa9b66da5813");
  CHECK(qhom::sha256_hex(std::string(64, 'z')) ==
        "72996563049cc84daa2c3f31fd5c3d10770e69d6ebbb8da5b6d76db303dbae43");
  CHECK(qhom::sha256_hex(std::string(200, 'w')) ==
        "f21c981475cfd17cbd5ca4bf8fbcaf7c6fc8918d76a0a58c60f45c4b8fb65e49");
}

TEST_CASE("cache path encodes the full key") {
  CHECK(qhom::cache_path("store", 2, 4, 3, 7) ==
        (fs::path("store") / "boundary-q2-n4-k3-p7.qm").string());
  CHECK(qhom::cache_path("/tmp/x", 3, 2, 1, 5) ==
        (fs::path("/tmp/x") / "boundary-q3-n2-k1-p5.qm").string());
}

TEST_CASE("serialization of a known boundary map is byte-exact") {
  HomologyEngine eng(3, 2, 7, qhom::Backend::serial);
  CachedMatrix entry{2, 3, 1, 7, eng.boundary(1)};
  std::string expected =
      "qhom-matrix v1\n"
      "2 3 1 7 1 7\n"
      "0 0 1\n0 1 1\n0 2 1\n0 3 1\n0 4 1\n0 5 1\n0 6 1\n"
      "end 893fa30212faf4bd16ca13e14bc34ef11a203150f353849b69ddea19cd800c99\n";
  CHECK(qhom::serialize_matrix_cache(entry) == expected);
  CachedMatrix back = qhom::parse_matrix_cache(expected);
  CHECK(back.q == 2);
  CHECK(back.n == 3);
  CHECK(back.k == 1);
  CHECK(back.p == 7);
  CHECK(back.matrix == entry.matrix);
}

TEST_CASE("serialize and parse round-trip an arbitrary matrix") {
  std::vector<std::tuple<int64_t, int64_t, int64_t>> trips = {
      {0, 0, 2}, {3, 0, 1}, {1, 2, 4}, {2, 2, 1}, {4, 2, 3}, {0, 5, 1}};
  SparseMatModP m = SparseMatModP::from_triplets(5, 6, 5, trips);
  CachedMatrix entry{4, 6, 3, 5, m};
  CachedMatrix back = qhom::parse_matrix_cache(
      qhom::serialize_matrix_cache(entry));
  CHECK(back.q == entry.q);
  CHECK(back.n == entry.n);
  CHECK(back.k == entry.k);
  CHECK(back.p == entry.p);
  CHECK(back.matrix == m);

  SparseMatModP empty = SparseMatModP::zero(4, 9, 3);
  CachedMatrix ez{2, 2, 1, 3, empty};
  CHECK(qhom::parse_matrix_cache(qhom::serialize_matrix_cache(ez)).matrix ==
        empty);
}

TEST_CASE("every corruption is rejected with the right diagnosis") {
  SparseMatModP m = SparseMatModP::from_triplets(
      2, 3, 7, {{0, 0, 3}, {1, 0, 1}, {0, 2, 6}});
  std::string good = qhom::serialize_matrix_cache(CachedMatrix{2, 3, 2, 7, m});
  std::string body = strip_trailer(good);
  REQUIRE_NOTHROW(qhom::parse_matrix_cache(good));

  SUBCASE("flipped checksum digit") {
    std::string bad = good;
    size_t pos = bad.rfind("end ") + 4;
    bad[pos] = (bad[pos] == '0') ? '1' : '0';
    CHECK(corruption_message(bad) == "matrix cache: checksum mismatch");
  }
  SUBCASE("flipped payload byte") {
    std::string bad = good;
    bad[bad.find("3")] = '5';
    CHECK(corruption_message(bad) == "matrix cache: checksum mismatch");
  }
  SUBCASE("trailer removed") {
    CHECK(corruption_message(body) == "matrix cache: missing end line");
  }
  SUBCASE("empty file") {
    CHECK(corruption_message("") == "matrix cache: missing end line");
  }
  SUBCASE("junk after the digest") {
    std::string bad = body + "end " + qhom::sha256_hex(body) + " tail\n";
    CHECK(corruption_message(bad) == "matrix cache: missing end line");
  }
  SUBCASE("extra line after the trailer") {
    CHECK(corruption_message(good + "0 1 1\n") ==
          "matrix cache: missing end line");
  }
  SUBCASE("wrong header") {
    std::string bad = body;
    bad.replace(0, 14, "qhom-matrix v9");
    CHECK(corruption_message(reseal(bad)) ==
          "matrix cache: unrecognized header");
  }
  SUBCASE("missing key line") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n")) ==
          "matrix cache: missing key line");
  }
  SUBCASE("short key line") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2\n")) ==
          "matrix cache: malformed key line");
  }
  SUBCASE("long key line") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3 9\n")) ==
          "matrix cache: malformed key line");
  }
  SUBCASE("modulus out of range") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 1 2 3\n")) ==
          "matrix cache: key out of range");
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 509 2 3\n")) ==
          "matrix cache: key out of range");
  }
  SUBCASE("entry line with too few fields") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3\n0 0\n")) ==
          "matrix cache: malformed entry line");
  }
  SUBCASE("entry outside the shape") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3\n2 0 1\n")) ==
          "matrix cache: entry outside matrix shape");
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3\n0 3 1\n")) ==
          "matrix cache: entry outside matrix shape");
  }
  SUBCASE("zero or overweight values") {
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3\n0 0 0\n")) ==
          "matrix cache: entry value outside [1, p)");
    CHECK(corruption_message(reseal("qhom-matrix v1\n2 3 2 7 2 3\n0 0 7\n")) ==
          "matrix cache: entry value outside [1, p)");
  }
  SUBCASE("entries out of order or duplicated") {
    std::string base = "qhom-matrix v1\n2 3 2 7 2 3\n";
    CHECK(corruption_message(reseal(base + "0 1 1\n0 0 1\n")) ==
          "matrix cache: entries out of column-major order");
    CHECK(corruption_message(reseal(base + "1 0 1\n0 0 1\n")) ==
          "matrix cache: entries out of column-major order");
    CHECK(corruption_message(reseal(base + "0 0 1\n0 0 2\n")) ==
          "matrix cache: entries out of column-major order");
  }
}

TEST_CASE("missing file reads as an io error, not an integrity error") {
  fs::path dir = fresh_dir("qhom-cache-test-missing");
  std::string path = (dir / "nope.qm").string();
  bool io_error = false;
  try {
    qhom::read_matrix_cache(path);
  } catch (const integrity_error&) {
  } catch (const std::runtime_error&) {
    io_error = true;
  }
  CHECK(io_error);
  fs::remove_all(dir);
}

TEST_CASE("write then read preserves the entry on disk") {
  fs::path dir = fresh_dir("qhom-cache-test-roundtrip");
  SparseMatModP m = SparseMatModP::from_triplets(
      3, 3, 5, {{0, 1, 2}, {2, 1, 4}, {1, 2, 1}});
  CachedMatrix entry{3, 3, 2, 5, m};
  std::string path = qhom::cache_path((dir / "deep" / "tree").string(),
                                      entry.q, entry.n, entry.k, entry.p);
  qhom::write_matrix_cache(path, entry);
  CachedMatrix back = qhom::read_matrix_cache(path);
  CHECK(back.q == entry.q);
  CHECK(back.matrix == m);
  fs::remove_all(dir);
}

TEST_CASE("engine populates its cache directory and reuses it") {
  fs::path dir = fresh_dir("qhom-cache-test-engine");
  std::string store = dir.string();

  HomologyEngine fresh(3, 2, 7, qhom::Backend::serial);
  HomologyEngine writer(3, 2, 7, qhom::Backend::serial, store);
  for (int64_t k = 0; k <= 3; ++k) {
    for (int64_t i = 1; i < writer.m(); ++i) {
      CHECK(writer.homology(k, i).betti == fresh.homology(k, i).betti);
    }
  }
  CHECK(fs::exists(qhom::cache_path(store, 2, 3, 1, 7)));
  CHECK(fs::exists(qhom::cache_path(store, 2, 3, 2, 7)));
  CHECK(fs::exists(qhom::cache_path(store, 2, 3, 3, 7)));

  HomologyEngine reader(3, 2, 7, qhom::Backend::serial, store);
  for (int64_t k = 0; k <= 3; ++k) {
    for (int64_t i = 1; i < reader.m(); ++i) {
      CHECK(reader.homology(k, i).betti == fresh.homology(k, i).betti);
    }
  }
  CHECK(reader.boundary(2) == fresh.boundary(2));
  fs::remove_all(dir);
}

TEST_CASE("engine rejects tampered and mismatched cache files") {
  fs::path dir = fresh_dir("qhom-cache-test-tamper");
  std::string store = dir.string();

  SUBCASE("bit rot in a stored matrix") {
    HomologyEngine writer(3, 2, 7, qhom::Backend::serial, store);
    writer.boundary(2);
    std::string path = qhom::cache_path(store, 2, 3, 2, 7);
    REQUIRE(fs::exists(path));
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    size_t first_entry = text.find('\n', text.find('\n') + 1) + 1;
    text[first_entry] = (text[first_entry] == '0') ? '1' : '0';
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
    HomologyEngine reader(3, 2, 7, qhom::Backend::serial, store);
    CHECK_THROWS_AS(reader.boundary(2), integrity_error);
  }
  SUBCASE("valid file whose key names another map") {
    HomologyEngine donor(3, 2, 7, qhom::Backend::serial);
    qhom::write_matrix_cache(qhom::cache_path(store, 2, 3, 2, 7),
                             CachedMatrix{2, 3, 1, 7, donor.boundary(1)});
    HomologyEngine reader(3, 2, 7, qhom::Backend::serial, store);
    CHECK_THROWS_AS(reader.boundary(2), integrity_error);
    CHECK_THROWS_AS(reader.homology(2, 1), integrity_error);
  }
  SUBCASE("valid file with the right key but impossible shape") {
    qhom::write_matrix_cache(
        qhom::cache_path(store, 2, 3, 2, 7),
        CachedMatrix{2, 3, 2, 7, SparseMatModP::zero(1, 1, 7)});
    HomologyEngine reader(3, 2, 7, qhom::Backend::serial, store);
    CHECK_THROWS_AS(reader.boundary(2), integrity_error);
  }
  fs::remove_all(dir);
}
