#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "qhom/homology.hpp"
#include "qhom/lattice.hpp"
#include "qhom/qcomb.hpp"

using qhom::Backend;
using qhom::BigInt;
using qhom::HomologyEngine;
using qhom::HomologyResult;
using qhom::IndexPair;
using qhom::SparseMatModP;

TEST_CASE("construction validates the coefficient prime") {
  CHECK_THROWS_AS(HomologyEngine(3, 2, 2), std::invalid_argument);   // p | q
  CHECK_THROWS_AS(HomologyEngine(3, 4, 2), std::invalid_argument);   // p | q
  CHECK_THROWS_AS(HomologyEngine(3, 2, 6), std::invalid_argument);   // not prime
  CHECK_THROWS_AS(HomologyEngine(-1, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(HomologyEngine(3, 1, 3), std::invalid_argument);   // no field
  HomologyEngine e(2, 3, 2);
  CHECK(e.m() == 2);
  CHECK(e.dim_level(0) == 1);
  CHECK(e.dim_level(1) == 4);
  CHECK(e.dim_level(2) == 1);
  CHECK(e.dim_level(-1) == 0);
  CHECK(e.dim_level(3) == 0);
  CHECK_THROWS_AS(e.homology(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(e.homology(1, 5), std::invalid_argument);
}

TEST_CASE("projective line over GF(3) mod 2") {
  HomologyEngine e(2, 3, 2);
  HomologyResult r = e.homology(1, 1);
  CHECK(r.kernel_dim == 3);
  CHECK(r.image_dim == 1);
  CHECK(r.betti == 2);
  // The trivial ends of the index range vanish.
  CHECK(e.homology(1, 0).betti == 0);
  CHECK(e.homology(1, 2).betti == 0);
}

TEST_CASE("frozen dimensions across parameters") {
  CHECK(HomologyEngine(4, 2, 3).homology(2, 1).betti == 7);
  CHECK(HomologyEngine(3, 2, 7).homology(1, 2).betti == 0);
  CHECK(HomologyEngine(4, 2, 7).homology(2, 1).betti == 19);
  CHECK(HomologyEngine(4, 3, 2).homology(2, 1).betti == 52);
  CHECK(HomologyEngine(3, 4, 3).homology(2, 2).betti == 19);
}

TEST_CASE("engine dimensions match the closed form everywhere") {
  struct Grid {
    int64_t n;
    uint32_t q;
    int64_t p;
  };
  for (const Grid& g : {Grid{3, 2, 3}, Grid{4, 2, 3}, Grid{4, 2, 7},
                        Grid{3, 3, 2}, Grid{4, 3, 2}, Grid{3, 3, 5},
                        Grid{3, 4, 3}, Grid{3, 5, 2}, Grid{4, 2, 5}}) {
    HomologyEngine e(g.n, g.q, g.p);
    for (int64_t k = 0; k <= g.n; ++k) {
      for (int64_t i = 1; i < e.m(); ++i) {
        IndexPair pr = IndexPair::make(g.n, k, i, g.p, g.q);
        BigInt expect = qhom::betti_closed_form(pr);
        INFO("n=", g.n, " q=", g.q, " p=", g.p, " k=", k, " i=", i);
        CHECK(BigInt(static_cast<long>(e.homology(k, i).betti)) == expect);
        CHECK((e.homology(k, i).betti != 0) == qhom::is_middle_index(pr));
      }
    }
  }
}

TEST_CASE("the small-characteristic rows reproduce the special sequences") {
  // m = 3 at q = 2 (p = 7): one maximal middle module per n.
  const int64_t row_m3[] = {2, 5, 19, 94};
  for (int64_t n = 2; n <= 5; ++n) {
    int64_t t = (n + 1) / 2;
    HomologyEngine e(n, 2, 7);
    REQUIRE(e.m() == 3);
    CHECK(e.homology(t, 2 * t - n + 1).betti == row_m3[n - 2]);
    CHECK(BigInt(static_cast<long>(e.homology(t, 2 * t - n + 1).betti)) ==
          qhom::betti_special(3, n, 7, 2));
  }
  // m = 2 at q = 3 (p = 2).
  HomologyEngine e2(2, 3, 2), e4(4, 3, 2);
  CHECK(BigInt(static_cast<long>(e2.homology(1, 1).betti)) ==
        qhom::betti_special(2, 2, 2, 3));
  CHECK(BigInt(static_cast<long>(e4.homology(2, 1).betti)) ==
        qhom::betti_special(2, 4, 2, 3));
}

TEST_CASE("quotient bases are cycles spanning the homology") {
  HomologyEngine e(4, 2, 7);
  auto check_position = [&](int64_t k, int64_t i) {
    const auto& qb = e.quotient_basis(k, i);
    HomologyResult r = e.homology(k, i);
    REQUIRE(static_cast<int64_t>(qb.rep_rows.size()) == r.betti);
    REQUIRE(static_cast<int64_t>(qb.image_rows.size()) == r.image_dim);
    const SparseMatModP& cyc = e.boundary_power(k, i);
    for (const auto& rep : qb.rep_rows) {
      for (uint8_t x : qhom::apply(cyc, rep)) CHECK(x == 0);
    }
    for (const auto& im : qb.image_rows) {
      for (uint8_t x : qhom::apply(cyc, im)) CHECK(x == 0);
    }
    // Representatives map to the standard basis of the quotient.
    for (size_t j = 0; j < qb.rep_rows.size(); ++j) {
      std::vector<uint8_t> coeffs = e.class_of(k, i, qb.rep_rows[j]);
      for (size_t t = 0; t < coeffs.size(); ++t) {
        CHECK(coeffs[t] == (t == j ? 1 : 0));
      }
    }
    // Image vectors are sent to the zero class.
    for (const auto& im : qb.image_rows) {
      for (uint8_t c : e.class_of(k, i, im)) CHECK(c == 0);
    }
  };
  check_position(2, 1);
  check_position(2, 2);
  check_position(1, 1);
  check_position(3, 2);
}

TEST_CASE("classes are invariant under boundary perturbations") {
  HomologyEngine e(4, 2, 7);
  const auto& qb = e.quotient_basis(2, 1);
  REQUIRE(!qb.rep_rows.empty());
  REQUIRE(!qb.image_rows.empty());
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    size_t j = rng() % qb.rep_rows.size();
    std::vector<uint8_t> v = qb.rep_rows[j];
    for (const auto& im : qb.image_rows) {
      uint32_t c = rng() % 7;
      for (size_t t = 0; t < v.size(); ++t) {
        v[t] = static_cast<uint8_t>((v[t] + c * im[t]) % 7);
      }
    }
    std::vector<uint8_t> coeffs = e.class_of(2, 1, v);
    for (size_t t = 0; t < coeffs.size(); ++t) {
      CHECK(coeffs[t] == (t == j ? 1 : 0));
    }
  }
  // Scaling a representative scales its class.
  std::vector<uint8_t> doubled = qb.rep_rows[0];
  for (auto& x : doubled) x = static_cast<uint8_t>(x * 2 % 7);
  std::vector<uint8_t> coeffs = e.class_of(2, 1, doubled);
  CHECK(coeffs[0] == 2);
  // Non-cycles are rejected.
  std::vector<uint8_t> bad(static_cast<size_t>(e.dim_level(2)), 0);
  bad[0] = 1;
  CHECK_THROWS_AS(e.class_of(2, 1, bad), std::invalid_argument);
  CHECK_THROWS_AS(e.class_of(2, 1, std::vector<uint8_t>(3, 0)),
                  std::invalid_argument);
}

TEST_CASE("induced maps: identity, functoriality, and injectivity") {
  HomologyEngine e(4, 3, 5);
  REQUIRE(e.m() == 4);
  // dims: H(3,3) = 38, H(2,2) = 128, H(1,1) = 38
  CHECK(e.homology(3, 3).betti == 38);
  CHECK(e.homology(2, 2).betti == 128);
  CHECK(e.homology(1, 1).betti == 38);

  SparseMatModP id0 = e.induced_boundary_map(3, 3, 0);
  CHECK(id0 == SparseMatModP::identity(38, 5));
  SparseMatModP inc_self = e.induced_inclusion_map(2, 2, 2);
  CHECK(inc_self == SparseMatModP::identity(128, 5));

  SparseMatModP d1 = e.induced_boundary_map(3, 3, 1);   // 128 x 38
  SparseMatModP d2 = e.induced_boundary_map(2, 2, 1);   // 38 x 128
  SparseMatModP d12 = e.induced_boundary_map(3, 3, 2);  // 38 x 38
  CHECK(qhom::multiply(d2, d1) == d12);

  // One-step boundary is injective here: t = 1 < i = 3, 2k - t = 5 >= n.
  CHECK(qhom::rank_mod_p(d1) == 38);

  // Degenerate targets give zero-shaped matrices, not errors.
  SparseMatModP dz = e.induced_boundary_map(2, 2, 2);  // target (0, 0)
  CHECK(dz.rows == 0);
  CHECK(dz.cols == 128);
  SparseMatModP iz = e.induced_inclusion_map(1, 1, 2);  // target H(1,2) = 0
  CHECK(iz.rows == 0);
  CHECK(iz.cols == 38);
  CHECK_THROWS_AS(e.induced_boundary_map(3, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(e.induced_inclusion_map(2, 2, 1), std::invalid_argument);
}

TEST_CASE("inclusion of cycle spaces is injective under the level bound") {
  // i = 1 < j = 2, with 2k + m - i - j = 2k >= n.
  HomologyEngine e(4, 2, 7);
  CHECK(e.homology(2, 1).betti == 19);
  CHECK(e.homology(2, 2).betti == 19);
  SparseMatModP inc = e.induced_inclusion_map(2, 1, 2);
  CHECK(inc.rows == 19);
  CHECK(inc.cols == 19);
  CHECK(qhom::rank_mod_p(inc) == 19);
}

TEST_CASE("boundary between middle modules of equal dimension is bijective") {
  HomologyEngine e(5, 2, 7);
  CHECK(e.homology(3, 2).betti == 94);
  CHECK(e.homology(2, 1).betti == 94);
  SparseMatModP d = e.induced_boundary_map(3, 2, 1);
  CHECK(qhom::rank_mod_p(d) == 94);
}

TEST_CASE("traces: identity element recovers the dimension") {
  HomologyEngine e(3, 2, 7);
  qhom::GroupElement id(9, 0);
  for (int64_t i = 0; i < 3; ++i) id[static_cast<size_t>(i * 3 + i)] = 1;
  CHECK(e.homology(1, 1).betti == 5);
  CHECK(e.homology_trace(1, 1, id) == 5 % 7);
  CHECK(e.homology_trace(2, 2, id) == 5 % 7);
  CHECK(e.fixed_points(1, id) == 7);
}

TEST_CASE("traces agree with the fixed-point count formula") {
  HomologyEngine e(3, 2, 7);
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 8; ++trial) {
    qhom::GroupElement g = qhom::random_invertible(3, e.field(), rng);
    int64_t pi0 = e.fixed_points(0, g);
    int64_t pi1 = e.fixed_points(1, g);
    int64_t pi2 = e.fixed_points(2, g);
    int64_t pi3 = e.fixed_points(3, g);
    int64_t expect11 = ((pi1 - pi0 - pi3) % 7 + 7) % 7;
    int64_t expect22 = ((pi2 - pi0 - pi3) % 7 + 7) % 7;
    CHECK(e.homology_trace(1, 1, g) == expect11);
    CHECK(e.homology_trace(2, 2, g) == expect22);
  }
}

TEST_CASE("sequence profile walks the alternating chain") {
  HomologyEngine e(3, 2, 7);
  auto profile = e.sequence_profile(1, 1);
  REQUIRE(profile.size() == 3);
  CHECK(profile[0].indices.k == 0);
  CHECK(profile[0].indices.i == 2);
  CHECK(profile[0].betti == 0);
  CHECK(profile[1].indices.k == 1);
  CHECK(profile[1].indices.i == 1);
  CHECK(profile[1].betti == 5);
  CHECK(profile[2].indices.k == 3);
  CHECK(profile[2].indices.i == 2);
  CHECK(profile[2].betti == 0);
  CHECK_THROWS_AS(e.sequence_profile(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(e.sequence_profile(1, 3), std::invalid_argument);
}

TEST_CASE("both backends produce identical homology data") {
  HomologyEngine serial(4, 2, 3, Backend::serial);
  HomologyEngine parallel(4, 2, 3, Backend::parallel);
  for (int64_t k = 0; k <= 4; ++k) {
    for (int64_t i = 1; i < serial.m(); ++i) {
      HomologyResult a = serial.homology(k, i);
      HomologyResult b = parallel.homology(k, i);
      CHECK(a.kernel_dim == b.kernel_dim);
      CHECK(a.image_dim == b.image_dim);
      CHECK(a.betti == b.betti);
    }
  }
  const auto& qa = serial.quotient_basis(2, 1);
  const auto& qb = parallel.quotient_basis(2, 1);
  CHECK(qa.image_rows == qb.image_rows);
  CHECK(qa.rep_rows == qb.rep_rows);
  CHECK(qa.image_pivots == qb.image_pivots);
  CHECK(qa.rep_pivots == qb.rep_pivots);
}

TEST_CASE("dimension bookkeeping is internally consistent") {
  HomologyEngine e(4, 3, 2);
  for (int64_t k = 0; k <= 4; ++k) {
    for (int64_t i = 0; i <= e.m(); ++i) {
      HomologyResult r = e.homology(k, i);
      CHECK(r.betti == r.kernel_dim - r.image_dim);
      CHECK(r.kernel_dim >= 0);
      CHECK(r.image_dim >= 0);
      CHECK(r.betti >= 0);
      CHECK(r.kernel_dim <= e.dim_level(k));
    }
  }
}

TEST_CASE("trace is linear over conjugation by the permutation action") {
  // Conjugate elements act with equal trace on every homology module.
  HomologyEngine e(3, 3, 2);
  std::mt19937 rng(99);
  qhom::GroupElement g = qhom::random_invertible(3, e.field(), rng);
  qhom::GroupElement h = qhom::random_invertible(3, e.field(), rng);
  // h^-1 by brute force: search small powers until h * h^k = identity.
  qhom::GroupElement hk = h;
  qhom::GroupElement inv = h;
  for (int step = 0; step < 10000; ++step) {
    bool is_id = true;
    for (int64_t r = 0; r < 3; ++r) {
      for (int64_t c = 0; c < 3; ++c) {
        uint32_t want = (r == c) ? 1u : 0u;
        if (hk[static_cast<size_t>(r * 3 + c)] != want) is_id = false;
      }
    }
    if (is_id) break;
    inv = hk;
    hk = qhom::group_multiply(hk, h, 3, e.field());
  }
  qhom::GroupElement conj = qhom::group_multiply(
      qhom::group_multiply(inv, g, 3, e.field()), h, 3, e.field());
  CHECK(e.homology_trace(1, 1, g) == e.homology_trace(1, 1, conj));
  CHECK(e.homology_trace(2, 1, g) == e.homology_trace(2, 1, conj));
}
