#include <catch2/catch.hpp>

#include "mubforge/cyclo.hpp"

using namespace mubforge;

TEST_CASE("root of unity identities", "[cyclo]") {
  // zeta * zeta^{m-1} = 1 for m = 5
  CHECK(CycloInt::zeta_pow(5, 1) * CycloInt::zeta_pow(5, 4) == CycloInt::integer(5, 1));
  // m = 3: (1 + zeta)(1 + zeta^2) = 1, by hand: 1 + zeta + zeta^2 + 1 = 1
  CycloInt a = CycloInt::integer(3, 1) + CycloInt::zeta_pow(3, 1);
  CycloInt b = CycloInt::integer(3, 1) + CycloInt::zeta_pow(3, 2);
  CHECK(a * b == CycloInt::integer(3, 1));
  // m = 4: (1 + i)^2 = 2i
  CycloInt c = CycloInt::integer(4, 1) + CycloInt::zeta_pow(4, 1);
  CHECK(c * c == CycloInt(4, {0, 2, 0, 0}));
}

TEST_CASE("conjugation", "[cyclo]") {
  CHECK(CycloInt::integer(7, 1).conj() == CycloInt::integer(7, 1));
  CHECK(CycloInt::zeta_pow(5, 1).conj() == CycloInt::zeta_pow(5, 4));
  Rng rng(3);
  for (u32 m : {3u, 4u, 5u, 7u}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<i64> v(m);
      for (auto& x : v) x = static_cast<i64>(rng.below(2001)) - 1000;
      CycloInt z(m, v);
      CHECK(z.conj().conj() == z);
      // |z|^2 has conjugation-symmetric canonical coefficients
      CycloInt n2 = z.abs_squared();
      CHECK(n2.conj() == n2);
    }
  }
}

TEST_CASE("absolute value squared", "[cyclo]") {
  for (u32 m : {3u, 5u, 7u}) {
    CycloInt full(m);
    std::vector<i64> ones(m, 1);
    CHECK(CycloInt(m, ones).is_zero());  // full root sum vanishes
    CHECK(CycloInt(m, ones).abs_squared() == CycloInt::integer(m, 0));
  }
  CHECK(CycloInt::zeta_pow(7, 3).abs_squared() == CycloInt::integer(7, 1));
  // Gauss-sum magnitude: |1 - zeta|^2 = 3 for m = 3
  CycloInt g = CycloInt::integer(3, 1) - CycloInt::zeta_pow(3, 1);
  CHECK(g.abs_squared() == CycloInt::integer(3, 3));
  CHECK(g.abs_squared().as_integer() == 3);
}

TEST_CASE("integer detection", "[cyclo]") {
  CHECK(CycloInt::integer(5, 0).as_integer() == 0);
  CHECK(CycloInt(3, {1, 1, 1}).as_integer() == 0);  // 1 + zeta + zeta^2
  CHECK_FALSE(CycloInt::zeta_pow(5, 1).as_integer().has_value());
}

TEST_CASE("canonical form is unique", "[cyclo]") {
  // adding a multiple of the full root sum does not change the value (prime m)
  for (u32 m : {3u, 5u, 7u}) {
    Rng rng(m);
    for (int t = 0; t < 50; ++t) {
      std::vector<i64> v(m);
      for (auto& x : v) x = static_cast<i64>(rng.below(41)) - 20;
      std::vector<i64> w = v;
      i64 shift = static_cast<i64>(rng.below(9)) - 4;
      for (auto& x : w) x += shift;
      CHECK(CycloInt(m, v) == CycloInt(m, w));
    }
  }
  // m = 4: zeta^2 = -1 and zeta^3 = -zeta
  CHECK(CycloInt(4, {0, 0, 1, 0}) == CycloInt::integer(4, -1));
  CHECK(CycloInt(4, {0, 0, 0, 1}) == CycloInt(4, {0, -1, 0, 0}));
  // ring identities land in canonical form on both routes
  Rng rng(11);
  for (u32 m : {3u, 4u, 5u}) {
    for (int t = 0; t < 30; ++t) {
      std::vector<i64> va(m), vb(m), vc(m);
      for (auto& x : va) x = static_cast<i64>(rng.below(21)) - 10;
      for (auto& x : vb) x = static_cast<i64>(rng.below(21)) - 10;
      for (auto& x : vc) x = static_cast<i64>(rng.below(21)) - 10;
      CycloInt A(m, va), B(m, vb), C(m, vc);
      CHECK((A + B) * C == A * C + B * C);
      CHECK(A * B == B * A);
    }
  }
}

TEST_CASE("galois substitution preserves integrality verdicts", "[cyclo]") {
  Rng rng(5);
  for (u32 m : {3u, 5u, 7u}) {
    for (u32 a = 1; a < m; ++a) {
      for (int t = 0; t < 25; ++t) {
        std::vector<i64> v(m);
        for (auto& x : v) x = static_cast<i64>(rng.below(11)) - 5;
        CycloInt z(m, v);
        auto c1 = z.abs_squared().as_integer();
        auto c2 = z.galois(a).abs_squared().as_integer();
        CHECK(c1.has_value() == c2.has_value());
        // a root-of-unity relabeling cannot change an integer certificate
        if (c1 && c2) CHECK(*c1 == *c2);
      }
    }
  }
  CHECK_THROWS_AS(CycloInt::zeta_pow(4, 1).galois(2), domain_error);
}

TEST_CASE("overflow is detected, never wrapped", "[cyclo]") {
  CycloInt big = CycloInt::integer(3, i64(1) << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(big + big, std::overflow_error);
}

TEST_CASE("mixed root orders are rejected", "[cyclo]") {
  CHECK_THROWS_AS(CycloInt::integer(3, 1) + CycloInt::integer(5, 1), domain_error);
  CHECK_THROWS_AS(CycloInt(6), domain_error);
}
