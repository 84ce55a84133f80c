#include <catch2/catch.hpp>

#include <thread>

#include "mubforge/ff.hpp"

using namespace mubforge;

namespace {

// Test-side polynomial arithmetic over GF(p), independent of the library
// internals. Vectors are constant-term-first with explicit degree.
using Poly = std::vector<u32>;

Poly tmul(const Poly& a, const Poly& b, u32 p) {
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  return c;
}

bool tdivides(const Poly& d, Poly a, u32 p) {
  // d monic
  while (a.size() >= d.size() && !(a.size() == 1 && a[0] == 0)) {
    u32 lead = a.back();
    if (lead) {
      size_t shift = a.size() - d.size();
      for (size_t i = 0; i < d.size(); ++i) a[shift + i] = (a[shift + i] + (p - 1) * lead % p * d[i]) % p;
    }
    a.pop_back();
    while (a.size() > 1 && a.back() == 0) a.pop_back();
  }
  return a.size() == 1 && a[0] == 0;
}

// exhaustive factorization oracle: f (monic, degree >= 2) is irreducible iff
// no monic divisor of degree 1..deg/2 divides it
bool oracle_irreducible(const Poly& f, u32 p) {
  u32 deg = static_cast<u32>(f.size()) - 1;
  for (u32 d = 1; 2 * d <= deg; ++d) {
    u64 count = 1;
    for (u32 i = 0; i < d; ++i) count *= p;
    for (u64 k = 0; k < count; ++k) {
      Poly g(d + 1, 0);
      g[d] = 1;
      u64 t = k;
      for (u32 i = 0; i < d; ++i) {
        g[i] = static_cast<u32>(t % p);
        t /= p;
      }
      if (tdivides(g, f, p)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("default modulus picks the expected small polynomials", "[ff]") {
  CHECK(get_field(2, 2).modulus() == std::vector<u32>{1, 1, 1});  // the unique irreducible quadratic
  CHECK(get_field(3, 1).modulus() == std::vector<u32>{0, 1});     // degree 1: plain GF(3), modulus x
  CHECK(get_field(2, 1).modulus() == std::vector<u32>{0, 1});
}

TEST_CASE("default quartic modulus over GF(2) matches the factorization oracle", "[ff]") {
  // lexicographically smallest irreducible quartic, low-degree-first order with c0 most significant
  Poly expected;
  for (u64 k = 0; k < 16 && expected.empty(); ++k) {
    Poly f(5, 0);
    f[4] = 1;
    u64 t = k;
    for (u32 i = 0; i < 4; ++i) {
      f[3 - i] = static_cast<u32>(t % 2);
      t /= 2;
    }
    if (oracle_irreducible(f, 2)) expected = f;
  }
  REQUIRE(!expected.empty());
  CHECK(get_field(2, 4).modulus() == expected);
  CHECK(oracle_irreducible(get_field(3, 3).modulus(), 3));
  CHECK(oracle_irreducible(get_field(3, 5).modulus(), 3));
}

TEST_CASE("field construction rejects bad input", "[ff]") {
  CHECK_THROWS_AS(FieldCtx(4, 1), domain_error);                             // p not prime
  CHECK_THROWS_AS(FieldCtx(2, 2, std::vector<u32>{1, 0, 1}), domain_error);  // x^2+1 = (x+1)^2
  CHECK_THROWS_AS(FieldCtx(3, 2, std::vector<u32>{1, 0, 2}), domain_error);  // not monic
  CHECK_THROWS_AS(FieldCtx(3, 11), domain_error);                            // beyond 3^10
}

TEST_CASE("trace values and distribution", "[ff]") {
  const FieldCtx& F4 = get_field(2, 2);
  CHECK(F4.trace(0) == 0);
  // generator g = x (code 2): g + g^2 = 1 with modulus x^2+x+1
  u32 g = F4.from_coeffs({0, 1});
  CHECK(F4.add(g, F4.mul(g, g)) == 1);
  CHECK(F4.trace(g) == 1);

  for (u64 q : {4, 8, 9, 16, 25, 27, 49, 81}) {
    const FieldCtx& F = get_field_q(q);
    std::vector<u32> hist(F.p(), 0);
    for (u32 x = 0; x < F.q(); ++x) ++hist[F.trace(x)];
    for (u32 v = 0; v < F.p(); ++v) CHECK(hist[v] == F.q() / F.p());
  }
}

TEST_CASE("trace is GF(p)-linear and Frobenius invariant", "[ff]") {
  for (u64 q : {9, 27, 81, 4, 8, 16, 64, 25, 49}) {
    const FieldCtx& F = get_field_q(q);
    for (u32 x = 0; x < F.q(); ++x) {
      CHECK(F.trace(F.frobenius(x, 1)) == F.trace(x));
      for (u32 y = 0; y < F.q(); ++y)
        CHECK(F.trace(F.add(x, y)) == (F.trace(x) + F.trace(y)) % F.p());
    }
    for (u32 a = 0; a < F.p(); ++a)
      for (u32 x = 0; x < F.q(); ++x)
        CHECK(F.trace(F.mul(a, x)) == a * F.trace(x) % F.p());
  }
}

TEST_CASE("frobenius powers", "[ff]") {
  const FieldCtx& F9 = get_field(3, 2);
  u32 g = F9.generator();
  CHECK(F9.frobenius(g, 0) == g);
  CHECK(F9.frobenius(g, 2) == g);  // order divides r
  // independent oracle: naive repeated multiplication
  u32 cube = F9.mul(g, F9.mul(g, g));
  CHECK(F9.frobenius(g, 1) == cube);

  for (u64 q : {4, 8, 16, 32, 64, 9, 27}) {
    const FieldCtx& F = get_field_q(q);
    for (u32 x = 0; x < F.q(); ++x)
      for (u32 y = 0; y < F.q(); ++y) {
        CHECK(F.frobenius(F.add(x, y), 1) == F.add(F.frobenius(x, 1), F.frobenius(y, 1)));
        CHECK(F.frobenius(F.mul(x, y), 1) == F.mul(F.frobenius(x, 1), F.frobenius(y, 1)));
      }
  }
}

TEST_CASE("dot product on one and two coordinates", "[ff]") {
  const FieldCtx& F9 = get_field(3, 2);
  VSpace V1(F9, 1), V2(F9, 2);
  CHECK(V1.dot(5, 7) == F9.mul(5, 7));
  u32 a = 3, b = 8, c = 2, d = 5;
  CHECK(V2.dot(V2.make2(a, b), V2.make2(c, d)) == F9.add(F9.mul(a, c), F9.mul(b, d)));

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    u32 u = static_cast<u32>(rng.below(V2.size()));
    u32 u2 = static_cast<u32>(rng.below(V2.size()));
    u32 v = static_cast<u32>(rng.below(V2.size()));
    CHECK(V2.dot(V2.add(u, u2), v) == F9.add(V2.dot(u, v), V2.dot(u2, v)));
  }
}

TEST_CASE("squares and nonsquares", "[ff]") {
  const FieldCtx& F3 = get_field(3, 1);
  CHECK(F3.is_square(0));
  CHECK(F3.is_square(1));
  CHECK_FALSE(F3.is_square(2));

  const FieldCtx& F9 = get_field(3, 2);
  u32 nonzero_squares = 0;
  for (u32 x = 1; x < 9; ++x)
    if (F9.is_square(x)) ++nonzero_squares;
  CHECK(nonzero_squares == 4);
  // the predicate agrees with x^{(q-1)/2}
  for (u32 x = 1; x < 9; ++x) CHECK(F9.is_square(x) == (F9.pow(x, 4) == 1));
  // nonsquare times nonsquare is a square
  for (u32 x = 1; x < 9; ++x)
    for (u32 y = 1; y < 9; ++y)
      if (!F9.is_square(x) && !F9.is_square(y)) CHECK(F9.is_square(F9.mul(x, y)));

  CHECK_THROWS_AS(get_field(2, 3).is_square(1), domain_error);
}

TEST_CASE("element codes round-trip through coefficient vectors", "[ff]") {
  const FieldCtx& F27 = get_field(3, 3);
  for (u32 x = 0; x < 27; ++x) CHECK(F27.from_coeffs(F27.coeffs(x)) == x);
  CHECK(F27.coeffs(5) == std::vector<u32>{2, 1, 0});
}

TEST_CASE("concurrent reads and interning are safe", "[ff]") {
  std::vector<std::thread> pool;
  std::vector<const FieldCtx*> seen(8, nullptr);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t]() {
      const FieldCtx& F = get_field(3, 4);
      u32 acc = 0;
      for (u32 x = 0; x < F.q(); ++x) acc = F.add(acc, F.mul(x, F.frobenius(x, 1)));
      seen[t] = acc <= F.q() ? &F : nullptr;
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 8; ++t) CHECK(seen[t] == seen[0]);
  CHECK(seen[0] != nullptr);
}

TEST_CASE("interned contexts are stable", "[ff]") {
  const FieldCtx& a = get_field(3, 2);
  const FieldCtx& b = get_field(3, 2);
  CHECK(&a == &b);
  CHECK(get_field_q(9).q() == 9);
  CHECK_THROWS_AS(get_field_q(12), domain_error);
}
