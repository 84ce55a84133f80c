#pragma once

#include <functional>
#include <optional>
#include <set>

#include "gr4.hpp"

namespace mubforge {

/// A bilinear product on V = F or V = F + F, given by one of three
/// descriptors: a named family formula, a full coefficient matrix
/// (sum a_ij x^{p^i} y^{p^j} on V = F), or an explicit multiplication table.
/// Commutative products on V = F additionally carry the symmetric form
/// f(x) = sum_{i<=j} s_ij x^{p^i + p^j}, from which the product is
///   odd p:  x*y = 1/2 sum s_ij (x^{p^i} y^{p^j} + x^{p^j} y^{p^i})
///   p = 2:  x*y = sum s_ii x^{2^i} y^{2^i}
///              + sum_{i<j} s_ij (x^{2^i} y^{2^j} + x^{2^j} y^{2^i}).
/// Axioms (distributivity, no zero divisors) are claims until
/// verify_presemifield has passed.
struct Presemifield {
  enum class Repr { Formula, Coeffs, Table };
  enum class Family {
    None,
    Field,
    AlbertCommutative,
    AlbertSymplectic,
    Bkla,
    Dickson,
    Knuth,
    CohenGanley,
    ThasPayne,
    Ganley,
    GanleySymplectic,
    PenttilaWilliams,
    PenttilaWilliamsCommutative,
  };

  const FieldCtx* F = nullptr;
  u32 ncoords = 1;
  Repr repr = Repr::Formula;
  Family family = Family::None;
  std::string name;

  // family parameters
  u32 rho_k = 1;    // exponent k of the automorphism x -> x^{p^k}
  u32 sigma_k = 1;  // same, for Dickson/Knuth
  u32 j = 0;        // nonsquare parameter
  bool alt_reading = false;  // Penttila-Williams: swap the b*d^e and (b*d)^e parses

  // Coeffs repr: full r x r matrix, coeff[i][j] multiplies x^{p^i} y^{p^j}
  std::vector<std::vector<u32>> coeff;
  // symmetric (commutative) form on V = F: upper triangular, sym[i*r+j] for i <= j
  std::vector<u32> sym;
  bool has_sym = false;

  // Table repr: |V|^2 entries, row-major in (x, y)
  std::vector<u32> table;

  bool claim_commutative = false;
  bool claim_symplectic = false;

  VSpace space() const { return VSpace(*F, ncoords); }

  bool has_coeff_form() const { return !coeff.empty(); }

  u32 sym_at(u32 i, u32 jj) const { return sym[i * F->r() + jj]; }

  u32 product(u32 x, u32 y) const {
    switch (repr) {
      case Repr::Table:
        return table[u64(x) * space_size() + y];
      case Repr::Coeffs:
        return eval_coeffs(x, y);
      case Repr::Formula:
        return eval_formula(x, y);
    }
    return 0;
  }

  u32 space_size() const { return ncoords == 1 ? F->q() : F->q() * F->q(); }

 private:
  u32 eval_coeffs(u32 x, u32 y) const {
    const u32 r = F->r();
    u32 acc = 0;
    for (u32 i = 0; i < r; ++i) {
      u32 xi = 0;
      bool have_xi = false;
      for (u32 jj = 0; jj < r; ++jj) {
        u32 c = coeff[i][jj];
        if (!c) continue;
        if (!have_xi) {
          xi = F->frobenius(x, i);
          have_xi = true;
        }
        acc = F->add(acc, F->mul(c, F->mul(xi, F->frobenius(y, jj))));
      }
    }
    return acc;
  }

  u32 eval_formula(u32 x, u32 y) const {
    const FieldCtx& f = *F;
    const u32 r = f.r();
    switch (family) {
      case Family::Field:
        return f.mul(x, y);
      case Family::AlbertCommutative: {
        // 1/2 (x^rho y + x y^rho)
        u32 t = f.add(f.mul(f.frobenius(x, rho_k), y), f.mul(x, f.frobenius(y, rho_k)));
        return f.scale(f.inv2(), t);
      }
      case Family::AlbertSymplectic: {
        // 1/2 (x^rho y + x^{rho^-1} y^{rho^-1})
        u32 ri = (r - rho_k % r) % r;
        u32 t = f.add(f.mul(f.frobenius(x, rho_k), y), f.mul(f.frobenius(x, ri), f.frobenius(y, ri)));
        return f.scale(f.inv2(), t);
      }
      case Family::Bkla: {
        // x o m = m x^{rho^-1} + m^rho x^rho
        u32 ri = (r - rho_k % r) % r;
        return f.add(f.mul(y, f.frobenius(x, ri)), f.mul(f.frobenius(y, rho_k), f.frobenius(x, rho_k)));
      }
      default:
        break;
    }
    // two-coordinate families
    const u32 q = f.q();
    u32 a = x % q, b = x / q, c = y % q, d = y / q;
    switch (family) {
      case Family::Dickson: {
        // (ac + j b^s d^s, ad + bc)
        u32 first = f.add(f.mul(a, c), f.mul(j, f.mul(f.frobenius(b, sigma_k), f.frobenius(d, sigma_k))));
        u32 second = f.add(f.mul(a, d), f.mul(b, c));
        return first + q * second;
      }
      case Family::Knuth: {
        // (ac + bd, ad + j^{s^-1} b c^{s^-1})
        u32 si = (r - sigma_k % r) % r;
        u32 first = f.add(f.mul(a, c), f.mul(b, d));
        u32 second = f.add(f.mul(a, d), f.mul(f.frobenius(j, si), f.mul(b, f.frobenius(c, si))));
        return first + q * second;
      }
      case Family::CohenGanley: {
        // (ac + j bd + j^3 (bd)^9, ad + bc + j (bd)^3)
        u32 bd = f.mul(b, d);
        u32 first = f.add(f.mul(a, c), f.add(f.mul(j, bd), f.mul(f.pow(j, 3), f.frobenius(bd, 2))));
        u32 second = f.add(f.mul(a, d), f.add(f.mul(b, c), f.mul(j, f.frobenius(bd, 1))));
        return first + q * second;
      }
      case Family::ThasPayne: {
        // (ac + bd, ad + j bc + j^{1/3} b c^{1/9} + j^{1/3} b d^{1/3})
        u32 third = (r + r - 1) % r;  // exponent of x -> x^{1/3} as a Frobenius power
        u32 ninth = (2 * third) % r;
        u32 j3 = f.frobenius(j, third);
        u32 first = f.add(f.mul(a, c), f.mul(b, d));
        u32 second = f.add(f.mul(a, d), f.mul(j, f.mul(b, c)));
        second = f.add(second, f.mul(j3, f.mul(b, f.frobenius(c, ninth))));
        second = f.add(second, f.mul(j3, f.mul(b, f.frobenius(d, third))));
        return first + q * second;
      }
      case Family::Ganley: {
        // (ac - b^9 d - b d^9, ad + bc + b^3 d^3)
        u32 first = f.sub(f.mul(a, c), f.add(f.mul(f.frobenius(b, 2), d), f.mul(b, f.frobenius(d, 2))));
        u32 second = f.add(f.mul(a, d), f.add(f.mul(b, c), f.mul(f.frobenius(b, 1), f.frobenius(d, 1))));
        return first + q * second;
      }
      case Family::GanleySymplectic: {
        // (ac + bd, ad + b d^{1/3} - b^{1/9} c^{1/9} - b^9 c)
        u32 third = (r + r - 1) % r;
        u32 ninth = (2 * third) % r;
        u32 first = f.add(f.mul(a, c), f.mul(b, d));
        u32 second = f.add(f.mul(a, d), f.mul(b, f.frobenius(d, third)));
        second = f.sub(second, f.mul(f.frobenius(b, ninth), f.frobenius(c, ninth)));
        second = f.sub(second, f.mul(f.frobenius(b, 2), c));
        return first + q * second;
      }
      case Family::PenttilaWilliams: {
        // (ac + bd, ad + b d^9 + b c^27); alternate reading: (bd)^9, (bc)^27
        u32 first = f.add(f.mul(a, c), f.mul(b, d));
        u32 second;
        if (!alt_reading)
          second = f.add(f.mul(a, d), f.add(f.mul(b, f.frobenius(d, 2)), f.mul(b, f.frobenius(c, 3))));
        else
          second = f.add(f.mul(a, d), f.add(f.frobenius(f.mul(b, d), 2), f.frobenius(f.mul(b, c), 3)));
        return first + q * second;
      }
      case Family::PenttilaWilliamsCommutative: {
        // (ac + (bd)^9, ad + bc + (bd)^27); alternate reading: b d^9, b d^27
        u32 bd = f.mul(b, d);
        u32 first, second;
        if (!alt_reading) {
          first = f.add(f.mul(a, c), f.frobenius(bd, 2));
          second = f.add(f.mul(a, d), f.add(f.mul(b, c), f.frobenius(bd, 3)));
        } else {
          first = f.add(f.mul(a, c), f.mul(b, f.frobenius(d, 2)));
          second = f.add(f.mul(a, d), f.add(f.mul(b, c), f.mul(b, f.frobenius(d, 3))));
        }
        return first + q * second;
      }
      default:
        throw domain_error("Presemifield: no evaluation rule");
    }
  }
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw domain_error(msg);
}

// full coefficient matrix from the symmetric form
inline std::vector<std::vector<u32>> coeff_from_sym(const FieldCtx& F, const std::vector<u32>& sym) {
  u32 r = F.r();
  std::vector<std::vector<u32>> c(r, std::vector<u32>(r, 0));
  u32 half = F.p() == 2 ? 1 : F.inv2();
  for (u32 i = 0; i < r; ++i)
    for (u32 jj = i; jj < r; ++jj) {
      u32 s = sym[i * r + jj];
      if (!s) continue;
      if (i == jj) {
        c[i][i] = F.add(c[i][i], s);
      } else {
        c[i][jj] = F.add(c[i][jj], F.mul(half, s));
        c[jj][i] = F.add(c[jj][i], F.mul(half, s));
      }
    }
  return c;
}

}  // namespace detail

/// Builds a cataloged presemifield. Parameter defaults: rho and sigma are the
/// Frobenius x -> x^p (k = 1), j is the first nonsquare in enumeration order.
/// Violated constraints are reported with the specific constraint.
inline Presemifield make_presemifield(const std::string& family, const FieldCtx& F,
                                      std::optional<u32> rho_k = std::nullopt,
                                      std::optional<u32> sigma_k = std::nullopt,
                                      std::optional<u32> j = std::nullopt, bool alt_reading = false) {
  using Fam = Presemifield::Family;
  Presemifield s;
  s.F = &F;
  s.name = family + " q=" + std::to_string(F.q());
  u32 r = F.r();

  auto need_odd = [&] { detail::require(F.p() != 2, family + ": requires odd characteristic"); };
  auto pick_j = [&] {
    need_odd();
    u32 val = j.value_or(F.first_nonsquare());
    detail::require(!F.is_square(val), family + ": parameter j must be a nonsquare");
    return val;
  };
  auto odd_degree_over_fixed_field = [&](u32 k) {
    k %= r;
    detail::require(k != 0, family + ": rho must be a nontrivial automorphism");
    u32 t = r / std::gcd(r, k);
    detail::require(t % 2 == 1, family + ": the field must have odd degree over the fixed field of rho");
  };

  if (family == "field") {
    s.family = Fam::Field;
    s.claim_commutative = s.claim_symplectic = true;
    s.coeff.assign(r, std::vector<u32>(r, 0));
    s.coeff[0][0] = 1;
    s.sym.assign(r * r, 0);
    s.sym[0] = 1;
    s.has_sym = true;
    s.repr = Presemifield::Repr::Coeffs;
  } else if (family == "albert") {
    need_odd();
    s.family = Fam::AlbertCommutative;
    s.rho_k = rho_k.value_or(1);
    odd_degree_over_fixed_field(s.rho_k);
    s.claim_commutative = true;
    s.sym.assign(r * r, 0);
    s.sym[0 * r + (s.rho_k % r)] = 1;  // f(x) = x^{rho+1}
    s.has_sym = true;
    s.coeff = detail::coeff_from_sym(F, s.sym);
    s.repr = Presemifield::Repr::Coeffs;
  } else if (family == "albert-symplectic") {
    need_odd();
    s.family = Fam::AlbertSymplectic;
    s.rho_k = rho_k.value_or(1);
    odd_degree_over_fixed_field(s.rho_k);
    s.claim_symplectic = true;
    u32 k = s.rho_k % r, ri = (r - k) % r;
    s.coeff.assign(r, std::vector<u32>(r, 0));
    s.coeff[k][0] = F.add(s.coeff[k][0], F.inv2());
    s.coeff[ri][ri] = F.add(s.coeff[ri][ri], F.inv2());
    s.repr = Presemifield::Repr::Coeffs;
  } else if (family == "bkla") {
    need_odd();
    s.family = Fam::Bkla;
    s.rho_k = rho_k.value_or(1);
    odd_degree_over_fixed_field(s.rho_k);
    s.claim_symplectic = true;
    u32 k = s.rho_k % r, ri = (r - k) % r;
    s.coeff.assign(r, std::vector<u32>(r, 0));
    s.coeff[ri][0] = F.add(s.coeff[ri][0], 1);
    s.coeff[k][k] = F.add(s.coeff[k][k], 1);
    s.repr = Presemifield::Repr::Coeffs;
  } else if (family == "dickson" || family == "knuth") {
    s.ncoords = 2;
    s.j = pick_j();
    s.sigma_k = sigma_k.value_or(1);
    detail::require(s.sigma_k % r != 0, family + ": sigma must be a nontrivial automorphism");
    s.family = family == "dickson" ? Fam::Dickson : Fam::Knuth;
    s.claim_commutative = family == "dickson";
    s.claim_symplectic = family == "knuth";
  } else if (family == "cohen-ganley" || family == "thas-payne") {
    detail::require(F.p() == 3 && F.q() >= 9, family + ": requires q = 3^r >= 9");
    s.ncoords = 2;
    s.j = pick_j();
    s.family = family == "cohen-ganley" ? Fam::CohenGanley : Fam::ThasPayne;
    s.claim_commutative = family == "cohen-ganley";
    s.claim_symplectic = family == "thas-payne";
  } else if (family == "ganley" || family == "ganley-symplectic") {
    detail::require(F.p() == 3 && r >= 3 && r % 2 == 1, family + ": requires q = 3^t with t >= 3 odd");
    s.ncoords = 2;
    s.family = family == "ganley" ? Fam::Ganley : Fam::GanleySymplectic;
    s.claim_commutative = family == "ganley";
    s.claim_symplectic = family == "ganley-symplectic";
  } else if (family == "penttila-williams" || family == "penttila-williams-commutative") {
    detail::require(F.p() == 3 && r == 5, family + ": defined only for q = 3^5");
    s.ncoords = 2;
    s.alt_reading = alt_reading;
    s.family = family == "penttila-williams" ? Fam::PenttilaWilliams : Fam::PenttilaWilliamsCommutative;
    s.claim_commutative = family == "penttila-williams-commutative";
    s.claim_symplectic = family == "penttila-williams";
  } else {
    throw domain_error("unknown presemifield family: " + family);
  }
  return s;
}

/// Presemifield from an explicit multiplication table (|V|^2 entries).
inline Presemifield presemifield_from_table(const FieldCtx& F, u32 ncoords, std::vector<u32> table,
                                            const std::string& name = "table") {
  Presemifield s;
  s.F = &F;
  s.ncoords = ncoords;
  s.repr = Presemifield::Repr::Table;
  u64 n = ncoords == 1 ? F.q() : u64(F.q()) * F.q();
  detail::require(table.size() == n * n, "table size must be |V|^2");
  s.table = std::move(table);
  s.name = name;
  return s;
}

struct VerifySfOptions {
  u64 seed = 0;
  u64 samples = 1000000;   // pair samples for the zero-divisor check beyond the exhaustive bound
  u64 injectivity_x = 16;  // sampled x for injectivity of y -> x*y
};

/// Checks both distributive laws and the absence of zero divisors.
/// Exhaustive for small point sets (distributivity |V| <= 81, zero divisors
/// |V| <= 729), seeded sampling beyond. Failures carry witnesses.
inline Report verify_presemifield(const Presemifield& s, VerifySfOptions opt = {}) {
  Report rep;
  rep.subject = "presemifield axioms: " + s.name;
  VSpace V = s.space();
  const u64 n = V.size();
  bool commutative = true;

  if (n <= 81) {
    for (u32 x = 0; x < n && rep.failure_count < 8; ++x)
      for (u32 y = 0; y < n; ++y) {
        u32 xy = s.product(x, y);
        if (s.product(y, x) != xy) commutative = false;
        for (u32 z = 0; z < n; ++z) {
          ++rep.checks;
          if (s.product(V.add(x, z), y) != V.add(xy, s.product(z, y)))
            rep.fail("left distributivity fails at x=" + V.show(x) + " z=" + V.show(z) + " y=" + V.show(y));
          if (s.product(x, V.add(y, z)) != V.add(xy, s.product(x, z)))
            rep.fail("right distributivity fails at x=" + V.show(x) + " y=" + V.show(y) + " z=" + V.show(z));
        }
      }
  } else {
    rep.mode = "sampled";
    Rng rng(opt.seed);
    for (u64 i = 0; i < opt.samples && rep.failure_count < 8; ++i) {
      u32 x = static_cast<u32>(rng.below(n)), y = static_cast<u32>(rng.below(n)), z = static_cast<u32>(rng.below(n));
      ++rep.checks;
      ++rep.samples;
      if (s.product(V.add(x, z), y) != V.add(s.product(x, y), s.product(z, y)))
        rep.fail("left distributivity fails at x=" + V.show(x) + " z=" + V.show(z) + " y=" + V.show(y));
      if (s.product(x, V.add(y, z)) != V.add(s.product(x, y), s.product(x, z)))
        rep.fail("right distributivity fails at x=" + V.show(x) + " y=" + V.show(y) + " z=" + V.show(z));
      if (s.product(x, y) != s.product(y, x)) commutative = false;
    }
  }

  if (n <= 729) {
    for (u32 x = 1; x < n && rep.failure_count < 8; ++x)
      for (u32 y = 1; y < n; ++y) {
        ++rep.checks;
        if (s.product(x, y) == 0) rep.fail("zero divisor: " + V.show(x) + " * " + V.show(y));
      }
  } else {
    rep.mode = "sampled";
    Rng rng(opt.seed + 1);
    for (u64 i = 0; i < opt.samples && rep.failure_count < 8; ++i) {
      u32 x = 1 + static_cast<u32>(rng.below(n - 1)), y = 1 + static_cast<u32>(rng.below(n - 1));
      ++rep.checks;
      ++rep.samples;
      if (s.product(x, y) == 0) rep.fail("zero divisor: " + V.show(x) + " * " + V.show(y));
    }
    // injectivity of y -> x*y for sampled x != 0
    std::vector<u32> image(n);
    for (u64 t = 0; t < opt.injectivity_x && rep.failure_count < 8; ++t) {
      u32 x = 1 + static_cast<u32>(rng.below(n - 1));
      for (u64 y = 0; y < n; ++y) image[y] = s.product(x, static_cast<u32>(y));
      std::sort(image.begin(), image.end());
      ++rep.checks;
      if (std::adjacent_find(image.begin(), image.end()) != image.end())
        rep.fail("y -> x*y not injective for x=" + V.show(x));
    }
  }

  rep.telemetry["commutative"] = commutative ? 1 : 0;
  return rep;
}

/// Symplectic partner of a commutative presemifield on V = F in coefficient
/// form, odd characteristic (dual-spread transposition):
///   x o y = 1/2 sum s_ij^{p^{r-i}} x^{p^{j-i}} y^{p^{r-i}}
///         + 1/2 sum s_ij^{p^{r-j}} x^{p^{r+i-j}} y^{p^{r-j}}.
inline Presemifield knuth_dual_odd(const Presemifield& c) {
  detail::require(c.F->p() != 2, "knuth_dual_odd: odd characteristic only");
  detail::require(c.ncoords == 1 && c.has_sym, "knuth_dual_odd: needs the symmetric coefficient form on V = F");
  const FieldCtx& F = *c.F;
  u32 r = F.r();
  Presemifield out;
  out.F = &F;
  out.ncoords = 1;
  out.repr = Presemifield::Repr::Coeffs;
  out.name = c.name + " (dual)";
  out.claim_symplectic = true;
  out.coeff.assign(r, std::vector<u32>(r, 0));
  u32 half = F.inv2();
  for (u32 i = 0; i < r; ++i)
    for (u32 jj = i; jj < r; ++jj) {
      u32 s = c.sym_at(i, jj);
      if (!s) continue;
      u32 e1 = (r - i) % r, x1 = (jj - i) % r;
      out.coeff[x1][e1] = F.add(out.coeff[x1][e1], F.mul(half, F.frobenius(s, e1)));
      u32 e2 = (r - jj) % r, x2 = (r + i - jj) % r;
      out.coeff[x2][e2] = F.add(out.coeff[x2][e2], F.mul(half, F.frobenius(s, e2)));
    }
  return out;
}

/// Even-characteristic version:
///   x o y = sum s_ii^{2^{r-i}} x y^{2^{r-i}}
///         + sum_{i<j} s_ij^{2^{r-i}} x^{2^{j-i}} y^{2^{r-i}}
///         + sum_{i<j} s_ij^{2^{r-j}} x^{2^{r+i-j}} y^{2^{r-j}}.
inline Presemifield knuth_dual_even(const Presemifield& c) {
  detail::require(c.F->p() == 2, "knuth_dual_even: characteristic 2 only");
  detail::require(c.ncoords == 1 && c.has_sym, "knuth_dual_even: needs the symmetric coefficient form on V = F");
  const FieldCtx& F = *c.F;
  u32 r = F.r();
  Presemifield out;
  out.F = &F;
  out.ncoords = 1;
  out.repr = Presemifield::Repr::Coeffs;
  out.name = c.name + " (dual)";
  out.claim_symplectic = true;
  out.coeff.assign(r, std::vector<u32>(r, 0));
  for (u32 i = 0; i < r; ++i) {
    u32 s = c.sym_at(i, i);
    if (!s) continue;
    u32 e = (r - i) % r;
    out.coeff[0][e] = F.add(out.coeff[0][e], F.frobenius(s, e));
  }
  for (u32 i = 0; i < r; ++i)
    for (u32 jj = i + 1; jj < r; ++jj) {
      u32 s = c.sym_at(i, jj);
      if (!s) continue;
      u32 e1 = (r - i) % r, x1 = (jj - i) % r;
      out.coeff[x1][e1] = F.add(out.coeff[x1][e1], F.frobenius(s, e1));
      u32 e2 = (r - jj) % r, x2 = (r + i - jj) % r;
      out.coeff[x2][e2] = F.add(out.coeff[x2][e2], F.frobenius(s, e2));
    }
  return out;
}

/// A function F -> F given as a list of monomials coeff * x^e. DO monomials
/// record exponents e = p^i + p^j so the quadratic structure is available.
struct PlanarFn {
  enum class Kind { Planar, PseudoPlanar };
  struct Monomial {
    u32 coeff;
    u64 e;
    int i = -1, jj = -1;  // set when e = p^i + p^j
  };

  const FieldCtx* F = nullptr;
  Kind kind = Kind::Planar;
  std::vector<Monomial> mono;
  std::vector<u32> table;  // table representation when no polynomial is known
  std::string name;

  bool is_do() const {
    if (!table.empty()) return false;
    for (const auto& m : mono)
      if (m.i < 0) return false;
    return true;
  }

  u32 eval(u32 x) const {
    if (!table.empty()) return table[x];
    u32 acc = 0;
    for (const auto& m : mono) acc = F->add(acc, F->mul(m.coeff, F->pow(x, m.e)));
    return acc;
  }

  static PlanarFn do_monomial(const FieldCtx& F, u32 coeff, u32 i, u32 jj, Kind kind) {
    PlanarFn f;
    f.F = &F;
    f.kind = kind;
    u64 e = 1;
    for (u32 t = 0; t < i; ++t) e *= F.p();
    u64 e2 = 1;
    for (u32 t = 0; t < jj; ++t) e2 *= F.p();
    f.mono.push_back({coeff, e + e2, static_cast<int>(i), static_cast<int>(jj)});
    f.name = "monomial";
    return f;
  }
};

inline PlanarFn planar_square(const FieldCtx& F) {
  auto f = PlanarFn::do_monomial(F, 1, 0, 0, PlanarFn::Kind::Planar);
  f.name = "x^2";
  return f;
}

/// f(x) = x^{(3^k+1)/2} over GF(3^r), gcd(k, 2r) = 1, k != +-1 mod 2r.
inline PlanarFn coulter_matthews(const FieldCtx& F, u32 k) {
  detail::require(F.p() == 3, "coulter-matthews: requires characteristic 3");
  u32 r = F.r();
  detail::require(std::gcd<u64>(k, 2 * r) == 1, "coulter-matthews: gcd(k, 2r) must be 1");
  detail::require(k % (2 * r) != 1 && (k + 1) % (2 * r) != 0, "coulter-matthews: k = +-1 mod 2r gives x^2");
  u64 e = 1;
  for (u32 t = 0; t < k; ++t) e *= 3;
  PlanarFn f;
  f.F = &F;
  f.kind = PlanarFn::Kind::Planar;
  f.mono.push_back({1, (e + 1) / 2, -1, -1});
  f.name = "coulter-matthews k=" + std::to_string(k);
  return f;
}

/// Exhaustive bijectivity of the difference map x -> f(x+a) - f(x), every a != 0.
inline Report planar_test(const PlanarFn& f) {
  Report rep;
  rep.subject = "planar: " + f.name;
  const FieldCtx& F = *f.F;
  detail::require(F.p() != 2, "planar_test: planar functions require odd characteristic");
  u32 q = F.q();
  std::vector<u32> fx(q);
  for (u32 x = 0; x < q; ++x) fx[x] = f.eval(x);
  std::vector<u8> seen(q);
  for (u32 a = 1; a < q; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    bool bad = false;
    for (u32 x = 0; x < q; ++x) {
      u32 v = F.sub(fx[F.add(x, a)], fx[x]);
      if (seen[v]) {
        bad = true;
        break;
      }
      seen[v] = 1;
    }
    ++rep.checks;
    if (bad) rep.fail("difference map not a bijection for a=" + F.show(a));
  }
  return rep;
}

/// Bijectivity of x -> f(x+a) + f(x) + ax (p = 2) or f(x+a) - f(x) + ax (odd).
inline Report pseudo_planar_test(const PlanarFn& f) {
  Report rep;
  rep.subject = "pseudo-planar: " + f.name;
  const FieldCtx& F = *f.F;
  u32 q = F.q();
  std::vector<u32> fx(q);
  for (u32 x = 0; x < q; ++x) fx[x] = f.eval(x);
  std::vector<u8> seen(q);
  for (u32 a = 1; a < q; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    bool bad = false;
    for (u32 x = 0; x < q; ++x) {
      u32 v = F.p() == 2 ? F.add(F.add(fx[F.add(x, a)], fx[x]), F.mul(a, x))
                         : F.add(F.sub(fx[F.add(x, a)], fx[x]), F.mul(a, x));
      if (seen[v]) {
        bad = true;
        break;
      }
      seen[v] = 1;
    }
    ++rep.checks;
    if (bad) rep.fail("pseudo-planar map not a bijection for a=" + F.show(a));
  }
  return rep;
}

/// f(x) = x*x of a commutative presemifield (odd p): a planar function.
inline PlanarFn planar_from_presemifield(const Presemifield& c) {
  detail::require(c.F->p() != 2, "planar_from_presemifield: odd characteristic only");
  detail::require(c.ncoords == 1, "planar_from_presemifield: V = F only");
  PlanarFn f;
  f.F = c.F;
  f.kind = PlanarFn::Kind::Planar;
  f.name = c.name + " squares";
  if (c.has_sym) {
    u32 r = c.F->r();
    for (u32 i = 0; i < r; ++i)
      for (u32 jj = i; jj < r; ++jj) {
        u32 s = c.sym_at(i, jj);
        if (!s) continue;
        u64 e1 = 1, e2 = 1;
        for (u32 t = 0; t < i; ++t) e1 *= c.F->p();
        for (u32 t = 0; t < jj; ++t) e2 *= c.F->p();
        f.mono.push_back({s, e1 + e2, static_cast<int>(i), static_cast<int>(jj)});
      }
  } else {
    f.table.resize(c.space_size());
    for (u32 x = 0; x < c.space_size(); ++x) f.table[x] = c.product(x, x);
  }
  return f;
}

/// Normalization for characteristic 2: from a commutative presemifield
/// in symmetric coefficient form, produce the strongly isotopic product
/// star(x, y) = g^{-1}(x*y) (g(x) = sum s_ii x^{2^i}, verified invertible) and
/// the pseudo-planar function f with star(x,y) = xy + f(x+y) + f(x) + f(y).
/// A singular g means corrupted catalog data and throws.
inline std::pair<Presemifield, PlanarFn> pseudoplanar_from_presemifield(const Presemifield& c) {
  detail::require(c.F->p() == 2, "pseudoplanar_from_presemifield: characteristic 2 only");
  detail::require(c.ncoords == 1 && c.has_sym, "pseudoplanar_from_presemifield: needs the symmetric form on V = F");
  const FieldCtx& F = *c.F;
  u32 r = F.r();

  // g as an r x r bit matrix over GF(2), columns indexed by basis elements 2^t
  auto apply_g = [&](u32 x) {
    u32 acc = 0;
    for (u32 i = 0; i < r; ++i)
      if (u32 s = c.sym_at(i, i)) acc = F.add(acc, F.mul(s, F.frobenius(x, i)));
    return acc;
  };
  std::vector<u32> cols(r);
  for (u32 t = 0; t < r; ++t) cols[t] = apply_g(1u << t);
  // invert the bit matrix by Gauss-Jordan on (cols | identity)
  std::vector<u32> mat(r), inv(r);
  for (u32 row = 0; row < r; ++row) {
    u32 m = 0;
    for (u32 t = 0; t < r; ++t) m |= ((cols[t] >> row) & 1u) << t;
    mat[row] = m;
    inv[row] = 1u << row;
  }
  for (u32 col = 0; col < r; ++col) {
    u32 pivot = col;
    while (pivot < r && !((mat[pivot] >> col) & 1u)) ++pivot;
    detail::require(pivot < r, "pseudoplanar_from_presemifield: g is singular (catalog-data error)");
    std::swap(mat[col], mat[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (u32 row = 0; row < r; ++row)
      if (row != col && ((mat[row] >> col) & 1u)) {
        mat[row] ^= mat[col];
        inv[row] ^= inv[col];
      }
  }
  auto apply_ginv = [&](u32 x) {
    u32 acc = 0;
    for (u32 row = 0; row < r; ++row) {
      u32 bits = inv[row] & x;
      u32 parity = __builtin_popcount(bits) & 1u;
      acc ^= parity << row;
    }
    return acc;
  };
  for (u32 x = 0; x < F.q(); ++x)
    detail::require(apply_g(apply_ginv(x)) == x, "linear inverse of g failed");

  // g^{-1} as a linearized polynomial sum gt[t] x^{2^t}: solve the Moore system
  // on a basis, Gaussian elimination over F.
  std::vector<std::vector<u32>> A(r, std::vector<u32>(r + 1));
  for (u32 row = 0; row < r; ++row) {
    u32 b = 1u << row;
    for (u32 t = 0; t < r; ++t) A[row][t] = F.frobenius(b, t);
    A[row][r] = apply_ginv(b);
  }
  for (u32 col = 0; col < r; ++col) {
    u32 pivot = col;
    while (pivot < r && A[pivot][col] == 0) ++pivot;
    detail::require(pivot < r, "Moore system singular");
    std::swap(A[col], A[pivot]);
    u32 s = F.inv(A[col][col]);
    for (u32 t = col; t <= r; ++t) A[col][t] = F.mul(s, A[col][t]);
    for (u32 row = 0; row < r; ++row)
      if (row != col && A[row][col]) {
        u32 fct = A[row][col];
        for (u32 t = col; t <= r; ++t) A[row][t] = F.sub(A[row][t], F.mul(fct, A[col][t]));
      }
  }
  std::vector<u32> gt(r);
  for (u32 t = 0; t < r; ++t) gt[t] = A[t][r];
  for (u32 x = 0; x < F.q(); ++x) {
    u32 acc = 0;
    for (u32 t = 0; t < r; ++t) acc = F.add(acc, F.mul(gt[t], F.frobenius(x, t)));
    detail::require(acc == apply_ginv(x), "linearized form of g^{-1} failed");
  }

  // star coefficients: compose g^{-1} with the symmetric form of c
  Presemifield star;
  star.F = &F;
  star.ncoords = 1;
  star.repr = Presemifield::Repr::Coeffs;
  star.name = c.name + " (normalized)";
  star.claim_commutative = true;
  star.sym.assign(r * r, 0);
  star.has_sym = true;
  for (u32 t = 0; t < r; ++t) {
    if (!gt[t]) continue;
    for (u32 i = 0; i < r; ++i)
      for (u32 jj = i; jj < r; ++jj) {
        u32 s = c.sym_at(i, jj);
        if (!s) continue;
        u32 ni = (i + t) % r, nj = (jj + t) % r;
        if (ni > nj) std::swap(ni, nj);
        u32 add = F.mul(gt[t], F.frobenius(s, t));
        star.sym[ni * r + nj] = F.add(star.sym[ni * r + nj], add);
      }
  }
  // normalized product has plain xy on the diagonal
  detail::require(star.sym_at(0, 0) == 1, "normalized diagonal is not xy");
  for (u32 i = 1; i < r; ++i) detail::require(star.sym_at(i, i) == 0, "normalized diagonal is not xy");
  star.coeff = detail::coeff_from_sym(F, star.sym);
  for (u32 x = 0; x < F.q(); ++x)
    for (u32 y = 0; y < F.q(); ++y)
      detail::require(star.product(x, y) == apply_ginv(c.product(x, y)), "star != g^{-1}(x*y)");

  PlanarFn f;
  f.F = &F;
  f.kind = PlanarFn::Kind::PseudoPlanar;
  f.name = c.name + " pseudo-planar";
  for (u32 i = 0; i < r; ++i)
    for (u32 jj = i + 1; jj < r; ++jj)
      if (u32 s = star.sym_at(i, jj)) {
        u64 e1 = 1, e2 = 1;
        for (u32 t = 0; t < i; ++t) e1 *= 2;
        for (u32 t = 0; t < jj; ++t) e2 *= 2;
        f.mono.push_back({s, e1 + e2, static_cast<int>(i), static_cast<int>(jj)});
      }
  // defining identity
  for (u32 x = 0; x < F.q(); ++x)
    for (u32 y = 0; y < F.q(); ++y) {
      u32 rhs = F.add(F.mul(x, y), F.add(f.eval(F.add(x, y)), F.add(f.eval(x), f.eval(y))));
      detail::require(star.product(x, y) == rhs, "star(x,y) != xy + f(x+y) + f(x) + f(y)");
    }
  return {star, f};
}

struct CommFromPseudoPlanar {
  Presemifield product;
  bool quadratic = false;       // the 7-term quadratic condition
  bool presemifield_ok = false; // verify_presemifield verdict
  Report axioms;
};

/// x*y = xy + f(x+y) + f(x) + f(y) over GF(2^r). The product is a
/// presemifield exactly when f is quadratic; both verdicts are computed and
/// returned for the caller to compare.
inline CommFromPseudoPlanar comm_from_pseudoplanar(const PlanarFn& f) {
  const FieldCtx& F = *f.F;
  detail::require(F.p() == 2, "comm_from_pseudoplanar: characteristic 2 only");
  CommFromPseudoPlanar out;

  if (f.is_do()) {
    u32 r = F.r();
    Presemifield s;
    s.F = &F;
    s.ncoords = 1;
    s.repr = Presemifield::Repr::Coeffs;
    s.name = "xy + quadratic(" + f.name + ")";
    s.claim_commutative = true;
    s.sym.assign(r * r, 0);
    s.sym[0] = 1;
    for (const auto& m : f.mono) {
      if (m.i == m.jj) continue;  // diagonal DO monomials are additive and drop out
      u32 i = static_cast<u32>(m.i), jj = static_cast<u32>(m.jj);
      if (i > jj) std::swap(i, jj);
      s.sym[i * r + jj] = F.add(s.sym[i * r + jj], m.coeff);
    }
    s.has_sym = true;
    s.coeff = detail::coeff_from_sym(F, s.sym);
    out.product = std::move(s);
  } else {
    u32 q = F.q();
    std::vector<u32> fx(q);
    for (u32 x = 0; x < q; ++x) fx[x] = f.eval(x);
    std::vector<u32> table(u64(q) * q);
    for (u32 x = 0; x < q; ++x)
      for (u32 y = 0; y < q; ++y)
        table[u64(x) * q + y] = F.add(F.mul(x, y), F.add(fx[F.add(x, y)], F.add(fx[x], fx[y])));
    out.product = presemifield_from_table(F, 1, std::move(table), "xy + f-form(" + f.name + ")");
    out.product.claim_commutative = true;
  }

  // quadratic condition: f(x+y+z)+f(x+y)+f(x+z)+f(y+z)+f(x)+f(y)+f(z) = 0
  u32 q = F.q();
  std::vector<u32> fx(q);
  for (u32 x = 0; x < q; ++x) fx[x] = f.eval(x);
  out.quadratic = true;
  for (u32 x = 0; x < q && out.quadratic; ++x)
    for (u32 y = 0; y < q && out.quadratic; ++y)
      for (u32 z = 0; z < q; ++z) {
        u32 acc = fx[F.add(F.add(x, y), z)];
        acc = F.add(acc, fx[F.add(x, y)]);
        acc = F.add(acc, fx[F.add(x, z)]);
        acc = F.add(acc, fx[F.add(y, z)]);
        acc = F.add(acc, F.add(fx[x], F.add(fx[y], fx[z])));
        if (acc != 0) {
          out.quadratic = false;
          break;
        }
      }

  out.axioms = verify_presemifield(out.product);
  out.presemifield_ok = out.axioms.passed();
  return out;
}

/// Names, constraints and native orders of everything the library can build.
struct CatalogEntry {
  std::string name;
  std::string kind;  // presemifield | planar | spread-construction
  std::string description;
  std::string constraints;
  std::vector<u64> native_q;
  bool commutative = false;
  bool symplectic = false;
};

inline std::vector<CatalogEntry> catalog() {
  return {
      {"field", "presemifield", "finite field multiplication; commutative and symplectic", "q any prime power",
       {3, 5, 7, 9, 27, 2, 4, 8, 16}, true, true},
      {"albert", "presemifield", "commutative twisted-field product (1/2)(x^rho y + x y^rho) on V = F",
       "q odd, rho = p^k nontrivial, odd degree over its fixed field", {27, 243}, true, false},
      {"albert-symplectic", "presemifield", "symplectic partner (1/2)(x^rho y + x^{rho^-1} y^{rho^-1})",
       "q odd, rho as for albert", {27, 243}, false, true},
      {"bkla", "presemifield", "symplectic product x o m = m x^{rho^-1} + m^rho x^rho on V = F",
       "q odd, rho as for albert", {27, 243}, false, true},
      {"dickson", "presemifield", "commutative product (ac + j b^s d^s, ad + bc) on V = F + F",
       "q odd, j nonsquare, sigma nontrivial", {9, 25, 27}, true, false},
      {"knuth", "presemifield", "symplectic partner (ac + bd, ad + j^{s^-1} b c^{s^-1})",
       "q odd, j nonsquare, sigma nontrivial", {9, 25, 27}, false, true},
      {"cohen-ganley", "presemifield", "commutative (ac + jbd + j^3 (bd)^9, ad + bc + j (bd)^3)",
       "q = 3^r >= 9, j nonsquare", {9, 27}, true, false},
      {"thas-payne", "presemifield", "symplectic partner (ac + bd, ad + jbc + j^{1/3} b c^{1/9} + j^{1/3} b d^{1/3})",
       "q = 3^r >= 9, j nonsquare", {9, 27}, false, true},
      {"ganley", "presemifield", "commutative (ac - b^9 d - b d^9, ad + bc + b^3 d^3)",
       "q = 3^t, t >= 3 odd", {27, 243}, true, false},
      {"ganley-symplectic", "presemifield", "symplectic partner (ac + bd, ad + b d^{1/3} - b^{1/9} c^{1/9} - b^9 c)",
       "q = 3^t, t >= 3 odd", {27, 243}, false, true},
      {"penttila-williams", "presemifield", "sporadic symplectic (ac + bd, ad + b d^9 + b c^27)", "q = 3^5",
       {243}, false, true},
      {"penttila-williams-commutative", "presemifield", "commutative partner (ac + (bd)^9, ad + bc + (bd)^27)",
       "q = 3^5", {243}, true, false},
      {"coulter-matthews", "planar", "planar monomial x^{(3^k+1)/2}", "q = 3^r, gcd(k,2r) = 1, k != +-1 mod 2r",
       {243}, false, false},
      {"pseudo-planar", "planar", "function with x -> f(x+a) + f(x) + ax bijective for all a != 0",
       "q = 2^r (odd q uses the signed difference form)", {4, 8, 16}, false, false},
      {"bblp", "spread-construction", "net replacement on the bkla spread; not a semifield spread",
       "q odd, rho as for albert", {27}, false, true},
      {"suzuki", "spread-construction", "symplectic spread on V = F + F invariant under Sz(q)",
       "q = 2^{2k+1}, k >= 1", {8, 32}, false, true},
  };
}

}  // namespace mubforge
