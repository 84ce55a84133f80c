#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "core.hpp"

namespace mubforge {

namespace detail {

// Dense polynomial helpers over Z_p, coefficient vectors constant term first.
// Only used while building field contexts; element arithmetic afterwards runs
// on packed codes and lookup tables.
inline void poly_trim(std::vector<u32>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u32> poly_mul(const std::vector<u32>& a, const std::vector<u32>& b, u32 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u32> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + u64(a[i]) * b[j]) % p;
  }
  poly_trim(c);
  return c;
}

inline std::vector<u32> poly_mod(std::vector<u32> a, const std::vector<u32>& m, u32 p) {
  // m monic
  while (a.size() >= m.size()) {
    u32 lead = a.back();
    if (lead) {
      size_t shift = a.size() - m.size();
      for (size_t i = 0; i + 1 < m.size(); ++i)
        a[shift + i] = (a[shift + i] + u64(p - 1) * lead % p * m[i]) % p;
    }
    a.pop_back();
    poly_trim(a);
    if (a.size() < m.size()) break;
  }
  poly_trim(a);
  return a;
}

inline std::vector<u32> poly_powmod(std::vector<u32> base, u64 e, const std::vector<u32>& m, u32 p) {
  std::vector<u32> acc{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) acc = poly_mod(poly_mul(acc, base, p), m, p);
    base = poly_mod(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return acc;
}

inline std::vector<u32> poly_gcd(std::vector<u32> a, std::vector<u32> b, u32 p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // make b monic before reducing
    u32 lead = b.back();
    if (lead != 1) {
      // lead^{-1} mod p via Fermat
      u64 inv = 1, base = lead, e = p - 2;
      while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
      }
      for (auto& c : b) c = static_cast<u32>(c * inv % p);
    }
    auto r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Full irreducibility test for monic f of degree r over GF(p):
// f | x^{p^r} - x, and gcd(x^{p^{r/l}} - x, f) = 1 for every prime l | r.
inline bool poly_irreducible(const std::vector<u32>& f, u32 p) {
  u32 r = static_cast<u32>(f.size()) - 1;
  if (r == 0) return false;
  if (r == 1) return true;
  auto frob_iter = [&](u32 k) {
    // x^{p^k} mod f
    std::vector<u32> t{0, 1};
    for (u32 i = 0; i < k; ++i) t = poly_powmod(t, p, f, p);
    return t;
  };
  auto xqr = frob_iter(r);
  if (!(xqr.size() == 2 && xqr[0] == 0 && xqr[1] == 1)) return false;  // x^{p^r} != x
  for (u32 l = 2; l <= r; ++l) {
    if (r % l != 0 || !is_prime_u64(l)) continue;
    auto t = frob_iter(r / l);
    // t - x
    std::vector<u32> d = t;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    poly_trim(d);
    auto g = poly_gcd(f, d, p);
    if (!(g.size() == 1)) return false;
  }
  return true;
}

}  // namespace detail

/// Arithmetic context for GF(p^r). Elements are packed codes in [0, q):
/// code = sum coeffs[i] * p^i for the coefficient vector of the residue-class
/// representative (constant term first). Multiplication runs on log/exp
/// tables built once at construction; the tables are an optimization only
/// and never change semantics. Immutable after construction; concurrent
/// reads are safe.
class FieldCtx {
 public:
  FieldCtx(u32 p, u32 r, std::vector<u32> modulus = {}) : p_(p), r_(r) {
    if (!detail::is_prime_u64(p)) throw domain_error("FieldCtx: p is not prime: " + std::to_string(p));
    if (r < 1) throw domain_error("FieldCtx: extension degree must be >= 1");
    u64 q = 1;
    for (u32 i = 0; i < r; ++i) {
      q *= p;
      if (q > 59049) throw domain_error("FieldCtx: p^r exceeds supported bound 3^10");
    }
    q_ = static_cast<u32>(q);
    if (modulus.empty()) {
      modulus_ = default_modulus(p, r);
    } else {
      if (modulus.size() != r + 1 || modulus[r] != 1)
        throw domain_error("FieldCtx: modulus must be monic of degree r");
      for (auto& c : modulus) c %= p;
      if (!detail::poly_irreducible(modulus, p))
        throw domain_error("FieldCtx: modulus is reducible over GF(p)");
      modulus_ = std::move(modulus);
    }
    build_tables();
  }

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  u32 p() const { return p_; }
  u32 r() const { return r_; }
  u32 q() const { return q_; }
  const std::vector<u32>& modulus() const { return modulus_; }

  u32 add(u32 a, u32 b) const {
    if (r_ == 1) return (a + b) % p_;
    if (p_ == 2) return a ^ b;
    u32 out = 0, mul = 1;
    for (u32 i = 0; i < r_; ++i) {
      out += (a % p_ + b % p_) % p_ * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return out;
  }

  u32 neg(u32 a) const {
    if (p_ == 2) return a;
    if (r_ == 1) return (p_ - a) % p_;
    u32 out = 0, mul = 1;
    for (u32 i = 0; i < r_; ++i) {
      out += (p_ - a % p_) % p_ * mul;
      a /= p_;
      mul *= p_;
    }
    return out;
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  u32 mul(u32 a, u32 b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  u32 inv(u32 a) const {
    if (a == 0) throw domain_error("FieldCtx::inv(0)");
    return exp_[(q_ - 1) - log_[a]];
  }

  u32 pow(u32 a, u64 e) const {
    if (a == 0) return e == 0 ? 1u : 0u;
    return exp_[u64(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
  }

  /// a^{p^i}; i taken mod r.
  u32 frobenius(u32 a, u32 i) const {
    if (a == 0) return 0;
    return exp_[u64(log_[a]) * frob_exp_[i % r_] % (q_ - 1)];
  }

  /// Trace to the prime field, returned as a residue in [0, p).
  u32 trace(u32 a) const { return trace_[a]; }

  /// Scalar multiplication by a prime-field residue.
  u32 scale(u32 c, u32 a) const { return mul(c % p_, a); }

  /// True iff a = y^2 for some y (0 counts as a square). Odd p only.
  bool is_square(u32 a) const {
    if (p_ == 2) throw domain_error("is_square: meaningless in characteristic 2 (every element is one)");
    if (a == 0) return true;
    return (log_[a] & 1) == 0;
  }

  /// First nonsquare in element enumeration order (odd p).
  u32 first_nonsquare() const {
    for (u32 a = 1; a < q_; ++a)
      if (!is_square(a)) return a;
    throw domain_error("first_nonsquare: field has no nonsquares");  // unreachable for odd p
  }

  u32 inv2() const {
    if (p_ == 2) throw domain_error("inv2: characteristic 2");
    return inv2_;
  }

  u32 generator() const { return gen_; }

  bool in_prime_field(u32 a) const { return a < p_; }

  std::vector<u32> coeffs(u32 code) const {
    std::vector<u32> c(r_);
    for (u32 i = 0; i < r_; ++i) {
      c[i] = code % p_;
      code /= p_;
    }
    return c;
  }

  u32 from_coeffs(const std::vector<u32>& c) const {
    if (c.size() > r_) {
      for (size_t i = r_; i < c.size(); ++i)
        if (c[i] % p_) throw domain_error("element coefficients exceed degree r");
    }
    u32 code = 0, mul = 1;
    for (u32 i = 0; i < r_ && i < c.size(); ++i) {
      code += c[i] % p_ * mul;
      mul *= p_;
    }
    return code;
  }

  std::string show(u32 code) const {
    auto c = coeffs(code);
    std::ostringstream os;
    os << "[";
    for (u32 i = 0; i < r_; ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
  }

  /// Lexicographically smallest monic irreducible of degree r, coefficients
  /// compared low-degree-first. Degree 1 yields x.
  static std::vector<u32> default_modulus(u32 p, u32 r) {
    u64 total = 1;
    for (u32 i = 0; i < r; ++i) total *= p;
    for (u64 k = 0; k < total; ++k) {
      std::vector<u32> f(r + 1, 0);
      f[r] = 1;
      u64 t = k;
      for (u32 i = 0; i < r; ++i) {  // c0 varies slowest
        f[r - 1 - i] = static_cast<u32>(t % p);
        t /= p;
      }
      if (detail::poly_irreducible(f, p)) return f;
    }
    throw domain_error("default_modulus: no irreducible found");  // unreachable
  }

 private:
  void build_tables() {
    // generator search: first code whose multiplicative order is q-1
    log_.assign(q_, 0);
    exp_.assign(2 * (q_ - 1 ? q_ - 1 : 1), 1);
    if (q_ == 2) {
      gen_ = 1;
      exp_ = {1, 1};
      log_[1] = 0;
    } else {
      for (u32 g = 2; g < q_ && gen_ == 0; ++g) {
        u32 x = 1, steps = 0;
        bool ok = true;
        std::vector<u32> seen;
        seen.reserve(q_ - 1);
        do {
          seen.push_back(x);
          x = poly_mul_code(x, g);
          ++steps;
          if (x == 1 && steps < q_ - 1) {
            ok = false;
            break;
          }
        } while (steps < q_ - 1);
        if (ok && x == 1) {
          gen_ = g;
          for (u32 i = 0; i < q_ - 1; ++i) {
            exp_[i] = seen[i];
            exp_[i + (q_ - 1)] = seen[i];
            log_[seen[i]] = i;
          }
        }
      }
      if (gen_ == 0) throw domain_error("generator search failed");
    }
    frob_exp_.assign(r_, 1);
    for (u32 i = 1; i < r_; ++i) frob_exp_[i] = frob_exp_[i - 1] * p_ % (q_ - 1);
    trace_.assign(q_, 0);
    for (u32 a = 0; a < q_; ++a) {
      u32 s = 0;
      for (u32 i = 0; i < r_; ++i) s = add(s, frobenius(a, i));
      if (!in_prime_field(s)) throw domain_error("trace landed outside the prime field");
      trace_[a] = s;
    }
    if (p_ != 2) {
      // inverse of 2 mod p, embedded as a prime-field code
      u64 inv = 1, base = 2, e = p_ - 2;
      while (e) {
        if (e & 1) inv = inv * base % p_;
        base = base * base % p_;
        e >>= 1;
      }
      inv2_ = static_cast<u32>(inv);
    }
  }

  // code-level polynomial multiplication, used only while building tables
  u32 poly_mul_code(u32 a, u32 b) const {
    auto pa = coeffs(a), pb = coeffs(b);
    auto prod = detail::poly_mul(pa, pb, p_);
    prod = detail::poly_mod(std::move(prod), modulus_, p_);
    prod.resize(r_, 0);
    return from_coeffs(prod);
  }

  u32 p_, r_, q_;
  std::vector<u32> modulus_;
  std::vector<u32> exp_, log_, trace_, frob_exp_;
  u32 gen_ = 0, inv2_ = 0;
};

/// Interned field contexts: the same (p, r, modulus) triple always names the
/// same immutable context, so objects holding a FieldCtx pointer stay valid
/// for the process lifetime.
inline const FieldCtx& get_field(u32 p, u32 r, const std::vector<u32>& modulus = {}) {
  static std::mutex mu;
  static std::map<std::tuple<u32, u32, std::vector<u32>>, std::unique_ptr<FieldCtx>> pool;
  std::lock_guard<std::mutex> lock(mu);
  std::vector<u32> key_mod = modulus;
  if (!key_mod.empty() && key_mod == FieldCtx::default_modulus(p, r)) key_mod.clear();
  auto key = std::make_tuple(p, r, key_mod);
  auto it = pool.find(key);
  if (it == pool.end()) it = pool.emplace(std::move(key), std::make_unique<FieldCtx>(p, r, key_mod)).first;
  return *it->second;
}

/// Field context for a prime-power order q with the default modulus.
inline const FieldCtx& get_field_q(u64 q) {
  for (u32 p = 2; p <= q; ++p) {
    if (!detail::is_prime_u64(p)) continue;
    u64 t = q;
    u32 r = 0;
    while (t % p == 0) {
      t /= p;
      ++r;
    }
    if (t == 1 && r >= 1) return get_field(p, r);
    if (q % p == 0) break;
  }
  throw domain_error("not a prime power: " + std::to_string(q));
}

/// Point space V = F or V = F + F with the dot form. Point codes pack the
/// coordinates as x + q*y. All operations are componentwise except dot().
class VSpace {
 public:
  VSpace(const FieldCtx& F, u32 ncoords) : F_(&F), k_(ncoords) {
    if (ncoords != 1 && ncoords != 2) throw domain_error("VSpace: 1 or 2 coordinates");
    size_ = ncoords == 1 ? F.q() : F.q() * F.q();
  }

  const FieldCtx& field() const { return *F_; }
  u32 ncoords() const { return k_; }
  u32 size() const { return size_; }
  u32 dim_p() const { return k_ * F_->r(); }  // GF(p) dimension r'

  u32 coord(u32 pt, u32 i) const { return i == 0 ? pt % F_->q() : pt / F_->q(); }
  u32 make(u32 x) const { return x; }
  u32 make2(u32 x, u32 y) const { return k_ == 1 ? x : x + F_->q() * y; }

  u32 add(u32 a, u32 b) const {
    if (k_ == 1) return F_->add(a, b);
    u32 q = F_->q();
    return F_->add(a % q, b % q) + q * F_->add(a / q, b / q);
  }

  u32 neg(u32 a) const {
    if (k_ == 1) return F_->neg(a);
    u32 q = F_->q();
    return F_->neg(a % q) + q * F_->neg(a / q);
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  /// Componentwise scaling by a field element.
  u32 fscale(u32 s, u32 a) const {
    if (k_ == 1) return F_->mul(s, a);
    u32 q = F_->q();
    return F_->mul(s, a % q) + q * F_->mul(s, a / q);
  }

  /// The usual dot product; result is a field element.
  u32 dot(u32 a, u32 b) const {
    if (k_ == 1) return F_->mul(a, b);
    u32 q = F_->q();
    return F_->add(F_->mul(a % q, b % q), F_->mul(a / q, b / q));
  }

  /// tr(dot(a, b)) as a prime-field residue; the workhorse of phase tables.
  u32 trdot(u32 a, u32 b) const { return F_->trace(dot(a, b)); }

  /// GF(p) coordinates of a point (length dim_p, low coordinate first).
  void gfp_coords(u32 pt, u8* out) const {
    u32 p = F_->p();
    for (u32 c = 0; c < k_; ++c) {
      u32 x = coord(pt, c);
      for (u32 i = 0; i < F_->r(); ++i) {
        out[c * F_->r() + i] = static_cast<u8>(x % p);
        x /= p;
      }
    }
  }

  u32 from_gfp(const u8* in) const {
    u32 x0 = 0, x1 = 0;
    for (u32 i = F_->r(); i-- > 0;) x0 = x0 * F_->p() + in[i];
    if (k_ == 2)
      for (u32 i = F_->r(); i-- > 0;) x1 = x1 * F_->p() + in[F_->r() + i];
    return make2(x0, x1);
  }

  /// GF(p)-basis points e_0 .. e_{r'-1}.
  u32 basis_point(u32 i) const {
    u32 p = F_->p(), r = F_->r();
    u32 c = i / r, d = i % r;
    u32 x = 1;
    for (u32 t = 0; t < d; ++t) x *= p;
    return c == 0 ? make2(x, 0) : make2(0, x);
  }

  std::string show(u32 pt) const {
    if (k_ == 1) return F_->show(pt);
    return "(" + F_->show(coord(pt, 0)) + "," + F_->show(coord(pt, 1)) + ")";
  }

 private:
  const FieldCtx* F_;
  u32 k_, size_;
};

}  // namespace mubforge
