#pragma once

#include "ff.hpp"

namespace mubforge {

/// Arithmetic context for the Galois ring GR(4^r), the degree-r unramified
/// extension of Z_4. Elements are packed codes in [0, 4^r): code =
/// sum coeffs[i] * 4^i with coefficients mod 4. The basic modulus is the
/// Hensel lift of the companion GF(2^r) modulus, so reduction mod 2 is a
/// surjective ring morphism onto that field with kernel 2R. Immutable after
/// construction.
class RingCtx {
 public:
  explicit RingCtx(const FieldCtx& field) : F_(&field), r_(field.r()) {
    if (field.p() != 2) throw domain_error("RingCtx: companion field must have characteristic 2");
    if (r_ > 8) throw domain_error("RingCtx: degree above 8 not supported");
    size_ = 1;
    for (u32 i = 0; i < r_; ++i) size_ *= 4;
    hensel_lift();
    build_tables();
  }

  RingCtx(const RingCtx&) = delete;
  RingCtx& operator=(const RingCtx&) = delete;

  const FieldCtx& field() const { return *F_; }
  u32 r() const { return r_; }
  u32 size() const { return size_; }
  const std::vector<u32>& basic_modulus() const { return modulus_; }

  u32 add(u32 a, u32 b) const {
    u32 out = 0, shift = 0;
    for (u32 i = 0; i < r_; ++i, shift += 2) out |= (((a >> shift) + (b >> shift)) & 3u) << shift;
    return out;
  }

  u32 neg(u32 a) const {
    u32 out = 0, shift = 0;
    for (u32 i = 0; i < r_; ++i, shift += 2) out |= ((4 - ((a >> shift) & 3u)) & 3u) << shift;
    return out;
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  u32 mul(u32 a, u32 b) const {
    // schoolbook polynomial product mod (basic modulus, 4)
    u32 acc[16] = {0};
    for (u32 i = 0; i < r_; ++i) {
      u32 ai = (a >> (2 * i)) & 3u;
      if (!ai) continue;
      for (u32 j = 0; j < r_; ++j) {
        u32 bj = (b >> (2 * j)) & 3u;
        if (bj) acc[i + j] += ai * bj;
      }
    }
    for (u32 d = 2 * r_ - 2; d + 1 > r_; --d) {
      u32 lead = acc[d] & 3u;
      if (lead) {
        u32 shift = d - r_;
        for (u32 i = 0; i < r_; ++i) acc[shift + i] += (4 - modulus_[i]) * lead;
      }
      acc[d] = 0;
    }
    u32 out = 0;
    for (u32 i = 0; i < r_; ++i) out |= (acc[i] & 3u) << (2 * i);
    return out;
  }

  u32 scale(u32 c, u32 a) const {  // c in Z_4
    u32 out = 0;
    for (u32 k = 0; k < (c & 3u); ++k) out = add(out, a);
    return out;
  }

  /// Reduction mod 2R onto the companion field (coefficientwise mod 2).
  u32 reduce(u32 a) const {
    u32 out = 0;
    for (u32 i = 0; i < r_; ++i) out |= (((a >> (2 * i)) & 1u) << i);
    return out;
  }

  /// Naive coefficientwise lift (not the Teichmueller lift).
  u32 embed(u32 field_code) const {
    u32 out = 0;
    for (u32 i = 0; i < r_; ++i) out |= ((field_code >> i) & 1u) << (2 * i);
    return out;
  }

  bool is_unit(u32 a) const { return reduce(a) != 0; }

  /// The Teichmueller lift: the unique x with x = u mod 2R and x^{2^r} = x.
  u32 lift(u32 field_code) const { return teich_[field_code]; }

  bool in_teichmuller(u32 a) const { return lift(reduce(a)) == a; }

  /// x = a + 2b with a, b Teichmueller representatives.
  std::pair<u32, u32> decompose(u32 x) const {
    u32 a = lift(reduce(x));
    u32 diff = sub(x, a);  // all coefficients even
    u32 half = 0;
    for (u32 i = 0; i < r_; ++i) half |= (((diff >> (2 * i)) & 3u) >> 1) << i;
    u32 b = lift(half);
    return {a, b};
  }

  /// Ring trace to Z_4 via the Teichmueller coordinates.
  u32 trace(u32 x) const { return trace_[x]; }

  /// Square root within the Teichmueller set: the unique t there with t^2 = x.
  u32 sqrt_teich(u32 x) const {
    if (!in_teichmuller(x)) throw domain_error("sqrt_teich: argument not in the Teichmueller set");
    u32 t = x;
    for (u32 i = 0; i + 1 < r_; ++i) t = mul(t, t);
    return t;
  }

  u32 two() const { return scale(2, mul_identity()); }
  u32 mul_identity() const { return 1; }

  /// Ring Frobenius a + 2b -> a^2 + 2b^2 on Teichmueller coordinates.
  u32 frobenius(u32 x) const {
    auto [a, b] = decompose(x);
    return add(mul(a, a), scale(2, mul(b, b)));
  }

  /// Evaluates sum_{i,j} lift(c[i][j]) * x^{2^i} * y^{2^j} for a coefficient
  /// matrix over the companion field and field arguments x, y. This is the
  /// Teichmueller extension of a bilinear product in coefficient form.
  u32 lifted_bilinear(const std::vector<std::vector<u32>>& c, u32 x_field, u32 y_field) const {
    u32 xs[16], ys[16];
    xs[0] = lift(x_field);
    ys[0] = lift(y_field);
    for (u32 i = 1; i < r_; ++i) {
      xs[i] = mul(xs[i - 1], xs[i - 1]);
      ys[i] = mul(ys[i - 1], ys[i - 1]);
    }
    u32 acc = 0;
    for (u32 i = 0; i < r_; ++i)
      for (u32 j = 0; j < r_; ++j) {
        if (!c[i][j]) continue;
        acc = add(acc, mul(lift(c[i][j]), mul(xs[i], ys[j])));
      }
    return acc;
  }

  std::vector<u32> coeffs(u32 code) const {
    std::vector<u32> out(r_);
    for (u32 i = 0; i < r_; ++i) out[i] = (code >> (2 * i)) & 3u;
    return out;
  }

  u32 from_coeffs(const std::vector<u32>& c) const {
    u32 code = 0;
    for (u32 i = 0; i < r_ && i < c.size(); ++i) code |= (c[i] & 3u) << (2 * i);
    return code;
  }

 private:
  void hensel_lift() {
    // Graeffe step over Z_4: h(y) from the even part of f(x) * f(-x), iterated
    // until the coefficients stabilize. The stable polynomial is the unique
    // monic lift whose roots satisfy x^{2^r} = x.
    const auto& f = F_->modulus();
    std::vector<u32> h(f.begin(), f.end());  // 0/1 coefficients as Z_4
    for (u32 iter = 0; iter < r_ + 2; ++iter) {
      // g(x) = h(x), gm(x) = h(-x) over Z_4
      std::vector<u32> gm(h);
      for (u32 i = 1; i <= r_; i += 2) gm[i] = (4 - gm[i]) & 3u;
      std::vector<u32> prod(2 * r_ + 1, 0);
      for (u32 i = 0; i <= r_; ++i)
        for (u32 j = 0; j <= r_; ++j) prod[i + j] = (prod[i + j] + h[i] * gm[j]) & 3u;
      std::vector<u32> next(r_ + 1);
      for (u32 i = 0; i <= r_; ++i) next[i] = prod[2 * i];
      if (next[r_] != 1) {  // normalize monic (leading term is +-1)
        for (auto& c : next) c = (4 - c) & 3u;
      }
      if (next == h) break;
      h = std::move(next);
    }
    // reduction mod 2 must reproduce the field modulus
    for (u32 i = 0; i <= r_; ++i)
      if ((h[i] & 1u) != F_->modulus()[i]) throw domain_error("Hensel lift failed to reduce to the field modulus");
    modulus_ = std::move(h);
  }

  void build_tables() {
    teich_.assign(F_->q(), 0);
    for (u32 u = 0; u < F_->q(); ++u) {
      u32 y = embed(u);
      for (u32 i = 0; i < r_; ++i) y = mul(y, y);  // y^{2^r}
      // already a fixed point of t -> t^{2^r}; assert the defining properties
      u32 check = y;
      for (u32 i = 0; i < r_; ++i) check = mul(check, check);
      if (check != y || reduce(y) != u) throw domain_error("Teichmueller lift construction failed");
      teich_[u] = y;
    }
    trace_.assign(size_, 0);
    for (u32 x = 0; x < size_; ++x) {
      auto [a, b] = decompose(x);
      u32 sa = 0, sb = 0, pa = a, pb = b;
      for (u32 i = 0; i < r_; ++i) {
        sa = add(sa, pa);
        sb = add(sb, pb);
        pa = mul(pa, pa);
        pb = mul(pb, pb);
      }
      u32 total = add(sa, scale(2, sb));
      for (u32 i = 1; i < r_; ++i)
        if ((total >> (2 * i)) & 3u) throw domain_error("ring trace landed outside Z_4");
      trace_[x] = total & 3u;
    }
  }

  const FieldCtx* F_;
  u32 r_, size_;
  std::vector<u32> modulus_;  // length r+1 over Z_4, monic
  std::vector<u32> teich_, trace_;
};

/// Interned ring contexts keyed by the companion field.
inline const RingCtx& get_ring(const FieldCtx& field) {
  static std::mutex mu;
  static std::map<const FieldCtx*, std::unique_ptr<RingCtx>> pool;
  std::lock_guard<std::mutex> lock(mu);
  auto it = pool.find(&field);
  if (it == pool.end()) it = pool.emplace(&field, std::make_unique<RingCtx>(field)).first;
  return *it->second;
}

}  // namespace mubforge
