#pragma once

#include <numeric>
#include <optional>
#include <sstream>

#include "core.hpp"

namespace mubforge {

/// Exact element of Z[zeta_m] for m an odd prime or m = 4. Coefficients are
/// kept in canonical form: for prime m the coefficient of zeta^{m-1} is
/// cleared using 1 + zeta + ... + zeta^{m-1} = 0; for m = 4 the value is
/// reduced to a + b*zeta with zeta^2 = -1. Canonical vectors are unique per
/// algebraic number, so equality is coefficient equality. All arithmetic is
/// overflow-checked 64-bit.
class CycloInt {
 public:
  explicit CycloInt(u32 m) : m_(m), c_(m, 0) { check_order(m); }

  CycloInt(u32 m, std::vector<i64> coeffs) : m_(m), c_(std::move(coeffs)) {
    check_order(m);
    c_.resize(m_, 0);
    canonicalize();
  }

  static CycloInt integer(u32 m, i64 v) {
    CycloInt z(m);
    z.c_[0] = v;
    z.canonicalize();
    return z;
  }

  static CycloInt zeta_pow(u32 m, u64 k) {
    CycloInt z(m);
    z.c_[k % m] = 1;
    z.canonicalize();
    return z;
  }

  u32 order() const { return m_; }
  const std::vector<i64>& coeffs() const { return c_; }

  bool operator==(const CycloInt& o) const { return m_ == o.m_ && c_ == o.c_; }
  bool operator!=(const CycloInt& o) const { return !(*this == o); }

  bool is_zero() const {
    for (i64 v : c_)
      if (v) return false;
    return true;
  }

  CycloInt operator+(const CycloInt& o) const {
    same_order(o);
    CycloInt z(m_);
    for (u32 k = 0; k < m_; ++k) z.c_[k] = checked_add(c_[k], o.c_[k]);
    z.canonicalize();
    return z;
  }

  CycloInt operator-() const {
    CycloInt z(m_);
    for (u32 k = 0; k < m_; ++k) z.c_[k] = -c_[k];
    z.canonicalize();
    return z;
  }

  CycloInt operator-(const CycloInt& o) const { return *this + (-o); }

  CycloInt operator*(const CycloInt& o) const {
    same_order(o);
    CycloInt z(m_);
    for (u32 i = 0; i < m_; ++i) {
      if (!c_[i]) continue;
      for (u32 j = 0; j < m_; ++j) {
        if (!o.c_[j]) continue;
        u32 k = (i + j) % m_;
        z.c_[k] = checked_add(z.c_[k], checked_mul(c_[i], o.c_[j]));
      }
    }
    z.canonicalize();
    return z;
  }

  /// Complex conjugation zeta -> zeta^{-1}.
  CycloInt conj() const {
    CycloInt z(m_);
    for (u32 k = 0; k < m_; ++k) z.c_[(m_ - k) % m_] = c_[k];
    z.canonicalize();
    return z;
  }

  CycloInt abs_squared() const { return *this * conj(); }

  /// Apply the Galois substitution zeta -> zeta^a, gcd(a, m) = 1.
  CycloInt galois(u32 a) const {
    if (std::gcd(a, m_) != 1) throw domain_error("galois: exponent not coprime to order");
    CycloInt z(m_);
    for (u32 k = 0; k < m_; ++k) z.c_[u64(k) * a % m_] = checked_add(z.c_[u64(k) * a % m_], c_[k]);
    z.canonicalize();
    return z;
  }

  /// The rational-integer value when the canonical form is constant.
  std::optional<i64> as_integer() const {
    for (u32 k = 1; k < m_; ++k)
      if (c_[k]) return std::nullopt;
    return c_[0];
  }

  std::string show() const {
    std::ostringstream os;
    bool any = false;
    for (u32 k = 0; k < m_; ++k) {
      if (!c_[k]) continue;
      if (any) os << (c_[k] > 0 ? "+" : "");
      os << c_[k];
      if (k) os << "z^" << k;
      any = true;
    }
    if (!any) os << "0";
    return os.str();
  }

 private:
  static void check_order(u32 m) {
    if (m == 4) return;
    if (m >= 2 && detail_is_prime(m)) return;
    throw domain_error("CycloInt: root order must be prime or 4");
  }

  static bool detail_is_prime(u32 n) {
    if (n < 2) return false;
    for (u32 d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  void same_order(const CycloInt& o) const {
    if (m_ != o.m_) throw domain_error("CycloInt: mixed root orders");
  }

  void canonicalize() {
    if (m_ == 4) {
      c_[0] = checked_add(c_[0], -c_[2]);
      c_[1] = checked_add(c_[1], -c_[3]);
      c_[2] = c_[3] = 0;
    } else {
      i64 last = c_[m_ - 1];
      if (last)
        for (u32 k = 0; k < m_; ++k) c_[k] = checked_add(c_[k], -last);
    }
  }

  u32 m_;
  std::vector<i64> c_;
};

/// Builds sum_k counts[k] * zeta^k from residue-class counts. This is the
/// verification fast path: inner products of exponent vectors reduce to a
/// histogram of exponent differences.
inline CycloInt cyclo_from_counts(u32 m, const i64* counts) {
  std::vector<i64> c(counts, counts + m);
  return CycloInt(m, std::move(c));
}

}  // namespace mubforge
