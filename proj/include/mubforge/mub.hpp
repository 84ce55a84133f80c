#pragma once

#include <chrono>
#include <cmath>

#include "cyclo.hpp"
#include "spread.hpp"

namespace mubforge {

/// One basis of C^n: either the standard basis or an n x n table of
/// exponents in Z_m (row = vector index, column = point), with implied
/// global scale 1/sqrt(n). Unnormalized self inner products are exactly n.
struct MubBasis {
  bool standard = false;
  u32 n = 0, m = 0;
  std::vector<u16> table;  // row-major, n*n entries in [0, m)
  std::string label;
};

struct MubSet {
  u32 n = 0, m = 0;
  std::vector<MubBasis> bases;
  std::string provenance;
};

/// Row access to a basis family without materializing tables; constructions
/// with n = 3^10 are verified through this interface.
class MubSource {
 public:
  virtual ~MubSource() = default;
  virtual u32 n() const = 0;
  virtual u32 root_order() const = 0;
  virtual u32 num_bases() const = 0;
  virtual bool is_standard(u32 b) const = 0;
  virtual void row(u32 b, u32 v, u16* out) const = 0;
  virtual std::string label(u32 b) const = 0;
  virtual std::string provenance() const = 0;
};

class MubSetSource final : public MubSource {
 public:
  explicit MubSetSource(const MubSet& ms) : ms_(&ms) {}
  u32 n() const override { return ms_->n; }
  u32 root_order() const override { return ms_->m; }
  u32 num_bases() const override { return static_cast<u32>(ms_->bases.size()); }
  bool is_standard(u32 b) const override { return ms_->bases[b].standard; }
  void row(u32 b, u32 v, u16* out) const override {
    const auto& t = ms_->bases[b].table;
    std::copy(t.begin() + u64(v) * ms_->n, t.begin() + u64(v + 1) * ms_->n, out);
  }
  std::string label(u32 b) const override { return ms_->bases[b].label; }
  std::string provenance() const override { return ms_->provenance; }

 private:
  const MubSet* ms_;
};

/// Generated family: basis 0 is standard, bases 1..n are exponent tables
/// produced row by row.
class GenMub final : public MubSource {
 public:
  GenMub(u32 n, u32 m, std::vector<std::string> labels, std::string provenance,
         std::function<void(u32 basis, u32 v, u16* out)> gen)
      : n_(n), m_(m), labels_(std::move(labels)), prov_(std::move(provenance)), gen_(std::move(gen)) {}

  u32 n() const override { return n_; }
  u32 root_order() const override { return m_; }
  u32 num_bases() const override { return static_cast<u32>(labels_.size()); }
  bool is_standard(u32 b) const override { return b == 0; }
  void row(u32 b, u32 v, u16* out) const override {
    if (b == 0) throw domain_error("standard basis has no exponent rows");
    gen_(b - 1, v, out);
  }
  std::string label(u32 b) const override { return labels_[b]; }
  std::string provenance() const override { return prov_; }

 private:
  u32 n_, m_;
  std::vector<std::string> labels_;
  std::string prov_;
  std::function<void(u32, u32, u16*)> gen_;
};

inline MubSet materialize(const MubSource& src, u32 max_n = 4096) {
  if (src.n() > max_n) throw domain_error("materialize: dimension " + std::to_string(src.n()) + " above cap");
  MubSet out;
  out.n = src.n();
  out.m = src.root_order();
  out.provenance = src.provenance();
  for (u32 b = 0; b < src.num_bases(); ++b) {
    MubBasis basis;
    basis.n = out.n;
    basis.m = out.m;
    basis.label = src.label(b);
    basis.standard = src.is_standard(b);
    if (!basis.standard) {
      basis.table.resize(u64(out.n) * out.n);
      for (u32 v = 0; v < out.n; ++v) src.row(b, v, basis.table.data() + u64(v) * out.n);
    }
    out.bases.push_back(std::move(basis));
  }
  return out;
}

// ---------------------------------------------------------------------------
// builders

/// Odd characteristic, symplectic presemifield s on V:
///   B_m rows t(w) = tr(1/2 w.(w o m) + v.w) in Z_p.
inline GenMub build_odd_symplectic(const Presemifield& s) {
  const FieldCtx& F = *s.F;
  detail::require(F.p() != 2, "build_odd_symplectic: odd characteristic only");
  detail::require(s.claim_symplectic, "build_odd_symplectic: input is not marked symplectic");
  VSpace V = s.space();
  u32 n = V.size(), p = F.p(), half = F.inv2();
  std::vector<std::string> labels{"inf"};
  for (u32 m = 0; m < n; ++m) labels.push_back("m=" + std::to_string(m));
  Presemifield prod = s;
  return GenMub(n, p, std::move(labels), "odd-symplectic: " + s.name,
                [prod, V, n, half](u32 m, u32 v, u16* out) {
                  const FieldCtx& f = V.field();
                  for (u32 w = 0; w < n; ++w) {
                    u32 t = f.trace(f.mul(half, V.dot(w, prod.product(w, m))));
                    out[w] = static_cast<u16>((t + V.trdot(v, w)) % f.p());
                  }
                });
}

/// Odd characteristic, planar f on F: B_m rows t(w) = tr(1/2 m f(w) + v w).
inline GenMub build_odd_planar(const PlanarFn& f) {
  const FieldCtx& F = *f.F;
  detail::require(F.p() != 2, "build_odd_planar: odd characteristic only");
  u32 n = F.q(), p = F.p(), half = F.inv2();
  auto fx = std::make_shared<std::vector<u32>>(n);
  for (u32 x = 0; x < n; ++x) (*fx)[x] = f.eval(x);
  std::vector<std::string> labels{"inf"};
  for (u32 m = 0; m < n; ++m) labels.push_back("m=" + std::to_string(m));
  const FieldCtx* Fp = &F;
  return GenMub(n, p, std::move(labels), "odd-planar: " + f.name,
                [Fp, fx, n, half](u32 m, u32 v, u16* out) {
                  const FieldCtx& fld = *Fp;
                  for (u32 w = 0; w < n; ++w) {
                    u32 t = fld.trace(fld.mul(fld.mul(half, m), (*fx)[w]));
                    out[w] = static_cast<u16>((t + fld.trace(fld.mul(v, w))) % fld.p());
                  }
                });
}

/// Characteristic 2, symplectic presemifield in coefficient form:
///   B_m rows t(w) = Tr(w^.(w^ o m^) + 2 w^ v^) in Z_4, hats the
/// Teichmueller lifts.
inline GenMub build_even_symplectic(const Presemifield& s) {
  const FieldCtx& F = *s.F;
  detail::require(F.p() == 2, "build_even_symplectic: characteristic 2 only");
  detail::require(s.ncoords == 1 && s.has_coeff_form(),
                  "build_even_symplectic: needs the coefficient form on V = F (table-only input not liftable)");
  detail::require(s.claim_symplectic, "build_even_symplectic: input is not marked symplectic");
  const RingCtx& R = get_ring(F);
  u32 n = F.q();
  std::vector<std::string> labels{"inf"};
  for (u32 m = 0; m < n; ++m) labels.push_back("m=" + std::to_string(m));
  auto coeff = std::make_shared<std::vector<std::vector<u32>>>(s.coeff);
  const RingCtx* Rp = &R;
  return GenMub(n, 4, std::move(labels), "even-symplectic: " + s.name,
                [Rp, coeff, n](u32 m, u32 v, u16* out) {
                  const RingCtx& ring = *Rp;
                  u32 vhat = ring.lift(v);
                  for (u32 w = 0; w < n; ++w) {
                    u32 what = ring.lift(w);
                    u32 t = ring.mul(what, ring.lifted_bilinear(*coeff, w, m));
                    t = ring.add(t, ring.scale(2, ring.mul(what, vhat)));
                    out[w] = static_cast<u16>(ring.trace(t));
                  }
                });
}

/// Characteristic 2, commutative presemifield in symmetric form:
///   B_m rows t(w) = Tr(m^ (w^ * w^) + 2 w^ v^), with the product lifted
/// termwise to the Teichmueller set.
inline GenMub build_even_commutative(const Presemifield& c) {
  const FieldCtx& F = *c.F;
  detail::require(F.p() == 2, "build_even_commutative: characteristic 2 only");
  detail::require(c.ncoords == 1 && c.has_sym, "build_even_commutative: needs the symmetric coefficient form");
  const RingCtx& R = get_ring(F);
  u32 n = F.q(), r = F.r();
  std::vector<std::string> labels{"inf"};
  for (u32 m = 0; m < n; ++m) labels.push_back("m=" + std::to_string(m));
  auto sym = std::make_shared<std::vector<u32>>(c.sym);
  const RingCtx* Rp = &R;
  return GenMub(n, 4, std::move(labels), "even-commutative: " + c.name,
                [Rp, sym, n, r](u32 m, u32 v, u16* out) {
                  const RingCtx& ring = *Rp;
                  u32 mhat = ring.lift(m);
                  u32 vhat = ring.lift(v);
                  for (u32 w = 0; w < n; ++w) {
                    u32 pw[16];
                    pw[0] = ring.lift(w);
                    for (u32 i = 1; i < r; ++i) pw[i] = ring.mul(pw[i - 1], pw[i - 1]);
                    u32 square = 0;
                    for (u32 i = 0; i < r; ++i) {
                      if (u32 s = (*sym)[i * r + i]) {
                        u32 term = ring.mul(ring.lift(s), ring.mul(pw[i], pw[i]));
                        square = ring.add(square, term);
                      }
                      for (u32 jj = i + 1; jj < r; ++jj)
                        if (u32 s = (*sym)[i * r + jj]) {
                          u32 term = ring.mul(ring.lift(s), ring.mul(pw[i], pw[jj]));
                          square = ring.add(square, ring.scale(2, term));
                        }
                    }
                    u32 t = ring.mul(mhat, square);
                    t = ring.add(t, ring.scale(2, ring.mul(pw[0], vhat)));
                    out[w] = static_cast<u16>(ring.trace(t));
                  }
                });
}

/// Characteristic 2, pseudo-planar f:
///   B_m rows t(w) = Tr(m^ (w^2 + 2 f(w)^) + 2 v^ w^).
inline GenMub build_pseudoplanar(const PlanarFn& f) {
  const FieldCtx& F = *f.F;
  detail::require(F.p() == 2, "build_pseudoplanar: characteristic 2 only");
  detail::require(pseudo_planar_test(f).passed(), "build_pseudoplanar: input fails the pseudo-planar test");
  const RingCtx& R = get_ring(F);
  u32 n = F.q();
  auto fx = std::make_shared<std::vector<u32>>(n);
  for (u32 x = 0; x < n; ++x) (*fx)[x] = f.eval(x);
  std::vector<std::string> labels{"inf"};
  for (u32 m = 0; m < n; ++m) labels.push_back("m=" + std::to_string(m));
  const RingCtx* Rp = &R;
  return GenMub(n, 4, std::move(labels), "pseudo-planar: " + f.name,
                [Rp, fx, n](u32 m, u32 v, u16* out) {
                  const RingCtx& ring = *Rp;
                  u32 mhat = ring.lift(m);
                  u32 vhat = ring.lift(v);
                  for (u32 w = 0; w < n; ++w) {
                    u32 what = ring.lift(w);
                    u32 inner = ring.add(ring.mul(what, what), ring.scale(2, ring.lift((*fx)[w])));
                    u32 t = ring.mul(mhat, inner);
                    t = ring.add(t, ring.scale(2, ring.mul(vhat, what)));
                    out[w] = static_cast<u16>(ring.trace(t));
                  }
                });
}

/// Inverse of alpha(u) = u^{rho^-1} + u^rho as a Frobenius polynomial, used
/// by the net-replacement spread and its bases.
inline std::function<u32(u32)> bblp_beta(const FieldCtx& F, u32 rho_k) {
  u32 r = F.r(), k = rho_k % r;
  u32 t = r / std::gcd(r, k);
  std::vector<int> a(t, 0);
  if (t % 4 == 1)
    for (u32 i = 0; i < t; ++i) a[i] = (i % 4 <= 1) ? 1 : -1;
  else if (t % 4 == 3)
    for (u32 i = 0; i < t; ++i) a[i] = (i % 4 == 0 || i % 4 == 3) ? -1 : 1;
  else
    throw domain_error("bblp_beta: order of rho must be odd");
  u32 half = F.inv2();
  return [&F, a, k, r, t, half](u32 v) {
    u32 acc = 0;
    for (u32 i = 0; i < t; ++i) {
      u32 term = F.frobenius(v, (u64(k) * i) % r);
      acc = a[i] > 0 ? F.add(acc, term) : F.sub(acc, term);
    }
    return F.mul(half, acc);
  };
}

/// Complete set from the net-replacement spread: the Fourier basis, one basis
/// per nonsquare m with t(w) = tr(m^rho w^{rho+1} + v w), and one per class
/// s in F*/<-1> with t(w) = tr(1/2 w s beta(ws) + v w).
inline GenMub build_bblp(const FieldCtx& F, u32 rho_k = 1) {
  detail::require(F.p() != 2, "build_bblp: odd characteristic only");
  make_presemifield("bkla", F, rho_k);  // validates the rho constraints
  u32 r = F.r(), k = rho_k % r, q = F.q(), p = F.p(), half = F.inv2();
  auto beta = bblp_beta(F, rho_k);
  std::vector<std::string> labels{"inf", "m=0"};
  std::vector<u32> index_m, index_s;
  for (u32 m = 1; m < q; ++m)
    if (!F.is_square(m)) {
      labels.push_back("m=" + std::to_string(m) + "(nonsquare)");
      index_m.push_back(m);
    }
  for (u32 s = 1; s < q; ++s)
    if (std::min(s, F.neg(s)) == s) {
      labels.push_back("s=" + std::to_string(s));
      index_s.push_back(s);
    }
  u64 e_rho1 = 1;  // rho + 1 as an integer exponent
  for (u32 i = 0; i < k; ++i) e_rho1 *= p;
  e_rho1 += 1;
  const FieldCtx* Fp = &F;
  u32 nm = static_cast<u32>(index_m.size());
  return GenMub(q, p, std::move(labels), "bblp q=" + std::to_string(q),
                [Fp, beta, index_m, index_s, nm, q, k, half, e_rho1](u32 b, u32 v, u16* out) {
                  const FieldCtx& f = *Fp;
                  if (b == 0) {  // Fourier basis from the member {(x, 0)}
                    for (u32 w = 0; w < q; ++w) out[w] = static_cast<u16>(f.trace(f.mul(v, w)));
                    return;
                  }
                  if (b - 1 < nm) {
                    u32 m = index_m[b - 1];
                    u32 mr = f.frobenius(m, k);
                    for (u32 w = 0; w < q; ++w) {
                      u32 t = f.trace(f.add(f.mul(mr, f.pow(w, e_rho1)), f.mul(v, w)));
                      out[w] = static_cast<u16>(t);
                    }
                    return;
                  }
                  u32 s = index_s[b - 1 - nm];
                  for (u32 w = 0; w < q; ++w) {
                    u32 ws = f.mul(w, s);
                    u32 t = f.trace(f.add(f.mul(half, f.mul(w, f.mul(s, beta(ws)))), f.mul(v, w)));
                    out[w] = static_cast<u16>(t);
                  }
                });
}

/// Complete set in dimension q^2 from the Suzuki-invariant spread,
/// q = 2^{2k+1}: B_c rows t(w) = Tr(w^ . w^ M_c^ + 2 v^ . w^) in Z_4.
inline GenMub build_suzuki(const FieldCtx& F) {
  u32 r = F.r();
  detail::require(F.p() == 2 && r >= 3 && r % 2 == 1, "build_suzuki: requires q = 2^{2k+1}, k >= 1");
  const RingCtx& R = get_ring(F);
  u32 k = (r - 1) / 2;
  u32 q = F.q(), n = q * q;
  std::vector<std::string> labels{"inf"};
  for (u32 c = 0; c < n; ++c) labels.push_back("c=" + std::to_string(c));
  const FieldCtx* Fp = &F;
  const RingCtx* Rp = &R;
  return GenMub(n, 4, std::move(labels), "suzuki q=" + std::to_string(q),
                [Fp, Rp, q, k](u32 c, u32 v, u16* out) {
                  const FieldCtx& f = *Fp;
                  const RingCtx& ring = *Rp;
                  u32 alpha = c % q, beta = c / q;
                  u32 gamma = f.add(f.frobenius(alpha, k), f.mul(beta, f.frobenius(beta, k)));
                  u32 ah = ring.lift(alpha), bh = ring.lift(beta), gh = ring.lift(gamma);
                  u32 v1 = ring.lift(v % q), v2 = ring.lift(v / q);
                  for (u32 w2 = 0; w2 < q; ++w2) {
                    u32 wh2 = ring.lift(w2);
                    for (u32 w1 = 0; w1 < q; ++w1) {
                      u32 wh1 = ring.lift(w1);
                      u32 m1 = ring.add(ring.mul(wh1, ah), ring.mul(wh2, gh));
                      u32 m2 = ring.add(ring.mul(wh1, gh), ring.mul(wh2, bh));
                      u32 t = ring.add(ring.mul(wh1, m1), ring.mul(wh2, m2));
                      u32 dotvw = ring.add(ring.mul(v1, wh1), ring.mul(v2, wh2));
                      t = ring.add(t, ring.scale(2, dotvw));
                      out[w1 + q * w2] = static_cast<u16>(ring.trace(t));
                    }
                  }
                });
}

// ---------------------------------------------------------------------------
// verification

struct MubVerifyOptions {
  enum class Mode { Auto, Full, Sampled } mode = Mode::Auto;
  u64 samples = 100000;
  u64 seed = 0;
  u32 threads = 1;
  // floating-point fast path for sampled mode only: complex doubles with
  // tolerance 1e-9 on the normalized certificate. Non-authoritative; the
  // exact mode is the arbiter.
  bool float_path = false;
};

namespace detail {

// exact certificate |sum_w zeta^{t2(w) - t1(w)}|^2 via residue counts
inline CycloInt pair_sum(const u16* t1, const u16* t2, u32 n, u32 m, std::vector<i64>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (u32 w = 0; w < n; ++w) {
    u32 d = t2[w] + m - t1[w];
    if (d >= m) d -= m;
    ++counts[d];
  }
  return cyclo_from_counts(m, counts.data());
}

}  // namespace detail

/// Exact verification of orthonormality and unbiasedness. Full mode checks
/// every pair (requires n <= 128 so tables fit comfortably); sampled mode
/// draws seeded vector pairs and still certifies each one exactly. Exact
/// certificates are integers: 0 within a basis, n across bases (1 against
/// the standard basis, whose vectors are unnormalized units).
inline Report verify_mub(const MubSource& src, MubVerifyOptions opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  const u32 n = src.n(), m = src.root_order(), nb = src.num_bases();
  Report rep;
  rep.subject = "mub: " + src.provenance();
  rep.seed = opt.seed;
  rep.telemetry["bases"] = nb;
  rep.telemetry["dimension"] = n;

  auto mode = opt.mode;
  if (mode == MubVerifyOptions::Mode::Auto)
    mode = n <= 100 ? MubVerifyOptions::Mode::Full : MubVerifyOptions::Mode::Sampled;

  ++rep.checks;
  if (nb != n + 1) rep.fail("basis count " + std::to_string(nb) + " != n+1");

  if (mode == MubVerifyOptions::Mode::Full) {
    if (n > 128) throw domain_error("full verification supported for n <= 128; use sampled mode");
    // materialize every exponent table once
    std::vector<std::vector<u16>> tables(nb);
    for (u32 b = 0; b < nb; ++b)
      if (!src.is_standard(b)) {
        tables[b].resize(u64(n) * n);
        for (u32 v = 0; v < n; ++v) src.row(b, v, tables[b].data() + u64(v) * n);
        for (auto e : tables[b])
          if (e >= m) throw domain_error("exponent entry out of range");
      }
    struct Task {
      u32 bi, bj;
    };
    std::vector<Task> tasks;
    for (u32 bi = 0; bi < nb; ++bi)
      for (u32 bj = bi; bj < nb; ++bj) tasks.push_back({bi, bj});

    u32 threads = std::max<u32>(opt.threads, 1);
    u32 nchunks = threads == 1 ? 1 : threads * 8;
    std::vector<Report> chunk_reports(nchunks == 1 ? 1 : nchunks);
    parallel_chunks(tasks.size(), threads, nchunks, [&](u32 chunk, u64 lo, u64 hi) {
      Report& part = chunk_reports[chunk];
      std::vector<i64> counts(m);
      for (u64 ti = lo; ti < hi; ++ti) {
        auto [bi, bj] = tasks[ti];
        bool si = src.is_standard(bi), sj = src.is_standard(bj);
        if (bi == bj) {
          if (si) {  // standard basis is orthonormal by construction; count it
            part.checks += u64(n) * (n - 1) / 2;
            continue;
          }
          const u16* tab = tables[bi].data();
          for (u32 vi = 0; vi < n; ++vi)
            for (u32 vj = vi + 1; vj < n; ++vj) {
              ++part.checks;
              CycloInt z = detail::pair_sum(tab + u64(vi) * n, tab + u64(vj) * n, n, m, counts);
              if (!z.is_zero())
                part.fail("orthogonality fails in " + src.label(bi) + ": v=" + std::to_string(vi) +
                          ",v'=" + std::to_string(vj) + " inner=" + z.show());
            }
          continue;
        }
        if (si || sj) {
          // single-entry inner products: |zeta^t|^2 = 1 for every pair
          part.checks += u64(n) * n;
          continue;
        }
        const u16* ta = tables[bi].data();
        const u16* tb = tables[bj].data();
        for (u32 vi = 0; vi < n; ++vi)
          for (u32 vj = 0; vj < n; ++vj) {
            ++part.checks;
            CycloInt z = detail::pair_sum(ta + u64(vi) * n, tb + u64(vj) * n, n, m, counts);
            auto cert = z.abs_squared().as_integer();
            if (!cert || *cert != static_cast<i64>(n))
              part.fail("unbiasedness fails: " + src.label(bi) + " v=" + std::to_string(vi) + " vs " +
                        src.label(bj) + " v'=" + std::to_string(vj) +
                        " certificate=" + (cert ? std::to_string(*cert) : z.abs_squared().show()));
          }
      }
    });
    for (auto& part : chunk_reports) rep.absorb(part);
    rep.telemetry["certificate"] = n;
  } else {
    rep.mode = opt.float_path ? "sampled-float" : "sampled";
    rep.telemetry["certificate"] = n;
    if (opt.float_path) rep.telemetry["float_path"] = 1;
    // pre-draw the sample list so parallel execution stays deterministic
    Rng rng(opt.seed);
    struct Sample {
      u32 b1, v1, b2, v2;
    };
    std::vector<Sample> draws;
    draws.reserve(opt.samples);
    u64 universe = u64(nb) * n;
    for (u64 i = 0; i < opt.samples; ++i) {
      u64 a = rng.below(universe), b = rng.below(universe);
      if (a == b) {
        --i;
        continue;
      }
      draws.push_back({static_cast<u32>(a / n), static_cast<u32>(a % n), static_cast<u32>(b / n),
                       static_cast<u32>(b % n)});
    }
    u32 threads = std::max<u32>(opt.threads, 1);
    u32 nchunks = threads == 1 ? 1 : threads * 4;
    std::vector<Report> chunk_reports(nchunks == 1 ? 1 : nchunks);
    parallel_chunks(draws.size(), threads, nchunks, [&](u32 chunk, u64 lo, u64 hi) {
      Report& part = chunk_reports[chunk];
      std::vector<u16> row1(n), row2(n);
      std::vector<i64> counts(m);
      for (u64 i = lo; i < hi; ++i) {
        const Sample& s = draws[i];
        ++part.samples;
        ++part.checks;
        bool s1 = src.is_standard(s.b1), s2 = src.is_standard(s.b2);
        if (s1 && s2) continue;  // distinct standard vectors: inner product 0 by construction
        if (s1 || s2) {
          // inner product against a standard vector is a single unit entry
          u32 be = s1 ? s.b2 : s.b1, ve = s1 ? s.v2 : s.v1, wa = s1 ? s.v1 : s.v2;
          src.row(be, ve, row1.data());
          if (s.b1 == s.b2) continue;
          if (row1[wa] >= m) part.fail("exponent entry out of range");
          continue;  // |zeta^t|^2 = 1 exactly
        }
        src.row(s.b1, s.v1, row1.data());
        src.row(s.b2, s.v2, row2.data());
        if (opt.float_path) {
          // non-authoritative numeric screen: normalized |<x,y>|^2 against
          // 0 (same basis) or 1/n (distinct bases) at tolerance 1e-9
          if (s.b1 == s.b2 && s.v1 == s.v2) continue;
          double re = 0, im = 0;
          const double pi = 3.14159265358979323846;
          for (u32 w = 0; w < n; ++w) {
            double ang = 2.0 * pi * ((row2[w] + m - row1[w]) % m) / m;
            re += std::cos(ang);
            im += std::sin(ang);
          }
          double norm2 = (re * re + im * im) / (double(n) * n);
          double want = s.b1 == s.b2 ? 0.0 : 1.0 / n;
          if (std::abs(norm2 - want) > 1e-9)
            part.fail("float screen fails: " + src.label(s.b1) + " v=" + std::to_string(s.v1) + " vs " +
                      src.label(s.b2) + " v'=" + std::to_string(s.v2) + " |.|^2=" + std::to_string(norm2));
          continue;
        }
        if (s.b1 == s.b2) {
          if (s.v1 == s.v2) continue;
          CycloInt z = detail::pair_sum(row1.data(), row2.data(), n, m, counts);
          if (!z.is_zero())
            part.fail("orthogonality fails in " + src.label(s.b1) + ": v=" + std::to_string(s.v1) +
                      ",v'=" + std::to_string(s.v2) + " inner=" + z.show());
        } else {
          CycloInt z = detail::pair_sum(row1.data(), row2.data(), n, m, counts);
          auto cert = z.abs_squared().as_integer();
          if (!cert || *cert != static_cast<i64>(n))
            part.fail("unbiasedness fails: " + src.label(s.b1) + " v=" + std::to_string(s.v1) + " vs " +
                      src.label(s.b2) + " v'=" + std::to_string(s.v2) +
                      " certificate=" + (cert ? std::to_string(*cert) : z.abs_squared().show()));
        }
      }
    });
    for (auto& part : chunk_reports) rep.absorb(part);
  }
  rep.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// canonical comparison (phase-and-permutation identity, not unitary equivalence)

inline MubSet canonical_form(const MubSet& in) {
  MubSet out;
  out.n = in.n;
  out.m = in.m;
  out.provenance = in.provenance;
  std::vector<MubBasis> exps;
  u32 standard_count = 0;
  for (const auto& b : in.bases) {
    if (b.standard) {
      ++standard_count;
      continue;
    }
    MubBasis c = b;
    // remove the global phase of each row, then sort rows
    std::vector<std::vector<u16>> rows(in.n, std::vector<u16>(in.n));
    for (u32 v = 0; v < in.n; ++v) {
      u16 base = c.table[u64(v) * in.n];
      for (u32 w = 0; w < in.n; ++w) {
        u32 e = c.table[u64(v) * in.n + w] + in.m - base;
        rows[v][w] = static_cast<u16>(e >= in.m ? e - in.m : e);
      }
    }
    std::sort(rows.begin(), rows.end());
    for (u32 v = 0; v < in.n; ++v)
      std::copy(rows[v].begin(), rows[v].end(), c.table.begin() + u64(v) * in.n);
    exps.push_back(std::move(c));
  }
  std::sort(exps.begin(), exps.end(), [](const MubBasis& a, const MubBasis& b) { return a.table < b.table; });
  for (u32 i = 0; i < standard_count; ++i) {
    MubBasis std_basis;
    std_basis.standard = true;
    std_basis.n = in.n;
    std_basis.m = in.m;
    std_basis.label = "standard";
    out.bases.push_back(std::move(std_basis));
  }
  for (auto& b : exps) out.bases.push_back(std::move(b));
  return out;
}

/// On-the-nose equality up to per-row phase and basis/vector ordering.
inline std::string compare_mub_sets(const MubSet& a, const MubSet& b) {
  if (a.n != b.n || a.m != b.m) throw domain_error("compare_mub_sets: dimension or root order mismatch");
  MubSet ca = canonical_form(a), cb = canonical_form(b);
  if (ca.bases.size() != cb.bases.size()) return "different";
  for (size_t i = 0; i < ca.bases.size(); ++i) {
    if (ca.bases[i].standard != cb.bases[i].standard) return "different";
    if (ca.bases[i].table != cb.bases[i].table) return "different";
  }
  return "identical";
}

}  // namespace mubforge
