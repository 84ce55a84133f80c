#pragma once

#include "mub.hpp"

namespace mubforge {

/// Symbolic generalized Pauli operator: the monomial matrix
///   e_w -> eps^{phase_unit * (k + tr(v.w))} e_{u+w}
/// where eps is a primitive p-th root for odd p, and for p = 2 phases live in
/// Z_4 (eps = zeta_4^2 = -1), so tr values enter with weight 2. Composition
/// stays in the class; the Z_4 convention for p = 2 is pinned by the dense
/// oracle below.
struct PauliCtx {
  VSpace V;
  u32 m;            // root order of the phase group: p (odd) or 4
  u32 phase_unit;   // 1 for odd p, 2 for p = 2

  explicit PauliCtx(const VSpace& v)
      : V(v), m(v.field().p() == 2 ? 4 : v.field().p()), phase_unit(v.field().p() == 2 ? 2 : 1) {}

  u32 n() const { return V.size(); }
};

struct PauliOp {
  u32 u = 0, v = 0;
  u32 phase = 0;  // exponent of zeta_m

  bool operator==(const PauliOp& o) const { return u == o.u && v == o.v && phase == o.phase; }
};

inline PauliOp pauli(const PauliCtx& ctx, u32 u, u32 v, u32 phase = 0) {
  return PauliOp{u, v, phase % ctx.m};
}

/// D_{u,v} D_{u',v'} = eps^{tr(v.u')} D_{u+u', v+v'} with phases tracked in Z_m.
inline PauliOp compose(const PauliCtx& ctx, const PauliOp& a, const PauliOp& b) {
  u32 ph = (a.phase + b.phase + ctx.phase_unit * ctx.V.trdot(a.v, b.u)) % ctx.m;
  return PauliOp{ctx.V.add(a.u, b.u), ctx.V.add(a.v, b.v), ph};
}

/// Commutation is phase equality of the two products.
inline bool commute(const PauliCtx& ctx, const PauliOp& a, const PauliOp& b) {
  return compose(ctx, a, b).phase == compose(ctx, b, a).phase;
}

/// Dense n x n matrix with exact cyclotomic entries; the cross-validation
/// oracle for everything symbolic. Only intended for n <= 9.
struct DenseMat {
  u32 n, m;
  std::vector<CycloInt> a;

  DenseMat(u32 n_, u32 m_) : n(n_), m(m_), a(u64(n_) * n_, CycloInt(m_)) {}

  CycloInt& at(u32 i, u32 j) { return a[u64(i) * n + j]; }
  const CycloInt& at(u32 i, u32 j) const { return a[u64(i) * n + j]; }

  DenseMat operator*(const DenseMat& o) const {
    DenseMat out(n, m);
    for (u32 i = 0; i < n; ++i)
      for (u32 k = 0; k < n; ++k) {
        const CycloInt& x = at(i, k);
        if (x.is_zero()) continue;
        for (u32 j = 0; j < n; ++j) {
          if (o.at(k, j).is_zero()) continue;
          out.at(i, j) = out.at(i, j) + x * o.at(k, j);
        }
      }
    return out;
  }

  DenseMat transpose() const {
    DenseMat out(n, m);
    for (u32 i = 0; i < n; ++i)
      for (u32 j = 0; j < n; ++j) out.at(j, i) = at(i, j);
    return out;
  }

  DenseMat scaled(const CycloInt& s) const {
    DenseMat out(n, m);
    for (u64 i = 0; i < a.size(); ++i) out.a[i] = a[i] * s;
    return out;
  }

  DenseMat operator-() const { return scaled(CycloInt::integer(m, -1)); }

  bool operator==(const DenseMat& o) const { return n == o.n && m == o.m && a == o.a; }

  CycloInt trace() const {
    CycloInt t(m);
    for (u32 i = 0; i < n; ++i) t = t + at(i, i);
    return t;
  }
};

inline DenseMat dense_op(const PauliCtx& ctx, const PauliOp& op) {
  u32 n = ctx.n();
  DenseMat out(n, ctx.m);
  for (u32 w = 0; w < n; ++w) {
    u32 ph = (op.phase + ctx.phase_unit * ctx.V.trdot(op.v, w)) % ctx.m;
    out.at(ctx.V.add(op.u, w), w) = CycloInt::zeta_pow(ctx.m, ph);
  }
  return out;
}

/// Symbolic composition against dense multiplication, all operator pairs.
inline Report check_compose_dense(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "pauli compose vs dense, n=" + std::to_string(ctx.n());
  u32 n = ctx.n();
  if (n > 9) throw domain_error("dense cross-validation is for n <= 9");
  std::vector<DenseMat> dense;
  dense.reserve(u64(n) * n);
  for (u32 v = 0; v < n; ++v)
    for (u32 u = 0; u < n; ++u) dense.push_back(dense_op(ctx, pauli(ctx, u, v)));
  auto idx = [&](u32 u, u32 v) { return u64(v) * n + u; };
  for (u32 u1 = 0; u1 < n; ++u1)
    for (u32 v1 = 0; v1 < n; ++v1)
      for (u32 u2 = 0; u2 < n; ++u2)
        for (u32 v2 = 0; v2 < n; ++v2) {
          PauliOp prod = compose(ctx, pauli(ctx, u1, v1), pauli(ctx, u2, v2));
          DenseMat want = dense[idx(u1, v1)] * dense[idx(u2, v2)];
          DenseMat got = dense[idx(prod.u, prod.v)].scaled(CycloInt::zeta_pow(ctx.m, prod.phase));
          ++rep.checks;
          if (!(want == got))
            rep.fail("compose mismatch at u=" + std::to_string(u1) + ",v=" + std::to_string(v1) + " x u'=" +
                     std::to_string(u2) + ",v'=" + std::to_string(v2));
        }
  return rep;
}

/// [D, D'] = 0 exactly when the alternating form of the index pairs vanishes.
inline Report check_commutator_criterion(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "commutator criterion, n=" + std::to_string(ctx.n());
  SymplecticSpace sp(ctx.V);
  u32 n = ctx.n();
  for (u32 u1 = 0; u1 < n; ++u1)
    for (u32 v1 = 0; v1 < n; ++v1)
      for (u32 u2 = 0; u2 < n; ++u2)
        for (u32 v2 = 0; v2 < n; ++v2) {
          bool c = commute(ctx, pauli(ctx, u1, v1), pauli(ctx, u2, v2));
          bool form0 = sp.form(u1, v1, u2, v2) == 0;
          ++rep.checks;
          if (c != form0)
            rep.fail("commutator criterion fails at ((" + std::to_string(u1) + "," + std::to_string(v1) +
                     "),(" + std::to_string(u2) + "," + std::to_string(v2) + "))");
        }
  return rep;
}

/// The outer automorphism A -> -A^t maps D_{a,b} to -eps^{-tr(a.b)} D_{-a,b};
/// verified densely.
inline Report check_T_action(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "outer automorphism action, n=" + std::to_string(ctx.n());
  u32 n = ctx.n();
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b) {
      DenseMat lhs = -dense_op(ctx, pauli(ctx, a, b)).transpose();
      u32 ph = (ctx.m - ctx.phase_unit * ctx.V.trdot(a, b) % ctx.m) % ctx.m;
      DenseMat rhs = dense_op(ctx, pauli(ctx, ctx.V.neg(a), b)).scaled(-CycloInt::zeta_pow(ctx.m, ph));
      ++rep.checks;
      if (!(lhs == rhs)) rep.fail("T action mismatch at a=" + std::to_string(a) + ",b=" + std::to_string(b));
    }
  return rep;
}

/// D_{u,v} D_{a,b} D_{u,v}^{-1} = eps^{-<(u,v),(a,b)>} D_{a,b}, odd p, dense.
inline Report check_K_conjugation(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "inner conjugation phases, n=" + std::to_string(ctx.n());
  if (ctx.V.field().p() == 2) throw domain_error("check_K_conjugation: stated for odd characteristic");
  SymplecticSpace sp(ctx.V);
  u32 n = ctx.n();
  for (u32 u = 0; u < n; ++u)
    for (u32 v = 0; v < n; ++v) {
      // D^{-1} = eps^{tr(v.u)} D_{-u,-v}
      PauliOp dinv = pauli(ctx, ctx.V.neg(u), ctx.V.neg(v), ctx.V.trdot(v, u));
      if (!(compose(ctx, pauli(ctx, u, v), dinv) == pauli(ctx, 0, 0, 0)))
        throw domain_error("pauli inverse construction failed");
      DenseMat dm = dense_op(ctx, pauli(ctx, u, v));
      DenseMat dinvm = dense_op(ctx, dinv);
      for (u32 a = 0; a < n; ++a)
        for (u32 b = 0; b < n; ++b) {
          DenseMat lhs = dm * dense_op(ctx, pauli(ctx, a, b)) * dinvm;
          u32 f = sp.form(u, v, a, b);
          u32 ph = (ctx.m - f) % ctx.m;
          DenseMat rhs = dense_op(ctx, pauli(ctx, a, b)).scaled(CycloInt::zeta_pow(ctx.m, ph));
          ++rep.checks;
          if (!(lhs == rhs))
            rep.fail("conjugation phase mismatch at (u,v)=(" + std::to_string(u) + "," + std::to_string(v) +
                     "), (a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
    }
  return rep;
}

/// Tr D_{u,v} = 0 away from the identity index, and the n^2 operators are
/// pairwise orthogonal (hence independent) under the Hilbert-Schmidt form.
inline Report check_traceless_and_basis(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "traceless generators and operator basis, n=" + std::to_string(ctx.n());
  u32 n = ctx.n();
  std::vector<DenseMat> dense;
  dense.reserve(u64(n) * n);
  for (u32 v = 0; v < n; ++v)
    for (u32 u = 0; u < n; ++u) dense.push_back(dense_op(ctx, pauli(ctx, u, v)));
  auto idx = [&](u32 u, u32 v) { return u64(v) * n + u; };
  for (u32 u = 0; u < n; ++u)
    for (u32 v = 0; v < n; ++v) {
      auto t = dense[idx(u, v)].trace().as_integer();
      ++rep.checks;
      if (u == 0 && v == 0) {
        if (!t || *t != static_cast<i64>(n)) rep.fail("trace of the identity index is not n");
      } else if (!t || *t != 0) {
        rep.fail("nonzero trace at u=" + std::to_string(u) + ",v=" + std::to_string(v));
      }
    }
  // Hilbert-Schmidt pairings: Tr(A B*) = n delta_{A,B}
  for (u32 i = 0; i < n * n; ++i)
    for (u32 j = 0; j < n * n; ++j) {
      DenseMat conj_t(n, ctx.m);
      for (u32 r = 0; r < n; ++r)
        for (u32 c = 0; c < n; ++c) conj_t.at(c, r) = dense[j].at(r, c).conj();
      auto t = (dense[i] * conj_t).trace().as_integer();
      ++rep.checks;
      i64 want = i == j ? static_cast<i64>(n) : 0;
      if (!t || *t != want) rep.fail("Hilbert-Schmidt pairing wrong at " + std::to_string(i) + "," + std::to_string(j));
    }
  return rep;
}

/// Symbolic tracelessness for dimensions where dense matrices are out of
/// reach: a shift by u != 0 has an empty diagonal, and for u = 0 the trace
/// is the full character sum over tr(v.w), evaluated exactly.
inline Report check_traceless_symbolic(const PauliCtx& ctx) {
  Report rep;
  rep.subject = "traceless generators (symbolic), n=" + std::to_string(ctx.n());
  u32 n = ctx.n(), m = ctx.m;
  rep.checks += u64(n) * (n - 1);  // u != 0: no diagonal support at all
  std::vector<i64> counts(m);
  for (u32 v = 0; v < n; ++v) {
    std::fill(counts.begin(), counts.end(), 0);
    for (u32 w = 0; w < n; ++w) ++counts[(ctx.phase_unit * ctx.V.trdot(v, w)) % m];
    CycloInt tr = cyclo_from_counts(m, counts.data());
    ++rep.checks;
    auto val = tr.as_integer();
    if (v == 0) {
      if (!val || *val != static_cast<i64>(n)) rep.fail("trace of the identity is not n");
    } else if (!val || *val != 0) {
      rep.fail("diagonal operator v=" + std::to_string(v) + " has nonzero trace " + tr.show());
    }
  }
  return rep;
}

/// The commuting family indexed by one totally isotropic member.
struct CartanBlock {
  u32 member = 0;
  std::vector<PauliOp> generators;  // p^{r'} - 1 of them
};

inline CartanBlock cartan_from_member(const PauliCtx& ctx, const Spread& sp, u32 member) {
  CartanBlock block;
  block.member = member;
  member_points(sp, member, [&](u32 u, u32 v) {
    if (u == 0 && v == 0) return;
    block.generators.push_back(pauli(ctx, u, v));
  });
  // pairwise commuting, via the symbolic composition phases
  for (size_t i = 0; i < block.generators.size(); ++i)
    for (size_t j = i + 1; j < block.generators.size(); ++j)
      if (!commute(ctx, block.generators[i], block.generators[j]))
        throw domain_error("member is not totally isotropic: generators do not commute");
  return block;
}

struct DecompositionOptions {
  u32 dense_limit = 9;  // dense Killing-form checks up to this dimension
};

/// The orthogonal-decomposition identities for a symplectic spread:
/// block sizes sum to n^2 - 1, index pairs partition W \ {0}, blocks are
/// abelian, and cross-block products are traceless (symbolically: the index
/// sum never returns to (0,0)); densely for small n the Killing pairing
/// 2n Tr(AB) vanishes across blocks.
inline Report verify_decomposition(const PauliCtx& ctx, const Spread& sp, DecompositionOptions opt = {}) {
  Report rep;
  rep.subject = "orthogonal decomposition: " + sp.provenance;
  u32 n = ctx.n();
  u64 rp = sp.rprime();
  u64 block = 1;
  for (u32 i = 0; i < rp; ++i) block *= ctx.V.field().p();
  ++rep.checks;
  if ((block - 1) * sp.members.size() != u64(n) * n - 1)
    rep.fail("block sizes do not sum to n^2 - 1");

  // disjoint index pairs across members
  std::vector<u8> seen(sp.space.wsize(), 0);
  bool overlap = false;
  for (u32 i = 0; i < sp.members.size(); ++i)
    member_points(sp, i, [&](u32 u, u32 v) {
      if (u == 0 && v == 0) return;
      u64 w = sp.space.windex(u, v);
      if (seen[w]) overlap = true;
      seen[w] = 1;
    });
  ++rep.checks;
  if (overlap) rep.fail("index pairs overlap across members");

  // abelian blocks
  std::vector<CartanBlock> blocks;
  for (u32 i = 0; i < sp.members.size(); ++i) blocks.push_back(cartan_from_member(ctx, sp, i));
  rep.checks += sp.members.size();

  // cross-block trace orthogonality, symbolic: Tr(D_a D_b) != 0 needs index sum (0,0)
  for (u32 i = 0; i < blocks.size(); ++i)
    for (u32 j = i + 1; j < blocks.size(); ++j)
      for (const auto& A : blocks[i].generators)
        for (const auto& B : blocks[j].generators) {
          ++rep.checks;
          if (ctx.V.add(A.u, B.u) == 0 && ctx.V.add(A.v, B.v) == 0)
            rep.fail("cross-block product hits the identity index: blocks " + std::to_string(i) + "," +
                     std::to_string(j));
        }

  // dense Killing pairing for small dimensions
  if (n <= opt.dense_limit) {
    for (u32 i = 0; i < blocks.size() && rep.failure_count < 8; ++i)
      for (u32 j = i + 1; j < blocks.size(); ++j)
        for (const auto& A : blocks[i].generators)
          for (const auto& B : blocks[j].generators) {
            auto t = (dense_op(ctx, A) * dense_op(ctx, B)).trace().as_integer();
            ++rep.checks;
            if (!t || *t != 0)
              rep.fail("dense Killing pairing nonzero across blocks " + std::to_string(i) + "," +
                       std::to_string(j));
          }
    rep.telemetry["dense_killing"] = 1;
  }
  return rep;
}

/// Applies D_{u, h(u)} symbolically to an exponent row t and checks it is an
/// eigenvector with the claimed eigenvalue exponent: with phase weight s,
///   t(w - u) + s tr(h(u).(w - u)) - t(w)  ==  eig  (mod m)  for all w.
inline bool exponent_row_is_eigenvector(const PauliCtx& ctx, const u16* t, u32 u, u32 hu, u32 eig) {
  u32 n = ctx.n(), m = ctx.m;
  std::vector<u16> moved(n);
  for (u32 w = 0; w < n; ++w) {
    u32 pre = ctx.V.sub(w, u);
    moved[w] = static_cast<u16>((t[pre] + ctx.phase_unit * ctx.V.trdot(hu, pre)) % m);
  }
  for (u32 w = 0; w < n; ++w) {
    u32 diff = (moved[w] + m - t[w]) % m;
    if (diff != eig % m) return false;
  }
  return true;
}

struct EigenOptions {
  u64 samples = 0;  // 0 = exhaustive over all (basis, row, u) triples
  u64 seed = 0;
};

namespace detail {

template <typename HFn, typename EigFn>
Report eigen_sweep(const PauliCtx& ctx, const MubSource& mub, const std::string& what, HFn&& h_of,
                   EigFn&& eig_of, EigenOptions opt) {
  Report rep;
  rep.subject = "eigenvector identities: " + what;
  u32 n = ctx.n();
  std::vector<u16> row(n);
  auto run_one = [&](u32 b, u32 v, u32 u) {
    mub.row(b + 1, v, row.data());  // basis 0 is standard
    u32 hu = h_of(b, u);
    u32 eig = eig_of(b, v, u);
    ++rep.checks;
    if (!exponent_row_is_eigenvector(ctx, row.data(), u, hu, eig))
      rep.fail("not an eigenvector: basis " + mub.label(b + 1) + " v=" + std::to_string(v) +
               " u=" + std::to_string(u));
  };
  if (opt.samples == 0) {
    for (u32 b = 0; b + 1 < mub.num_bases() && rep.failure_count < 8; ++b)
      for (u32 v = 0; v < n; ++v)
        for (u32 u = 0; u < n; ++u) run_one(b, v, u);
  } else {
    rep.mode = "sampled";
    Rng rng(opt.seed);
    for (u64 i = 0; i < opt.samples && rep.failure_count < 8; ++i) {
      ++rep.samples;
      run_one(static_cast<u32>(rng.below(mub.num_bases() - 1)), static_cast<u32>(rng.below(n)),
              static_cast<u32>(rng.below(n)));
    }
  }
  return rep;
}

}  // namespace detail

/// Each vector of B_m is an eigenvector of D_{u, u o m} with eigenvalue
/// exponent -tr(1/2 u.(u o m) + v.u).
inline Report check_eigenvectors_odd_symplectic(const Presemifield& s, EigenOptions opt = {}) {
  VSpace V = s.space();
  PauliCtx ctx(V);
  GenMub mub = build_odd_symplectic(s);
  const FieldCtx& F = V.field();
  u32 half = F.inv2(), p = F.p();
  return detail::eigen_sweep(
      ctx, mub, mub.provenance(), [&](u32 m, u32 u) { return s.product(u, m); },
      [&](u32 m, u32 v, u32 u) {
        u32 hu = s.product(u, m);
        u32 e = (F.trace(F.mul(half, V.dot(u, hu))) + V.trdot(v, u)) % p;
        return (p - e) % p;
      },
      opt);
}

/// Even-characteristic version: eigenvalue exponent Tr(2 u^ v^ - u^ (u^ o m^)).
inline Report check_eigenvectors_even(const Presemifield& s, EigenOptions opt = {}) {
  detail::require(s.F->p() == 2 && s.ncoords == 1 && s.has_coeff_form(),
                  "check_eigenvectors_even: coefficient form over GF(2^r) required");
  VSpace V = s.space();
  PauliCtx ctx(V);
  GenMub mub = build_even_symplectic(s);
  const RingCtx& R = get_ring(*s.F);
  return detail::eigen_sweep(
      ctx, mub, mub.provenance(), [&](u32 m, u32 u) { return s.product(u, m); },
      [&](u32 m, u32 v, u32 u) {
        u32 t = R.sub(R.scale(2, R.mul(R.lift(u), R.lift(v))), R.mul(R.lift(u), R.lifted_bilinear(s.coeff, u, m)));
        return R.trace(t);
      },
      opt);
}

/// Net-replacement bases: the slope maps are h = 0, h(x) = m x^{rho^-1} + m^rho x^rho
/// (m nonsquare) and h(x) = s beta(xs); same eigenvalue exponent as the odd case.
inline Report check_eigenvectors_bblp(const FieldCtx& F, u32 rho_k = 1, EigenOptions opt = {}) {
  u32 r = F.r(), k = rho_k % r, p = F.p(), q = F.q(), half = F.inv2();
  VSpace V(F, 1);
  PauliCtx ctx(V);
  GenMub mub = build_bblp(F, rho_k);
  auto beta = bblp_beta(F, rho_k);
  std::vector<std::function<u32(u32)>> hmaps;
  hmaps.push_back([](u32) { return 0u; });
  for (u32 m = 1; m < q; ++m)
    if (!F.is_square(m))
      hmaps.push_back([&F, m, k, r](u32 x) {
        return F.add(F.mul(m, F.frobenius(x, (r - k) % r)), F.mul(F.frobenius(m, k), F.frobenius(x, k)));
      });
  for (u32 s = 1; s < q; ++s)
    if (std::min(s, F.neg(s)) == s)
      hmaps.push_back([&F, beta, s](u32 x) { return F.mul(s, beta(F.mul(x, s))); });
  return detail::eigen_sweep(
      ctx, mub, mub.provenance(), [&](u32 b, u32 u) { return hmaps[b](u); },
      [&](u32 b, u32 v, u32 u) {
        u32 hu = hmaps[b](u);
        u32 e = (F.trace(F.mul(half, F.mul(u, hu))) + F.trace(F.mul(v, u))) % p;
        return (p - e) % p;
      },
      opt);
}

/// Suzuki bases: D_{u, u M_c} with eigenvalue exponent Tr(2 v^.u^ - u^.u^ M_c^).
inline Report check_eigenvectors_suzuki(const FieldCtx& F, EigenOptions opt = {}) {
  u32 r = F.r();
  detail::require(F.p() == 2 && r >= 3 && r % 2 == 1, "check_eigenvectors_suzuki: q = 2^{2k+1}");
  const RingCtx& R = get_ring(F);
  u32 k = (r - 1) / 2, q = F.q();
  VSpace V(F, 2);
  PauliCtx ctx(V);
  GenMub mub = build_suzuki(F);
  auto slope = [&](u32 c, u32 x) {
    u32 alpha = c % q, beta = c / q;
    u32 gamma = F.add(F.frobenius(alpha, k), F.mul(beta, F.frobenius(beta, k)));
    u32 x1 = x % q, x2 = x / q;
    return V.make2(F.add(F.mul(x1, alpha), F.mul(x2, gamma)), F.add(F.mul(x1, gamma), F.mul(x2, beta)));
  };
  return detail::eigen_sweep(
      ctx, mub, mub.provenance(), slope,
      [&](u32 c, u32 v, u32 u) {
        u32 alpha = c % q, beta = c / q;
        u32 gamma = F.add(F.frobenius(alpha, k), F.mul(beta, F.frobenius(beta, k)));
        u32 u1 = u % q, u2 = u / q;
        u32 uh1 = R.lift(u1), uh2 = R.lift(u2);
        u32 ah = R.lift(alpha), bh = R.lift(beta), gh = R.lift(gamma);
        u32 m1 = R.add(R.mul(uh1, ah), R.mul(uh2, gh));
        u32 m2 = R.add(R.mul(uh1, gh), R.mul(uh2, bh));
        u32 quad = R.add(R.mul(uh1, m1), R.mul(uh2, m2));
        u32 vdot = R.add(R.mul(R.lift(v % q), uh1), R.mul(R.lift(v / q), uh2));
        return R.trace(R.sub(R.scale(2, vdot), quad));
      },
      opt);
}

}  // namespace mubforge
