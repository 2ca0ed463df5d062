#pragma once

#include "holotwo/pbw.hpp"
#include "holotwo/wordalg.hpp"
#include "holotwo/xmod.hpp"

namespace holotwo {

// ---------------------------------------------------------------------------
// Crossed module of a finite chain complex: degree-0 chain maps acting on
// degree-1 maps modulo boundaries of degree-2 maps.
// ---------------------------------------------------------------------------

// dims[k] = dim V_k, boundaries[k] : V_{k+1} -> V_k given row-major
// (dims[k] x dims[k+1]).
struct ChainComplexSpec {
  std::vector<int> dims;
  std::vector<std::vector<std::vector<Rat>>> boundaries;
};

struct HomComplex {
  ChainComplexSpec spec;
  std::unique_ptr<Carrier<Rat>> B;  // chain maps under composition
  std::unique_ptr<Carrier<Rat>> A;  // degree-1 maps modulo exact degree-2 ones
  BareXMod<Rat> x;

  // internals, exposed for reports and tests
  int hom1_dim = 0, hom2_dim = 0, bdp2_rank = 0;
  std::vector<Vec<Rat>> gl0_basis;  // in hom0 coordinates

  // hom^i block offsets: block k maps V_k -> V_{k+i}
  std::vector<int> off0, off1, off2;
};

namespace detail {

// offsets for hom^i block coordinates
inline int hom_space(const std::vector<int>& dims, int i, std::vector<int>& off) {
  const int m = static_cast<int>(dims.size()) - 1;
  off.assign(m + 1, -1);
  int total = 0;
  for (int k = 0; k + i <= m; ++k) {
    off[k] = total;
    total += dims[k + i] * dims[k];
  }
  return total;
}

// entry (r, c) of block k, given the per-level offsets
inline int hom_at(const std::vector<int>& dims, const std::vector<int>& off, int k, int r,
                  int c) {
  return off[k] + r * dims[k] + c;
}

}  // namespace detail

inline HomComplex build_hom_complex(const ChainComplexSpec& spec) {
  HomComplex hc;
  hc.spec = spec;
  const auto& dims = spec.dims;
  const int m = static_cast<int>(dims.size()) - 1;
  if (m < 0) throw std::invalid_argument("chain complex needs at least one space");
  if (static_cast<int>(spec.boundaries.size()) != std::max(m, 0))
    throw std::invalid_argument("chain complex: need one boundary matrix per arrow");
  for (int k = 0; k < m; ++k) {
    const auto& bmat = spec.boundaries[k];
    if (static_cast<int>(bmat.size()) != dims[k])
      throw std::invalid_argument("boundary matrix row count mismatch");
    for (const auto& row : bmat)
      if (static_cast<int>(row.size()) != dims[k + 1])
        throw std::invalid_argument("boundary matrix column count mismatch");
  }
  // beta_k beta_{k+1} = 0
  for (int k = 0; k + 1 < m; ++k) {
    for (int r = 0; r < dims[k]; ++r)
      for (int c = 0; c < dims[k + 2]; ++c) {
        Rat s(0);
        for (int t = 0; t < dims[k + 1]; ++t)
          s += spec.boundaries[k][r][t] * spec.boundaries[k + 1][t][c];
        if (!s.is_zero()) throw std::invalid_argument("boundary maps do not square to zero");
      }
  }

  const int n0 = detail::hom_space(dims, 0, hc.off0);
  const int n1 = detail::hom_space(dims, 1, hc.off1);
  const int n2 = detail::hom_space(dims, 2, hc.off2);
  hc.hom1_dim = n1;
  hc.hom2_dim = n2;

  auto beta = [&](int k, int r, int c) { return spec.boundaries[k][r][c]; };

  // chain-map constraints: for k = 1..m, beta_k f_k - f_{k-1} beta_k = 0
  std::vector<Vec<Rat>> constraints;
  for (int k = 1; k <= m; ++k) {
    for (int r = 0; r < dims[k - 1]; ++r)
      for (int c = 0; c < dims[k]; ++c) {
        Vec<Rat> row = vec_zero<Rat>(n0);
        for (int t = 0; t < dims[k]; ++t)
          row[detail::hom_at(dims, hc.off0,k, t, c)] += beta(k - 1, r, t);
        for (int t = 0; t < dims[k - 1]; ++t)
          row[detail::hom_at(dims, hc.off0,k - 1, r, t)] -= beta(k - 1, t, c);
        constraints.push_back(std::move(row));
      }
  }
  hc.gl0_basis = nullspace(std::move(constraints), n0);

  // boundary of a degree-1 map: (beta s + s beta)_k : V_k -> V_k
  auto bd1 = [&](const Vec<Rat>& s) {
    Vec<Rat> out = vec_zero<Rat>(n0);
    for (int k = 0; k <= m; ++k) {
      for (int r = 0; r < dims[k]; ++r)
        for (int c = 0; c < dims[k]; ++c) {
          Rat v(0);
          if (k + 1 <= m)
            for (int t = 0; t < dims[k + 1]; ++t)
              v += beta(k, r, t) * s[detail::hom_at(dims, hc.off1,k, t, c)];
          if (k - 1 >= 0)
            for (int t = 0; t < dims[k - 1]; ++t)
              v += s[detail::hom_at(dims, hc.off1,k - 1, r, t)] * beta(k - 1, t, c);
          out[detail::hom_at(dims, hc.off0,k, r, c)] = v;
        }
    }
    return out;
  };
  // boundary of a degree-2 map: (beta h - h beta)_k : V_k -> V_{k+1}
  auto bd2 = [&](const Vec<Rat>& h) {
    Vec<Rat> out = vec_zero<Rat>(n1);
    for (int k = 0; k + 1 <= m; ++k) {
      for (int r = 0; r < dims[k + 1]; ++r)
        for (int c = 0; c < dims[k]; ++c) {
          Rat v(0);
          if (k + 2 <= m)
            for (int t = 0; t < dims[k + 2]; ++t)
              v += beta(k + 1, r, t) * h[detail::hom_at(dims, hc.off2,k, t, c)];
          if (k - 1 >= 0)
            for (int t = 0; t < dims[k - 1]; ++t)
              v -= h[detail::hom_at(dims, hc.off2,k - 1, r, t)] * beta(k - 1, t, c);
          out[detail::hom_at(dims, hc.off1,k, r, c)] = v;
        }
    }
    return out;
  };

  // quotient of hom^1 by exact degree-2 boundaries
  Quotient<Rat> quot(n1);
  for (int j = 0; j < n2; ++j) {
    Vec<Rat> h = vec_zero<Rat>(n2);
    h[j] = Rat(1);
    quot.add_relation(bd2(h));
  }
  quot.finalize();
  hc.bdp2_rank = quot.ech.rank();

  CoordSpan<Rat> gl0_coords(n0, hc.gl0_basis);

  hc.B = std::make_unique<Carrier<Rat>>();
  Carrier<Rat>& B = *hc.B;
  B.id = "chainmaps";
  B.maxdeg = 0;
  for (size_t i = 0; i < hc.gl0_basis.size(); ++i) {
    B.names.push_back("f" + std::to_string(i));
    B.degs.push_back(0);
  }
  B.unital = true;
  {
    Vec<Rat> idm = vec_zero<Rat>(n0);
    for (int k = 0; k <= m; ++k)
      for (int r = 0; r < dims[k]; ++r) idm[detail::hom_at(dims, hc.off0,k, r, r)] = Rat(1);
    B.unit = gl0_coords.coords(idm);
  }
  auto comp00 = [&](const Vec<Rat>& f, const Vec<Rat>& g) {
    Vec<Rat> out = vec_zero<Rat>(n0);
    for (int k = 0; k <= m; ++k)
      for (int r = 0; r < dims[k]; ++r)
        for (int c = 0; c < dims[k]; ++c) {
          Rat v(0);
          for (int t = 0; t < dims[k]; ++t)
            v += f[detail::hom_at(dims, hc.off0,k, r, t)] *
                 g[detail::hom_at(dims, hc.off0,k, t, c)];
          out[detail::hom_at(dims, hc.off0,k, r, c)] = v;
        }
    return out;
  };
  B.prod.assign(static_cast<size_t>(B.dim()) * B.dim(), {});
  for (int i = 0; i < B.dim(); ++i)
    for (int j = 0; j < B.dim(); ++j) {
      Vec<Rat> pc = gl0_coords.coords(comp00(hc.gl0_basis[i], hc.gl0_basis[j]));
      for (int t = 0; t < B.dim(); ++t)
        if (!pc[t].is_zero()) B.row(i, j).push_back({t, pc[t]});
    }

  hc.A = std::make_unique<Carrier<Rat>>();
  Carrier<Rat>& A = *hc.A;
  A.id = "homotopies";
  A.maxdeg = 0;
  for (int q = 0; q < quot.qdim(); ++q) {
    A.names.push_back("s" + std::to_string(q));
    A.degs.push_back(0);
  }
  A.unital = false;

  auto lift = [&](int q) { return quot.lift(A.basis_vec(q)); };
  // compositions f o s and s o f at the hom level
  auto comp01 = [&](const Vec<Rat>& f, const Vec<Rat>& s) {
    Vec<Rat> out = vec_zero<Rat>(n1);
    for (int k = 0; k + 1 <= m; ++k)
      for (int r = 0; r < dims[k + 1]; ++r)
        for (int c = 0; c < dims[k]; ++c) {
          Rat v(0);
          for (int t = 0; t < dims[k + 1]; ++t)
            v += f[detail::hom_at(dims, hc.off0,k + 1, r, t)] *
                 s[detail::hom_at(dims, hc.off1,k, t, c)];
          out[detail::hom_at(dims, hc.off1,k, r, c)] = v;
        }
    return out;
  };
  auto comp10 = [&](const Vec<Rat>& s, const Vec<Rat>& f) {
    Vec<Rat> out = vec_zero<Rat>(n1);
    for (int k = 0; k + 1 <= m; ++k)
      for (int r = 0; r < dims[k + 1]; ++r)
        for (int c = 0; c < dims[k]; ++c) {
          Rat v(0);
          for (int t = 0; t < dims[k]; ++t)
            v += s[detail::hom_at(dims, hc.off1,k, r, t)] *
                 f[detail::hom_at(dims, hc.off0,k, t, c)];
          out[detail::hom_at(dims, hc.off1,k, r, c)] = v;
        }
    return out;
  };

  // product on the quotient: s * t = s o bd(t)
  A.prod.assign(static_cast<size_t>(A.dim()) * A.dim(), {});
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) {
      Vec<Rat> p = quot.project(comp10(lift(i), bd1(lift(j))));
      for (int t = 0; t < A.dim(); ++t)
        if (!p[t].is_zero()) A.row(i, j).push_back({t, p[t]});
    }

  hc.x.A = hc.A.get();
  hc.x.B = hc.B.get();
  hc.x.claims_crossed = true;
  hc.x.unital = true;
  hc.x.bd = LinMap<Rat>(hc.A.get(), hc.B.get());
  for (int q = 0; q < A.dim(); ++q) hc.x.bd.set(q, gl0_coords.coords(bd1(lift(q))));
  hc.x.lact = Bilin<Rat>(hc.B.get(), hc.A.get(), hc.A.get());
  hc.x.ract = Bilin<Rat>(hc.A.get(), hc.B.get(), hc.A.get());
  for (int b = 0; b < B.dim(); ++b)
    for (int q = 0; q < A.dim(); ++q) {
      hc.x.lact.set(b, q, quot.project(comp01(hc.gl0_basis[b], lift(q))));
      hc.x.ract.set(q, b, quot.project(comp10(lift(q), hc.gl0_basis[b])));
    }
  return hc;
}

// ---------------------------------------------------------------------------
// Universal envelope of a differential crossed module.
// ---------------------------------------------------------------------------

struct EnvelopingXMod {
  PbwAlg Ue, Ug;
  HopfXMod<Rat> x;  // I = Ue.car, H = Ug.car
};

// rho is extended from the Lie action by derivations (length is preserved
// termwise), then multiplicatively along base monomials.
inline EnvelopingXMod enveloping_xmod(const DiffXMod<Rat>& dx, int maxdeg) {
  EnvelopingXMod env;
  env.Ue = build_pbw(lie_spec_of_carrier(*dx.e, "U(" + dx.e->id + ")", maxdeg));
  env.Ug = build_pbw(lie_spec_of_carrier(*dx.g, "U(" + dx.g->id + ")", maxdeg));
  Carrier<Rat>& I = env.Ue.car;
  Carrier<Rat>& H = env.Ug.car;
  const int D = maxdeg;

  auto act_gen = [&](int gi, const Vec<Rat>& v) {
    Vec<Rat> out = vec_zero<Rat>(I.dim());
    for (int b = 0; b < I.dim(); ++b) {
      if (v[b].is_zero()) continue;
      const auto& mono = env.Ue.monos[b];
      for (size_t pos = 0; pos < mono.size(); ++pos) {
        Vec<Rat> target = dx.act.apply(dx.g->basis_vec(gi), dx.e->basis_vec(mono[pos]));
        for (int k = 0; k < dx.e->dim(); ++k) {
          if (target[k].is_zero()) continue;
          std::vector<int> w = mono;
          w[pos] = k;
          Vec<Rat> piece = env.Ue.nf(w);
          axpy(out, v[b] * target[k], piece);
        }
      }
    }
    return out;
  };

  env.x.I = &I;
  env.x.H = &H;
  // the envelope of a crossed differential module is crossed as a Hopf
  // module; only the induced bare structure on the smash needs reflection
  env.x.claims_crossed = true;
  env.x.rho = Bilin<Rat>(&H, &I, &I);
  for (int hx = 0; hx < H.dim(); ++hx) {
    const auto& w = env.Ug.monos[hx];
    for (int iv = 0; iv < I.dim(); ++iv) {
      if (H.degs[hx] + I.degs[iv] > D) continue;
      Vec<Rat> cur = I.basis_vec(iv);
      for (auto it = w.rbegin(); it != w.rend(); ++it) cur = act_gen(*it, cur);
      env.x.rho.set(hx, iv, cur);
    }
  }
  env.x.bd = LinMap<Rat>(&I, &H);
  for (int iv = 0; iv < I.dim(); ++iv) {
    Vec<Rat> cur = H.unit;
    for (int gidx : env.Ue.monos[iv]) {
      // lift the Lie-level boundary image into envelope coordinates
      Vec<Rat> vg = dx.bd.apply(dx.e->basis_vec(gidx));
      Vec<Rat> vH = vec_zero<Rat>(H.dim());
      for (int j = 0; j < dx.g->dim(); ++j)
        if (!vg[j].is_zero()) vH[env.Ug.gen_basis[j]] += vg[j];
      cur = H.mul(cur, vH);
    }
    env.x.bd.set(iv, cur);
  }
  return env;
}

// ---------------------------------------------------------------------------
// Smash product A = I0 (x) H with the induced pre-crossed structure over H.
// ---------------------------------------------------------------------------

struct SmashProduct {
  std::unique_ptr<Carrier<Rat>> A;
  const Carrier<Rat>* I = nullptr;
  const Carrier<Rat>* H = nullptr;
  int unit_I = -1;
  std::map<std::pair<int, int>, int> pair_index;  // (I basis, H basis) -> A basis
  BareXMod<Rat> x;                                // pre-crossed, over H

  int at(int iu, int ix) const {
    auto it = pair_index.find({iu, ix});
    return it == pair_index.end() ? -1 : it->second;
  }
};

inline SmashProduct build_smash_product(const HopfXMod<Rat>& hx) {
  SmashProduct sp;
  const Carrier<Rat>& I = *hx.I;
  const Carrier<Rat>& H = *hx.H;
  const int D = I.maxdeg;
  sp.I = hx.I;
  sp.H = hx.H;
  // locate the unit basis element of I
  {
    int at = -1, hits = 0;
    for (int j = 0; j < I.dim(); ++j)
      if (!I.unit[j].is_zero()) { at = j; ++hits; }
    if (hits != 1 || !(I.unit[at] == Rat(1)))
      throw std::invalid_argument("smash: I unit must be a basis element");
    sp.unit_I = at;
  }

  sp.A = std::make_unique<Carrier<Rat>>();
  Carrier<Rat>& A = *sp.A;
  A.id = "smash(" + I.id + "," + H.id + ")";
  A.maxdeg = D;
  // degree-ascending basis of pairs
  for (int d = 1; d <= D; ++d)
    for (int iu = 0; iu < I.dim(); ++iu) {
      if (iu == sp.unit_I) continue;
      for (int ix = 0; ix < H.dim(); ++ix) {
        if (I.degs[iu] + H.degs[ix] != d) continue;
        sp.pair_index[{iu, ix}] = A.dim();
        A.names.push_back(I.names[iu] + "(x)" + H.names[ix]);
        A.degs.push_back(d);
      }
    }
  A.unital = false;

  // embed an (I vector, H vector) pair; the I part must avoid the unit
  auto embed = [&](const Vec<Rat>& vi, const Vec<Rat>& vh, Vec<Rat>& out) {
    if (!vi[sp.unit_I].is_zero())
      throw std::logic_error("smash: unit leaked into the augmentation side");
    for (int iu = 0; iu < I.dim(); ++iu) {
      if (vi[iu].is_zero() || iu == sp.unit_I) continue;
      for (int ix = 0; ix < H.dim(); ++ix) {
        if (vh[ix].is_zero()) continue;
        int id = sp.at(iu, ix);
        if (id < 0) {
          if (I.degs[iu] + H.degs[ix] <= D)
            throw std::logic_error("smash: missing pair index");
          continue;  // beyond the cap
        }
        out[id] += vi[iu] * vh[ix];
      }
    }
  };

  A.prod.assign(static_cast<size_t>(A.dim()) * A.dim(), {});
  for (const auto& [p1, a1] : sp.pair_index)
    for (const auto& [p2, a2] : sp.pair_index) {
      const auto [u, x] = p1;
      const auto [v, y] = p2;
      if (A.degs[a1] + A.degs[a2] > D) continue;
      Vec<Rat> acc = vec_zero<Rat>(A.dim());
      for (const auto& [xl, xr, cx] : H.cop[x]) {
        Vec<Rat> act = hx.rho.apply(H.basis_vec(xl), I.basis_vec(v));
        Vec<Rat> ipart = I.mul(I.basis_vec(u), act);
        Vec<Rat> hpart = H.mul(H.basis_vec(xr), H.basis_vec(y));
        scale(ipart, cx);
        embed(ipart, hpart, acc);
      }
      for (int t = 0; t < A.dim(); ++t)
        if (!acc[t].is_zero()) A.row(a1, a2).push_back({t, acc[t]});
    }

  sp.x.A = sp.A.get();
  sp.x.B = hx.H;
  sp.x.claims_crossed = false;
  sp.x.unital = true;
  sp.x.bd = LinMap<Rat>(sp.A.get(), hx.H);
  for (const auto& [p, a] : sp.pair_index) {
    const auto [u, x] = p;
    sp.x.bd.set(a, H.mul(hx.bd.apply(I.basis_vec(u)), H.basis_vec(x)));
  }
  sp.x.lact = Bilin<Rat>(hx.H, sp.A.get(), sp.A.get());
  sp.x.ract = Bilin<Rat>(sp.A.get(), hx.H, sp.A.get());
  for (int hb = 0; hb < H.dim(); ++hb) {
    for (const auto& [p, a] : sp.pair_index) {
      const auto [v, y] = p;
      if (H.degs[hb] + A.degs[a] > D) continue;
      // (1 (x) hb) (v (x) y)
      Vec<Rat> acc = vec_zero<Rat>(A.dim());
      for (const auto& [xl, xr, cx] : H.cop[hb]) {
        Vec<Rat> act = hx.rho.apply(H.basis_vec(xl), I.basis_vec(v));
        Vec<Rat> hpart = H.mul(H.basis_vec(xr), H.basis_vec(y));
        scale(act, cx);
        embed(act, hpart, acc);
      }
      sp.x.lact.set(hb, a, acc);
      // (v (x) y) (1 (x) hb)
      Vec<Rat> acc2 = vec_zero<Rat>(A.dim());
      embed(I.basis_vec(v), H.mul(H.basis_vec(y), H.basis_vec(hb)), acc2);
      sp.x.ract.set(a, hb, acc2);
    }
  }
  return sp;
}

// Pair an I-valued vector (no unit component) with an H-valued vector into
// smash coordinates; errors if a needed pair fell beyond the cap.
inline Vec<Rat> smash_embed(const SmashProduct& sp, const Vec<Rat>& vi, const Vec<Rat>& vh) {
  Vec<Rat> out = vec_zero<Rat>(sp.A->dim());
  if (!vi[sp.unit_I].is_zero())
    throw std::logic_error("smash_embed: I part carries a unit component");
  for (int iu = 0; iu < sp.I->dim(); ++iu) {
    if (vi[iu].is_zero() || iu == sp.unit_I) continue;
    for (int ix = 0; ix < sp.H->dim(); ++ix) {
      if (vh[ix].is_zero()) continue;
      int id = sp.at(iu, ix);
      if (id < 0) throw std::logic_error("smash_embed: pair beyond the truncation");
      out[id] += vi[iu] * vh[ix];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counit-style evaluation maps out of envelopes.
// ---------------------------------------------------------------------------

// Monomials of U(Lie(A)) multiplied out inside A itself; the empty monomial
// is sent to zero here (its image is the adjoined unit, handled at the series
// level by the cell maps).
inline LinMap<Rat> counit_into(const PbwAlg& u, const Carrier<Rat>& A) {
  LinMap<Rat> m(&u.car, &A);
  for (int b = 0; b < u.car.dim(); ++b) {
    const auto& mono = u.monos[b];
    if (mono.empty()) continue;
    Vec<Rat> cur = A.basis_vec(mono[0]);
    for (size_t i = 1; i < mono.size(); ++i) cur = A.mul(cur, A.basis_vec(mono[i]));
    m.set(b, cur);
  }
  return m;
}

// Same for a unital target: the empty monomial goes to the unit.
inline LinMap<Rat> counit_into_unital(const PbwAlg& u, const Carrier<Rat>& B) {
  LinMap<Rat> m = counit_into(u, B);
  for (int b = 0; b < u.car.dim(); ++b)
    if (u.monos[b].empty()) m.set(b, B.unit);
  return m;
}

// kappa(u (x) x) = xi_flat(u) <| xi_B(x), out of a smash of envelopes into
// the original bare module.
inline LinMap<Rat> smash_counit(const SmashProduct& sp, const BareXMod<Rat>& target,
                                const LinMap<Rat>& xi_flat, const LinMap<Rat>& xi_base) {
  LinMap<Rat> m(sp.A.get(), target.A);
  for (const auto& [p, a] : sp.pair_index) {
    const auto [u, x] = p;
    Vec<Rat> va = xi_flat.apply(sp.I->basis_vec(u));
    Vec<Rat> vb = xi_base.apply(sp.H->basis_vec(x));
    m.set(a, target.ract.apply(va, vb));
  }
  return m;
}

template <class S>
LinMap<S> compose_linmap(const LinMap<S>& f, const LinMap<S>& g) {
  // f after g
  assert(g.dst == f.src);
  LinMap<S> m(g.src, f.dst);
  m.unit_to_unit = g.unit_to_unit || f.unit_to_unit;
  for (int a = 0; a < g.src->dim(); ++a) m.set(a, f.apply(g.apply(g.src->basis_vec(a))));
  return m;
}

}  // namespace holotwo
