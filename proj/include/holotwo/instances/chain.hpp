#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <utility>

#include "holotwo/cells.hpp"
#include "holotwo/engine.hpp"

namespace holotwo {

// ---------------------------------------------------------------------------
// The full tower over a finite chain complex: the two-layer algebra of maps,
// its Lie version, the universal envelopes, the smash product with its merely
// pre-crossed structure, the budget-graded reflection, and the evaluation
// maps that send the envelope story back down to the maps themselves.  The
// rational side is certified exactly; complex copies of every carrier and
// structure map are kept alongside for the quadrature engine.
// ---------------------------------------------------------------------------

inline ChainComplexSpec chain_spec_cc() {
  ChainComplexSpec s;
  s.dims = {1, 1};
  s.boundaries = {{{Rat(1)}}};
  return s;
}

inline ChainComplexSpec chain_spec_c2c() {
  ChainComplexSpec s;
  s.dims = {1, 2};
  s.boundaries = {{{Rat(1), Rat(0)}}};
  return s;
}

inline ChainComplexSpec chain_spec_cc2c() {
  ChainComplexSpec s;
  s.dims = {1, 2, 1};
  s.boundaries = {{{Rat(1), Rat(0)}}, {{Rat(0)}, {Rat(1)}}};
  return s;
}

struct ChainBundle {
  int N = 3;
  HomComplex hom;
  DiffXModBundle<Rat> lie;
  EnvelopingXMod env;
  SmashProduct smash;
  ReflectResult<Rat> refl;
  LinMap<Rat> xi_flat;  // envelope of the module -> module, empty word -> 0
  LinMap<Rat> xi_base;  // envelope of the base -> base, empty word -> 1
  LinMap<Rat> kappa;    // smash -> module
  LinMap<Rat> kappa_q;  // reflected smash -> module
  Report cert;

  // engine-side copies
  std::unique_ptr<Carrier<Cx>> Ac, Bc, Ic, Hc, Sc, Sqc;
  BareXMod<Cx> bare;        // module of maps over chain maps
  HopfXMod<Cx> hopf;        // envelope over envelope
  BareXMod<Cx> smash_bare;  // smash over the base envelope (pre-crossed)
  BareXMod<Cx> refl_bare;   // reflected smash (crossed)
  LinMap<Cx> xi_flat_c, xi_base_c, kappa_c;
  LinMap<Cx> pi_c, iota_c, kappa_q_c;
  LinMap<Cx> gen_e;      // module -> envelope generator slots
  LinMap<Cx> gen_g;      // base -> envelope generator slots
  LinMap<Cx> smash_of_e;  // module -> smash, a -> gen(a) (x) 1
  int unit_I = -1;  // unit index inside the module envelope
  int unit_H = -1;  // unit index inside the base envelope
};

inline std::unique_ptr<ChainBundle> build_chain_bundle(const ChainComplexSpec& spec,
                                                       int N = 3) {
  auto out = std::make_unique<ChainBundle>();
  ChainBundle& cb = *out;
  cb.N = N;

  cb.hom = build_hom_complex(spec);
  cb.cert.suite = "chain:" + cb.hom.B->id;
  cb.cert.merge(check_bare_xmod_axioms(cb.hom.x, 0.0));

  cb.lie = lie_of(cb.hom.x);
  cb.cert.merge(check_diff_xmod_axioms(cb.lie.x, 0.0));

  cb.env = enveloping_xmod(cb.lie.x, N);
  // the envelope holds its carriers by value; re-point the structure maps at
  // the members that actually live here
  cb.env.x.I = &cb.env.Ue.car;
  cb.env.x.H = &cb.env.Ug.car;
  cb.env.x.bd.src = cb.env.x.I;
  cb.env.x.bd.dst = cb.env.x.H;
  cb.env.x.rho.left = cb.env.x.H;
  cb.env.x.rho.right = cb.env.x.I;
  cb.env.x.rho.dst = cb.env.x.I;
  cb.cert.merge(check_hopf_xmod_axioms(cb.env.x, 0.0));

  cb.smash = build_smash_product(cb.env.x);
  cb.smash.I = cb.env.x.I;
  cb.smash.H = cb.env.x.H;
  cb.cert.merge(check_bare_xmod_axioms(cb.smash.x, 0.0));

  cb.refl = reflect(cb.smash.x);
  cb.cert.merge(cb.refl.cert);

  cb.xi_flat = counit_into(cb.env.Ue, *cb.hom.A);
  cb.xi_base = counit_into_unital(cb.env.Ug, *cb.hom.B);
  cb.kappa = smash_counit(cb.smash, cb.hom.x, cb.xi_flat, cb.xi_base);
  cb.kappa_q = compose_linmap(cb.kappa, cb.refl.iota);

  // --- evaluation-map layer, certified exactly -----------------------------
  {
    const Carrier<Rat>& Ug = cb.env.Ug.car;
    const Carrier<Rat>& Ue = cb.env.Ue.car;
    const Carrier<Rat>& A = *cb.hom.A;
    const Carrier<Rat>& B = *cb.hom.B;
    const Carrier<Rat>& S = *cb.smash.A;
    const int D = Ug.maxdeg;

    double w_bm = 0.0;
    long n_bm = 0;
    for (int a = 0; a < Ug.dim(); ++a)
      for (int b = 0; b < Ug.dim(); ++b) {
        if (Ug.degs[a] + Ug.degs[b] > D) continue;
        Vec<Rat> lhs = cb.xi_base.apply(Ug.mul(Ug.basis_vec(a), Ug.basis_vec(b)));
        Vec<Rat> rhs =
            B.mul(cb.xi_base.apply(Ug.basis_vec(a)), cb.xi_base.apply(Ug.basis_vec(b)));
        w_bm = std::max(w_bm, detail::vdist(lhs, rhs));
        ++n_bm;
      }
    cb.cert.add(CheckItem::make("base evaluation is multiplicative within the cap",
                                "ev-base-mul", w_bm, 0.0, n_bm));

    double w_fm = 0.0;
    long n_fm = 0;
    for (int a = 0; a < Ue.dim(); ++a)
      for (int b = 0; b < Ue.dim(); ++b) {
        if (Ue.degs[a] + Ue.degs[b] > D) continue;
        if (cb.env.Ue.monos[a].empty() || cb.env.Ue.monos[b].empty()) continue;
        Vec<Rat> lhs = cb.xi_flat.apply(Ue.mul(Ue.basis_vec(a), Ue.basis_vec(b)));
        Vec<Rat> rhs =
            A.mul(cb.xi_flat.apply(Ue.basis_vec(a)), cb.xi_flat.apply(Ue.basis_vec(b)));
        w_fm = std::max(w_fm, detail::vdist(lhs, rhs));
        ++n_fm;
      }
    cb.cert.add(CheckItem::make("flat evaluation is multiplicative within the cap",
                                "ev-flat-mul", w_fm, 0.0, n_fm));

    double w_kb = 0.0;
    for (int s = 0; s < S.dim(); ++s) {
      Vec<Rat> lhs = cb.xi_base.apply(cb.smash.x.bd.apply(S.basis_vec(s)));
      Vec<Rat> rhs = cb.hom.x.bd.apply(cb.kappa.apply(S.basis_vec(s)));
      w_kb = std::max(w_kb, detail::vdist(lhs, rhs));
    }
    cb.cert.add(CheckItem::make("the smash evaluation intertwines the boundaries",
                                "ev-smash-bd", w_kb, 0.0, S.dim()));

    double w_ka = 0.0;
    long n_ka = 0;
    for (int h = 0; h < Ug.dim(); ++h)
      for (int s = 0; s < S.dim(); ++s) {
        if (Ug.degs[h] + S.degs[s] > D) continue;
        Vec<Rat> hb = cb.xi_base.apply(Ug.basis_vec(h));
        Vec<Rat> ks = cb.kappa.apply(S.basis_vec(s));
        Vec<Rat> l1 = cb.kappa.apply(cb.smash.x.lact.apply(Ug.basis_vec(h), S.basis_vec(s)));
        Vec<Rat> r1 = cb.hom.x.lact.apply(hb, ks);
        w_ka = std::max(w_ka, detail::vdist(l1, r1));
        Vec<Rat> l2 = cb.kappa.apply(cb.smash.x.ract.apply(S.basis_vec(s), Ug.basis_vec(h)));
        Vec<Rat> r2 = cb.hom.x.ract.apply(ks, hb);
        w_ka = std::max(w_ka, detail::vdist(l2, r2));
        ++n_ka;
      }
    cb.cert.add(CheckItem::make("the smash evaluation intertwines the actions",
                                "ev-smash-act", w_ka, 0.0, n_ka));

    double w_kl = 0.0;
    long n_kl = 0;
    for (const auto& sl : cb.refl.slice)
      for (const auto& r : sl.rows) {
        w_kl = std::max(w_kl, norm_inf(cb.kappa.apply(r)));
        ++n_kl;
      }
    cb.cert.add(CheckItem::make("the smash evaluation kills every budget slice of the ideal",
                                "ev-kills-ideal", w_kl, 0.0, n_kl));
  }

  // --- engine-side copies --------------------------------------------------
  cb.Ac = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*cb.hom.A));
  cb.Bc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*cb.hom.B));
  cb.Ic = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(cb.env.Ue.car));
  cb.Hc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(cb.env.Ug.car));
  cb.Sc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*cb.smash.A));

  cb.bare.A = cb.Ac.get();
  cb.bare.B = cb.Bc.get();
  cb.bare.bd = convert_linmap<Cx>(cb.hom.x.bd, cb.Ac.get(), cb.Bc.get());
  cb.bare.lact = convert_bilin<Cx>(cb.hom.x.lact, cb.Bc.get(), cb.Ac.get(), cb.Ac.get());
  cb.bare.ract = convert_bilin<Cx>(cb.hom.x.ract, cb.Ac.get(), cb.Bc.get(), cb.Ac.get());
  cb.bare.claims_crossed = cb.hom.x.claims_crossed;
  cb.bare.claims_balanced = cb.hom.x.claims_balanced;

  cb.hopf.I = cb.Ic.get();
  cb.hopf.H = cb.Hc.get();
  cb.hopf.bd = convert_linmap<Cx>(cb.env.x.bd, cb.Ic.get(), cb.Hc.get());
  cb.hopf.rho = convert_bilin<Cx>(cb.env.x.rho, cb.Hc.get(), cb.Ic.get(), cb.Ic.get());
  cb.hopf.claims_crossed = cb.env.x.claims_crossed;

  cb.smash_bare.A = cb.Sc.get();
  cb.smash_bare.B = cb.Hc.get();
  cb.smash_bare.bd = convert_linmap<Cx>(cb.smash.x.bd, cb.Sc.get(), cb.Hc.get());
  cb.smash_bare.lact = convert_bilin<Cx>(cb.smash.x.lact, cb.Hc.get(), cb.Sc.get(), cb.Sc.get());
  cb.smash_bare.ract = convert_bilin<Cx>(cb.smash.x.ract, cb.Sc.get(), cb.Hc.get(), cb.Sc.get());
  cb.smash_bare.claims_crossed = cb.smash.x.claims_crossed;
  cb.smash_bare.claims_balanced = cb.smash.x.claims_balanced;

  cb.Sqc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*cb.refl.Aq));
  cb.refl_bare.A = cb.Sqc.get();
  cb.refl_bare.B = cb.Hc.get();
  cb.refl_bare.bd = convert_linmap<Cx>(cb.refl.x.bd, cb.Sqc.get(), cb.Hc.get());
  cb.refl_bare.lact = convert_bilin<Cx>(cb.refl.x.lact, cb.Hc.get(), cb.Sqc.get(), cb.Sqc.get());
  cb.refl_bare.ract = convert_bilin<Cx>(cb.refl.x.ract, cb.Sqc.get(), cb.Hc.get(), cb.Sqc.get());
  cb.refl_bare.claims_crossed = true;
  cb.refl_bare.claims_balanced = cb.refl.x.claims_balanced;

  cb.xi_flat_c = convert_linmap<Cx>(cb.xi_flat, cb.Ic.get(), cb.Ac.get());
  cb.xi_base_c = convert_linmap<Cx>(cb.xi_base, cb.Hc.get(), cb.Bc.get());
  cb.kappa_c = convert_linmap<Cx>(cb.kappa, cb.Sc.get(), cb.Ac.get());
  cb.pi_c = convert_linmap<Cx>(cb.refl.pi, cb.Sc.get(), cb.Sqc.get());
  cb.iota_c = convert_linmap<Cx>(cb.refl.iota, cb.Sqc.get(), cb.Sc.get());
  cb.kappa_q_c = convert_linmap<Cx>(cb.kappa_q, cb.Sqc.get(), cb.Ac.get());

  cb.unit_I = cb.smash.unit_I;
  for (int j = 0; j < cb.Hc->dim(); ++j)
    if (std::abs(cb.Hc->unit[j]) > 0.0) {
      cb.unit_H = j;
      break;
    }

  cb.gen_e = LinMap<Cx>(cb.Ac.get(), cb.Ic.get());
  for (int i = 0; i < cb.Ac->dim(); ++i)
    cb.gen_e.set(i, cb.Ic->basis_vec(cb.env.Ue.gen_basis[i]));
  cb.gen_g = LinMap<Cx>(cb.Bc.get(), cb.Hc.get());
  for (int i = 0; i < cb.Bc->dim(); ++i)
    cb.gen_g.set(i, cb.Hc->basis_vec(cb.env.Ug.gen_basis[i]));
  cb.smash_of_e = LinMap<Cx>(cb.Ac.get(), cb.Sc.get());
  for (int i = 0; i < cb.Ac->dim(); ++i) {
    const int id = cb.smash.at(cb.env.Ue.gen_basis[i], cb.unit_H);
    if (id < 0) throw std::logic_error("chain bundle: generator pair beyond the truncation");
    cb.smash_of_e.set(i, cb.Sc->basis_vec(id));
  }

  return out;
}

// cell-map data bundles over this tower
inline ProjData<Cx> chain_proj(const ChainBundle& cb) {
  ProjData<Cx> pd;
  pd.xi_flat = cb.xi_flat_c;
  pd.xi_base = cb.xi_base_c;
  pd.unit_idx = cb.unit_I;
  return pd;
}

inline KData<Cx> chain_k(const ChainBundle& cb) { return {cb.kappa_q_c, cb.xi_base_c}; }

inline IncData<Cx> chain_inc(const ChainBundle& cb) {
  return {&cb.smash, cb.Sc.get(), cb.Sqc.get(), cb.pi_c};
}

// ---------------------------------------------------------------------------
// Polynomial 2-connection over the plane with two complex coordinates.  The
// potential is a module-valued 1-form alpha with rational polynomial
// coefficients of total degree at most two; the base form is bd(alpha), the
// h-coefficient of the 2-layer is d(alpha), and the h^2-coefficient is the
// action pairing of alpha against bd(alpha).  With that shape the fake
// curvature vanishes identically, which is certified in exact arithmetic at
// rational sample points, while the base curvature itself is genuinely
// nonzero, so surface transport actually moves endpoints.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr int chain_nmono = 6;
inline constexpr int chain_mono_exp[chain_nmono][2] = {{0, 0}, {1, 0}, {0, 1},
                                                       {2, 0}, {1, 1}, {0, 2}};

inline int chain_mono_find(int e0, int e1) {
  for (int m = 0; m < chain_nmono; ++m)
    if (chain_mono_exp[m][0] == e0 && chain_mono_exp[m][1] == e1) return m;
  return -1;
}

// d/dz_k of monomial m as (scale, monomial); scale 0 when it vanishes
inline std::pair<int, int> chain_mono_d(int m, int k) {
  int e[2] = {chain_mono_exp[m][0], chain_mono_exp[m][1]};
  if (e[k] == 0) return {0, 0};
  const int scale = e[k];
  e[k] -= 1;
  return {scale, chain_mono_find(e[0], e[1])};
}

template <class S>
S chain_mono_eval(int m, const S& z0, const S& z1) {
  S v = scalar_traits<S>::one();
  for (int i = 0; i < chain_mono_exp[m][0]; ++i) v = v * z0;
  for (int i = 0; i < chain_mono_exp[m][1]; ++i) v = v * z1;
  return v;
}

}  // namespace detail

struct ChainConnection {
  const ChainBundle* cb = nullptr;
  // coef[j][m]: module-valued coefficient of z0^e0 z1^e1 dz_j
  std::array<std::array<Vec<Rat>, detail::chain_nmono>, 2> coef;
  std::array<std::array<Vec<Cx>, detail::chain_nmono>, 2> coefc;
  TwoConnection bare;     // base form in chain maps, 2-layer in the module
  TwoConnection envl;     // the same data through the envelope generator slots
  TwoConnection smsh;     // 2-layer values pushed into the smash as gen (x) 1
  Report cert;

  Vec<Cx> slot(const Pt& p, int j) const {
    Vec<Cx> v = vec_zero<Cx>(static_cast<int>(coefc[j][0].size()));
    for (int m = 0; m < detail::chain_nmono; ++m)
      axpy(v, detail::chain_mono_eval<Cx>(m, p[0], p[1]), coefc[j][m]);
    return v;
  }

  Vec<Cx> dslot(const Pt& p, int k, int j) const {
    Vec<Cx> v = vec_zero<Cx>(static_cast<int>(coefc[j][0].size()));
    for (int m = 0; m < detail::chain_nmono; ++m) {
      const auto [sc, md] = detail::chain_mono_d(m, k);
      if (sc == 0) continue;
      axpy(v, Cx(static_cast<double>(sc), 0.0) * detail::chain_mono_eval<Cx>(md, p[0], p[1]),
           coefc[j][m]);
    }
    return v;
  }

  Vec<Cx> alpha(const Pt& p, const Pt& X) const {
    Vec<Cx> v = slot(p, 0);
    for (auto& c : v) c *= X[0];
    axpy(v, X[1], slot(p, 1));
    return v;
  }

  Vec<Cx> m1_bare(const Pt& p, const Pt& X, const Pt& Y) const {
    Vec<Cx> v = vec_zero<Cx>(static_cast<int>(coefc[0][0].size()));
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Cx w = X[k] * Y[j] - Y[k] * X[j];
        if (std::abs(w) == 0.0) continue;
        axpy(v, w, dslot(p, k, j));
      }
    return v;
  }

  Vec<Cx> m2_bare(const Pt& p, const Pt& X, const Pt& Y) const {
    Vec<Cx> aX = alpha(p, X), aY = alpha(p, Y);
    Vec<Cx> out = cb->bare.ract.apply(aY, cb->bare.bd.apply(aX));
    axpy(out, Cx(-1.0, 0.0), cb->bare.ract.apply(aX, cb->bare.bd.apply(aY)));
    return out;
  }
};

inline std::unique_ptr<ChainConnection> make_chain_connection(const ChainBundle& cb,
                                                              unsigned seed = 7) {
  auto out = std::make_unique<ChainConnection>();
  ChainConnection& c = *out;
  c.cb = &cb;
  const Carrier<Rat>& A = *cb.hom.A;
  const Carrier<Rat>& B = *cb.hom.B;

  // raw engine output keeps the draw identical across standard libraries
  std::mt19937 rng(seed);
  auto pick = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  for (int j = 0; j < 2; ++j)
    for (int m = 0; m < detail::chain_nmono; ++m) {
      Vec<Rat> v = vec_zero<Rat>(A.dim());
      for (int i = 0; i < A.dim(); ++i) v[i] = Rat(pick(-2, 2), pick(1, 3));
      c.coef[j][m] = v;
      Vec<Cx> vc;
      for (const auto& q : v) vc.push_back(detail::convert_scalar<Cx>(q));
      c.coefc[j][m] = std::move(vc);
    }

  const ChainConnection* self = out.get();
  const ChainBundle* cbp = &cb;

  c.bare.omega.car = cb.Bc.get();
  c.bare.omega.ev = [self, cbp](const Pt& p, const Pt& X) {
    return cbp->bare.bd.apply(self->alpha(p, X));
  };
  c.bare.m1.car = cb.Ac.get();
  c.bare.m1.ev = [self](const Pt& p, const Pt& X, const Pt& Y) {
    return self->m1_bare(p, X, Y);
  };
  c.bare.m2.car = cb.Ac.get();
  c.bare.m2.ev = [self](const Pt& p, const Pt& X, const Pt& Y) {
    return self->m2_bare(p, X, Y);
  };

  c.envl.omega.car = cb.Hc.get();
  c.envl.omega.ev = [self, cbp](const Pt& p, const Pt& X) {
    return cbp->gen_g.apply(cbp->bare.bd.apply(self->alpha(p, X)));
  };
  c.envl.m1.car = cb.Ic.get();
  c.envl.m1.ev = [self, cbp](const Pt& p, const Pt& X, const Pt& Y) {
    return cbp->gen_e.apply(self->m1_bare(p, X, Y));
  };
  c.envl.m2.car = cb.Ic.get();
  c.envl.m2.ev = [self, cbp](const Pt& p, const Pt& X, const Pt& Y) {
    return cbp->gen_e.apply(self->m2_bare(p, X, Y));
  };

  c.smsh.omega = c.envl.omega;
  c.smsh.m1.car = cb.Sc.get();
  c.smsh.m1.ev = [self, cbp](const Pt& p, const Pt& X, const Pt& Y) {
    return cbp->smash_of_e.apply(self->m1_bare(p, X, Y));
  };
  c.smsh.m2.car = cb.Sc.get();
  c.smsh.m2.ev = [self, cbp](const Pt& p, const Pt& X, const Pt& Y) {
    return cbp->smash_of_e.apply(self->m2_bare(p, X, Y));
  };

  // --- exact certificates at rational sample points ------------------------
  {
    const std::array<std::array<Rat, 2>, 6> samples = {{{Rat(0), Rat(0)},
                                                        {Rat(1), Rat(0)},
                                                        {Rat(0), Rat(1)},
                                                        {Rat(1), Rat(-1)},
                                                        {Rat(1, 2), Rat(-1, 3)},
                                                        {Rat(-2, 3), Rat(2, 5)}}};
    auto slot_rat = [&](const std::array<Rat, 2>& p, int j) {
      Vec<Rat> v = vec_zero<Rat>(A.dim());
      for (int m = 0; m < detail::chain_nmono; ++m)
        axpy(v, detail::chain_mono_eval<Rat>(m, p[0], p[1]), c.coef[j][m]);
      return v;
    };
    auto dslot_rat = [&](const std::array<Rat, 2>& p, int k, int j) {
      Vec<Rat> v = vec_zero<Rat>(A.dim());
      for (int m = 0; m < detail::chain_nmono; ++m) {
        const auto [sc, md] = detail::chain_mono_d(m, k);
        if (sc == 0) continue;
        axpy(v, Rat(sc) * detail::chain_mono_eval<Rat>(md, p[0], p[1]), c.coef[j][m]);
      }
      return v;
    };
    auto comm = [&](const Vec<Rat>& x, const Vec<Rat>& y) {
      Vec<Rat> v = B.mul(x, y);
      axpy(v, Rat(-1), B.mul(y, x));
      return v;
    };

    double w_h1 = 0.0, w_h2 = 0.0, w_env = 0.0;
    bool curved = false;
    for (const auto& p : samples) {
      Vec<Rat> a0 = slot_rat(p, 0), a1 = slot_rat(p, 1);
      Vec<Rat> w0 = cb.hom.x.bd.apply(a0), w1 = cb.hom.x.bd.apply(a1);

      // h: bd of the curl of alpha equals the curl of the base form
      Vec<Rat> m1v = dslot_rat(p, 0, 1);
      axpy(m1v, Rat(-1), dslot_rat(p, 1, 0));
      Vec<Rat> lhs1 = cb.hom.x.bd.apply(m1v);
      Vec<Rat> dw = cb.hom.x.bd.apply(dslot_rat(p, 0, 1));
      axpy(dw, Rat(-1), cb.hom.x.bd.apply(dslot_rat(p, 1, 0)));
      w_h1 = std::max(w_h1, detail::vdist(lhs1, dw));

      // h^2: bd of the pairing term cancels the bracket of the base form
      Vec<Rat> m2v = cb.hom.x.ract.apply(a1, w0);
      axpy(m2v, Rat(-1), cb.hom.x.ract.apply(a0, w1));
      Vec<Rat> lhs2 = cb.hom.x.bd.apply(m2v);
      axpy(lhs2, Rat(1), comm(w0, w1));
      w_h2 = std::max(w_h2, norm_inf(lhs2));

      // the same cancellation upstairs in the envelopes
      Vec<Rat> m2e = vec_zero<Rat>(cb.env.Ue.car.dim());
      for (int i = 0; i < A.dim(); ++i)
        if (!m2v[i].is_zero()) m2e[cb.env.Ue.gen_basis[i]] += m2v[i];
      Vec<Rat> lhse = cb.env.x.bd.apply(m2e);
      Vec<Rat> w0e = vec_zero<Rat>(cb.env.Ug.car.dim());
      Vec<Rat> w1e = vec_zero<Rat>(cb.env.Ug.car.dim());
      for (int i = 0; i < B.dim(); ++i) {
        if (!w0[i].is_zero()) w0e[cb.env.Ug.gen_basis[i]] += w0[i];
        if (!w1[i].is_zero()) w1e[cb.env.Ug.gen_basis[i]] += w1[i];
      }
      Vec<Rat> bre = cb.env.Ug.car.mul(w0e, w1e);
      axpy(bre, Rat(-1), cb.env.Ug.car.mul(w1e, w0e));
      axpy(lhse, Rat(1), bre);
      w_env = std::max(w_env, norm_inf(lhse));

      // base curvature: nonzero somewhere, or the 2-layer tests turn vacuous
      Vec<Rat> f = cb.hom.x.bd.apply(dslot_rat(p, 0, 1));
      axpy(f, Rat(-1), cb.hom.x.bd.apply(dslot_rat(p, 1, 0)));
      axpy(f, Rat(-1), comm(w0, w1));
      if (norm_inf(f) > 0.0) curved = true;
    }
    c.cert.suite = "connection:" + cb.hom.B->id;
    c.cert.add(CheckItem::make("fake curvature vanishes exactly at rational samples (h)",
                               "conn-fake-h1", w_h1, 0.0, samples.size()));
    c.cert.add(CheckItem::make("fake curvature vanishes exactly at rational samples (h^2)",
                               "conn-fake-h2", w_h2, 0.0, samples.size()));
    c.cert.add(CheckItem::make("the cancellation survives in the envelopes",
                               "conn-fake-env", w_env, 0.0, samples.size()));
    c.cert.add(CheckItem::make("the base form is genuinely curved at a sample",
                               "conn-curved", curved ? 0.0 : 1.0, 0.0, samples.size()));
  }

  return out;
}

// ---------------------------------------------------------------------------
// Paths and surfaces over the two-coordinate plane.  Surfaces drift along one
// direction while a transverse ripple grows with s; the ripple vanishes at
// both ends of t, so the side edges stay put and surfaces sharing an end
// configuration compose cleanly in both directions.
// ---------------------------------------------------------------------------

inline Pt chain_pt(double a0, double b0, double a1, double b1) {
  return Pt{Cx(a0, b0), Cx(a1, b1)};
}

inline double chain_bump(double t) {
  return std::sin(M_PI * t) + 0.25 * std::sin(2.0 * M_PI * t);
}
inline double d_chain_bump(double t) {
  return M_PI * std::cos(M_PI * t) + 0.5 * M_PI * std::cos(2.0 * M_PI * t);
}

inline Path1 chain_path_segment(const Pt& p0, const Pt& p1) {
  Path1 g;
  g.f = [p0, p1](double t) {
    Pt q = p0;
    for (size_t i = 0; i < q.size(); ++i) q[i] += t * (p1[i] - p0[i]);
    return q;
  };
  g.df = [p0, p1](double, int) {
    Pt q = p1;
    for (size_t i = 0; i < q.size(); ++i) q[i] -= p0[i];
    return q;
  };
  return g;
}

inline Path1 chain_path_bend(const Pt& p0, const Pt& p1, const Pt& dev) {
  Path1 g;
  g.f = [p0, p1, dev](double t) {
    Pt q = p0;
    for (size_t i = 0; i < q.size(); ++i)
      q[i] += t * (p1[i] - p0[i]) + std::sin(M_PI * t) * dev[i];
    return q;
  };
  g.df = [p0, p1, dev](double t, int) {
    Pt q = p1;
    for (size_t i = 0; i < q.size(); ++i)
      q[i] = p1[i] - p0[i] + M_PI * std::cos(M_PI * t) * dev[i];
    return q;
  };
  return g;
}

// ruled sheet: drift p0 -> p0 + u, ripple amplitude sliding from a0 to a1
inline Path2 chain_surface(const Pt& p0, const Pt& u, const Pt& v, double a0, double a1) {
  Path2 G;
  G.f = [p0, u, v, a0, a1](double t, double s) {
    const double amp = (1.0 - s) * a0 + s * a1;
    Pt q = p0;
    for (size_t i = 0; i < q.size(); ++i) q[i] += t * u[i] + amp * chain_bump(t) * v[i];
    return q;
  };
  G.dt = [u, v, a0, a1](double t, double s, int) {
    const double amp = (1.0 - s) * a0 + s * a1;
    Pt q = u;
    for (size_t i = 0; i < q.size(); ++i) q[i] += amp * d_chain_bump(t) * v[i];
    return q;
  };
  G.ds = [v, a0, a1](double t, double, int) {
    Pt q = v;
    for (size_t i = 0; i < q.size(); ++i) q[i] *= (a1 - a0) * chain_bump(t);
    return q;
  };
  return G;
}

}  // namespace holotwo
