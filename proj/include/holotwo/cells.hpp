#pragma once

#include "holotwo/constructions.hpp"

namespace holotwo {

// 2-cell in the multiplicative 2-groupoid of a crossed module of groups: a
// source 1-cell g and a filler e; the target is bd(e)^{-1} g. Works over
// either flavor (bare with adjoined units, or group-likes of a Hopf pair)
// through CellCtx.
template <class S>
struct TimesCell {
  Series<S> g;
  Series<S> e;
};

// 2-cell in the additive sesquigroupoid: source b and filler a, target
// b + bd(a). Bare modules only.
template <class S>
struct PlusCell {
  Series<S> b;
  Series<S> a;
};

template <class S>
struct CellCtx {
  enum class Kind { bare, hopf };
  Kind kind = Kind::bare;
  const BareXMod<S>* bx = nullptr;
  const HopfXMod<S>* hx = nullptr;
  int N = 3;
  LinMap<S> bd_flagged;  // bare: bd with the adjoined unit sent to 1_B

  static CellCtx make_bare(const BareXMod<S>* x, int n) {
    CellCtx c;
    c.kind = Kind::bare;
    c.bx = x;
    c.N = n;
    c.bd_flagged = x->bd;
    c.bd_flagged.unit_to_unit = true;
    return c;
  }
  static CellCtx make_hopf(const HopfXMod<S>* x, int n) {
    CellCtx c;
    c.kind = Kind::hopf;
    c.hx = x;
    c.N = n;
    return c;
  }

  const Carrier<S>* cg() const { return kind == Kind::bare ? bx->B : hx->H; }
  const Carrier<S>* ce() const { return kind == Kind::bare ? bx->A : hx->I; }

  Series<S> one_g() const { return Series<S>::one(cg(), N); }
  Series<S> one_e() const { return Series<S>::one(ce(), N); }

  // group-level boundary of a filler
  Series<S> bd_grp(const Series<S>& e) const {
    if (kind == Kind::bare) return apply(bd_flagged, e);
    return apply(hx->bd, e);
  }

  // group-level action of a 1-cell on a filler
  Series<S> act_grp(const Series<S>& g, const Series<S>& e) const {
    if (kind == Kind::hopf) return apply(hx->rho, g, e);
    // 1 + g |> a <| g^{-1} on the body part
    Series<S> a = e;
    for (int n = 0; n <= N; ++n) a.sc[n] = scalar_traits<S>::zero();
    Series<S> res = apply(bx->ract, apply(bx->lact, g, a), series_invert(g));
    for (int n = 0; n <= N; ++n) res.sc[n] = e.sc[n];
    return res;
  }
};

// --- multiplicative cells ---------------------------------------------------

template <class S>
Series<S> times_target(const CellCtx<S>& c, const TimesCell<S>& t) {
  return series_invert(c.bd_grp(t.e)) * t.g;
}

template <class S>
double times_valid(const CellCtx<S>& c, const TimesCell<S>& t) {
  double r = head_is_one(t.g) ? 0.0 : 1.0;
  r = std::max(r, head_is_one(t.e) ? 0.0 : 1.0);
  return r;
}

template <class S>
TimesCell<S> times_vcomp(const CellCtx<S>& c, const TimesCell<S>& t1, const TimesCell<S>& t2,
                         double* mismatch = nullptr) {
  if (mismatch) *mismatch = series_dist(t2.g, times_target(c, t1));
  return {t1.g, t1.e * t2.e};
}

template <class S>
TimesCell<S> times_hcomp(const CellCtx<S>& c, const TimesCell<S>& t1, const TimesCell<S>& t2) {
  return {t1.g * t2.g, c.act_grp(t1.g, t2.e) * t1.e};
}

template <class S>
TimesCell<S> times_whisker_l(const CellCtx<S>& c, const Series<S>& h, const TimesCell<S>& t) {
  return {h * t.g, c.act_grp(h, t.e)};
}

template <class S>
TimesCell<S> times_whisker_r(const CellCtx<S>& /*c*/, const TimesCell<S>& t, const Series<S>& h) {
  return {t.g * h, t.e};
}

template <class S>
TimesCell<S> times_vinv(const CellCtx<S>& c, const TimesCell<S>& t) {
  return {times_target(c, t), series_invert(t.e)};
}

template <class S>
TimesCell<S> times_hinv(const CellCtx<S>& c, const TimesCell<S>& t) {
  Series<S> gi = series_invert(t.g);
  return {gi, c.act_grp(gi, series_invert(t.e))};
}

// --- additive cells ---------------------------------------------------------

template <class S>
Series<S> plus_target(const BareXMod<S>& X, const PlusCell<S>& p) {
  return p.b + apply(X.bd, p.a);
}

template <class S>
PlusCell<S> plus_vcomp(const BareXMod<S>& X, const PlusCell<S>& p1, const PlusCell<S>& p2,
                       double* mismatch = nullptr) {
  if (mismatch) *mismatch = series_dist(p2.b, plus_target(X, p1));
  return {p1.b, p1.a + p2.a};
}

template <class S>
PlusCell<S> plus_hcomp(const BareXMod<S>& X, const PlusCell<S>& p1, const PlusCell<S>& p2) {
  Series<S> a = apply(X.lact, p1.b, p2.a) + apply(X.ract, p1.a, p2.b) + p1.a * p2.a;
  return {p1.b * p2.b, a};
}

template <class S>
PlusCell<S> plus_whisker_l(const BareXMod<S>& X, const Series<S>& h, const PlusCell<S>& p) {
  return {h * p.b, apply(X.lact, h, p.a)};
}

template <class S>
PlusCell<S> plus_whisker_r(const BareXMod<S>& X, const PlusCell<S>& p, const Series<S>& h) {
  return {p.b * h, apply(X.ract, p.a, h)};
}

template <class S>
PlusCell<S> plus_vinv(const BareXMod<S>& X, const PlusCell<S>& p) {
  return {plus_target(X, p), -p.a};
}

template <class S>
PlusCell<S> plus_hinv(const BareXMod<S>& X, const PlusCell<S>& p) {
  Series<S> bi = series_invert(p.b);
  Series<S> ti = series_invert(plus_target(X, p));
  return {bi, -apply(X.ract, apply(X.lact, ti, p.a), bi)};
}

// --- structural maps between the two pictures -------------------------------

// (g, e) -> (g, (e^{-1} - 1) <| g)
template <class S>
PlusCell<S> map_T(const CellCtx<S>& c, const TimesCell<S>& t) {
  assert(c.kind == CellCtx<S>::Kind::bare);
  Series<S> diff = series_invert(t.e) - c.one_e();
  return {t.g, apply(c.bx->ract, diff, t.g)};
}

// Carrier-level data for mapping Hopf-side cells into the (reflected) smash:
// the 2-cell filler 1 + sum h^k pi(e_k (x) 1).
template <class S>
struct IncData {
  const SmashProduct* sp = nullptr;   // rational-side index structure
  const Carrier<S>* smash = nullptr;  // converted smash carrier
  const Carrier<S>* smash_q = nullptr;
  LinMap<S> pi;  // smash -> smash_q (identity-shaped when the span is trivial)
};

template <class S>
TimesCell<S> map_Inc(const CellCtx<S>& hopf_ctx, const IncData<S>& inc, const TimesCell<S>& t) {
  assert(hopf_ctx.kind == CellCtx<S>::Kind::hopf);
  const Carrier<S>* I = hopf_ctx.ce();
  const int N = hopf_ctx.N;
  Series<S> e(inc.smash_q, N);
  e.sc[0] = scalar_traits<S>::one();
  const int u1 = inc.sp->unit_I;
  int h_unit = -1;
  for (int j = 0; j < inc.sp->H->dim(); ++j)
    if (!inc.sp->H->unit[j].is_zero()) { h_unit = j; break; }
  for (int k = 1; k <= N; ++k) {
    Vec<S> ek = t.e.body[k];
    if (!scalar_traits<S>::is_zero(ek[u1]))
      throw std::domain_error("map_Inc: filler coefficient has a unit component");
    Vec<S> emb = vec_zero<S>(inc.smash->dim());
    for (int iu = 0; iu < I->dim(); ++iu) {
      if (scalar_traits<S>::is_zero(ek[iu]) || iu == u1) continue;
      int id = inc.sp->at(iu, h_unit);
      if (id < 0) throw std::logic_error("map_Inc: missing pair index");
      emb[id] += ek[iu];
    }
    e.body[k] = inc.pi.apply(emb);
  }
  return {t.g, e};
}

// (g, e) over envelopes -> (xi_B(g), 1 + xi_flat(e)) over the bare module
template <class S>
struct ProjData {
  LinMap<S> xi_flat;  // U(Lie A) -> A, empty monomial -> 0
  LinMap<S> xi_base;  // U(Lie B) -> B, unit -> 1_B
  int unit_idx = 0;   // unit basis index of U(Lie A)
};

template <class S>
TimesCell<S> map_Proj(const ProjData<S>& pd, const TimesCell<S>& t, int N) {
  Series<S> g = apply(pd.xi_base, t.g);
  Series<S> e(pd.xi_flat.dst, N);
  for (int n = 0; n <= N; ++n) {
    e.sc[n] = t.e.body[n][pd.unit_idx];
    e.body[n] = pd.xi_flat.apply(t.e.body[n]);
  }
  return {g, e};
}

// plus-cell pushforward along (kappa, xi_B)
template <class S>
struct KData {
  LinMap<S> kappa_q;  // reflected smash -> A
  LinMap<S> xi_base;  // H = U(Lie B) -> B
};

template <class S>
PlusCell<S> map_K(const KData<S>& kd, const PlusCell<S>& p) {
  return {apply(kd.xi_base, p.b), apply(kd.kappa_q, p.a)};
}

// Membership test for the units-with-group-like-boundary subgroup of I[[h]].
template <class S>
struct HatMembership {
  bool ok = false;
  double residual = 0.0;
  std::string reason;
};

template <class S>
HatMembership<S> hat_grouplike_member(const HopfXMod<S>& X, const Series<S>& e, double tol) {
  HatMembership<S> out;
  // invertibility in the truncated algebra: unit coefficient of the head
  S lambda = scalar_traits<S>::zero();
  for (int j = 0; j < X.I->dim(); ++j) lambda += e.body[0][j] * X.I->counit[j];
  if (scalar_traits<S>::abs(lambda) <= tol) {
    out.reason = "head is not invertible (augmentation of the h^0 term vanishes)";
    out.residual = scalar_traits<S>::abs(lambda);
    return out;
  }
  Series<S> g = apply(X.bd, e);
  Series<S> diff = g;
  diff.body[0] = g.body[0];
  for (int j = 0; j < X.H->dim(); ++j) diff.body[0][j] -= X.H->unit[j];
  double head_res = norm_inf(diff.body[0]);
  if (head_res > tol) {
    out.reason = "boundary does not start at 1";
    out.residual = head_res;
    return out;
  }
  double gl = grouplike_residual(g);
  if (gl > tol) {
    out.reason = "boundary is not group-like";
    out.residual = gl;
    return out;
  }
  out.ok = true;
  out.residual = gl;
  out.reason = "member";
  return out;
}

}  // namespace holotwo
