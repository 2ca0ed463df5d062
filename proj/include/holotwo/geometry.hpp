#pragma once

#include <cmath>
#include <functional>

#include "holotwo/series.hpp"

namespace holotwo {

using Pt = std::vector<Cx>;  // point of the manifold / tangent vector

inline Pt pt_add(const Pt& a, const Pt& b, Cx cb = Cx(1.0, 0.0)) {
  Pt o = a;
  for (size_t i = 0; i < o.size(); ++i) o[i] += cb * b[i];
  return o;
}

inline Pt pt_scale(const Pt& a, Cx c) {
  Pt o = a;
  for (auto& v : o) v *= c;
  return o;
}

inline double pt_dist(const Pt& a, const Pt& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Smooth path [0,1] -> C^n. Derivatives may be analytic or fall back to
// one-/two-sided finite differences; `side` (+1/-1) picks the limit at a
// breakpoint of a piecewise path.
struct Path1 {
  std::function<Pt(double)> f;
  std::function<Pt(double, int)> df;  // may be empty -> FD
  double fd_delta = 1e-5;

  Pt at(double t) const { return f(t); }

  Pt d(double t, int side = +1) const {
    if (df) return df(t, side);
    const double h = fd_delta;
    if (t - h >= 0.0 && t + h <= 1.0) {
      Pt a = f(t + h), b = f(t - h);
      return pt_scale(pt_add(a, b, Cx(-1.0, 0.0)), Cx(1.0 / (2.0 * h), 0.0));
    }
    if (t + 2 * h <= 1.0 && (side > 0 || t - 2 * h < 0.0)) {
      // one-sided second order forward
      Pt f0 = f(t), f1 = f(t + h), f2 = f(t + 2 * h);
      Pt o = pt_scale(f0, Cx(-1.5, 0.0));
      o = pt_add(o, f1, Cx(2.0, 0.0));
      o = pt_add(o, f2, Cx(-0.5, 0.0));
      return pt_scale(o, Cx(1.0 / h, 0.0));
    }
    Pt f0 = f(t), f1 = f(t - h), f2 = f(t - 2 * h);
    Pt o = pt_scale(f0, Cx(1.5, 0.0));
    o = pt_add(o, f1, Cx(-2.0, 0.0));
    o = pt_add(o, f2, Cx(0.5, 0.0));
    return pt_scale(o, Cx(1.0 / h, 0.0));
  }
};

inline Path1 path_concat(const Path1& a, const Path1& b) {
  Path1 p;
  p.f = [a, b](double t) { return t <= 0.5 ? a.f(2.0 * t) : b.f(2.0 * t - 1.0); };
  p.df = [a, b](double t, int side) {
    if (t < 0.5 || (t == 0.5 && side < 0))
      return pt_scale(a.d(std::min(2.0 * t, 1.0), side), Cx(2.0, 0.0));
    return pt_scale(b.d(std::max(2.0 * t - 1.0, 0.0), side), Cx(2.0, 0.0));
  };
  return p;
}

inline Path1 path_reverse(const Path1& a) {
  Path1 p;
  p.f = [a](double t) { return a.f(1.0 - t); };
  p.df = [a](double t, int side) { return pt_scale(a.d(1.0 - t, -side), Cx(-1.0, 0.0)); };
  return p;
}

// phi: [0,1]->[0,1] with derivative; endpoint-fixing reparametrization.
inline Path1 path_reparam(const Path1& a, const std::function<double(double)>& phi,
                          const std::function<double(double)>& dphi) {
  Path1 p;
  p.f = [a, phi](double t) { return a.f(phi(t)); };
  p.df = [a, phi, dphi](double t, int side) {
    return pt_scale(a.d(phi(t), side), Cx(dphi(t), 0.0));
  };
  return p;
}

inline Path1 path_polyline(const std::vector<Pt>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("polyline needs at least two points");
  Path1 p;
  const int nseg = static_cast<int>(pts.size()) - 1;
  p.f = [pts, nseg](double t) {
    double u = t * nseg;
    int k = std::min(static_cast<int>(u), nseg - 1);
    double loc = u - k;
    return pt_add(pt_scale(pts[k], Cx(1.0 - loc, 0.0)), pts[k + 1], Cx(loc, 0.0));
  };
  p.df = [pts, nseg](double t, int side) {
    double u = t * nseg;
    int k = static_cast<int>(u);
    if (u == std::floor(u) && side < 0) k -= 1;
    k = std::max(0, std::min(k, nseg - 1));
    return pt_scale(pt_add(pts[k + 1], pts[k], Cx(-1.0, 0.0)),
                    Cx(static_cast<double>(nseg), 0.0));
  };
  return p;
}

inline Path1 path_bezier(const std::vector<Pt>& ctrl) {
  if (ctrl.size() < 2) throw std::invalid_argument("bezier needs at least two control points");
  Path1 p;
  p.f = [ctrl](double t) {
    std::vector<Pt> w = ctrl;
    for (size_t lvl = ctrl.size() - 1; lvl >= 1; --lvl) {
      for (size_t i = 0; i < lvl; ++i)
        w[i] = pt_add(pt_scale(w[i], Cx(1.0 - t, 0.0)), w[i + 1], Cx(t, 0.0));
    }
    return w[0];
  };
  p.df = [ctrl](double t, int) {
    const size_t n = ctrl.size() - 1;
    std::vector<Pt> w(n);
    for (size_t i = 0; i < n; ++i)
      w[i] = pt_scale(pt_add(ctrl[i + 1], ctrl[i], Cx(-1.0, 0.0)),
                      Cx(static_cast<double>(n), 0.0));
    for (size_t lvl = n - 1; lvl >= 1; --lvl)
      for (size_t i = 0; i < lvl; ++i)
        w[i] = pt_add(pt_scale(w[i], Cx(1.0 - t, 0.0)), w[i + 1], Cx(t, 0.0));
    return w[0];
  };
  return p;
}

// Surface [0,1]^2 -> C^n whose t-extremes are single points (a 2-path between
// the boundary loops s=0 and s=1).
struct Path2 {
  std::function<Pt(double, double)> f;
  std::function<Pt(double, double, int)> dt;  // side applies to t
  std::function<Pt(double, double, int)> ds;  // side applies to s
  double fd_delta = 1e-5;

  Pt at(double t, double s) const { return f(t, s); }

  Pt d_t(double t, double s, int side = +1) const {
    if (dt) return dt(t, s, side);
    Path1 slice;
    slice.f = [this, s](double u) { return f(u, s); };
    slice.fd_delta = fd_delta;
    return slice.d(t, side);
  }
  Pt d_s(double t, double s, int side = +1) const {
    if (ds) return ds(t, s, side);
    Path1 slice;
    slice.f = [this, t](double u) { return f(t, u); };
    slice.fd_delta = fd_delta;
    return slice.d(s, side);
  }

  Path1 at_s(double s) const {
    Path1 p;
    auto ff = f;
    auto dd = dt;
    p.f = [ff, s](double t) { return ff(t, s); };
    if (dd) p.df = [dd, s](double t, int side) { return dd(t, s, side); };
    p.fd_delta = fd_delta;
    return p;
  }
  Path1 source() const { return at_s(0.0); }
  Path1 target() const { return at_s(1.0); }
};

inline Path2 sheet_of(const Path1& g) {
  Path2 p;
  p.f = [g](double t, double) { return g.f(t); };
  p.dt = [g](double t, double, int side) { return g.d(t, side); };
  p.ds = [g](double t, double, int) { return pt_scale(g.f(t), Cx(0.0, 0.0)); };
  return p;
}

inline Path2 path2_concat_t(const Path2& a, const Path2& b) {
  Path2 p;
  p.f = [a, b](double t, double s) {
    return t <= 0.5 ? a.f(2.0 * t, s) : b.f(2.0 * t - 1.0, s);
  };
  p.dt = [a, b](double t, double s, int side) {
    if (t < 0.5 || (t == 0.5 && side < 0))
      return pt_scale(a.d_t(std::min(2.0 * t, 1.0), s, side), Cx(2.0, 0.0));
    return pt_scale(b.d_t(std::max(2.0 * t - 1.0, 0.0), s, side), Cx(2.0, 0.0));
  };
  p.ds = [a, b](double t, double s, int side) {
    return t <= 0.5 ? a.d_s(2.0 * t, s, side) : b.d_s(2.0 * t - 1.0, s, side);
  };
  return p;
}

inline Path2 path2_concat_s(const Path2& a, const Path2& b) {
  Path2 p;
  p.f = [a, b](double t, double s) {
    return s <= 0.5 ? a.f(t, 2.0 * s) : b.f(t, 2.0 * s - 1.0);
  };
  p.dt = [a, b](double t, double s, int side) {
    return s <= 0.5 ? a.d_t(t, 2.0 * s, side) : b.d_t(t, 2.0 * s - 1.0, side);
  };
  p.ds = [a, b](double t, double s, int side) {
    if (s < 0.5 || (s == 0.5 && side < 0))
      return pt_scale(a.d_s(t, std::min(2.0 * s, 1.0), side), Cx(2.0, 0.0));
    return pt_scale(b.d_s(t, std::max(2.0 * s - 1.0, 0.0), side), Cx(2.0, 0.0));
  };
  return p;
}

inline Path2 path2_reverse_t(const Path2& a) {
  Path2 p;
  p.f = [a](double t, double s) { return a.f(1.0 - t, s); };
  p.dt = [a](double t, double s, int side) {
    return pt_scale(a.d_t(1.0 - t, s, -side), Cx(-1.0, 0.0));
  };
  p.ds = [a](double t, double s, int side) { return a.d_s(1.0 - t, s, side); };
  return p;
}

inline Path2 path2_reverse_s(const Path2& a) {
  Path2 p;
  p.f = [a](double t, double s) { return a.f(t, 1.0 - s); };
  p.dt = [a](double t, double s, int side) { return a.d_t(t, 1.0 - s, side); };
  p.ds = [a](double t, double s, int side) {
    return pt_scale(a.d_s(t, 1.0 - s, -side), Cx(-1.0, 0.0));
  };
  return p;
}

inline Path2 path2_interp(const Path1& g0, const Path1& g1) {
  Path2 p;
  p.f = [g0, g1](double t, double s) {
    return pt_add(pt_scale(g0.f(t), Cx(1.0 - s, 0.0)), g1.f(t), Cx(s, 0.0));
  };
  p.dt = [g0, g1](double t, double s, int side) {
    return pt_add(pt_scale(g0.d(t, side), Cx(1.0 - s, 0.0)), g1.d(t, side), Cx(s, 0.0));
  };
  p.ds = [g0, g1](double t, double, int) {
    return pt_add(g1.f(t), g0.f(t), Cx(-1.0, 0.0));
  };
  return p;
}

inline Path2 path2_reparam(const Path2& a, const std::function<double(double)>& phi,
                           const std::function<double(double)>& dphi,
                           const std::function<double(double)>& psi,
                           const std::function<double(double)>& dpsi) {
  Path2 p;
  p.f = [a, phi, psi](double t, double s) { return a.f(phi(t), psi(s)); };
  p.dt = [a, phi, psi, dphi](double t, double s, int side) {
    return pt_scale(a.d_t(phi(t), psi(s), side), Cx(dphi(t), 0.0));
  };
  p.ds = [a, phi, psi, dpsi](double t, double s, int side) {
    return pt_scale(a.d_s(phi(t), psi(s), side), Cx(dpsi(s), 0.0));
  };
  return p;
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
inline double d_smoothstep(double t) { return 6.0 * t * (1.0 - t); }

// Shear the t-line by an s-dependent bump; the four boundary edges are
// untouched, so this is a thin deformation of the same surface.
inline Path2 path2_shear_t(const Path2& a, double alpha) {
  Path2 o;
  o.fd_delta = a.fd_delta;
  o.f = [a, alpha](double t, double s) {
    return a.f(t + alpha * t * (1.0 - t) * s * (1.0 - s), s);
  };
  o.dt = [a, alpha](double t, double s, int side) {
    const double phi = t + alpha * t * (1.0 - t) * s * (1.0 - s);
    const double dphi = 1.0 + alpha * (1.0 - 2.0 * t) * s * (1.0 - s);
    Pt v = a.d_t(phi, s, side);
    for (auto& c : v) c *= dphi;
    return v;
  };
  o.ds = [a, alpha](double t, double s, int side) {
    const double phi = t + alpha * t * (1.0 - t) * s * (1.0 - s);
    const double dpsi = alpha * t * (1.0 - t) * (1.0 - 2.0 * s);
    Pt v = a.d_s(phi, s, side);
    const Pt w = a.d_t(phi, s, side);
    for (size_t k = 0; k < v.size(); ++k) v[k] += w[k] * dpsi;
    return v;
  };
  return o;
}

// Ease the s-schedule without moving the source or target path.
inline Path2 path2_ease_s(const Path2& a) {
  return path2_reparam(
      a, [](double t) { return t; }, [](double) { return 1.0; },
      [](double s) { return smoothstep(s); }, [](double s) { return d_smoothstep(s); });
}

// Push the interior of the square along a fixed ambient direction, with a
// window vanishing to first order on all four edges: the deformed surface
// keeps the exact same boundary paths, but the deformation is not a
// reparametrization of the square.
inline Path2 path2_bump(const Path2& a, const Pt& dir, double amp) {
  auto win = [](double u) { return 16.0 * u * u * (1.0 - u) * (1.0 - u); };
  auto dwin = [](double u) { return 32.0 * u * (1.0 - u) * (1.0 - 2.0 * u); };
  Path2 o;
  o.fd_delta = a.fd_delta;
  o.f = [a, dir, amp, win](double t, double s) {
    return pt_add(a.f(t, s), dir, Cx(amp * win(t) * win(s), 0.0));
  };
  o.dt = [a, dir, amp, win, dwin](double t, double s, int side) {
    return pt_add(a.d_t(t, s, side), dir, Cx(amp * dwin(t) * win(s), 0.0));
  };
  o.ds = [a, dir, amp, win, dwin](double t, double s, int side) {
    return pt_add(a.d_s(t, s, side), dir, Cx(amp * win(t) * dwin(s), 0.0));
  };
  return o;
}

// --- forms ------------------------------------------------------------------

struct OneForm {
  const Carrier<Cx>* car = nullptr;
  std::function<Vec<Cx>(const Pt&, const Pt&)> ev;  // (point, tangent) -> value
  // analytic exterior derivative (point, X, Y) -> d(omega)(X,Y); empty -> FD
  std::function<Vec<Cx>(const Pt&, const Pt&, const Pt&)> dev;
};

struct TwoForm {
  const Carrier<Cx>* car = nullptr;
  std::function<Vec<Cx>(const Pt&, const Pt&, const Pt&)> ev;
};

// connection pair: base 1-form plus the two-form coefficients of the 2-layer
struct TwoConnection {
  OneForm omega;  // values in the base algebra
  TwoForm m1;     // h coefficient (often zero)
  TwoForm m2;     // h^2 coefficient
};

inline Series<Cx> omega_bar(const OneForm& w, int N, const Pt& p, const Pt& X) {
  Series<Cx> s(w.car, N);
  if (N >= 1) s.body[1] = w.ev(p, X);
  return s;
}

inline Series<Cx> m_bar(const TwoConnection& c, int N, const Pt& p, const Pt& X, const Pt& Y) {
  Series<Cx> s(c.m2.car, N);
  if (N >= 1 && c.m1.ev) s.body[1] = c.m1.ev(p, X, Y);
  if (N >= 2) s.body[2] = c.m2.ev(p, X, Y);
  return s;
}

// d(omega)(X, Y) at p for constant extensions of X, Y, by central differences
// unless the form carries its own derivative.
inline Vec<Cx> d_one_form(const OneForm& w, const Pt& p, const Pt& X, const Pt& Y, double delta) {
  if (w.dev) return w.dev(p, X, Y);
  auto dir = [&](const Pt& along, const Pt& arg) {
    Vec<Cx> hi = w.ev(pt_add(p, along, Cx(delta, 0.0)), arg);
    Vec<Cx> lo = w.ev(pt_add(p, along, Cx(-delta, 0.0)), arg);
    for (size_t i = 0; i < hi.size(); ++i) hi[i] = (hi[i] - lo[i]) / (2.0 * delta);
    return hi;
  };
  Vec<Cx> a = dir(X, Y), b = dir(Y, X);
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

// curvature F(X,Y) = d(omega)(X,Y) - [omega(X), omega(Y)]
inline Vec<Cx> curvature_at(const OneForm& w, const Pt& p, const Pt& X, const Pt& Y,
                            double delta = 1e-5) {
  Vec<Cx> f = d_one_form(w, p, X, Y, delta);
  Vec<Cx> br = w.car->bracket(w.ev(p, X), w.ev(p, Y));
  for (size_t i = 0; i < f.size(); ++i) f[i] -= br[i];
  return f;
}

// d(m)(X,Y,Z) for a 2-form, constant extensions.
inline Vec<Cx> d_two_form(const TwoForm& m, const Pt& p, const Pt& X, const Pt& Y, const Pt& Z,
                          double delta) {
  auto dir = [&](const Pt& along, const Pt& a1, const Pt& a2) {
    Vec<Cx> hi = m.ev(pt_add(p, along, Cx(delta, 0.0)), a1, a2);
    Vec<Cx> lo = m.ev(pt_add(p, along, Cx(-delta, 0.0)), a1, a2);
    for (size_t i = 0; i < hi.size(); ++i) hi[i] = (hi[i] - lo[i]) / (2.0 * delta);
    return hi;
  };
  Vec<Cx> o = dir(X, Y, Z);
  Vec<Cx> b = dir(Y, X, Z);
  Vec<Cx> c = dir(Z, X, Y);
  for (size_t i = 0; i < o.size(); ++i) o[i] = o[i] - b[i] + c[i];
  return o;
}

// How the base algebra acts on the top one: either a Hopf action table or the
// two-sided difference of a bare pair.
struct ActionHook {
  const Bilin<Cx>* rho = nullptr;
  const Bilin<Cx>* lact = nullptr;
  const Bilin<Cx>* ract = nullptr;

  Vec<Cx> apply(const Vec<Cx>& b, const Vec<Cx>& a) const {
    if (rho) return rho->apply(b, a);
    Vec<Cx> out = lact->apply(b, a);
    Vec<Cx> r = ract->apply(a, b);
    for (size_t i = 0; i < out.size(); ++i) out[i] -= r[i];
    return out;
  }
};

// cyclic action-wedge (omega wedge|> m)(X,Y,Z)
inline Vec<Cx> wedge_act(const OneForm& w, const TwoForm& m, const ActionHook& act, const Pt& p,
                         const Pt& X, const Pt& Y, const Pt& Z) {
  Vec<Cx> o = act.apply(w.ev(p, X), m.ev(p, Y, Z));
  Vec<Cx> b = act.apply(w.ev(p, Y), m.ev(p, X, Z));
  Vec<Cx> c = act.apply(w.ev(p, Z), m.ev(p, X, Y));
  for (size_t i = 0; i < o.size(); ++i) o[i] = o[i] - b[i] + c[i];
  return o;
}

// full 2-curvature 3-form as a truncated series:
//   h d(m1) + h^2 (d(m2) - omega wedge|> m1) + h^3 (- omega wedge|> m2)
inline Series<Cx> two_curvature_at(const TwoConnection& c, const ActionHook& act, int N,
                                   const Pt& p, const Pt& X, const Pt& Y, const Pt& Z,
                                   double delta = 1e-5) {
  Series<Cx> out(c.m2.car, N);
  if (N >= 1 && c.m1.ev) out.body[1] = d_two_form(c.m1, p, X, Y, Z, delta);
  if (N >= 2) {
    out.body[2] = d_two_form(c.m2, p, X, Y, Z, delta);
    if (c.m1.ev) {
      Vec<Cx> wm = wedge_act(c.omega, c.m1, act, p, X, Y, Z);
      for (size_t i = 0; i < wm.size(); ++i) out.body[2][i] -= wm[i];
    }
  }
  if (N >= 3) {
    Vec<Cx> wm = wedge_act(c.omega, c.m2, act, p, X, Y, Z);
    for (size_t i = 0; i < wm.size(); ++i) out.body[3][i] -= wm[i];
  }
  return out;
}

// fake-curvature residuals at one point/frame:
//   h: bd(m1(X,Y)) - d(omega)(X,Y);  h^2: bd(m2(X,Y)) + [omega(X), omega(Y)]
inline double fake_curvature_residual(const TwoConnection& c, const LinMap<Cx>& bd, const Pt& p,
                                      const Pt& X, const Pt& Y, double delta = 1e-5) {
  Vec<Cx> h1 = c.m1.ev ? bd.apply(c.m1.ev(p, X, Y)) : vec_zero<Cx>(bd.dst->dim());
  Vec<Cx> dw = d_one_form(c.omega, p, X, Y, delta);
  for (size_t i = 0; i < h1.size(); ++i) h1[i] -= dw[i];
  Vec<Cx> h2 = bd.apply(c.m2.ev(p, X, Y));
  Vec<Cx> br = c.omega.car->bracket(c.omega.ev(p, X), c.omega.ev(p, Y));
  for (size_t i = 0; i < h2.size(); ++i) h2[i] += br[i];
  return std::max(norm_inf(h1), norm_inf(h2));
}

}  // namespace holotwo
