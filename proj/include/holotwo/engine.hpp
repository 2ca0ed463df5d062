#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "holotwo/geometry.hpp"

namespace holotwo {

struct QuadConfig {
  int ode_steps = 256;  // RK4 steps along t for transports
  int grid_t = 64;      // Simpson panels across t for the transverse integrals
  int grid_s = 64;      // RK4 steps / Simpson panels along s
  double fd_delta = 1e-5;
  int threads = 0;  // 0: take HOLOTWO_THREADS, else 1
};

inline int engine_threads(const QuadConfig& q) {
  if (q.threads > 0) return q.threads;
  if (const char* e = std::getenv("HOLOTWO_THREADS")) {
    int v = std::atoi(e);
    if (v >= 1) return v;
  }
  return 1;
}

inline int round_up_even(int v) { return v + (v & 1); }

// --- 1-holonomy -------------------------------------------------------------

// Transport solving P' = omega_bar(gamma'(t)) P from t=a to t=b, P(a)=1.
// Stages sample the velocity with the side limit pointing into the panel so
// piecewise paths stay fourth-order accurate.
inline Series<Cx> holonomy_P(const OneForm& w, const Path1& g, int N, int steps, double a = 0.0,
                             double b = 1.0) {
  steps = std::max(4, ((steps + 3) / 4) * 4);
  const double h = (b - a) / steps;
  const int side_in = h > 0 ? +1 : -1;
  auto gen = [&](double t, int side) { return omega_bar(w, N, g.f(t), g.d(t, side)); };
  Series<Cx> P = Series<Cx>::one(w.car, N);
  for (int i = 0; i < steps; ++i) {
    const double t0 = a + i * h;
    Series<Cx> A0 = gen(t0, side_in);
    Series<Cx> Am = gen(t0 + h / 2.0, +1);
    Series<Cx> A1 = gen(t0 + h, -side_in);
    Series<Cx> k1 = A0 * P;
    Series<Cx> k2 = Am * (P + Cx(h / 2.0, 0.0) * k1);
    Series<Cx> k3 = Am * (P + Cx(h / 2.0, 0.0) * k2);
    Series<Cx> k4 = A1 * (P + Cx(h, 0.0) * k3);
    P = P + Cx(h / 6.0, 0.0) * (k1 + Cx(2.0, 0.0) * k2 + Cx(2.0, 0.0) * k3 + k4);
  }
  return P;
}

// One forward sweep recording the transport at nodes j/(nnodes-1).
inline std::vector<Series<Cx>> holonomy_P_nodes(const OneForm& w, const Path1& g, int N,
                                                int nnodes, int steps) {
  const int gaps = nnodes - 1;
  int per_gap = round_up_even(std::max(2, (steps + gaps - 1) / gaps));
  std::vector<Series<Cx>> out;
  out.reserve(nnodes);
  Series<Cx> P = Series<Cx>::one(w.car, N);
  out.push_back(P);
  auto gen = [&](double t, int side) { return omega_bar(w, N, g.f(t), g.d(t, side)); };
  const double h = 1.0 / (gaps * per_gap);
  for (int j = 0; j < gaps; ++j) {
    for (int i = 0; i < per_gap; ++i) {
      const double t0 = (static_cast<double>(j) * per_gap + i) * h;
      Series<Cx> A0 = gen(t0, +1);
      Series<Cx> Am = gen(t0 + h / 2.0, +1);
      Series<Cx> A1 = gen(t0 + h, -1);
      Series<Cx> k1 = A0 * P;
      Series<Cx> k2 = Am * (P + Cx(h / 2.0, 0.0) * k1);
      Series<Cx> k3 = Am * (P + Cx(h / 2.0, 0.0) * k2);
      Series<Cx> k4 = A1 * (P + Cx(h, 0.0) * k3);
      P = P + Cx(h / 6.0, 0.0) * (k1 + Cx(2.0, 0.0) * k2 + Cx(2.0, 0.0) * k3 + k4);
    }
    out.push_back(P);
  }
  return out;
}

// Path-ordered series by Picard iteration with cumulative Simpson panels; an
// integrator-independent cross-check for holonomy_P. Exact in the truncation
// after N sweeps.
inline Series<Cx> chen_series(const OneForm& w, const Path1& g, int N, int panels) {
  panels = std::max(2, panels);
  const int nn = 2 * panels + 1;
  const double d = 1.0 / (2 * panels);  // node spacing
  // generator samples, stored per panel so seams keep one-sided limits
  std::vector<std::array<Series<Cx>, 3>> A(panels);
  for (int k = 0; k < panels; ++k) {
    A[k][0] = omega_bar(w, N, g.f((2 * k) * d), g.d((2 * k) * d, +1));
    A[k][1] = omega_bar(w, N, g.f((2 * k + 1) * d), g.d((2 * k + 1) * d, +1));
    A[k][2] = omega_bar(w, N, g.f((2 * k + 2) * d), g.d((2 * k + 2) * d, -1));
  }
  std::vector<Series<Cx>> P(nn, Series<Cx>::one(w.car, N));
  for (int sweep = 0; sweep < N; ++sweep) {
    std::vector<Series<Cx>> Pn(nn, Series<Cx>::one(w.car, N));
    Series<Cx> cum = Series<Cx>::zero(w.car, N);
    for (int k = 0; k < panels; ++k) {
      Series<Cx> f0 = A[k][0] * P[2 * k];
      Series<Cx> f1 = A[k][1] * P[2 * k + 1];
      Series<Cx> f2 = A[k][2] * P[2 * k + 2];
      Series<Cx> half =
          Cx(d / 12.0, 0.0) * (Cx(5.0, 0.0) * f0 + Cx(8.0, 0.0) * f1 - f2);
      Series<Cx> full = Cx(d / 3.0, 0.0) * (f0 + Cx(4.0, 0.0) * f1 + f2);
      Pn[2 * k + 1] = Pn[2 * k + 1] + cum + half;
      cum = cum + full;
      Pn[2 * k + 2] = Pn[2 * k + 2] + cum;
    }
    P = std::move(Pn);
  }
  return P.back();
}

// --- transverse transport data ---------------------------------------------

// Per fixed s: transports along the t-slice at nodes i/(2*grid_t).
//   fwd[i]  = transport over [0, u_i]
//   inv[i]  = fwd[i]^{-1}
//   tail[i] = fwd[i] * fwd[1]^{-1}   (transport from the far end back to u_i)
struct Sheet {
  std::vector<Series<Cx>> fwd, inv, tail;
  const Series<Cx>& full() const { return fwd.back(); }
  const Series<Cx>& full_inv() const { return inv.back(); }
};

inline Sheet make_sheet(const OneForm& w, const Path2& G, double s, int N, int grid_t,
                        int ode_steps) {
  Sheet sh;
  sh.fwd = holonomy_P_nodes(w, G.at_s(s), N, 2 * grid_t + 1, ode_steps);
  sh.inv.reserve(sh.fwd.size());
  for (const auto& p : sh.fwd) sh.inv.push_back(series_invert(p));
  sh.tail.reserve(sh.fwd.size());
  for (const auto& p : sh.fwd) sh.tail.push_back(p * sh.inv.back());
  return sh;
}

inline std::vector<Sheet> make_sheets(const OneForm& w, const Path2& G,
                                      const std::vector<double>& svals, int N, int grid_t,
                                      int ode_steps, int threads) {
  std::vector<Sheet> out(svals.size());
  if (threads <= 1) {
    for (size_t i = 0; i < svals.size(); ++i)
      out[i] = make_sheet(w, G, svals[i], N, grid_t, ode_steps);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < svals.size(); i = next.fetch_add(1))
        out[i] = make_sheet(w, G, svals[i], N, grid_t, ode_steps);
    });
  for (auto& th : pool) th.join();
  return out;
}

// --- the action used by the 2-layer -----------------------------------------

// Either a Hopf action table, or conjugation through a bare two-sided pair.
struct GroupAction {
  const Bilin<Cx>* rho = nullptr;
  const Bilin<Cx>* lact = nullptr;
  const Bilin<Cx>* ract = nullptr;

  // g and gi are mutually inverse transports over the base.
  Series<Cx> act(const Series<Cx>& g, const Series<Cx>& gi, const Series<Cx>& m) const {
    if (rho) return apply(*rho, g, m);
    return apply(*ract, apply(*lact, g, m), gi);
  }
};

// --- 2-holonomy -------------------------------------------------------------

namespace detail_engine {

template <class F>
Series<Cx> simpson(const Carrier<Cx>* car, int N, int panels, double node_width, F&& sample) {
  Series<Cx> acc(car, N);
  for (int k = 0; k < panels; ++k) {
    acc = acc + sample(2 * k, +1) + Cx(4.0, 0.0) * sample(2 * k + 1, +1) +
          sample(2 * k + 2, -1);
  }
  return Cx(node_width / 3.0, 0.0) * acc;
}

}  // namespace detail_engine

// integral over u of (transport back to 0) |> m_bar(d_s, d_t) at fixed s
inline Series<Cx> q_rate(const TwoConnection& c, const GroupAction& act, const Path2& G,
                         const Sheet& sh, double s, int side_s, int N, int grid_t) {
  const double d = 1.0 / (2 * grid_t);
  return detail_engine::simpson(c.m2.car, N, grid_t, d, [&](int i, int side_u) {
    const double u = i * d;
    Pt p = G.f(u, s);
    Series<Cx> m = m_bar(c, N, p, G.d_s(u, s, side_s), G.d_t(u, s, side_u));
    return act.act(sh.inv[i], sh.fwd[i], m);
  });
}

// Surface transport Q over [s0,s1]: solves Q' = -q_rate(s) Q, Q(s0)=1, values
// in the unit-head group of the top algebra.
inline Series<Cx> holonomy_Q(const TwoConnection& c, const GroupAction& act, const Path2& G,
                             int N, const QuadConfig& q, double s0 = 0.0, double s1 = 1.0) {
  const int steps = round_up_even(std::max(2, q.grid_s));
  const double h = (s1 - s0) / steps;
  const int side_in = h > 0 ? +1 : -1;
  std::vector<double> svals(2 * steps + 1);
  for (int j = 0; j <= 2 * steps; ++j) svals[j] = s0 + j * h / 2.0;
  std::vector<Sheet> sheets =
      make_sheets(c.omega, G, svals, N, q.grid_t, q.ode_steps, engine_threads(q));
  Series<Cx> Q = Series<Cx>::one(c.m2.car, N);
  for (int j = 0; j < steps; ++j) {
    const Series<Cx> a0 = q_rate(c, act, G, sheets[2 * j], svals[2 * j], side_in, N, q.grid_t);
    const Series<Cx> am =
        q_rate(c, act, G, sheets[2 * j + 1], svals[2 * j + 1], +1, N, q.grid_t);
    const Series<Cx> a1 =
        q_rate(c, act, G, sheets[2 * j + 2], svals[2 * j + 2], -side_in, N, q.grid_t);
    Series<Cx> k1 = -(a0 * Q);
    Series<Cx> k2 = -(am * (Q + Cx(h / 2.0, 0.0) * k1));
    Series<Cx> k3 = -(am * (Q + Cx(h / 2.0, 0.0) * k2));
    Series<Cx> k4 = -(a1 * (Q + Cx(h, 0.0) * k3));
    Q = Q + Cx(h / 6.0, 0.0) * (k1 + Cx(2.0, 0.0) * k2 + Cx(2.0, 0.0) * k3 + k4);
  }
  return Q;
}

// Additive surface integral R over [s0,s1]:
//   - int int (back-transport |< left) m_bar (right-tail transport) du dv
inline Series<Cx> holonomy_R(const TwoConnection& c, const Bilin<Cx>& lct, const Bilin<Cx>& rct,
                             const Path2& G, int N, const QuadConfig& q, double s0 = 0.0,
                             double s1 = 1.0) {
  const int vpan = round_up_even(std::max(2, q.grid_s)) / 2;
  const double dv = (s1 - s0) / (2 * vpan);
  std::vector<double> svals(2 * vpan + 1);
  for (int j = 0; j <= 2 * vpan; ++j) svals[j] = s0 + j * dv;
  std::vector<Sheet> sheets =
      make_sheets(c.omega, G, svals, N, q.grid_t, q.ode_steps, engine_threads(q));
  const double du = 1.0 / (2 * q.grid_t);
  auto inner = [&](int j, int side_v) {
    const Sheet& sh = sheets[j];
    const double v = svals[j];
    return detail_engine::simpson(c.m2.car, N, q.grid_t, du, [&](int i, int side_u) {
      const double u = i * du;
      Series<Cx> m = m_bar(c, N, G.f(u, v), G.d_s(u, v, side_v), G.d_t(u, v, side_u));
      return apply(rct, apply(lct, sh.inv[i], m), sh.tail[i]);
    });
  };
  Series<Cx> acc =
      detail_engine::simpson(c.m2.car, N, vpan, dv, [&](int j, int side_v) { return inner(j, side_v); });
  return -acc;
}

// How an (I series, H series) pair lands in a product carrier.
struct PairEmbed {
  const Carrier<Cx>* dst = nullptr;
  std::function<Vec<Cx>(const Vec<Cx>&, const Vec<Cx>&)> pair;
};

inline Series<Cx> pair_series(const PairEmbed& pe, const Series<Cx>& a, const Series<Cx>& b) {
  Series<Cx> z(pe.dst, a.N);
  for (int i = 0; i <= a.N; ++i) {
    if (vec_is_zero(a.body[i])) continue;
    for (int j = 0; i + j <= a.N; ++j) {
      if (vec_is_zero(b.body[j])) continue;
      Vec<Cx> p = pe.pair(a.body[i], b.body[j]);
      for (size_t t = 0; t < p.size(); ++t) z.body[i + j][t] += p[t];
    }
  }
  return z;
}

// Smeared surface integral with values in the product carrier:
//   - int int ((back-transport) |> m_bar) (x) (full back-transport) du dv
inline Series<Cx> holonomy_blur(const TwoConnection& c, const GroupAction& act,
                                const PairEmbed& pe, const Path2& G, int N, const QuadConfig& q,
                                double s0 = 0.0, double s1 = 1.0) {
  const int vpan = round_up_even(std::max(2, q.grid_s)) / 2;
  const double dv = (s1 - s0) / (2 * vpan);
  std::vector<double> svals(2 * vpan + 1);
  for (int j = 0; j <= 2 * vpan; ++j) svals[j] = s0 + j * dv;
  std::vector<Sheet> sheets =
      make_sheets(c.omega, G, svals, N, q.grid_t, q.ode_steps, engine_threads(q));
  const double du = 1.0 / (2 * q.grid_t);
  auto inner = [&](int j, int side_v) {
    const Sheet& sh = sheets[j];
    const double v = svals[j];
    return detail_engine::simpson(pe.dst, N, q.grid_t, du, [&](int i, int side_u) {
      const double u = i * du;
      Series<Cx> m = m_bar(c, N, G.f(u, v), G.d_s(u, v, side_v), G.d_t(u, v, side_u));
      return pair_series(pe, act.act(sh.inv[i], sh.fwd[i], m), sh.full_inv());
    });
  };
  Series<Cx> acc =
      detail_engine::simpson(pe.dst, N, vpan, dv, [&](int j, int side_v) { return inner(j, side_v); });
  return -acc;
}

}  // namespace holotwo
