#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holotwo/cells.hpp"
#include "holotwo/constructions.hpp"
#include "holotwo/engine.hpp"
#include "holotwo/geometry.hpp"
#include "holotwo/wordalg.hpp"
#include "holotwo/xmod.hpp"

namespace holotwo {

// ---------------------------------------------------------------------------
// Pair algebras on n strands: one degree-1 generator per strand pair a<b,
// commuting when the pairs are disjoint; the four-term variant additionally
// imposes [r_ab, r_ac + r_bc] = 0 for every strand triple.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<int, int>> strand_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back({a, b});
  return out;
}

// `order` permutes the generator list (basis-independence probes); it must be
// a permutation of 0..#pairs-1 or empty for the natural order.
inline WordAlgSpec pair_algebra_spec(int n, bool four_term, int maxdeg,
                                     const std::vector<int>& order = {}) {
  if (n < 2) throw std::invalid_argument("pair algebra needs at least two strands");
  const auto pairs = strand_pairs(n);
  std::vector<int> perm(order);
  if (perm.empty()) {
    perm.resize(pairs.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  }
  if (perm.size() != pairs.size())
    throw std::invalid_argument("generator order must permute all strand pairs");

  WordAlgSpec spec;
  spec.id = std::string(four_term ? "pairalg" : "pairalg_free") + std::to_string(n);
  spec.maxdeg = maxdeg;
  std::vector<int> slot(pairs.size());  // pair index -> generator index
  for (size_t i = 0; i < perm.size(); ++i) {
    const auto& [a, b] = pairs[perm[i]];
    spec.gen_names.push_back("r" + std::to_string(a) + std::to_string(b));
    spec.gen_degs.push_back(1);
    slot[perm[i]] = static_cast<int>(i);
  }
  auto gid = [&](int a, int b) {
    for (size_t k = 0; k < pairs.size(); ++k)
      if (pairs[k] == std::make_pair(a, b)) return slot[k];
    throw std::logic_error("strand pair lookup");
  };
  for (size_t i = 0; i < pairs.size(); ++i)
    for (size_t j = i + 1; j < pairs.size(); ++j) {
      const auto& [a, b] = pairs[i];
      const auto& [c, d] = pairs[j];
      if (a != c && a != d && b != c && b != d)
        spec.relations.push_back(comm_rel(gid(a, b), gid(c, d)));
    }
  if (four_term)
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        for (int c = b + 1; c <= n; ++c) {
          const int ab = gid(a, b), ac = gid(a, c), bc = gid(b, c);
          spec.relations.push_back(rel_scale_add(
              {{Rat(1), comm_rel(ab, ac)}, {Rat(1), comm_rel(ab, bc)}}));
          spec.relations.push_back(rel_scale_add(
              {{Rat(1), comm_rel(bc, ab)}, {Rat(1), comm_rel(bc, ac)}}));
        }
  return spec;
}

// ---------------------------------------------------------------------------
// Surface tower: the free module on degree-2 generators P_abc, Q_abc (one
// each per strand triple) acted on by the pair algebra, modulo the relation
// families below (each needs at least four strands), truncated at degree 3.
// The boundary sends P_abc to [r_bc, r_ab + r_ac] and Q_abc to
// [r_ab, r_ac + r_bc], extended by the adjoint rule on acted generators; its
// descent to the quotient is certified exactly and is a genuine consequence
// of the four-term relations downstairs.
// ---------------------------------------------------------------------------

struct SurfaceTower {
  WordAlg base;                          // four-term pair algebra
  std::unique_ptr<Carrier<Rat>> I;       // module carrier (unit; gens; acted gens)
  HopfXMod<Rat> x;                       // bd: I -> base.car, rho by truncation
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::array<int, 3>> triples;
  Report cert;
};

namespace detail {

// one (pair |> generator) term with a coefficient
struct ActTerm {
  Rat c;
  int pair;  // index into pairs
  int gen;   // index into the degree-2 generator list (P's then Q's)
};

}  // namespace detail

inline SurfaceTower build_surface_tower(int n, int maxdeg = 3) {
  if (n < 3) throw std::invalid_argument("surface tower needs at least three strands");
  if (maxdeg != 3)
    throw std::invalid_argument("surface tower is tabulated for truncation order 3 only");
  SurfaceTower tw;
  tw.base = build_word_algebra(pair_algebra_spec(n, /*four_term=*/true, maxdeg));
  const Carrier<Rat>& H = tw.base.car;
  tw.pairs = strand_pairs(n);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) tw.triples.push_back({a, b, c});

  const int np = static_cast<int>(tw.pairs.size());
  const int nt = static_cast<int>(tw.triples.size());
  const int ngen = 2 * nt;  // P's then Q's
  auto pid = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    for (int k = 0; k < np; ++k)
      if (tw.pairs[k] == std::make_pair(a, b)) return k;
    throw std::logic_error("strand pair lookup");
  };
  auto tid = [&](int a, int b, int c) {
    for (int k = 0; k < nt; ++k)
      if (tw.triples[k] == std::array<int, 3>{a, b, c}) return k;
    throw std::logic_error("strand triple lookup");
  };
  auto gen_name = [&](int g) {
    const auto& t = tw.triples[g % nt];
    return std::string(g < nt ? "P" : "Q") + std::to_string(t[0]) + std::to_string(t[1]) +
           std::to_string(t[2]);
  };

  // degree-3 relation span over the (pair, generator) coordinates
  using detail::ActTerm;
  std::vector<std::vector<ActTerm>> rels;
  auto P = [&](int a, int b, int c) { return tid(a, b, c); };
  auto Q = [&](int a, int b, int c) { return nt + tid(a, b, c); };
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int g = 0; g < ngen; ++g) {
        const auto& t = tw.triples[g % nt];
        if (a != t[0] && a != t[1] && a != t[2] && b != t[0] && b != t[1] && b != t[2])
          rels.push_back({{Rat(1), pid(a, b), g}});
      }
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d) {
          const int ab = pid(a, b), ac = pid(a, c), ad = pid(a, d);
          const int bc = pid(b, c), bd = pid(b, d), cd = pid(c, d);
          rels.push_back({{Rat(1), ad, P(a, b, c)},
                          {Rat(1), bd, P(a, b, c)},
                          {Rat(1), cd, P(a, b, c)},
                          {Rat(-1), ab, Q(b, c, d)},
                          {Rat(-1), ac, Q(b, c, d)},
                          {Rat(1), bc, Q(a, b, d)},
                          {Rat(1), bc, Q(a, c, d)}});
          rels.push_back({{Rat(1), ab, P(b, c, d)},
                          {Rat(1), ac, P(b, c, d)},
                          {Rat(1), ad, P(b, c, d)},
                          {Rat(1), cd, P(a, b, c)},
                          {Rat(1), cd, P(a, b, d)},
                          {Rat(-1), bc, P(a, c, d)},
                          {Rat(-1), bd, P(a, c, d)}});
          rels.push_back({{Rat(1), ad, Q(a, b, c)},
                          {Rat(1), bd, Q(a, b, c)},
                          {Rat(1), cd, Q(a, b, c)},
                          {Rat(1), ab, Q(a, c, d)},
                          {Rat(1), ab, Q(b, c, d)},
                          {Rat(-1), ac, Q(a, b, d)},
                          {Rat(-1), bc, Q(a, b, d)}});
          rels.push_back({{Rat(1), ab, Q(b, c, d)},
                          {Rat(1), ac, Q(b, c, d)},
                          {Rat(1), ad, Q(b, c, d)},
                          {Rat(1), bc, P(a, b, d)},
                          {Rat(1), bc, P(a, c, d)},
                          {Rat(-1), bd, P(a, b, c)},
                          {Rat(-1), cd, P(a, b, c)}});
          rels.push_back({{Rat(1), ab, P(a, c, d)},
                          {Rat(1), ab, P(b, c, d)},
                          {Rat(-1), cd, Q(a, b, c)},
                          {Rat(-1), cd, Q(a, b, d)}});
          rels.push_back({{Rat(1), ac, P(a, b, d)},
                          {Rat(-1), ac, P(b, c, d)},
                          {Rat(-1), ac, Q(b, c, d)},
                          {Rat(1), bd, Q(a, b, c)},
                          {Rat(1), bd, P(a, b, c)},
                          {Rat(-1), bd, Q(a, c, d)}});
        }

  Quotient<Rat> q3(np * ngen, /*pivot_last=*/true);
  for (const auto& rel : rels) {
    Vec<Rat> v = vec_zero<Rat>(np * ngen);
    for (const auto& t : rel) v[t.pair * ngen + t.gen] += t.c;
    q3.add_relation(std::move(v));
  }
  q3.finalize();

  // carrier: unit at degree 0, generators at degree 2, surviving acted
  // generators at degree 3; every product of non-units truncates to zero and
  // every non-unit basis element is primitive
  tw.I = std::make_unique<Carrier<Rat>>();
  Carrier<Rat>& I = *tw.I;
  I.id = "surface" + std::to_string(n);
  I.maxdeg = maxdeg;
  I.names.push_back("1");
  I.degs.push_back(0);
  for (int g = 0; g < ngen; ++g) {
    I.names.push_back(gen_name(g));
    I.degs.push_back(2);
  }
  std::vector<int> deg3_col(q3.qdim());
  for (int k = 0; k < q3.qdim(); ++k) {
    const int col = q3.free_cols[k];
    const int p = col / ngen, g = col % ngen;
    const auto& [a, b] = tw.pairs[p];
    I.names.push_back("r" + std::to_string(a) + std::to_string(b) + ">" + gen_name(g));
    I.degs.push_back(3);
    deg3_col[k] = col;
  }
  const int dim = I.dim();
  I.unital = true;
  I.unit = vec_zero<Rat>(dim);
  I.unit[0] = Rat(1);
  I.prod.assign(static_cast<size_t>(dim) * dim, {});
  for (int i = 0; i < dim; ++i) {
    I.row(0, i).push_back({i, Rat(1)});
    if (i) I.row(i, 0).push_back({i, Rat(1)});
  }
  I.hopf = true;
  I.cop.assign(dim, {});
  I.counit = vec_zero<Rat>(dim);
  I.antip.assign(dim, {});
  I.cop[0].push_back({0, 0, Rat(1)});
  I.counit[0] = Rat(1);
  I.antip[0].push_back({0, Rat(1)});
  for (int i = 1; i < dim; ++i) {
    I.cop[i].push_back({i, 0, Rat(1)});
    I.cop[i].push_back({0, i, Rat(1)});
    I.antip[i].push_back({i, Rat(-1)});
  }

  // boundary values of the degree-2 generators, in the base algebra
  auto word = [&](int g1, int g2) {
    return tw.base.nf(std::vector<int>{g1, g2});
  };
  auto bracket_vec = [&](int gp, const Vec<Rat>& v) {
    // [r_gp, v] with v given in base coordinates
    Vec<Rat> out = vec_zero<Rat>(H.dim());
    const Vec<Rat> r = H.basis_vec(tw.base.gen_basis[gp]);
    axpy(out, Rat(1), H.mul(r, v));
    axpy(out, Rat(-1), H.mul(v, r));
    return out;
  };
  auto bd_gen = [&](int g) {
    const auto& t = tw.triples[g % nt];
    const int a = t[0], b = t[1], c = t[2];
    const int ab = pid(a, b), ac = pid(a, c), bc = pid(b, c);
    Vec<Rat> out = vec_zero<Rat>(H.dim());
    if (g < nt) {
      // [r_bc, r_ab + r_ac]
      axpy(out, Rat(1), word(bc, ab));
      axpy(out, Rat(1), word(bc, ac));
      axpy(out, Rat(-1), word(ab, bc));
      axpy(out, Rat(-1), word(ac, bc));
    } else {
      // [r_ab, r_ac + r_bc]
      axpy(out, Rat(1), word(ab, ac));
      axpy(out, Rat(1), word(ab, bc));
      axpy(out, Rat(-1), word(ac, ab));
      axpy(out, Rat(-1), word(bc, ab));
    }
    return out;
  };

  tw.x.I = &I;
  tw.x.H = &H;
  tw.x.claims_crossed = true;
  tw.x.bd = LinMap<Rat>(&I, &H);
  tw.x.bd.set(0, H.unit);
  std::vector<Vec<Rat>> bd_of_gen(ngen);
  for (int g = 0; g < ngen; ++g) {
    bd_of_gen[g] = bd_gen(g);
    tw.x.bd.set(1 + g, bd_of_gen[g]);
  }
  for (int k = 0; k < q3.qdim(); ++k) {
    const int p = deg3_col[k] / ngen, g = deg3_col[k] % ngen;
    tw.x.bd.set(1 + ngen + k, bracket_vec(p, bd_of_gen[g]));
  }

  // certificate: the boundary kills every imposed relation (so it descends)
  double w_desc = 0.0;
  for (const auto& rel : rels) {
    Vec<Rat> img = vec_zero<Rat>(H.dim());
    for (const auto& t : rel) axpy(img, t.c, bracket_vec(t.pair, bd_of_gen[t.gen]));
    w_desc = std::max(w_desc, norm_inf(img));
  }
  tw.cert.suite = "surface" + std::to_string(n);
  tw.cert.add(CheckItem::make("boundary descends to the relation quotient", "surf-desc",
                              w_desc, 0.0));
  if (w_desc > 0.0)
    throw std::runtime_error("surface tower: boundary does not descend to the quotient");

  // action: a single pair generator sends a degree-2 generator to its class;
  // anything deeper leaves the truncation
  tw.x.rho = Bilin<Rat>(&H, &I, &I);
  for (int h = 0; h < H.dim(); ++h) {
    tw.x.rho.set(h, 0, [&] {  // counit rule on the unit
      Vec<Rat> v = vec_zero<Rat>(dim);
      axpy(v, H.counit[h], I.unit);
      return v;
    }());
  }
  int unit_h = -1;
  for (int h = 0; h < H.dim(); ++h)
    if (!H.unit[h].is_zero()) unit_h = h;
  for (int i = 1; i < dim; ++i) tw.x.rho.set(unit_h, i, I.basis_vec(i));
  for (int p = 0; p < np; ++p) {
    const int hb = tw.base.gen_basis[p];
    for (int g = 0; g < ngen; ++g) {
      Vec<Rat> coords = vec_zero<Rat>(np * ngen);
      coords[p * ngen + g] = Rat(1);
      Vec<Rat> cls = q3.project(std::move(coords));
      Vec<Rat> img = vec_zero<Rat>(dim);
      for (int k = 0; k < q3.qdim(); ++k) img[1 + ngen + k] = cls[k];
      tw.x.rho.set(hb, 1 + g, img);
    }
  }
  return tw;
}

// ---------------------------------------------------------------------------
// Configuration-space connection on n strands. The connection form attaches
// ω_ab(X) = (X_a - X_b)/(z_a - z_b) to each pair generator; the degree-2 layer
// pairs strand triples with the P/Q generators. Both throw when two strands
// come closer than the pole guard.
// ---------------------------------------------------------------------------

constexpr double kz_pole_guard = 1e-6;

struct KzModel {
  int n = 0;
  SurfaceTower tower;                    // n >= 3; empty degree-2 layer for n = 2
  std::unique_ptr<WordAlg> base2;        // base algebra when n = 2
  Carrier<Cx> H, I;
  LinMap<Cx> bd;
  Bilin<Cx> rho;
  OneForm omega;
  TwoConnection conn;
};

namespace detail {

inline Cx pair_form(const Pt& z, const Pt& X, int a, int b) {
  const Cx dz = z[static_cast<size_t>(a) - 1] - z[static_cast<size_t>(b) - 1];
  if (std::abs(dz) < kz_pole_guard)
    throw std::runtime_error("strand configuration touches a pole");
  return (X[static_cast<size_t>(a) - 1] - X[static_cast<size_t>(b) - 1]) / dz;
}

}  // namespace detail

inline std::unique_ptr<KzModel> make_kz_model(int n) {
  if (n < 2) throw std::invalid_argument("connection needs at least two strands");
  auto mp = std::make_unique<KzModel>();
  KzModel& m = *mp;
  m.n = n;
  if (n >= 3) {
    m.tower = build_surface_tower(n);
    // the tower holds its base algebra by value; re-point the structure maps
    // at the member that actually lives here
    m.tower.x.I = m.tower.I.get();
    m.tower.x.H = &m.tower.base.car;
    m.tower.x.bd.src = m.tower.x.I;
    m.tower.x.bd.dst = m.tower.x.H;
    m.tower.x.rho.left = m.tower.x.H;
    m.tower.x.rho.right = m.tower.x.I;
    m.tower.x.rho.dst = m.tower.x.I;
    m.H = convert_carrier<Cx>(m.tower.base.car);
    m.I = convert_carrier<Cx>(*m.tower.I);
    m.bd = convert_linmap<Cx>(m.tower.x.bd, &m.I, &m.H);
    m.rho = convert_bilin<Cx>(m.tower.x.rho, &m.H, &m.I, &m.I);
  } else {
    m.base2 = std::make_unique<WordAlg>(
        build_word_algebra(pair_algebra_spec(2, /*four_term=*/true, 3)));
    m.H = convert_carrier<Cx>(m.base2->car);
    m.I = Carrier<Cx>();
    m.I.id = "surface2";
    m.I.maxdeg = 3;
    m.I.names = {"1"};
    m.I.degs = {0};
    m.I.unital = true;
    m.I.unit = {Cx(1.0, 0.0)};
    m.I.prod.assign(1, {{{0, Cx(1.0, 0.0)}}});
    m.bd = LinMap<Cx>(&m.I, &m.H);
    m.bd.set(0, m.H.unit);
    m.rho = Bilin<Cx>(&m.H, &m.I, &m.I);
    m.rho.set(0, 0, m.I.unit);  // unit on unit; nothing else to act on
  }

  const KzModel* self = mp.get();
  m.omega.car = &m.H;
  m.omega.ev = [self](const Pt& z, const Pt& X) {
    const auto pairs = strand_pairs(self->n);
    Vec<Cx> out = vec_zero<Cx>(self->H.dim());
    const WordAlg& wa = self->n >= 3 ? self->tower.base : *self->base2;
    for (size_t k = 0; k < pairs.size(); ++k)
      out[wa.gen_basis[static_cast<int>(k)]] +=
          detail::pair_form(z, X, pairs[k].first, pairs[k].second);
    return out;
  };
  // each coefficient form is the complex differential of log(z_a - z_b), so
  // the exterior derivative vanishes identically
  m.omega.dev = [self](const Pt&, const Pt&, const Pt&) {
    return vec_zero<Cx>(self->H.dim());
  };

  m.conn.omega = m.omega;
  m.conn.m1.car = &m.I;
  m.conn.m1.ev = [self](const Pt&, const Pt&, const Pt&) {
    return vec_zero<Cx>(self->I.dim());
  };
  m.conn.m2.car = &m.I;
  m.conn.m2.ev = [self](const Pt& z, const Pt& X, const Pt& Y) {
    Vec<Cx> out = vec_zero<Cx>(self->I.dim());
    if (self->n < 3) return out;
    const auto& tr = self->tower.triples;
    const int nt = static_cast<int>(tr.size());
    for (int k = 0; k < nt; ++k) {
      const int a = tr[k][0], b = tr[k][1], c = tr[k][2];
      const Cx wbcX = detail::pair_form(z, X, b, c), wbcY = detail::pair_form(z, Y, b, c);
      const Cx wcaX = detail::pair_form(z, X, c, a), wcaY = detail::pair_form(z, Y, c, a);
      const Cx wabX = detail::pair_form(z, X, a, b), wabY = detail::pair_form(z, Y, a, b);
      out[1 + k] -= wbcX * wcaY - wbcY * wcaX;        // P coefficient
      out[1 + nt + k] += wcaX * wabY - wcaY * wabX;   // Q coefficient
    }
    return out;
  };
  return mp;
}

// hooks for the quadrature engine
inline GroupAction kz_group_action(const KzModel& m) {
  GroupAction a;
  a.rho = &m.rho;
  return a;
}

inline ActionHook kz_action_hook(const KzModel& m) {
  ActionHook a;
  a.rho = &m.rho;
  return a;
}

// ---------------------------------------------------------------------------
// Builtin strand geometries.
// ---------------------------------------------------------------------------

inline Pt kz_base_config(int n) {
  Pt z;
  for (int a = 0; a < n; ++a) z.push_back(Cx(0.5 * a, 0.0));
  return z;
}

// Half-turn exchange of strands i and i+1 about their midpoint, starting from
// an arbitrary configuration; the other strands stay put.  `bulge` scales the
// turning radius by 1 + bulge*sin(pi t), giving a second path with the same
// endpoints that stays clear of the straight-line interpolation poles.
inline Path1 kz_path_exchange_from(const Pt& start, int i, double bulge = 0.0) {
  if (i < 0 || static_cast<size_t>(i) + 1 >= start.size())
    throw std::invalid_argument("exchange needs an adjacent strand pair");
  Path1 g;
  g.f = [start, i, bulge](double t) {
    Pt z = start;
    const Cx mid = 0.5 * (start[i] + start[i + 1]);
    const Cx rot = (1.0 + bulge * std::sin(M_PI * t)) * std::exp(Cx(0.0, M_PI * t));
    z[i] = mid + (start[i] - mid) * rot;
    z[i + 1] = mid + (start[i + 1] - mid) * rot;
    return z;
  };
  g.df = [start, i, bulge](double t, int) {
    Pt v(start.size(), Cx(0.0, 0.0));
    const Cx mid = 0.5 * (start[i] + start[i + 1]);
    const Cx rot = (Cx(0.0, M_PI) * (1.0 + bulge * std::sin(M_PI * t)) +
                    Cx(bulge * M_PI * std::cos(M_PI * t), 0.0)) *
                   std::exp(Cx(0.0, M_PI * t));
    v[i] = (start[i] - mid) * rot;
    v[i + 1] = (start[i + 1] - mid) * rot;
    return v;
  };
  return g;
}

inline Path1 kz_path_exchange(int n, int i = 0, double bulge = 0.0) {
  return kz_path_exchange_from(kz_base_config(n), i, bulge);
}

// The same endpoints as the plain exchange, but a spectator strand makes a
// small closed sideways excursion.  Interpolating against the plain exchange
// then moves independent strands in the two surface directions; a family
// that only rescales the exchange circle would keep both tangents
// complex-proportional and every 2-form evaluation would vanish.
inline Path1 kz_path_exchange_detour(int n, int i = 0, double amp = 0.15) {
  if (n < 3) throw std::invalid_argument("detour needs a spectator strand");
  const int j = i + 2 < n ? i + 2 : i - 1;
  Path1 g = kz_path_exchange_from(kz_base_config(n), i);
  const Cx dir = amp * Cx(0.3, 1.0);
  Path1 d;
  d.f = [g, j, dir](double t) {
    Pt z = g.f(t);
    z[j] += dir * std::sin(M_PI * t);
    return z;
  };
  d.df = [g, j, dir](double t, int side) {
    Pt v = g.d(t, side);
    v[j] += dir * M_PI * std::cos(M_PI * t);
    return v;
  };
  return d;
}

// straight-line homotopy between two strand paths with matching endpoints,
// eased in s so the family is stationary at both boundary paths
inline Path2 kz_surface_between(const Path1& g0, const Path1& g1) {
  return path2_ease_s(path2_interp(g0, g1));
}

// two strands: the first winds once around the second
inline Path1 kz_path_loop2() {
  Path1 g;
  g.f = [](double t) {
    return Pt{Cx(0.5, 0.0) + 0.25 * std::exp(Cx(0.0, 2.0 * M_PI * t)), Cx(0.5, 0.0)};
  };
  g.df = [](double t, int) {
    return Pt{0.25 * Cx(0.0, 2.0 * M_PI) * std::exp(Cx(0.0, 2.0 * M_PI * t)),
              Cx(0.0, 0.0)};
  };
  return g;
}

// fixed-endpoint excursion growing with s: the first strand traces a small
// loop while the second bulges sideways, so the two surface tangents point
// along independent strands (a one-strand family would make every 2-form
// evaluation vanish, both tangents being complex-proportional); the source
// path is constant
inline Path2 kz_surface_excursion(int n, double radius = 0.1) {
  const Pt base = kz_base_config(n);
  const Cx turn(0.0, 2.0 * M_PI);
  Path2 G;
  G.f = [base, radius](double t, double s) {
    Pt z = base;
    z[0] += radius * s * (std::exp(Cx(0.0, 2.0 * M_PI * t)) - Cx(1.0, 0.0));
    z[1] += 1.2 * radius * s * std::sin(M_PI * t) * Cx(0.6, 1.0);
    return z;
  };
  G.dt = [base, radius, turn](double t, double s, int) {
    Pt v(base.size(), Cx(0.0, 0.0));
    v[0] = radius * s * turn * std::exp(Cx(0.0, 2.0 * M_PI * t));
    v[1] = 1.2 * radius * s * M_PI * std::cos(M_PI * t) * Cx(0.6, 1.0);
    return v;
  };
  G.ds = [base, radius](double t, double, int) {
    Pt v(base.size(), Cx(0.0, 0.0));
    v[0] = radius * (std::exp(Cx(0.0, 2.0 * M_PI * t)) - Cx(1.0, 0.0));
    v[1] = 1.2 * radius * std::sin(M_PI * t) * Cx(0.6, 1.0);
    return v;
  };
  return G;
}

// ---------------------------------------------------------------------------
// Fuzzy layer (n >= 3): the smash of the surface module with the base
// algebra, its second-Peiffer quotient, and the engine-side hooks for the
// smeared surface transport.
// ---------------------------------------------------------------------------

struct KzFuzz {
  const KzModel* model = nullptr;
  SmashProduct smash;
  ReflectResult<Rat> refl;
  std::unique_ptr<Carrier<Cx>> Sc, Sqc;
  HopfXMod<Cx> hopf;        // the (module, base) pair the exact layer runs over
  BareXMod<Cx> smash_bare;  // pre-crossed
  BareXMod<Cx> refl_bare;   // the quotient is crossed
  LinMap<Cx> pi_c, iota_c;
  LinMap<Cx> smash_of_e;  // module -> smash, a -> a (x) 1
  TwoConnection smsh;     // 2-layer values pushed into the smash
  Report cert;
};

inline std::unique_ptr<KzFuzz> build_kz_fuzz(const KzModel& m) {
  if (m.n < 3) throw std::invalid_argument("fuzzy layer needs the degree-2 module");
  auto out = std::make_unique<KzFuzz>();
  KzFuzz& fz = *out;
  fz.model = &m;
  fz.cert.suite = "kzfuzz" + std::to_string(m.n);

  fz.smash = build_smash_product(m.tower.x);
  fz.cert.merge(check_bare_xmod_axioms(fz.smash.x, 0.0));
  fz.refl = reflect(fz.smash.x);
  fz.cert.merge(fz.refl.cert);
  fz.cert.merge(check_bare_xmod_axioms(fz.refl.x, 0.0));

  fz.Sc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*fz.smash.A));
  fz.Sqc = std::make_unique<Carrier<Cx>>(convert_carrier<Cx>(*fz.refl.Aq));
  const Carrier<Cx>* Hc = &m.H;

  fz.hopf.I = &m.I;
  fz.hopf.H = Hc;
  fz.hopf.bd = m.bd;
  fz.hopf.rho = m.rho;
  fz.hopf.claims_crossed = true;

  fz.smash_bare.A = fz.Sc.get();
  fz.smash_bare.B = Hc;
  fz.smash_bare.bd = convert_linmap<Cx>(fz.smash.x.bd, fz.Sc.get(), Hc);
  fz.smash_bare.lact = convert_bilin<Cx>(fz.smash.x.lact, Hc, fz.Sc.get(), fz.Sc.get());
  fz.smash_bare.ract = convert_bilin<Cx>(fz.smash.x.ract, fz.Sc.get(), Hc, fz.Sc.get());
  fz.smash_bare.claims_crossed = fz.smash.x.claims_crossed;
  fz.smash_bare.claims_balanced = fz.smash.x.claims_balanced;

  fz.refl_bare.A = fz.Sqc.get();
  fz.refl_bare.B = Hc;
  fz.refl_bare.bd = convert_linmap<Cx>(fz.refl.x.bd, fz.Sqc.get(), Hc);
  fz.refl_bare.lact = convert_bilin<Cx>(fz.refl.x.lact, Hc, fz.Sqc.get(), fz.Sqc.get());
  fz.refl_bare.ract = convert_bilin<Cx>(fz.refl.x.ract, fz.Sqc.get(), Hc, fz.Sqc.get());
  fz.refl_bare.claims_crossed = true;
  fz.refl_bare.claims_balanced = fz.refl.x.claims_balanced;

  fz.pi_c = convert_linmap<Cx>(fz.refl.pi, fz.Sc.get(), fz.Sqc.get());
  fz.iota_c = convert_linmap<Cx>(fz.refl.iota, fz.Sqc.get(), fz.Sc.get());

  int unit_h = -1;
  for (int j = 0; j < m.tower.base.car.dim(); ++j)
    if (!m.tower.base.car.unit[j].is_zero()) unit_h = j;
  // the unit of the module has no slot in the augmentation-side smash; it
  // maps to zero, and no 2-layer value ever produces it
  fz.smash_of_e = LinMap<Cx>(&m.I, fz.Sc.get());
  for (int i = 0; i < m.I.dim(); ++i) {
    if (i == fz.smash.unit_I) continue;
    const int id = fz.smash.at(i, unit_h);
    if (id < 0) throw std::logic_error("fuzzy layer: module element beyond the truncation");
    fz.smash_of_e.set(i, fz.Sc->basis_vec(id));
  }

  const KzFuzz* self = out.get();
  fz.smsh.omega = m.omega;
  fz.smsh.m1.car = fz.Sc.get();
  fz.smsh.m2.car = fz.Sc.get();
  fz.smsh.m2.ev = [self](const Pt& p, const Pt& X, const Pt& Y) {
    return self->smash_of_e.apply(self->model->conn.m2.ev(p, X, Y));
  };
  return out;
}

inline PairEmbed kz_pair_embed(const KzFuzz& fz) {
  PairEmbed pe;
  pe.dst = fz.Sc.get();
  const KzFuzz* p = &fz;
  pe.pair = [p](const Vec<Cx>& vi, const Vec<Cx>& vh) {
    Vec<Cx> out = vec_zero<Cx>(p->Sc->dim());
    for (size_t iu = 0; iu < vi.size(); ++iu) {
      if (std::abs(vi[iu]) == 0.0) continue;
      for (size_t ix = 0; ix < vh.size(); ++ix) {
        if (std::abs(vh[ix]) == 0.0) continue;
        const int id = p->smash.at(static_cast<int>(iu), static_cast<int>(ix));
        if (id < 0) throw std::logic_error("fuzzy layer: pair beyond the truncation");
        out[id] += vi[iu] * vh[ix];
      }
    }
    return out;
  };
  return pe;
}

inline IncData<Cx> kz_inc(const KzFuzz& fz) {
  return {&fz.smash, fz.Sc.get(), fz.Sqc.get(), fz.pi_c};
}

// open-path homotopy: the first two strands drift to the right while an
// s-scaled bump bends their tracks in independent complex directions; the
// endpoint configurations stay fixed, the boundary paths differ
inline Path2 kz_surface_sweep(int n, double bump = 0.1) {
  const Pt base = kz_base_config(n);
  Path2 G;
  G.f = [base, bump](double t, double s) {
    Pt z = base;
    z[0] += 0.2 * t + bump * s * std::sin(M_PI * t) * Cx(0.0, 1.0);
    z[1] += 0.2 * t + 0.8 * bump * s * std::sin(M_PI * t) * Cx(1.0, 0.5);
    return z;
  };
  G.dt = [base, bump](double t, double s, int) {
    Pt v(base.size(), Cx(0.0, 0.0));
    v[0] = Cx(0.2, 0.0) + bump * s * M_PI * std::cos(M_PI * t) * Cx(0.0, 1.0);
    v[1] = Cx(0.2, 0.0) + 0.8 * bump * s * M_PI * std::cos(M_PI * t) * Cx(1.0, 0.5);
    return v;
  };
  G.ds = [base, bump](double t, double, int) {
    Pt v(base.size(), Cx(0.0, 0.0));
    v[0] = bump * std::sin(M_PI * t) * Cx(0.0, 1.0);
    v[1] = 0.8 * bump * std::sin(M_PI * t) * Cx(1.0, 0.5);
    return v;
  };
  return G;
}

}  // namespace holotwo
