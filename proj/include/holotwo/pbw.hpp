#pragma once

#include <map>
#include <string>
#include <vector>

#include "holotwo/series.hpp"

namespace holotwo {

// Lie algebra presented on a finite basis with degrees and a full bracket
// table (bracket[i][j] = [x_i, x_j], dense coordinates). Brackets whose
// degree exceeds the truncation may be given as zero; that is consistent with
// dropping products beyond the cap.
struct LieSpec {
  std::string id;
  std::vector<std::string> names;
  std::vector<int> degs;  // each >= 1
  std::vector<std::vector<Vec<Rat>>> bracket;
  int maxdeg = 3;
};

// Spec of a Lie carrier whose product table already stores the bracket (the
// shape produced by commutatorizing). Degrees of 0 (ungraded
// finite-dimensional algebras) are bumped to 1 so the envelope filtration
// counts word length.
inline LieSpec lie_spec_of_carrier(const Carrier<Rat>& a, const std::string& id, int maxdeg) {
  LieSpec g;
  g.id = id;
  g.names = a.names;
  g.maxdeg = maxdeg;
  for (int d : a.degs) g.degs.push_back(d >= 1 ? d : 1);
  g.bracket.assign(a.dim(), std::vector<Vec<Rat>>(a.dim()));
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      g.bracket[i][j] = a.mul(a.basis_vec(i), a.basis_vec(j));
  return g;
}

// Universal envelope truncated at maxdeg, on the ordered-monomial basis.
struct PbwAlg {
  Carrier<Rat> car;
  std::vector<int> gen_degs;
  std::vector<std::vector<Vec<Rat>>> bracket;
  std::vector<std::vector<int>> monos;          // per carrier index, sorted word
  std::map<std::vector<int>, int> mono_index;   // sorted word -> carrier index
  std::vector<int> gen_basis;                   // lie basis -> carrier index
  std::map<std::vector<int>, std::map<std::vector<int>, Rat>> memo;

  int word_deg(const std::vector<int>& w) const {
    int d = 0;
    for (int g : w) d += gen_degs[g];
    return d;
  }

  // Straighten an arbitrary word into sorted monomials (same or lower
  // degree). Only called on words within the cap.
  const std::map<std::vector<int>, Rat>& straighten(const std::vector<int>& w) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    std::map<std::vector<int>, Rat> out;
    int bad = -1;
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] > w[i + 1]) { bad = static_cast<int>(i); break; }
    if (bad < 0) {
      out[w] = Rat(1);
    } else {
      std::vector<int> sw = w;
      std::swap(sw[bad], sw[bad + 1]);
      for (const auto& [m, c] : straighten(sw)) out[m] += c;
      const Vec<Rat>& br = bracket[w[bad]][w[bad + 1]];
      for (size_t k = 0; k < br.size(); ++k) {
        if (br[k].is_zero()) continue;
        std::vector<int> rw;
        rw.reserve(w.size() - 1);
        rw.insert(rw.end(), w.begin(), w.begin() + bad);
        rw.push_back(static_cast<int>(k));
        rw.insert(rw.end(), w.begin() + bad + 2, w.end());
        for (const auto& [m, c] : straighten(rw)) out[m] += br[k] * c;
      }
      for (auto it2 = out.begin(); it2 != out.end();) {
        if (it2->second.is_zero()) it2 = out.erase(it2);
        else ++it2;
      }
    }
    return memo.emplace(w, std::move(out)).first->second;
  }

  Vec<Rat> nf(const std::vector<int>& w) {
    Vec<Rat> out = vec_zero<Rat>(car.dim());
    if (word_deg(w) > car.maxdeg) return out;
    for (const auto& [m, c] : straighten(w)) {
      if (word_deg(m) > car.maxdeg) continue;
      out[mono_index.at(m)] += c;
    }
    return out;
  }
};

namespace detail {
inline void enum_monos(int ngens, const std::vector<int>& degs, int maxdeg, int minidx,
                       std::vector<int>& cur, int curdeg,
                       std::vector<std::vector<int>>& out) {
  out.push_back(cur);
  for (int g = minidx; g < ngens; ++g) {
    if (curdeg + degs[g] > maxdeg) continue;
    cur.push_back(g);
    enum_monos(ngens, degs, maxdeg, g, cur, curdeg + degs[g], out);
    cur.pop_back();
  }
}
}  // namespace detail

inline PbwAlg build_pbw(const LieSpec& g) {
  PbwAlg u;
  u.gen_degs = g.degs;
  u.bracket = g.bracket;
  const int D = g.maxdeg;
  const int ng = static_cast<int>(g.names.size());

  std::vector<std::vector<int>> raw;
  {
    std::vector<int> cur;
    detail::enum_monos(ng, g.degs, D, 0, cur, 0, raw);
  }
  // degree-ascending, then lex
  std::stable_sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int x : a) da += g.degs[x];
    for (int x : b) db += g.degs[x];
    if (da != db) return da < db;
    return a < b;
  });

  Carrier<Rat>& c = u.car;
  c.id = g.id;
  c.maxdeg = D;
  for (const auto& m : raw) {
    u.mono_index[m] = c.dim();
    u.monos.push_back(m);
    std::string nm;
    if (m.empty()) nm = "1";
    else
      for (size_t i = 0; i < m.size(); ++i) {
        if (i) nm += "*";
        nm += g.names[m[i]];
      }
    c.names.push_back(nm);
    int d = 0;
    for (int x : m) d += g.degs[x];
    c.degs.push_back(d);
  }
  c.unital = true;
  c.unit = vec_zero<Rat>(c.dim());
  c.unit[u.mono_index.at({})] = Rat(1);
  u.gen_basis.assign(ng, -1);
  for (int i = 0; i < ng; ++i)
    if (g.degs[i] <= D) u.gen_basis[i] = u.mono_index.at({i});

  c.prod.assign(static_cast<size_t>(c.dim()) * c.dim(), {});
  for (int a = 0; a < c.dim(); ++a) {
    for (int b = 0; b < c.dim(); ++b) {
      if (c.degs[a] + c.degs[b] > D) continue;
      std::vector<int> w = u.monos[a];
      w.insert(w.end(), u.monos[b].begin(), u.monos[b].end());
      Vec<Rat> v = u.nf(w);
      for (int j = 0; j < c.dim(); ++j)
        if (!v[j].is_zero()) c.row(a, b).push_back({j, v[j]});
    }
  }

  c.hopf = true;
  c.cop.assign(c.dim(), {});
  c.counit = vec_zero<Rat>(c.dim());
  c.antip.assign(c.dim(), {});
  for (int a = 0; a < c.dim(); ++a) {
    const auto& m = u.monos[a];
    const int L = static_cast<int>(m.size());
    std::map<std::pair<int, int>, Rat> acc;
    for (int mask = 0; mask < (1 << L); ++mask) {
      std::vector<int> lw, rw;
      for (int i = 0; i < L; ++i)
        ((mask >> i) & 1 ? lw : rw).push_back(m[i]);
      // subwords of a sorted word stay sorted
      acc[{u.mono_index.at(lw), u.mono_index.at(rw)}] += Rat(1);
    }
    for (const auto& [xy, v] : acc) c.cop[a].push_back({xy.first, xy.second, v});
    c.counit[a] = (L == 0) ? Rat(1) : Rat(0);
    std::vector<int> wr(m.rbegin(), m.rend());
    Vec<Rat> sv = u.nf(wr);
    const Rat sgn = (L % 2 == 0) ? Rat(1) : Rat(-1);
    for (int j = 0; j < c.dim(); ++j)
      if (!sv[j].is_zero()) c.antip[a].push_back({j, sgn * sv[j]});
  }
  return u;
}

}  // namespace holotwo
