#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "holotwo/series.hpp"

namespace holotwo {

struct WordTerm {
  Rat coef;
  std::vector<int> word;  // generator indices
};
using WordRel = std::vector<WordTerm>;

// [u, v] for single generators, as a relation u*v - v*u.
inline WordRel comm_rel(int u, int v) {
  return {{Rat(1), {u, v}}, {Rat(-1), {v, u}}};
}

inline WordRel rel_scale_add(const std::vector<std::pair<Rat, WordRel>>& parts) {
  WordRel out;
  for (const auto& [c, r] : parts)
    for (const auto& t : r) out.push_back({c * t.coef, t.word});
  return out;
}

struct WordAlgSpec {
  std::string id;
  std::vector<std::string> gen_names;
  std::vector<int> gen_degs;  // each >= 1
  std::vector<WordRel> relations;
  int maxdeg = 3;
  bool hopf = true;  // generators primitive
};

// Quotient of the free associative algebra on graded generators by a
// homogeneous two-sided ideal, truncated at maxdeg. Basis = words not hit by
// a pivot of the per-degree relation span (the span is saturated with all
// word multiples, so it is the full ideal slice).
struct WordAlg {
  Carrier<Rat> car;
  int ngens = 0;
  std::vector<int> gen_degs;
  std::vector<std::vector<std::vector<int>>> words;  // per degree
  std::map<std::vector<int>, std::pair<int, int>> word_loc;  // word -> (deg, pos)
  std::vector<Quotient<Rat>> quot;                   // per degree
  std::vector<std::vector<int>> basis_at;            // deg -> carrier indices
  std::vector<int> gen_basis;                        // generator -> carrier index

  // Normal form of an arbitrary word as carrier coordinates (zero if the
  // degree exceeds the cap).
  Vec<Rat> nf(const std::vector<int>& w) const {
    int d = 0;
    for (int g : w) d += gen_degs[g];
    Vec<Rat> out = vec_zero<Rat>(car.dim());
    if (d > car.maxdeg) return out;
    auto it = word_loc.find(w);
    assert(it != word_loc.end());
    Vec<Rat> ind = vec_zero<Rat>(static_cast<int>(words[d].size()));
    ind[it->second.second] = Rat(1);
    Vec<Rat> q = quot[d].project(std::move(ind));
    for (size_t k = 0; k < q.size(); ++k) out[basis_at[d][k]] = q[k];
    return out;
  }
};

namespace detail {

inline void enum_words(int ngens, const std::vector<int>& degs, int maxdeg,
                       std::vector<int>& cur, int curdeg,
                       std::vector<std::vector<std::vector<int>>>& out) {
  out[curdeg].push_back(cur);
  for (int g = 0; g < ngens; ++g) {
    if (curdeg + degs[g] > maxdeg) continue;
    cur.push_back(g);
    enum_words(ngens, degs, maxdeg, cur, curdeg + degs[g], out);
    cur.pop_back();
  }
}

}  // namespace detail

inline WordAlg build_word_algebra(const WordAlgSpec& spec) {
  WordAlg wa;
  wa.ngens = static_cast<int>(spec.gen_names.size());
  wa.gen_degs = spec.gen_degs;
  const int D = spec.maxdeg;
  wa.words.assign(D + 1, {});
  {
    std::vector<int> cur;
    detail::enum_words(wa.ngens, spec.gen_degs, D, cur, 0, wa.words);
  }
  for (int d = 0; d <= D; ++d)
    for (size_t p = 0; p < wa.words[d].size(); ++p)
      wa.word_loc[wa.words[d][p]] = {d, static_cast<int>(p)};

  // Degree of each relation; must be homogeneous.
  auto word_deg = [&](const std::vector<int>& w) {
    int d = 0;
    for (int g : w) d += spec.gen_degs[g];
    return d;
  };
  std::vector<int> rel_deg;
  for (const auto& r : spec.relations) {
    assert(!r.empty());
    int d = word_deg(r[0].word);
    for (const auto& t : r) {
      (void)t;
      assert(word_deg(t.word) == d && "relations must be homogeneous");
    }
    rel_deg.push_back(d);
  }

  // Saturate: all u * r * v landing in each degree slice.
  for (int d = 0; d <= D; ++d) wa.quot.emplace_back(static_cast<int>(wa.words[d].size()));
  for (size_t ri = 0; ri < spec.relations.size(); ++ri) {
    const int dr = rel_deg[ri];
    for (int du = 0; du + dr <= D; ++du) {
      for (const auto& u : wa.words[du]) {
        for (int dv = 0; du + dr + dv <= D; ++dv) {
          for (const auto& v : wa.words[dv]) {
            const int d = du + dr + dv;
            Vec<Rat> vec = vec_zero<Rat>(static_cast<int>(wa.words[d].size()));
            for (const auto& t : spec.relations[ri]) {
              std::vector<int> w = u;
              w.insert(w.end(), t.word.begin(), t.word.end());
              w.insert(w.end(), v.begin(), v.end());
              vec[wa.word_loc.at(w).second] += t.coef;
            }
            wa.quot[d].add_relation(std::move(vec));
          }
        }
      }
    }
  }
  for (auto& q : wa.quot) q.finalize();

  // Carrier basis from free columns, degree-ascending.
  Carrier<Rat>& c = wa.car;
  c.id = spec.id;
  c.maxdeg = D;
  wa.basis_at.assign(D + 1, {});
  for (int d = 0; d <= D; ++d) {
    for (int q = 0; q < wa.quot[d].qdim(); ++q) {
      const auto& w = wa.words[d][wa.quot[d].free_cols[q]];
      std::string nm;
      if (w.empty()) nm = "1";
      else {
        for (size_t i = 0; i < w.size(); ++i) {
          if (i) nm += "*";
          nm += spec.gen_names[w[i]];
        }
      }
      wa.basis_at[d].push_back(c.dim());
      c.names.push_back(nm);
      c.degs.push_back(d);
    }
  }
  c.unital = true;
  c.unit = vec_zero<Rat>(c.dim());
  {
    // The empty word is never a relation pivot (relations have degree >= 1).
    assert(wa.quot[0].qdim() == 1);
    c.unit[wa.basis_at[0][0]] = Rat(1);
  }
  wa.gen_basis.assign(wa.ngens, -1);
  for (int g = 0; g < wa.ngens; ++g) {
    Vec<Rat> v = wa.nf({g});
    int hits = 0, at = -1;
    for (int j = 0; j < c.dim(); ++j)
      if (!v[j].is_zero()) { ++hits; at = j; }
    // generators may themselves reduce; keep index only when the generator is
    // its own normal form
    if (hits == 1 && v[at] == Rat(1) && c.names[at] == spec.gen_names[g]) wa.gen_basis[g] = at;
  }

  // Product table (carrier index -> representative word first).
  c.prod.assign(static_cast<size_t>(c.dim()) * c.dim(), {});
  std::vector<const std::vector<int>*> rep(c.dim(), nullptr);
  for (int d = 0; d <= D; ++d)
    for (int q = 0; q < wa.quot[d].qdim(); ++q)
      rep[wa.basis_at[d][q]] = &wa.words[d][wa.quot[d].free_cols[q]];
  for (int a = 0; a < c.dim(); ++a) {
    for (int b = 0; b < c.dim(); ++b) {
      if (c.degs[a] + c.degs[b] > D) continue;
      std::vector<int> w = *rep[a];
      w.insert(w.end(), rep[b]->begin(), rep[b]->end());
      Vec<Rat> v = wa.nf(w);
      for (int j = 0; j < c.dim(); ++j)
        if (!v[j].is_zero()) c.row(a, b).push_back({j, v[j]});
    }
  }

  // Hopf structure: generators primitive, coproduct by subword splitting.
  c.hopf = spec.hopf;
  if (spec.hopf) {
    c.cop.assign(c.dim(), {});
    c.counit = vec_zero<Rat>(c.dim());
    c.antip.assign(c.dim(), {});
    for (int a = 0; a < c.dim(); ++a) {
      const auto& w = *rep[a];
      const int L = static_cast<int>(w.size());
      std::map<std::pair<int, int>, Rat> acc;
      for (int mask = 0; mask < (1 << L); ++mask) {
        std::vector<int> lw, rw;
        for (int i = 0; i < L; ++i)
          ((mask >> i) & 1 ? lw : rw).push_back(w[i]);
        Vec<Rat> lv = wa.nf(lw), rv = wa.nf(rw);
        for (int x = 0; x < c.dim(); ++x) {
          if (lv[x].is_zero()) continue;
          for (int y = 0; y < c.dim(); ++y) {
            if (rv[y].is_zero()) continue;
            acc[{x, y}] += lv[x] * rv[y];
          }
        }
      }
      for (const auto& [xy, v] : acc)
        if (!v.is_zero()) c.cop[a].push_back({xy.first, xy.second, v});
      c.counit[a] = (L == 0) ? Rat(1) : Rat(0);
      std::vector<int> wr(w.rbegin(), w.rend());
      Vec<Rat> sv = wa.nf(wr);
      const Rat sgn = (L % 2 == 0) ? Rat(1) : Rat(-1);
      for (int j = 0; j < c.dim(); ++j)
        if (!sv[j].is_zero()) c.antip[a].push_back({j, sgn * sv[j]});
    }
  }
  return wa;
}

// Exact associativity certificate on all basis triples within the degree cap.
inline bool word_algebra_associative(const Carrier<Rat>& c) {
  for (int a = 0; a < c.dim(); ++a)
    for (int b = 0; b < c.dim(); ++b)
      for (int d = 0; d < c.dim(); ++d) {
        if (c.degs[a] + c.degs[b] + c.degs[d] > c.maxdeg) continue;
        Vec<Rat> lhs = c.mul(c.mul(c.basis_vec(a), c.basis_vec(b)), c.basis_vec(d));
        Vec<Rat> rhs = c.mul(c.basis_vec(a), c.mul(c.basis_vec(b), c.basis_vec(d)));
        for (int j = 0; j < c.dim(); ++j)
          if (!(lhs[j] == rhs[j])) return false;
      }
  return true;
}

}  // namespace holotwo
