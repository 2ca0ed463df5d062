#pragma once

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

#include "holotwo/scalar.hpp"

namespace holotwo {

template <class S>
using Vec = std::vector<S>;

template <class S>
Vec<S> vec_zero(int n) { return Vec<S>(n, scalar_traits<S>::zero()); }

template <class S>
void axpy(Vec<S>& y, const S& c, const Vec<S>& x) {
  assert(y.size() == x.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

template <class S>
void scale(Vec<S>& y, const S& c) {
  for (auto& v : y) v *= c;
}

template <class S>
double norm_inf(const Vec<S>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, scalar_traits<S>::abs(x));
  return m;
}

template <class S>
bool vec_is_zero(const Vec<S>& v) {
  for (const auto& x : v)
    if (!scalar_traits<S>::is_zero(x)) return false;
  return true;
}

// Row echelon span, incremental, exact fields only. Pivot is the first
// nonzero column by default; with `pivot_last` it is the last one. When the
// ambient basis is sorted by degree, pivot-last keeps reduction from raising
// the top degree of a vector (every other component of a row then sits at or
// below the pivot's degree), which quotient carriers rely on.
template <class S>
struct EchelonBasis {
  int n = 0;
  bool pivot_last = false;
  std::vector<Vec<S>> rows;    // reduced, pivot entry 1, pivot cols distinct
  std::vector<int> pivot_col;  // per row

  explicit EchelonBasis(int dim, bool last = false) : n(dim), pivot_last(last) {}

  int rank() const { return static_cast<int>(rows.size()); }

  void reduce(Vec<S>& v) const {
    for (int r = 0; r < rank(); ++r) {
      const S c = v[pivot_col[r]];
      if (scalar_traits<S>::is_zero(c)) continue;
      axpy(v, -c, rows[r]);
    }
  }

  // Returns true if v enlarged the span.
  bool insert(Vec<S> v) {
    reduce(v);
    int pc = -1;
    if (pivot_last) {
      for (int j = n - 1; j >= 0; --j)
        if (!scalar_traits<S>::is_zero(v[j])) { pc = j; break; }
    } else {
      for (int j = 0; j < n; ++j)
        if (!scalar_traits<S>::is_zero(v[j])) { pc = j; break; }
    }
    if (pc < 0) return false;
    scale(v, scalar_traits<S>::one() / v[pc]);
    for (int r = 0; r < rank(); ++r) {
      const S c = rows[r][pc];
      if (!scalar_traits<S>::is_zero(c)) axpy(rows[r], -c, v);
    }
    rows.push_back(std::move(v));
    pivot_col.push_back(pc);
    return true;
  }

  bool contains(Vec<S> v) const {
    reduce(v);
    return vec_is_zero(v);
  }
};

// Span of a fixed generating list with coordinate recovery: coords(v) yields c
// with v = sum c_i a_i when v lies in the span. Generators must be
// independent if unique coordinates are expected (we assert independence).
template <class S>
struct CoordSpan {
  int n = 0;
  int k = 0;
  std::vector<Vec<S>> rows;   // echelon over first n columns
  std::vector<Vec<S>> combo;  // row_r = sum combo[r][i] * a_i
  std::vector<int> pivot_col;

  CoordSpan(int dim, const std::vector<Vec<S>>& gens) : n(dim), k(static_cast<int>(gens.size())) {
    for (int i = 0; i < k; ++i) {
      Vec<S> v = gens[i];
      Vec<S> c = vec_zero<S>(k);
      c[i] = scalar_traits<S>::one();
      reduce_tracked(v, c);
      int pc = -1;
      for (int j = 0; j < n; ++j)
        if (!scalar_traits<S>::is_zero(v[j])) { pc = j; break; }
      assert(pc >= 0 && "CoordSpan: dependent generator list");
      const S inv = scalar_traits<S>::one() / v[pc];
      scale(v, inv);
      scale(c, inv);
      rows.push_back(std::move(v));
      combo.push_back(std::move(c));
      pivot_col.push_back(pc);
    }
  }

  void reduce_tracked(Vec<S>& v, Vec<S>& c) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      const S f = v[pivot_col[r]];
      if (scalar_traits<S>::is_zero(f)) continue;
      axpy(v, -f, rows[r]);
      axpy(c, -f, combo[r]);
    }
  }

  // v must lie in the span; returns coordinates over the generator list.
  Vec<S> coords(Vec<S> v) const {
    Vec<S> out = vec_zero<S>(k);
    for (size_t r = 0; r < rows.size(); ++r) {
      const S f = v[pivot_col[r]];
      if (scalar_traits<S>::is_zero(f)) continue;
      axpy(v, -f, rows[r]);
      axpy(out, f, combo[r]);
    }
    assert(vec_is_zero(v) && "CoordSpan: vector outside span");
    return out;
  }

  bool contains(Vec<S> v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      const S f = v[pivot_col[r]];
      if (!scalar_traits<S>::is_zero(f)) axpy(v, -f, rows[r]);
    }
    return vec_is_zero(v);
  }
};

// Quotient of S^n by the span of a list of vectors, with a canonical section.
// Representative basis = coordinate vectors at non-pivot columns.
template <class S>
struct Quotient {
  int n = 0;
  EchelonBasis<S> ech;
  std::vector<int> free_cols;

  explicit Quotient(int dim, bool pivot_last = false) : n(dim), ech(dim, pivot_last) {}

  void add_relation(Vec<S> v) { ech.insert(std::move(v)); }

  void finalize() {
    free_cols.clear();
    std::vector<char> is_pivot(n, 0);
    for (int pc : ech.pivot_col) is_pivot[pc] = 1;
    for (int j = 0; j < n; ++j)
      if (!is_pivot[j]) free_cols.push_back(j);
  }

  int qdim() const { return static_cast<int>(free_cols.size()); }

  Vec<S> project(Vec<S> v) const {
    ech.reduce(v);
    Vec<S> out = vec_zero<S>(qdim());
    for (int q = 0; q < qdim(); ++q) out[q] = v[free_cols[q]];
    return out;
  }

  Vec<S> lift(const Vec<S>& q) const {
    Vec<S> out = vec_zero<S>(n);
    for (int i = 0; i < qdim(); ++i) out[free_cols[i]] = q[i];
    return out;
  }
};

// Nullspace basis of the linear map given by rows (m vectors in S^n acting as
// functionals) — i.e. solutions x with row · x = 0 for every row.
template <class S>
std::vector<Vec<S>> nullspace(std::vector<Vec<S>> rows_m, int ncols) {
  EchelonBasis<S> ech(ncols);
  for (auto& row : rows_m) ech.insert(std::move(row));
  std::vector<char> is_pivot(ncols, 0);
  for (int pc : ech.pivot_col) is_pivot[pc] = 1;
  std::vector<Vec<S>> out;
  for (int j = 0; j < ncols; ++j) {
    if (is_pivot[j]) continue;
    Vec<S> v = vec_zero<S>(ncols);
    v[j] = scalar_traits<S>::one();
    for (int r = 0; r < ech.rank(); ++r) v[ech.pivot_col[r]] = -ech.rows[r][j];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace holotwo
