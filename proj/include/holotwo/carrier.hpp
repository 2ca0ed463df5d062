#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "holotwo/linalg.hpp"

namespace holotwo {

template <class S>
using SRow = std::vector<std::pair<int, S>>;  // sparse vector: (index, coeff)

template <class S>
void srow_add_to(const SRow<S>& r, const S& c, Vec<S>& out) {
  for (const auto& [j, v] : r) out[j] += c * v;
}

// Finite-dimensional coefficient space for truncated series. Each basis
// element carries an internal degree; multiplication rows for degree sums
// beyond `maxdeg` are stored empty (dropped), which is exact for every series
// the engine produces (h^k coefficients only ever hold components of internal
// degree <= k). Filtered products (PBW straightening) may land strictly below
// the degree sum; graded ones are degree-additive.
template <class S>
struct Carrier {
  std::string id;
  int maxdeg = 0;
  std::vector<std::string> names;
  std::vector<int> degs;
  bool unital = false;
  Vec<S> unit;  // coordinates of 1, when unital

  std::vector<SRow<S>> prod;  // [a*dim+b]

  bool hopf = false;
  std::vector<std::vector<std::tuple<int, int, S>>> cop;  // per basis elem
  Vec<S> counit;
  std::vector<SRow<S>> antip;

  int dim() const { return static_cast<int>(names.size()); }

  const SRow<S>& row(int a, int b) const { return prod[static_cast<size_t>(a) * dim() + b]; }
  SRow<S>& row(int a, int b) { return prod[static_cast<size_t>(a) * dim() + b]; }

  int index_of(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
      if (names[i] == name) return i;
    throw std::out_of_range("carrier " + id + ": no basis element named " + name);
  }

  std::vector<int> slice_dims() const {
    std::vector<int> out(maxdeg + 1, 0);
    for (int d : degs)
      if (d <= maxdeg) ++out[d];
    return out;
  }

  Vec<S> basis_vec(int i) const {
    Vec<S> v = vec_zero<S>(dim());
    v[i] = scalar_traits<S>::one();
    return v;
  }

  Vec<S> mul(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = vec_zero<S>(dim());
    for (int a = 0; a < dim(); ++a) {
      if (scalar_traits<S>::is_zero(x[a])) continue;
      for (int b = 0; b < dim(); ++b) {
        if (scalar_traits<S>::is_zero(y[b])) continue;
        srow_add_to(row(a, b), x[a] * y[b], out);
      }
    }
    return out;
  }

  Vec<S> bracket(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = mul(x, y);
    Vec<S> yx = mul(y, x);
    for (int i = 0; i < dim(); ++i) out[i] -= yx[i];
    return out;
  }

  // Delta of a vector as a dense dim x dim tensor-square matrix.
  std::vector<Vec<S>> coproduct_matrix(const Vec<S>& x) const {
    std::vector<Vec<S>> m(dim(), vec_zero<S>(dim()));
    for (int a = 0; a < dim(); ++a) {
      if (scalar_traits<S>::is_zero(x[a])) continue;
      for (const auto& [l, r, c] : cop[a]) m[l][r] += x[a] * c;
    }
    return m;
  }

  Vec<S> apply_antipode(const Vec<S>& x) const {
    Vec<S> out = vec_zero<S>(dim());
    for (int a = 0; a < dim(); ++a)
      if (!scalar_traits<S>::is_zero(x[a])) srow_add_to(antip[a], x[a], out);
    return out;
  }

  S apply_counit(const Vec<S>& x) const {
    S out = scalar_traits<S>::zero();
    for (int a = 0; a < dim(); ++a) out += x[a] * counit[a];
    return out;
  }
};

// Linear map between carriers as a sparse column table. The adjoined-unit
// channel of a series maps through unchanged unless `unit_to_unit` is set, in
// which case a scalar head lands on the (unital) target's 1.
template <class S>
struct LinMap {
  const Carrier<S>* src = nullptr;
  const Carrier<S>* dst = nullptr;
  std::vector<SRow<S>> cols;  // per src basis index
  bool unit_to_unit = false;

  LinMap() = default;
  LinMap(const Carrier<S>* s, const Carrier<S>* d)
      : src(s), dst(d), cols(s->dim()) {}

  Vec<S> apply(const Vec<S>& x) const {
    Vec<S> out = vec_zero<S>(dst->dim());
    for (int a = 0; a < src->dim(); ++a)
      if (!scalar_traits<S>::is_zero(x[a])) srow_add_to(cols[a], x[a], out);
    return out;
  }

  void set(int a, const Vec<S>& img) {
    cols[a].clear();
    for (int j = 0; j < dst->dim(); ++j)
      if (!scalar_traits<S>::is_zero(img[j])) cols[a].push_back({j, img[j]});
  }
};

// Bilinear map X x Y -> Z as a sparse table.
template <class S>
struct Bilin {
  const Carrier<S>* left = nullptr;
  const Carrier<S>* right = nullptr;
  const Carrier<S>* dst = nullptr;
  std::vector<SRow<S>> rows;  // [a*dimY + b]

  Bilin() = default;
  Bilin(const Carrier<S>* l, const Carrier<S>* r, const Carrier<S>* d)
      : left(l), right(r), dst(d),
        rows(static_cast<size_t>(l->dim()) * r->dim()) {}

  const SRow<S>& at(int a, int b) const { return rows[static_cast<size_t>(a) * right->dim() + b]; }
  SRow<S>& at(int a, int b) { return rows[static_cast<size_t>(a) * right->dim() + b]; }

  void set(int a, int b, const Vec<S>& img) {
    auto& r = at(a, b);
    r.clear();
    for (int j = 0; j < dst->dim(); ++j)
      if (!scalar_traits<S>::is_zero(img[j])) r.push_back({j, img[j]});
  }

  Vec<S> apply(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = vec_zero<S>(dst->dim());
    for (int a = 0; a < left->dim(); ++a) {
      if (scalar_traits<S>::is_zero(x[a])) continue;
      for (int b = 0; b < right->dim(); ++b) {
        if (scalar_traits<S>::is_zero(y[b])) continue;
        srow_add_to(at(a, b), x[a] * y[b], out);
      }
    }
    return out;
  }
};

namespace detail {
template <class T, class F>
T convert_scalar(const F& x) {
  if constexpr (std::is_same_v<T, F>) return x;
  else return scalar_traits<T>::from_rat(x);
}
}  // namespace detail

// Deep conversion Rat -> complex (or identity) of a carrier and its tables.
template <class T, class F>
Carrier<T> convert_carrier(const Carrier<F>& c) {
  Carrier<T> o;
  o.id = c.id;
  o.maxdeg = c.maxdeg;
  o.names = c.names;
  o.degs = c.degs;
  o.unital = c.unital;
  for (const auto& v : c.unit) o.unit.push_back(detail::convert_scalar<T>(v));
  o.prod.resize(c.prod.size());
  for (size_t i = 0; i < c.prod.size(); ++i)
    for (const auto& [j, v] : c.prod[i]) o.prod[i].push_back({j, detail::convert_scalar<T>(v)});
  o.hopf = c.hopf;
  o.cop.resize(c.cop.size());
  for (size_t i = 0; i < c.cop.size(); ++i)
    for (const auto& [l, r, v] : c.cop[i]) o.cop[i].push_back({l, r, detail::convert_scalar<T>(v)});
  for (const auto& v : c.counit) o.counit.push_back(detail::convert_scalar<T>(v));
  o.antip.resize(c.antip.size());
  for (size_t i = 0; i < c.antip.size(); ++i)
    for (const auto& [j, v] : c.antip[i]) o.antip[i].push_back({j, detail::convert_scalar<T>(v)});
  return o;
}

template <class T, class F>
LinMap<T> convert_linmap(const LinMap<F>& m, const Carrier<T>* src, const Carrier<T>* dst) {
  LinMap<T> o(src, dst);
  o.unit_to_unit = m.unit_to_unit;
  for (size_t i = 0; i < m.cols.size(); ++i)
    for (const auto& [j, v] : m.cols[i]) o.cols[i].push_back({j, detail::convert_scalar<T>(v)});
  return o;
}

template <class T, class F>
Bilin<T> convert_bilin(const Bilin<F>& m, const Carrier<T>* l, const Carrier<T>* r,
                       const Carrier<T>* d) {
  Bilin<T> o(l, r, d);
  for (size_t i = 0; i < m.rows.size(); ++i)
    for (const auto& [j, v] : m.rows[i]) o.rows[i].push_back({j, detail::convert_scalar<T>(v)});
  return o;
}

}  // namespace holotwo
