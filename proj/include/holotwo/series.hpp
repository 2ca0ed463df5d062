#pragma once

#include <cassert>
#include <stdexcept>

#include "holotwo/carrier.hpp"

namespace holotwo {

// Truncated formal series sum_{n<=N} h^n (sc[n] + body[n]) over a carrier.
// The scalar channel is the adjoined unit for carriers without one; for
// unital carriers it stays identically zero and 1 lives in the body.
template <class S>
struct Series {
  const Carrier<S>* car = nullptr;
  int N = 0;
  Vec<S> sc;
  std::vector<Vec<S>> body;

  Series() = default;
  Series(const Carrier<S>* c, int n)
      : car(c), N(n), sc(vec_zero<S>(n + 1)), body(n + 1, vec_zero<S>(c->dim())) {}

  static Series zero(const Carrier<S>* c, int n) { return Series(c, n); }

  static Series one(const Carrier<S>* c, int n) {
    Series s(c, n);
    if (c->unital) s.body[0] = c->unit;
    else s.sc[0] = scalar_traits<S>::one();
    return s;
  }

  // h^k * (vector v)
  static Series embed(const Carrier<S>* c, int n, int k, const Vec<S>& v) {
    Series s(c, n);
    if (k <= n) s.body[k] = v;
    return s;
  }
};

template <class S>
void check_compat(const Series<S>& a, const Series<S>& b) {
  if (a.car != b.car || a.N != b.N)
    throw std::invalid_argument("series over different carriers or truncations");
}

template <class S>
Series<S> operator+(const Series<S>& a, const Series<S>& b) {
  check_compat(a, b);
  Series<S> z = a;
  for (int n = 0; n <= a.N; ++n) {
    z.sc[n] += b.sc[n];
    for (int j = 0; j < a.car->dim(); ++j) z.body[n][j] += b.body[n][j];
  }
  return z;
}

template <class S>
Series<S> operator-(const Series<S>& a, const Series<S>& b) {
  check_compat(a, b);
  Series<S> z = a;
  for (int n = 0; n <= a.N; ++n) {
    z.sc[n] -= b.sc[n];
    for (int j = 0; j < a.car->dim(); ++j) z.body[n][j] -= b.body[n][j];
  }
  return z;
}

template <class S>
Series<S> operator-(const Series<S>& a) {
  Series<S> z = a;
  for (int n = 0; n <= a.N; ++n) {
    z.sc[n] = -z.sc[n];
    for (auto& v : z.body[n]) v = -v;
  }
  return z;
}

template <class S>
Series<S> operator*(const S& c, const Series<S>& a) {
  Series<S> z = a;
  for (int n = 0; n <= a.N; ++n) {
    z.sc[n] *= c;
    for (auto& v : z.body[n]) v *= c;
  }
  return z;
}

template <class S>
Series<S> series_mul(const Series<S>& a, const Series<S>& b) {
  check_compat(a, b);
  Series<S> z(a.car, a.N);
  const int dim = a.car->dim();
  for (int i = 0; i <= a.N; ++i) {
    const bool ai = !scalar_traits<S>::is_zero(a.sc[i]);
    const bool av = !vec_is_zero(a.body[i]);
    if (!ai && !av) continue;
    for (int j = 0; i + j <= a.N; ++j) {
      const int n = i + j;
      if (ai) {
        z.sc[n] += a.sc[i] * b.sc[j];
        for (int t = 0; t < dim; ++t) z.body[n][t] += a.sc[i] * b.body[j][t];
      }
      if (av) {
        if (!scalar_traits<S>::is_zero(b.sc[j]))
          for (int t = 0; t < dim; ++t) z.body[n][t] += b.sc[j] * a.body[i][t];
        if (!vec_is_zero(b.body[j])) {
          Vec<S> p = a.car->mul(a.body[i], b.body[j]);
          for (int t = 0; t < dim; ++t) z.body[n][t] += p[t];
        }
      }
    }
  }
  return z;
}

template <class S>
Series<S> operator*(const Series<S>& a, const Series<S>& b) { return series_mul(a, b); }

template <class S>
double series_norm(const Series<S>& a) {
  double m = 0.0;
  for (int n = 0; n <= a.N; ++n) {
    m = std::max(m, scalar_traits<S>::abs(a.sc[n]));
    m = std::max(m, norm_inf(a.body[n]));
  }
  return m;
}

template <class S>
double series_dist(const Series<S>& a, const Series<S>& b) { return series_norm(a - b); }

template <class S>
bool head_is_one(const Series<S>& a) {
  Series<S> d = a - Series<S>::one(a.car, a.N);
  return scalar_traits<S>::is_zero(d.sc[0]) && vec_is_zero(d.body[0]);
}

template <class S>
bool head_is_zero(const Series<S>& a) {
  return scalar_traits<S>::is_zero(a.sc[0]) && vec_is_zero(a.body[0]);
}

// Inverse of a series with head 1 (i.e. 1 + e with e starting at h^1 or at a
// nilpotent body part): geometric sum.
template <class S>
Series<S> series_invert(const Series<S>& a) {
  if (!head_is_one(a))
    throw std::domain_error("series_invert: head is not the unit");
  const Series<S> one = Series<S>::one(a.car, a.N);
  const Series<S> e = a - one;
  Series<S> acc = one;
  Series<S> pw = one;
  for (int k = 1; k <= a.N; ++k) {
    pw = pw * e;
    if (k % 2 == 1) acc = acc - pw;
    else acc = acc + pw;
  }
  return acc;
}

// exp of a series with zero head (e.g. h * x).
template <class S>
Series<S> exp_primitive(const Series<S>& x) {
  if (!head_is_zero(x))
    throw std::domain_error("exp_primitive: argument must start at h^1");
  Series<S> acc = Series<S>::one(x.car, x.N);
  Series<S> pw = acc;
  S fact = scalar_traits<S>::one();
  for (int k = 1; k <= x.N; ++k) {
    pw = pw * x;
    fact = fact * scalar_traits<S>::from_int(k);
    acc = acc + (scalar_traits<S>::one() / fact) * pw;
  }
  return acc;
}

// log of a series with head 1.
template <class S>
Series<S> log_grouplike(const Series<S>& g) {
  if (!head_is_one(g))
    throw std::domain_error("log_grouplike: head is not the unit");
  const Series<S> e = g - Series<S>::one(g.car, g.N);
  Series<S> acc = Series<S>::zero(g.car, g.N);
  Series<S> pw = Series<S>::one(g.car, g.N);
  for (int k = 1; k <= g.N; ++k) {
    pw = pw * e;
    const S coef = (k % 2 == 1 ? scalar_traits<S>::one() : -scalar_traits<S>::one()) /
                   scalar_traits<S>::from_int(k);
    acc = acc + coef * pw;
  }
  return acc;
}

// Residual of the group-like property Delta(g) = g (x) g, eps(g) = 1, checked
// degreewise against the carrier's coproduct tables. Hopf carriers only.
template <class S>
double grouplike_residual(const Series<S>& g) {
  const Carrier<S>* c = g.car;
  if (!c->hopf) throw std::domain_error("grouplike_residual: carrier has no coproduct");
  const int dim = c->dim();
  double worst = 0.0;
  for (int n = 0; n <= g.N; ++n) {
    assert(scalar_traits<S>::is_zero(g.sc[n]) && "group-like test over unital hopf carrier");
    auto m = c->coproduct_matrix(g.body[n]);
    for (int i = 0; i + 0 <= n; ++i) {
      const int j = n - i;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) m[a][b] -= g.body[i][a] * g.body[j][b];
    }
    for (int a = 0; a < dim; ++a) worst = std::max(worst, norm_inf(m[a]));
    S eps = c->apply_counit(g.body[n]);
    if (n == 0) eps -= scalar_traits<S>::one();
    worst = std::max(worst, scalar_traits<S>::abs(eps));
  }
  return worst;
}

template <class S>
bool is_grouplike(const Series<S>& g, double tol) { return grouplike_residual(g) <= tol; }

// Residual of primitivity Delta(x) = x (x) 1 + 1 (x) x, degreewise.
template <class S>
double primitive_residual(const Series<S>& x) {
  const Carrier<S>* c = x.car;
  if (!c->hopf) throw std::domain_error("primitive_residual: carrier has no coproduct");
  if (!c->unital) throw std::domain_error("primitive_residual: needs the unit");
  const int dim = c->dim();
  double worst = 0.0;
  for (int n = 0; n <= x.N; ++n) {
    auto m = c->coproduct_matrix(x.body[n]);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        m[a][b] -= x.body[n][a] * c->unit[b] + c->unit[a] * x.body[n][b];
    for (int a = 0; a < dim; ++a) worst = std::max(worst, norm_inf(m[a]));
  }
  return worst;
}

template <class S>
Series<S> apply(const LinMap<S>& f, const Series<S>& x) {
  assert(f.src == x.car);
  Series<S> z(f.dst, x.N);
  for (int n = 0; n <= x.N; ++n) {
    z.body[n] = f.apply(x.body[n]);
    if (!scalar_traits<S>::is_zero(x.sc[n])) {
      if (f.unit_to_unit) {
        assert(f.dst->unital);
        for (int j = 0; j < f.dst->dim(); ++j) z.body[n][j] += x.sc[n] * f.dst->unit[j];
      } else {
        z.sc[n] = x.sc[n];
      }
    }
  }
  return z;
}

template <class S>
Series<S> apply(const Bilin<S>& f, const Series<S>& x, const Series<S>& y) {
  assert(f.left == x.car && f.right == y.car);
  assert(x.N == y.N);
  Series<S> z(f.dst, x.N);
  for (int i = 0; i <= x.N; ++i) {
    assert(scalar_traits<S>::is_zero(x.sc[i]) && "bilinear table on pure bodies only");
    if (vec_is_zero(x.body[i])) continue;
    for (int j = 0; i + j <= x.N; ++j) {
      assert(scalar_traits<S>::is_zero(y.sc[j]) && "bilinear table on pure bodies only");
      if (vec_is_zero(y.body[j])) continue;
      Vec<S> p = f.apply(x.body[i], y.body[j]);
      for (int t = 0; t < f.dst->dim(); ++t) z.body[i + j][t] += p[t];
    }
  }
  return z;
}

// Convert a rational series to another scalar field over a converted carrier.
template <class T, class F>
Series<T> convert_series(const Series<F>& x, const Carrier<T>* car) {
  Series<T> z(car, x.N);
  for (int n = 0; n <= x.N; ++n) {
    z.sc[n] = detail::convert_scalar<T>(x.sc[n]);
    for (int j = 0; j < car->dim(); ++j) z.body[n][j] = detail::convert_scalar<T>(x.body[n][j]);
  }
  return z;
}

}  // namespace holotwo
