#ifndef MOMENT_BOUNDS_NUMERICS_HPP
#define MOMENT_BOUNDS_NUMERICS_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace moment_bounds {

// Dense symmetric matrix stored as a packed lower triangle.
template <class Real>
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * (n + 1) / 2, Real(0)) {}

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  std::size_t size() const { return n_; }
  Real& operator()(std::size_t i, std::size_t j) { return a_[index(i, j)]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a_[index(i, j)]; }

private:
  static std::size_t index(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }
  std::size_t n_ = 0;
  std::vector<Real> a_;
};

// Lower-triangular factor, packed by rows.
template <class Real>
class LowerMatrix {
public:
  LowerMatrix() = default;
  explicit LowerMatrix(std::size_t n) : n_(n), a_(n * (n + 1) / 2, Real(0)) {}
  std::size_t size() const { return n_; }
  Real& operator()(std::size_t i, std::size_t j) { return a_[i * (i + 1) / 2 + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a_[i * (i + 1) / 2 + j]; }
  // Value with zeros above the diagonal.
  Real at(std::size_t i, std::size_t j) const { return j > i ? Real(0) : (*this)(i, j); }

private:
  std::size_t n_ = 0;
  std::vector<Real> a_;
};

template <class Real>
struct CholeskyResult {
  bool ok = false;
  std::size_t fail_index = 0;  // first non-positive pivot when !ok
  LowerMatrix<Real> L;
};

namespace detail {
template <class Real>
bool finite(const Real& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}
}  // namespace detail

// Factorization that reports the failing pivot instead of throwing.
template <class Real>
CholeskyResult<Real> try_cholesky(const SymMatrix<Real>& m) {
  using std::sqrt;
  const std::size_t n = m.size();
  if (n == 0) throw invalid_matrix("empty matrix");
  CholeskyResult<Real> r;
  r.L = LowerMatrix<Real>(n);
  auto& L = r.L;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      if (!detail::finite(m(i, j))) throw invalid_matrix("non-finite entry");
      L(i, j) = m(i, j);
    }
  for (std::size_t j = 0; j < n; ++j) {
    Real d = L(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0)) {
      r.ok = false;
      r.fail_index = j;
      return r;
    }
    d = sqrt(d);
    L(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      Real s = L(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / d;
    }
  }
  r.ok = true;
  return r;
}

template <class Real>
LowerMatrix<Real> cholesky(const SymMatrix<Real>& m) {
  auto r = try_cholesky(m);
  if (!r.ok) throw not_positive_definite(r.fail_index);
  return std::move(r.L);
}

template <class Real>
bool is_positive_definite(const SymMatrix<Real>& m) {
  return try_cholesky(m).ok;
}

// Smallest eigenvalue by bisection on the shift s, using the Cholesky test
// for definiteness of m - s I; the bracket starts from Gershgorin discs.
template <class Real>
Real smallest_eigenvalue(const SymMatrix<Real>& m, const Real& tol) {
  using std::abs;
  if (!(tol > 0)) throw invalid_tolerance("tolerance must be positive");
  const std::size_t n = m.size();
  if (n == 0) throw invalid_matrix("empty matrix");
  Real lo = m(0, 0), hi = m(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Real r = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += abs(m(i, j));
    lo = std::min(lo, Real(m(i, i) - r));
    hi = std::min(hi, m(i, i));
  }
  if (n == 1) return m(0, 0);
  SymMatrix<Real> s = m;
  while (hi - lo > tol) {
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    for (std::size_t i = 0; i < n; ++i) s(i, i) = m(i, i) - mid;
    if (is_positive_definite(s))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

template <class Real>
struct EigenDecomposition {
  std::vector<Real> values;                // ascending
  std::vector<std::vector<Real>> vectors;  // vectors[k] pairs with values[k]
};

namespace detail {
// Householder reduction of a (full storage) to tridiagonal d, e. With
// `vectors` the orthogonal transform is left in a.
template <class Real>
void tridiagonalize(std::vector<std::vector<Real>>& a, std::vector<Real>& d, std::vector<Real>& e, bool vectors) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = a.size();
  d.assign(n, Real(0));
  e.assign(n, Real(0));
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    Real h = 0;
    if (l > 0) {
      Real scale = 0;
      for (std::size_t k = 0; k <= l; ++k) scale += abs(a[i][k]);
      if (scale == 0) {
        e[i] = a[i][l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a[i][k] /= scale;
          h += a[i][k] * a[i][k];
        }
        Real f = a[i][l];
        Real g = f >= 0 ? Real(-sqrt(h)) : Real(sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        a[i][l] = f - g;
        f = 0;
        for (std::size_t j = 0; j <= l; ++j) {
          if (vectors) a[j][i] = a[i][j] / h;
          g = 0;
          for (std::size_t k = 0; k <= j; ++k) g += a[j][k] * a[i][k];
          for (std::size_t k = j + 1; k <= l; ++k) g += a[k][j] * a[i][k];
          e[j] = g / h;
          f += e[j] * a[i][j];
        }
        Real hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = a[i][j];
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) a[j][k] -= f * e[k] + g * a[i][k];
        }
      }
    } else {
      e[i] = a[i][l];
    }
    d[i] = h;
  }
  d[0] = 0;
  e[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors) {
      if (d[i] != 0) {
        for (std::size_t j = 0; j < i; ++j) {
          Real g = 0;
          for (std::size_t k = 0; k < i; ++k) g += a[i][k] * a[k][j];
          for (std::size_t k = 0; k < i; ++k) a[k][j] -= g * a[k][i];
        }
      }
      d[i] = a[i][i];
      a[i][i] = 1;
      for (std::size_t j = 0; j < i; ++j) a[j][i] = a[i][j] = 0;
    } else {
      d[i] = a[i][i];
    }
  }
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;
}

// Implicit QL on the tridiagonal (d, e); rotations are applied to z when given.
template <class Real>
void tridiagonal_ql(std::vector<Real>& d, std::vector<Real>& e, std::vector<std::vector<Real>>* z) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = d.size();
  const Real eps = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()));
  for (std::size_t l = 0; l < n; ++l) {
    for (int iter = 0;; ++iter) {
      std::size_t mm = l;
      for (; mm + 1 < n; ++mm) {
        Real dd = abs(d[mm]) + abs(d[mm + 1]);
        if (abs(e[mm]) <= eps * dd) break;
      }
      if (mm == l) break;
      if (iter == 200) throw invalid_matrix("QL iteration did not converge");
      Real g = (d[l + 1] - d[l]) / (2 * e[l]);
      Real r = sqrt(g * g + 1);
      g = d[mm] - d[l] + e[l] / (g + (g >= 0 ? r : Real(-r)));
      Real s = 1, c = 1, p = 0;
      bool deflated = false;
      for (std::size_t ii = mm; ii-- > l;) {
        Real f = s * e[ii], bb = c * e[ii];
        r = sqrt(f * f + g * g);
        e[ii + 1] = r;
        if (r == 0) {
          d[ii + 1] -= p;
          e[mm] = 0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2 * c * bb;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - bb;
        if (z)
          for (std::size_t k = 0; k < n; ++k) {
            auto& zk = (*z)[k];
            f = zk[ii + 1];
            zk[ii + 1] = s * zk[ii] + c * f;
            zk[ii] = c * zk[ii] - s * f;
          }
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0;
    }
  }
}

template <class Real>
std::vector<std::vector<Real>> full_copy(const SymMatrix<Real>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw invalid_matrix("empty matrix");
  std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!finite(m(i, j))) throw invalid_matrix("non-finite entry");
      a[i][j] = m(i, j);
    }
  return a;
}
}  // namespace detail

// Householder reduction to tridiagonal form followed by implicit QL with
// shifts; eigenvectors are accumulated.
template <class Real>
EigenDecomposition<Real> symmetric_eigen(const SymMatrix<Real>& m) {
  auto a = detail::full_copy(m);
  const std::size_t n = a.size();
  std::vector<Real> d, e;
  detail::tridiagonalize(a, d, e, true);
  detail::tridiagonal_ql(d, e, &a);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  EigenDecomposition<Real> r;
  for (std::size_t k : order) {
    r.values.push_back(d[k]);
    std::vector<Real> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = a[i][k];
    r.vectors.push_back(std::move(col));
  }
  return r;
}

template <class Real>
Real smallest_eigenvalue_ql(const SymMatrix<Real>& m) {
  auto a = detail::full_copy(m);
  std::vector<Real> d, e;
  detail::tridiagonalize(a, d, e, false);
  detail::tridiagonal_ql(d, e, static_cast<std::vector<std::vector<Real>>*>(nullptr));
  return *std::min_element(d.begin(), d.end());
}

// Unit eigenvector for an eigenvalue estimate lambda at the bottom of the
// spectrum: inverse iteration with m - s I, s just below lambda, which is
// positive definite.
template <class Real>
std::vector<Real> bottom_eigenvector(const SymMatrix<Real>& m, const Real& lambda) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = m.size();
  Real scale = 0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, Real(abs(m(i, i))));
  if (scale == 0) scale = 1;
  const long digits = static_cast<long>(working_digits<Real>());
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = Real(1) + Real(static_cast<long>(i % 7)) / 10;
  for (long back = digits / 2; back >= 4; back /= 2) {
    SymMatrix<Real> s = m;
    Real shift = lambda - scale * ten_to_minus<Real>(back);
    for (std::size_t i = 0; i < n; ++i) s(i, i) = m(i, i) - shift;
    auto ch = try_cholesky(s);
    if (!ch.ok) continue;
    const auto& L = ch.L;
    for (int it = 0; it < 3; ++it) {
      std::vector<Real> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        Real t = x[i];
        for (std::size_t k = 0; k < i; ++k) t -= L(i, k) * y[k];
        y[i] = t / L(i, i);
      }
      for (std::size_t i = n; i-- > 0;) {
        Real t = y[i];
        for (std::size_t k = i + 1; k < n; ++k) t -= L(k, i) * x[k];
        x[i] = t / L(i, i);
      }
      Real nrm = 0;
      for (const auto& v : x) nrm += v * v;
      nrm = sqrt(nrm);
      for (auto& v : x) v /= nrm;
    }
    return x;
  }
  return symmetric_eigen(m).vectors.front();
}

template <class Real>
SymMatrix<Real> hankel(const std::vector<Real>& moments, std::size_t shift, std::size_t size) {
  if (size == 0) throw index_out_of_range("Hankel size must be positive");
  if (moments.size() < 2 * size - 1 + shift) throw index_out_of_range("not enough moments for Hankel matrix");
  SymMatrix<Real> h(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j <= i; ++j) h(i, j) = moments[i + j + shift];
  return h;
}

// Determinant of a small dense matrix by elimination with partial pivoting.
template <class Real>
Real small_determinant(std::vector<std::vector<Real>> a) {
  using std::abs;
  const std::size_t n = a.size();
  Real det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0) return Real(0);
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      Real f = a[i][k] / a[k][k];
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

template <class Real>
struct RootBracket {
  Real lo, hi;
  int f_lo_sign = 0, f_hi_sign = 0;
};

template <class Real>
struct RootScan {
  std::vector<Real> roots;
  // Grid points where |f| dips sharply without a sign change.
  std::vector<Real> suspected_complex;
};

namespace detail {
template <class Real>
int sign_of(const Real& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

template <class Real, class F>
std::optional<Real> eval_or_skip(F& f, const Real& x) {
  try {
    Real v = f(x);
    if (!finite(v)) return std::nullopt;
    return v;
  } catch (const pole_at_energy&) {
    return std::nullopt;
  }
}
}  // namespace detail

// Bisection until the bracket is below 10^(-digits+6) relative.
template <class Real, class F>
Real refine_root(F& f, RootBracket<Real> br) {
  using std::abs;
  const Real tol = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) - 6);
  for (int it = 0; it < 100000; ++it) {
    Real width = br.hi - br.lo;
    Real scale = std::max(Real(1), std::max(abs(br.lo), abs(br.hi)));
    if (width <= tol * scale) break;
    Real mid = (br.lo + br.hi) / 2;
    if (mid <= br.lo || mid >= br.hi) break;
    auto v = detail::eval_or_skip(f, mid);
    if (!v) break;
    int s = detail::sign_of(*v);
    if (s == 0) return mid;
    if (s == br.f_lo_sign)
      br.lo = mid;
    else
      br.hi = mid;
  }
  return (br.lo + br.hi) / 2;
}

// Sign-change scan over `grid` equal intervals. Points within `pole_skip` of
// a registered pole are skipped and no bracket spans a pole.
template <class Real, class F>
RootScan<Real> scan_roots(F&& f, const Real& lo, const Real& hi, std::size_t grid,
                          const std::vector<Real>& poles = {}, const Real& pole_skip = Real(1) / 1000000) {
  using std::abs;
  if (!(lo < hi)) throw invalid_window("window lower end must be below upper end");
  if (grid < 1) grid = 1;
  RootScan<Real> out;
  struct Pt {
    Real x, v;
    bool valid;
    int segment;
  };
  std::vector<Real> sorted_poles;
  for (const auto& p : poles)
    if (p > lo - pole_skip && p < hi + pole_skip) sorted_poles.push_back(p);
  std::sort(sorted_poles.begin(), sorted_poles.end());
  std::vector<Pt> pts;
  pts.reserve(grid + 1);
  for (std::size_t i = 0; i <= grid; ++i) {
    Real x = lo + (hi - lo) * Real(i) / Real(grid);
    int segment = 0;
    bool near_pole = false;
    for (const auto& p : sorted_poles) {
      if (abs(x - p) < pole_skip) near_pole = true;
      if (x > p) ++segment;
    }
    if (near_pole) {
      pts.push_back({x, Real(0), false, segment});
      continue;
    }
    auto v = detail::eval_or_skip(f, x);
    pts.push_back({x, v ? *v : Real(0), bool(v), segment});
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Pt& a = pts[i];
    const Pt& b = pts[i + 1];
    if (!a.valid || !b.valid || a.segment != b.segment) continue;
    int sa = detail::sign_of(a.v), sb = detail::sign_of(b.v);
    if (sa == 0) {
      if (out.roots.empty() || out.roots.back() != a.x) out.roots.push_back(a.x);
      continue;
    }
    if (sb == 0) {
      out.roots.push_back(b.x);
      continue;
    }
    if (sa != sb) out.roots.push_back(refine_root(f, RootBracket<Real>{a.x, b.x, sa, sb}));
  }
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Pt &a = pts[i - 1], &m = pts[i], &b = pts[i + 1];
    if (!a.valid || !m.valid || !b.valid) continue;
    int sa = detail::sign_of(a.v), sm = detail::sign_of(m.v), sb = detail::sign_of(b.v);
    if (sa != sm || sm != sb || sm == 0) continue;
    Real am = abs(m.v);
    if (am * 1000 < abs(a.v) && am * 1000 < abs(b.v)) out.suspected_complex.push_back(m.x);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

template <class Real, class F>
std::vector<Real> bracketed_roots(F&& f, const Real& lo, const Real& hi, std::size_t grid,
                                  const std::vector<Real>& poles = {}) {
  return scan_roots(f, lo, hi, grid, poles).roots;
}

// Minimum of f inside the triple (a, b, c) with f(b) below both ends.
// Brent's method (golden section with parabolic steps); abscissa accuracy
// about 10^(-digits/2), or 2^(1-bits) relative when bits is given.
template <class Real, class F>
std::pair<Real, Real> bracketed_minimum(F&& f, const Real& a, const Real& b, const Real& c, int bits = 0) {
  if (!(a < b && b < c)) throw not_a_minimum_bracket("need a < b < c");
  Real fb = f(b);
  if (!(fb < f(a) && fb < f(c))) throw not_a_minimum_bracket("f(b) must lie below f(a) and f(c)");
  const int full_bits = static_cast<int>(working_digits<Real>() * 3.3219280948873623);
  if (bits <= 0 || bits > full_bits / 2) bits = full_bits / 2;
  std::uintmax_t max_iter = 2000;
  auto r = boost::math::tools::brent_find_minima([&](const Real& x) { return Real(f(x)); }, a, c, bits, max_iter);
  if (!(r.second <= fb)) return {b, fb};
  return {r.first, r.second};
}

namespace detail {
// Tanh-sinh rule on [a, c]. Abscissae near either end are formed from the
// complementary distance so that f sees full relative accuracy close to a.
template <class Real, class F>
Real tanh_sinh(F& f, const Real& a, const Real& c, const Real& tol, long digits) {
  using std::abs;
  using std::asinh;
  using std::cosh;
  using std::exp;
  using std::sinh;
  const Real half = (c - a) / 2;
  const Real pi_2 = boost::math::constants::half_pi<Real>();
  const Real tmax = asinh(Real(2) * Real(digits + 10) * log(Real(10)) / boost::math::constants::pi<Real>());
  auto node = [&](const Real& t) {
    Real u = pi_2 * sinh(t);
    Real e = exp(-2 * abs(u));
    Real dist = half * 2 * e / (1 + e);  // distance to the nearer endpoint
    Real ch = cosh(u);
    Real w = half * pi_2 * cosh(t) / (ch * ch);
    Real x = u < 0 ? Real(a + dist) : Real(c - dist);
    if (w == 0 || dist == 0) return Real(0);
    return w * f(x);
  };
  Real h = 1;
  Real sum = node(Real(0));
  for (Real t = h; t <= tmax; t += h) sum += node(t) + node(-t);
  Real estimate = h * sum;
  for (int level = 1; level <= 16; ++level) {
    h /= 2;
    Real add = 0;
    for (Real t = h; t <= tmax; t += 2 * h) add += node(t) + node(-t);
    sum += add;
    Real next = h * sum;
    Real diff = abs(next - estimate);
    estimate = next;
    if (level >= 4 && diff <= tol * abs(estimate)) break;
  }
  return estimate;
}
}  // namespace detail

// Integral over (0, inf) of f(chi), where f behaves like chi^origin_power near
// zero and decays like exp(-(chi-center)^2/2). Uses chi = t^2 near the origin
// and truncates where the Gaussian tail drops below 10^(-digits-5).
template <class Real, class F>
Real singular_integral(F&& f, const Real& origin_power, const Real& center, unsigned digits = 0) {
  using std::log;
  using std::sqrt;
  if (!(origin_power > -1)) throw non_integrable_singularity("origin power must exceed -1");
  if (digits == 0) digits = working_digits<Real>();
  const Real tail = sqrt(2 * Real(digits + 5) * log(Real(10))) + 2;
  const Real tol = ten_to_minus<Real>(static_cast<long>(digits) - 3);
  Real c = center > 0 ? center : Real(0);
  if (c > tail) {
    // The piece below center - tail is under the truncation threshold.
    auto g = [&](const Real& x) { return Real(f(x)); };
    return detail::tanh_sinh(g, Real(c - tail), Real(c + tail), tol, static_cast<long>(digits));
  }
  Real T = sqrt(c + tail);
  auto g = [&](const Real& t) { return Real(2 * t * f(t * t)); };
  return detail::tanh_sinh(g, Real(0), T, tol, static_cast<long>(digits));
}

}  // namespace moment_bounds

#endif
