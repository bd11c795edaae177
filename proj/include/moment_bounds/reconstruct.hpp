#ifndef MOMENT_BOUNDS_RECONSTRUCT_HPP
#define MOMENT_BOUNDS_RECONSTRUCT_HPP

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "oppq.hpp"
#include "precision.hpp"
#include "problems.hpp"

namespace moment_bounds {

enum class NullMode { AM, BM };

inline std::string to_string(NullMode m) { return m == NullMode::AM ? "am" : "bm"; }

template <class Real>
struct WaveSamples {
  std::vector<Real> grid;
  std::vector<Real> values;
  std::vector<Real> potential;
  Real E = 0;
  int N_terms = 0;
  Real norm = 0;  // trapezoid L2 norm before scaling
};

namespace detail {
template <class Real>
void fix_sign(std::vector<Real>& v) {
  using std::abs;
  Real big = 0;
  for (const auto& x : v) big = std::max(big, Real(abs(x)));
  for (const auto& x : v) {
    if (abs(x) > big * ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) / 2)) {
      if (x < 0)
        for (auto& y : v) y = -y;
      return;
    }
  }
}

template <class Real>
std::string format_vector(const std::vector<Real>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i], 8);
  return s + ")";
}

// Bottom eigenvector of a Gram-type matrix, refusing a near-degenerate
// bottom pair.
template <class Real>
std::vector<Real> bottom_direction(const SymMatrix<Real>& g) {
  using std::abs;
  auto eig = symmetric_eigen(g);
  Real top = abs(eig.values.back());
  if (top == 0) throw degenerate_nullspace("matrix vanishes identically");
  Real gap = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) / 4) * top;
  if (eig.values.size() > 1 && eig.values[1] <= gap)
    throw degenerate_nullspace("two near-null directions " + format_vector(eig.vectors[0]) + " and " +
                               format_vector(eig.vectors[1]));
  auto v = bottom_eigenvector(g, eig.values.front());
  fix_sign(v);
  return v;
}
}  // namespace detail

// Missing-moment tuple at an accepted energy estimate. AM: null vector of the
// secular rows. BM: bottom eigenvector of the dyad sum.
template <class Real>
std::vector<Real> missing_moment_vector(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis,
                                        const Real& E, int N, NullMode mode) {
  if (mode == NullMode::BM) return detail::bottom_direction(bm_matrix(spec, basis, E, N));
  auto a = am_matrix(spec, basis, E, N);
  const std::size_t s = a.front().size();
  SymMatrix<Real> g(s);
  for (const auto& row : a)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j <= i; ++j) g(i, j) += row[i] * row[j];
  return detail::bottom_direction(g);
}

template <class Real>
Real potential_value(const ProblemSpec<Real>& spec, const Real& chi) {
  Real d = chi - spec.b;
  if (spec.family == Family::WalledCQ) return d * d / 2;
  if (chi == 0) return std::numeric_limits<double>::infinity();
  return (spec.gamma / (chi * chi) + d * d) / 2;
}

template <class Real>
std::vector<Real> uniform_grid(const Real& lo, const Real& hi, std::size_t points) {
  if (points < 2 || !(lo < hi)) throw invalid_window("grid needs at least two points on a non-empty interval");
  std::vector<Real> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * Real(static_cast<long>(i)) / Real(static_cast<long>(points - 1));
  return g;
}

template <class Real>
Real trapezoid(const std::vector<Real>& x, const std::vector<Real>& y) {
  Real s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) / 2;
  return s;
}

template <class Real>
Real l2_norm(const std::vector<Real>& x, const std::vector<Real>& y) {
  using std::sqrt;
  std::vector<Real> sq(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) sq[i] = y[i] * y[i];
  return sqrt(trapezoid(x, sq));
}

// OPPQ coefficients c_n = Lambda^(n) . u for n <= N.
template <class Real>
std::vector<Real> expansion_coefficients(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis,
                                         const Real& E, const std::vector<Real>& u, int N) {
  auto t = lambda_table(spec, basis, E, N);
  if (u.size() != t.entries.front().size()) throw index_out_of_range("tuple length does not match the slots");
  std::vector<Real> c;
  for (const auto& row : t.entries) {
    Real s = 0;
    for (std::size_t l = 0; l < u.size(); ++l) s += row[l] * u[l];
    c.push_back(s);
  }
  return c;
}

// Psi on the grid from the first N+1 OPPQ coefficients, scaled to unit
// trapezoid norm.
template <class Real>
WaveSamples<Real> wavefunction_samples(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, const Real& E,
                                       const std::vector<Real>& u, int N, const std::vector<Real>& grid) {
  using std::abs;
  using std::isfinite;
  if (grid.size() < 2) throw invalid_window("grid needs at least two points");
  for (const auto& x : grid)
    if (x < 0 || x > spec.b + 10) throw invalid_window("grid must lie in [0, b + 10]");
  auto c = expansion_coefficients(spec, basis, E, u, N);
  WaveSamples<Real> w;
  w.grid = grid;
  w.E = E;
  w.N_terms = N;
  for (const auto& x : grid) {
    Real v = 0;
    if (!(spec.family == Family::SpikedAQ && x == 0)) {
      auto P = basis.evaluate(x);
      Real s = 0;
      for (int n = 0; n <= N; ++n) s += c[n] * P[n];
      v = s * reference_weight(spec, x);
      if (spec.family == Family::SpikedAQ) v *= x * x;
    }
    w.values.push_back(v);
    w.potential.push_back(potential_value(spec, x));
  }
  w.norm = l2_norm(w.grid, w.values);
  if (!(w.norm > 0) || !isfinite(to_double(w.norm))) throw degenerate_nullspace("reconstructed state has zero norm");
  for (auto& v : w.values) v /= w.norm;
  return w;
}

// Sign changes of the interior samples, ignoring values below `floor` times
// the peak.
template <class Real>
int node_count(const std::vector<Real>& values, double floor = 1e-8) {
  using std::abs;
  Real peak = 0;
  for (const auto& v : values) peak = std::max(peak, Real(abs(v)));
  int nodes = 0, last = 0;
  for (const auto& v : values) {
    if (abs(v) <= peak * floor) continue;
    int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

// h_n(x) = H_n(x) exp(-x^2/2) with H_n scaled so that the integral of
// H_n^2 exp(-x^2) over the real line is 2; restricted to x >= 0 the even
// (odd) members are orthonormal among themselves.
template <class Real>
std::vector<Real> hermite_functions(int nmax, const Real& x) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  std::vector<Real> h(static_cast<std::size_t>(nmax) + 1);
  Real p0 = sqrt(Real(2)) * exp(-x * x / 2) / pow(boost::math::constants::pi<Real>(), Real(1) / 4);
  h[0] = p0;
  if (nmax >= 1) h[1] = sqrt(Real(2)) * x * p0;
  for (int k = 2; k <= nmax; ++k) h[k] = sqrt(Real(2) / k) * x * h[k - 1] - sqrt(Real(k - 1) / k) * h[k - 2];
  return h;
}

template <class Real>
struct DenseResult {
  WaveSamples<Real> samples;  // partial sum
  std::vector<Real> target;   // exact odd state on the grid
  std::vector<Real> coefficients;
  Real l2_error = 0;
};

// Half-line overlaps <h_{2 eta} | h_target> for eta <= count, all from one
// tanh-sinh pass on [0, x_max] refined until every overlap settles.
template <class Real>
std::vector<Real> even_overlaps(int target_n, int count) {
  using std::abs;
  using std::asinh;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sinh;
  using std::sqrt;
  const int top = std::max(2 * count, target_n);
  const long digits = static_cast<long>(working_digits<Real>());
  const Real x_max = sqrt(Real(2 * top + 1)) + sqrt(2 * Real(digits + 5) * log(Real(10))) + 2;
  const Real half = x_max / 2;
  const Real pi_2 = boost::math::constants::half_pi<Real>();
  const Real t_max = asinh(Real(2) * Real(digits + 10) * log(Real(10)) / boost::math::constants::pi<Real>());
  const Real tol = ten_to_minus<Real>(digits / 2);
  std::vector<Real> sum(count + 1, Real(0));
  auto add_node = [&](const Real& t) {
    Real u = pi_2 * sinh(t);
    Real e = exp(-2 * abs(u));
    Real dist = x_max * e / (1 + e);
    Real ch = cosh(u);
    Real w = half * pi_2 * cosh(t) / (ch * ch);
    if (w == 0 || dist == 0) return;
    Real x = u < 0 ? dist : Real(x_max - dist);
    auto h = hermite_functions(top, x);
    for (int eta = 0; eta <= count; ++eta) sum[eta] += w * h[2 * eta] * h[target_n];
  };
  Real h = 1;
  add_node(Real(0));
  for (Real t = h; t <= t_max; t += h) {
    add_node(t);
    add_node(-t);
  }
  std::vector<Real> est(count + 1);
  for (int i = 0; i <= count; ++i) est[i] = h * sum[i];
  for (int level = 1; level <= 12; ++level) {
    h /= 2;
    for (Real t = h; t <= t_max; t += 2 * h) {
      add_node(t);
      add_node(-t);
    }
    Real diff = 0;
    for (int i = 0; i <= count; ++i) {
      Real next = h * sum[i];
      diff = std::max(diff, Real(abs(next - est[i])));
      est[i] = next;
    }
    if (level >= 4 && diff <= tol) break;
  }
  return est;
}

// The odd state O = h_{2 target_eta + 1} / sqrt(2) expanded as
// sum d_eta h_{2 eta} on the half-line, d_eta = <h_{2 eta} | O>, truncated at
// eta <= N_terms. The error is the trapezoid L2 distance on the grid.
template <class Real>
DenseResult<Real> denseness_demo(int target_eta, int N_terms, const std::vector<Real>& grid) {
  if (target_eta < 0 || N_terms < 0) throw out_of_domain("indices must be non-negative");
  if (grid.size() < 2) throw invalid_window("grid needs at least two points");
  const int target = 2 * target_eta + 1;
  DenseResult<Real> r;
  using std::sqrt;
  const Real scale = 1 / sqrt(Real(2));
  r.coefficients = even_overlaps<Real>(target, N_terms);
  for (auto& d : r.coefficients) d *= scale;
  r.samples.grid = grid;
  r.samples.N_terms = N_terms;
  std::vector<Real> diff;
  const int top = std::max(2 * N_terms, target);
  for (const auto& x : grid) {
    auto h = hermite_functions(top, x);
    Real s = 0;
    for (int eta = 0; eta <= N_terms; ++eta) s += r.coefficients[eta] * h[2 * eta];
    r.samples.values.push_back(s);
    r.target.push_back(h[target] * scale);
    diff.push_back(s - r.target.back());
  }
  r.samples.norm = l2_norm(grid, r.samples.values);
  r.l2_error = l2_norm(grid, diff);
  return r;
}

}  // namespace moment_bounds

#endif
