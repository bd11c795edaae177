#ifndef MOMENT_BOUNDS_OPPQ_HPP
#define MOMENT_BOUNDS_OPPQ_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "precision.hpp"
#include "problems.hpp"

namespace moment_bounds {

// Orthonormal polynomials P_n(chi) = sum_j xi(n, j) chi^j for the weight.
template <class Real>
struct OrthoBasis {
  int N = 0;
  WeightMoments<Real> weight;
  LowerMatrix<Real> xi;

  Real coefficient(int n, int j) const { return xi.at(n, j); }

  // P_0..P_N at chi.
  std::vector<Real> evaluate(const Real& chi) const {
    std::vector<Real> pw(N + 1);
    pw[0] = 1;
    for (int j = 1; j <= N; ++j) pw[j] = pw[j - 1] * chi;
    std::vector<Real> out(N + 1);
    for (int n = 0; n <= N; ++n) {
      Real s = 0;
      for (int j = 0; j <= n; ++j) s += xi(n, j) * pw[j];
      out[n] = s;
    }
    return out;
  }
};

// Cholesky H = C C^T of the weight Hankel matrix; xi = C^-1.
template <class Real>
OrthoBasis<Real> build_orthobasis(const WeightMoments<Real>& weight, int N) {
  if (N < 0) throw order_too_small("basis order must be non-negative");
  if (static_cast<int>(weight.values.size()) < 2 * N + 1) throw index_out_of_range("weight needs 2N+1 moments");
  auto chol = try_cholesky(hankel(weight.values, 0, static_cast<std::size_t>(N + 1)));
  if (!chol.ok)
    throw insufficient_precision("weight Hankel matrix lost positive definiteness at index " +
                                 std::to_string(chol.fail_index));
  const auto& C = chol.L;
  OrthoBasis<Real> basis;
  basis.N = N;
  basis.weight = weight;
  basis.xi = LowerMatrix<Real>(N + 1);
  auto& X = basis.xi;
  for (int j = 0; j <= N; ++j) {
    X(j, j) = 1 / C(j, j);
    for (int i = j + 1; i <= N; ++i) {
      Real s = 0;
      for (int k = j; k < i; ++k) s += C(i, k) * X(k, j);
      X(i, j) = -s / C(i, i);
    }
  }
  return basis;
}

template <class Real>
OrthoBasis<Real> make_basis(const ProblemSpec<Real>& spec, int N) {
  return build_orthobasis(weight_moments(spec, 2 * N), N);
}

// Projection coefficients Lambda^(n)_l(E) = sum_j xi(n, j) M_E(j, l).
template <class Real>
struct LambdaTable {
  Real E;
  int N = 0;
  int first_slot = 0;
  std::vector<std::vector<Real>> entries;  // entries[n][l - first_slot]
};

namespace detail {
template <class Real>
void require_oppq_spec(const ProblemSpec<Real>& spec) {
  if (spec.family == Family::SpikedAQ && spec.representation != Representation::PsiTilde)
    throw usage_error("OPPQ applies to the Psi representation of the spiked family");
}

template <class Real>
std::vector<Real> lambda_row(const OrthoBasis<Real>& basis, const MERTable<Real>& mer, int n) {
  std::vector<Real> r(mer.slots(), Real(0));
  for (int j = 0; j <= n; ++j) {
    const auto& m = mer.rows[j - mer.first_row()];
    const Real& x = basis.xi(n, j);
    for (std::size_t l = 0; l < r.size(); ++l) r[l] += x * m[l];
  }
  return r;
}
}  // namespace detail

template <class Real>
LambdaTable<Real> lambda_table(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, const Real& E,
                               int N) {
  detail::require_oppq_spec(spec);
  if (N > basis.N) throw index_out_of_range("basis order below requested N");
  auto mer = mer_table(spec, E, std::max(N, 4));
  LambdaTable<Real> t;
  t.E = E;
  t.N = N;
  t.first_slot = mer.first_slot;
  for (int n = 0; n <= N; ++n) t.entries.push_back(detail::lambda_row(basis, mer, n));
  return t;
}

// Rows used by the secular condition.
template <class Real>
std::vector<int> am_rows(const ProblemSpec<Real>& spec, int N) {
  if (spec.family == Family::WalledCQ) return {N + 1, N, N - 1};
  int ms = spec.missing_order();
  std::vector<int> rows;
  for (int l = 0; l <= ms; ++l) rows.push_back(N - l);
  return rows;
}

// Basis order needed by the secular condition at order N.
template <class Real>
int am_basis_order(const ProblemSpec<Real>& spec, int N) {
  return spec.family == Family::WalledCQ ? N + 1 : N;
}

template <class Real>
std::vector<std::vector<Real>> am_matrix(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis,
                                         const Real& E, int N) {
  detail::require_oppq_spec(spec);
  auto rows = am_rows(spec, N);
  int top = *std::max_element(rows.begin(), rows.end());
  if (top > basis.N) throw index_out_of_range("basis order below requested N");
  auto mer = mer_table(spec, E, std::max(top, 4));
  std::vector<std::vector<Real>> a;
  for (int n : rows) a.push_back(detail::lambda_row(basis, mer, n));
  return a;
}

template <class Real>
Real am_determinant(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, const Real& E, int N) {
  return small_determinant(am_matrix(spec, basis, E, N));
}

inline std::size_t default_grid(double lo, double hi, double per_unit = 400) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) * per_unit)));
}

template <class Real>
RootScan<Real> am_scan(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, int N, const Real& lo,
                       const Real& hi, std::size_t grid = 0) {
  if (N < spec.missing_order()) throw order_too_small("N must be at least the missing-moment order");
  if (grid == 0) grid = default_grid(to_double(lo), to_double(hi));
  auto f = [&](const Real& E) { return am_determinant(spec, basis, E, N); };
  return scan_roots(f, lo, hi, grid);
}

template <class Real>
std::vector<Real> am_secular_roots(const ProblemSpec<Real>& spec, int N, const Real& lo, const Real& hi,
                                   std::size_t grid = 0) {
  auto basis = make_basis(spec, am_basis_order(spec, N));
  return am_scan(spec, basis, N, lo, hi, grid).roots;
}

// Dyad sum P^(N)(E) = sum_{n <= N} Lambda^(n) Lambda^(n)^T.
template <class Real>
SymMatrix<Real> bm_matrix(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, const Real& E, int N) {
  auto t = lambda_table(spec, basis, E, N);
  const std::size_t s = t.entries.front().size();
  SymMatrix<Real> P(s);
  for (const auto& row : t.entries)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j <= i; ++j) P(i, j) += row[i] * row[j];
  return P;
}

template <class Real>
Real bm_lambda_min(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, const Real& E, int N) {
  using std::abs;
  if (N < spec.missing_order() + 1) throw order_too_small("N must exceed the missing-moment order");
  auto P = bm_matrix(spec, basis, E, N);
  Real scale = 0;
  for (std::size_t i = 0; i < P.size(); ++i) scale = std::max(scale, abs(P(i, i)));
  Real tol = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) - 10) * std::max(scale, Real(1));
  return smallest_eigenvalue(P, tol);
}

template <class Real>
struct Minimum {
  Real E;
  Real lambda;
};

template <class Real>
std::vector<Minimum<Real>> bm_local_minima(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, int N,
                                           const Real& lo, const Real& hi, std::size_t grid = 0) {
  if (!(lo < hi)) throw invalid_window("window lower end must be below upper end");
  if (grid == 0) grid = default_grid(to_double(lo), to_double(hi));
  if (grid < 2) grid = 2;
  auto f = [&](const Real& E) { return bm_lambda_min(spec, basis, E, N); };
  std::vector<Real> xs, vs;
  for (std::size_t i = 0; i <= grid; ++i) {
    xs.push_back(lo + (hi - lo) * Real(i) / Real(grid));
    vs.push_back(f(xs.back()));
  }
  std::vector<Minimum<Real>> out;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (vs[i] < vs[i - 1] && vs[i] < vs[i + 1]) {
      auto m = bracketed_minimum(f, xs[i - 1], xs[i], xs[i + 1]);
      out.push_back({m.first, m.second});
    }
  }
  return out;
}

template <class Real>
struct BoundPair {
  Real E_L, E_U;
};

// Outward bisection from center to the crossings lambda_N(E) = B_U. The
// returned ends are the points with lambda_N >= B_U.
template <class Real>
BoundPair<Real> bm_bounds(const ProblemSpec<Real>& spec, const OrthoBasis<Real>& basis, int N, const Real& B_U,
                          const Real& center, const Real& resolution = Real(0), const Real& max_reach = Real(4)) {
  using std::abs;
  auto f = [&](const Real& E) { return bm_lambda_min(spec, basis, E, N); };
  if (!(f(center) < B_U)) throw center_not_below_bound("lambda_N(center) is not below B_U; raise B_U or N");
  Real res = resolution > 0 ? resolution
                            : std::max(ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) / 2),
                                       ten_to_minus<Real>(30));
  auto crossing = [&](int dir) {
    Real inside = center;
    Real step = Real(1) / 1000;
    Real outside = center + dir * step;
    while (f(outside) < B_U) {
      inside = outside;
      step *= 2;
      if (step > max_reach) throw center_not_below_bound("no crossing within reach of center");
      outside = center + dir * step;
    }
    while (abs(outside - inside) > res * std::max(Real(1), abs(center))) {
      Real mid = (inside + outside) / 2;
      if (f(mid) < B_U)
        inside = mid;
      else
        outside = mid;
    }
    return outside;
  };
  Real lo = crossing(-1);
  Real hi = crossing(+1);
  return {lo, hi};
}

template <class Real>
struct BoundRun {
  int state_index = 0;
  Real B_U;
  std::vector<std::pair<int, Minimum<Real>>> minima;
  std::vector<std::pair<int, BoundPair<Real>>> brackets;
};

// B_U from the minimum value at a calibration order, inflated by 10^0.05.
template <class Real>
Real calibrate_bu(const Real& lambda_at_min) {
  using std::pow;
  return lambda_at_min * pow(Real(10), Real(1) / 20);
}

inline int calibration_order(int target_N) {
  return std::max(30, static_cast<int>(2 * std::sqrt(static_cast<double>(target_N))));
}

}  // namespace moment_bounds

#endif
