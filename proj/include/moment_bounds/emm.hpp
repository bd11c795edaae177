#ifndef MOMENT_BOUNDS_EMM_HPP
#define MOMENT_BOUNDS_EMM_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "errors.hpp"
#include "numerics.hpp"
#include "precision.hpp"
#include "problems.hpp"

namespace moment_bounds {

template <class Real>
struct FeasibilityReport {
  Real E;
  bool feasible = false;
  int order = 0;
  std::vector<Real> witness;                                    // unit missing-moment tuple
  std::optional<std::pair<std::size_t, std::size_t>> failing_matrix;  // (shift, size)
  bool undetermined = false;  // iteration cap reached; reported infeasible
  int iterations = 0;
};

template <class Real>
struct EnergyInterval {
  Real E_L, E_U;
  std::string method;
  int order = 0;
  int state_index = 0;
  bool degenerate = false;  // single feasible energy
};

template <class Real>
struct EmmOptions {
  int max_iterations = 600;      // min-norm iterations per energy (m_s >= 1)
  std::size_t grid = 0;          // seed grid over the window; 0 picks 400 per unit
  std::size_t refine_grid = 24;  // grid inside a component at each continuation step
  Real resolution = 0;           // final bisection resolution; 0 picks a default
  int order_step = 2;
  int end_probes = 48;  // dyadic samples toward each end of a previous bracket
};

inline std::size_t default_grid_emm(double lo, double hi, int missing_order) {
  double per_unit = missing_order == 0 ? 400 : 40;
  return static_cast<std::size_t>(std::max(16.0, std::ceil((hi - lo) * per_unit)));
}

inline std::size_t hankel_size(int pmax, int shift) {
  return pmax < shift ? 0 : static_cast<std::size_t>((pmax - shift) / 2 + 1);
}

namespace detail {
// Congruence D H D with D = diag(h_ii)^(-1/2); definiteness is unchanged.
template <class Real>
bool scaled_positive_definite(const SymMatrix<Real>& h) {
  using std::sqrt;
  const std::size_t n = h.size();
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h(i, i) > 0)) return false;
    d[i] = 1 / sqrt(h(i, i));
  }
  SymMatrix<Real> s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s(i, j) = h(i, j) * d[i] * d[j];
  return is_positive_definite(s);
}
}  // namespace detail

// Hankel(shift 0) and Hankel(shift 1) of the given size both positive definite.
template <class Real>
bool stieltjes_feasible(const std::vector<Real>& moments, std::size_t size) {
  if (moments.size() < 2 * size) throw index_out_of_range("need 2*size moments");
  return detail::scaled_positive_definite(hankel(moments, 0, size)) &&
         detail::scaled_positive_definite(hankel(moments, 1, size));
}

// Both Hankels at the sizes implied by pmax; reports the first failing one.
template <class Real>
std::optional<std::pair<std::size_t, std::size_t>> stieltjes_failure(const std::vector<Real>& moments, int pmax) {
  for (int shift = 0; shift < 2; ++shift) {
    std::size_t n = hankel_size(pmax, shift);
    if (n == 0) continue;
    if (!detail::scaled_positive_definite(hankel(moments, static_cast<std::size_t>(shift), n)))
      return std::make_pair(static_cast<std::size_t>(shift), n);
  }
  return std::nullopt;
}

namespace detail {

// Feasibility of a Hankel pencil sum_l u_l A_l > 0 (both shifts) over unit u.
// Wolfe's minimum-norm-point iteration on the convex hull of the joint
// numerical range {(v^T A_l v)_l : |v| = 1}: the hull misses the origin iff
// some u makes every block positive definite, and the minimum-norm point x
// is then the maximizer of lambda_min over the unit sphere with value |x|.
template <class Real>
class PencilFeasibility {
public:
  PencilFeasibility(const MERTable<Real>& mer, int pmax) : slots_(mer.slots()) {
    using std::abs;
    using std::sqrt;
    for (int shift = 0; shift < 2; ++shift) {
      std::size_t n = hankel_size(pmax, shift);
      if (n == 0) continue;
      Block blk;
      blk.shift = shift;
      blk.A.assign(slots_, SymMatrix<Real>(n));
      for (std::size_t l = 0; l < slots_; ++l)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j <= i; ++j) blk.A[l](i, j) = mer.rows[i + j + shift - mer.first_row()][l];
      std::vector<Real> d(n);
      for (std::size_t i = 0; i < n; ++i) {
        Real m = 0;
        for (std::size_t l = 0; l < slots_; ++l) m = std::max(m, Real(abs(blk.A[l](i, i))));
        d[i] = m > 0 ? Real(1 / sqrt(m)) : Real(1);
      }
      for (std::size_t l = 0; l < slots_; ++l)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j <= i; ++j) blk.A[l](i, j) *= d[i] * d[j];
      blocks_.push_back(std::move(blk));
    }
    scale_.assign(slots_, Real(1));
    for (std::size_t l = 0; l < slots_; ++l) {
      Real nrm = 0;
      for (const auto& blk : blocks_) nrm = std::max(nrm, frobenius(blk.A[l]));
      if (nrm > 0) scale_[l] = 1 / nrm;
    }
  }

  struct Result {
    bool feasible = false;
    bool undetermined = false;
    int iterations = 0;
    std::vector<Real> u;  // witness in slot coordinates, unit norm
  };

  Result solve(int max_iterations, const std::vector<Real>* warm = nullptr) const {
    using std::sqrt;
    const long digits = static_cast<long>(working_digits<Real>());
    const Real eps = ten_to_minus<Real>(digits / 2);
    const Real gap_tol = ten_to_minus<Real>(digits - 10);
    Result res;
    std::vector<Real> x(slots_, Real(0));
    if (warm && warm->size() == slots_) {
      for (std::size_t l = 0; l < slots_; ++l) x[l] = (*warm)[l] / scale_[l];
      normalize(x);
    } else {
      x[0] = 1;
    }
    std::vector<std::vector<Real>> corral{oracle(x).y};
    std::vector<Real> w{Real(1)};
    x = corral[0];
    for (int it = 0; it < max_iterations; ++it) {
      res.iterations = it + 1;
      Real nx = sqrt(dot(x, x));
      if (nx <= eps) return res;  // origin is (numerically) in the hull
      auto o = oracle(x);
      if (o.value > 0 && certify(x)) {
        res.feasible = true;
        res.u = to_slots(x);
        return res;
      }
      Real gap = dot(x, x) - o.value;
      if (gap <= gap_tol * std::max(Real(1), dot(x, x))) {
        // Converged with lambda_min <= 0 at the optimum.
        return res;
      }
      corral.push_back(o.y);
      w.push_back(Real(0));
      minor_cycles(corral, w);
      x = combine(corral, w);
    }
    res.undetermined = true;
    return res;
  }

  // Largest worst-block lambda_min over unit directions, for two slots.
  // Negative when infeasible; used to steer the search toward a feasible set
  // that is narrower than the grid.
  Real margin_two_slot() const {
    using std::cos;
    using std::sin;
    if (slots_ != 2) throw usage_error("margin search needs exactly two unknown moments");
    const Real pi = boost::math::constants::pi<Real>();
    auto neg = [&](const Real& t) {
      std::vector<Real> x{cos(t), sin(t)};
      Real v = 0;
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        Real e = smallest_eigenvalue_ql(pencil(blocks_[k], x));
        if (k == 0 || e < v) v = e;
      }
      return Real(-v);
    };
    const int n = 64;
    std::vector<Real> ts, fs;
    for (int i = 0; i < n; ++i) {
      ts.push_back(-pi + 2 * pi * Real(i) / Real(n));
      fs.push_back(neg(ts.back()));
    }
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (fs[i] < fs[best]) best = i;
    const Real a = ts[best] - 2 * pi / n, c = ts[best] + 2 * pi / n;
    if (fs[(best + n - 1) % n] > fs[best] && fs[(best + 1) % n] > fs[best]) {
      try {
        return -bracketed_minimum(neg, a, ts[best], c, 60).second;
      } catch (const error&) {
      }
    }
    return -fs[best];
  }

private:
  struct Block {
    int shift = 0;
    std::vector<SymMatrix<Real>> A;
  };
  struct OracleOut {
    Real value;
    std::vector<Real> y;
  };

  static Real frobenius(const SymMatrix<Real>& m) {
    using std::sqrt;
    Real s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) s += m(i, j) * m(i, j);
    return sqrt(s);
  }
  static Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
    Real s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  static void normalize(std::vector<Real>& x) {
    using std::sqrt;
    Real n = sqrt(dot(x, x));
    if (n > 0)
      for (auto& v : x) v /= n;
  }

  SymMatrix<Real> pencil(const Block& blk, const std::vector<Real>& x) const {
    const std::size_t n = blk.A[0].size();
    SymMatrix<Real> h(n);
    for (std::size_t l = 0; l < slots_; ++l) {
      Real c = x[l] * scale_[l];
      if (c == 0) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) h(i, j) += c * blk.A[l](i, j);
    }
    return h;
  }

  OracleOut oracle(const std::vector<Real>& x) const {
    std::size_t best_block = 0;
    Real best_value = 0;
    std::vector<SymMatrix<Real>> pencils;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      pencils.push_back(pencil(blocks_[k], x));
      Real v = smallest_eigenvalue_ql(pencils.back());
      if (k == 0 || v < best_value) {
        best_value = v;
        best_block = k;
      }
    }
    const auto& blk = blocks_[best_block];
    auto v = bottom_eigenvector(pencils[best_block], best_value);
    OracleOut out;
    out.y.assign(slots_, Real(0));
    const std::size_t n = v.size();
    for (std::size_t l = 0; l < slots_; ++l) {
      Real q = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Real r = 0;
        for (std::size_t j = 0; j < n; ++j) r += blk.A[l](i, j) * v[j];
        q += v[i] * r;
      }
      out.y[l] = scale_[l] * q;
    }
    // Rayleigh quotient of the returned vector keeps value and y consistent.
    Real rq = 0;
    for (std::size_t l = 0; l < slots_; ++l) rq += x[l] * out.y[l];
    out.value = rq;
    return out;
  }

  bool certify(const std::vector<Real>& x) const {
    for (const auto& blk : blocks_)
      if (!is_positive_definite(pencil(blk, x))) return false;
    return true;
  }

  std::vector<Real> to_slots(const std::vector<Real>& x) const {
    std::vector<Real> u(slots_);
    for (std::size_t l = 0; l < slots_; ++l) u[l] = x[l] * scale_[l];
    normalize(u);
    return u;
  }

  static std::vector<Real> combine(const std::vector<std::vector<Real>>& pts, const std::vector<Real>& w) {
    std::vector<Real> x(pts[0].size(), Real(0));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t l = 0; l < x.size(); ++l) x[l] += w[i] * pts[i][l];
    return x;
  }

  // Affine minimizer of |sum a_i p_i| subject to sum a_i = 1.
  static std::optional<std::vector<Real>> affine_min(const std::vector<std::vector<Real>>& pts) {
    using std::abs;
    const std::size_t k = pts.size();
    std::vector<std::vector<Real>> a(k + 1, std::vector<Real>(k + 2, Real(0)));
    Real big = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        a[i][j] = dot(pts[i], pts[j]);
        big = std::max(big, Real(abs(a[i][j])));
      }
      a[i][k] = 1;
      a[k][i] = 1;
    }
    a[k][k + 1] = 1;
    const Real tiny = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) - 8) * std::max(big, Real(1));
    const std::size_t n = k + 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
      if (abs(a[piv][c]) <= tiny) return std::nullopt;
      std::swap(a[piv], a[c]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0) continue;
        Real f = a[r][c] / a[c][c];
        for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
      }
    }
    std::vector<Real> alpha(k);
    for (std::size_t i = 0; i < k; ++i) alpha[i] = a[i][n] / a[i][i];
    return alpha;
  }

  void minor_cycles(std::vector<std::vector<Real>>& corral, std::vector<Real>& w) const {
    const Real drop = ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) - 8);
    for (int guard = 0; guard < 64; ++guard) {
      auto alpha = affine_min(corral);
      if (!alpha) {
        // Affinely dependent corral: discard the lightest old point.
        std::size_t worst = 0;
        for (std::size_t i = 1; i + 1 < corral.size(); ++i)
          if (w[i] < w[worst]) worst = i;
        corral.erase(corral.begin() + static_cast<long>(worst));
        w.erase(w.begin() + static_cast<long>(worst));
        Real s = 0;
        for (auto& v : w) s += v;
        if (s > 0)
          for (auto& v : w) v /= s;
        else
          w.back() = 1;
        continue;
      }
      bool interior = true;
      for (const auto& a : *alpha)
        if (!(a > drop)) interior = false;
      if (interior) {
        w = *alpha;
        return;
      }
      Real theta = 1;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (!((*alpha)[i] > drop)) {
          Real denom = w[i] - (*alpha)[i];
          if (denom > 0) theta = std::min(theta, Real(w[i] / denom));
        }
      std::vector<std::vector<Real>> nc;
      std::vector<Real> nw;
      for (std::size_t i = 0; i < w.size(); ++i) {
        Real v = (1 - theta) * w[i] + theta * (*alpha)[i];
        if (v > drop) {
          nc.push_back(corral[i]);
          nw.push_back(v);
        }
      }
      if (nc.empty()) {
        nc.push_back(corral.back());
        nw.push_back(Real(1));
      }
      Real s = 0;
      for (auto& v : nw) s += v;
      for (auto& v : nw) v /= s;
      corral = std::move(nc);
      w = std::move(nw);
    }
  }

  std::size_t slots_;
  std::vector<Block> blocks_;
  std::vector<Real> scale_;
};

template <class Real>
bool removable_sigma3(const ProblemSpec<Real>& spec, const Real& E) {
  using std::abs;
  return spec.family == Family::SpikedAQ && spec.representation == Representation::PhiSigma3 && spec.b == 0 &&
         abs(2 * E - 4) < ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) / 2);
}
}  // namespace detail

template <class Real>
FeasibilityReport<Real> feasible_fixed_E(const ProblemSpec<Real>& spec, const Real& E, int pmax,
                                         const EmmOptions<Real>& opt = {},
                                         const std::vector<Real>* warm = nullptr) {
  if (spec.family != Family::SpikedAQ) throw usage_error("EMM is defined for the spiked family only");
  FeasibilityReport<Real> rep;
  rep.E = E;
  rep.order = pmax;
  MERTable<Real> mer;
  if (detail::removable_sigma3(spec, E)) {
    mer = phi_mer_ms0_removable(spec, pmax);
  } else if (spec.representation == Representation::PhiSigma3) {
    auto tau = phi_moments_ms0(spec, E, pmax);
    rep.failing_matrix = stieltjes_failure(tau, pmax);
    rep.feasible = !rep.failing_matrix;
    if (rep.feasible) rep.witness = {Real(1)};
    return rep;
  } else {
    mer = mer_table(spec, E, pmax);
  }
  detail::PencilFeasibility<Real> solver(mer, pmax);
  auto r = solver.solve(opt.max_iterations, warm);
  rep.feasible = r.feasible;
  rep.undetermined = r.undetermined;
  rep.iterations = r.iterations;
  if (r.feasible) rep.witness = r.u;
  return rep;
}

namespace detail {
template <class Real>
Real margin_at(const ProblemSpec<Real>& spec, const Real& E, int pmax) {
  try {
    PencilFeasibility<Real> solver(mer_table(spec, E, pmax), pmax);
    return solver.margin_two_slot();
  } catch (const pole_at_energy&) {
    return Real(-1);
  }
}

template <class Real>
struct Component {
  Real lo, hi;  // outer ends (not certified feasible)
  std::vector<Real> witness;
};

// Feasibility test used while bracketing: undetermined points count as
// feasible so that the outer ends stay certified infeasible.
template <class Real>
struct Probe {
  const ProblemSpec<Real>& spec;
  int pmax;
  const EmmOptions<Real>& opt;
  std::vector<Real> warm;
  bool operator()(const Real& E) {
    try {
      auto r = feasible_fixed_E(spec, E, pmax, opt, warm.empty() ? nullptr : &warm);
      if (r.feasible && r.witness.size() > 1) warm = r.witness;
      return r.feasible || r.undetermined;
    } catch (const pole_at_energy&) {
      return false;
    }
  }
};

template <class Real>
Real bisect_edge(Probe<Real>& probe, Real inside, Real outside, const Real& res) {
  using std::abs;
  while (abs(outside - inside) > res) {
    Real mid = (inside + outside) / 2;
    if (mid == inside || mid == outside) break;
    if (probe(mid))
      inside = mid;
    else
      outside = mid;
  }
  return outside;
}

// Samples: a uniform interior grid plus dyadic points approaching both ends,
// since a shrinking feasible set often stays attached to one old end.
template <class Real>
std::vector<Component<Real>> scan_components(Probe<Real>& probe, const Real& lo, const Real& hi, std::size_t grid,
                                             const Real& res, int end_probes = 0) {
  std::vector<Real> xs{lo, hi};
  for (std::size_t i = 1; i < grid; ++i) xs.push_back(lo + (hi - lo) * Real(i) / Real(grid));
  Real frac = Real(1) / Real(grid);
  for (int k = 0; k < end_probes; ++k) {
    frac /= 2;
    xs.push_back(lo + (hi - lo) * frac);
    xs.push_back(hi - (hi - lo) * frac);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<bool> ok(xs.size(), false);
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) ok[i] = probe(xs[i]);
  const std::size_t last = xs.size() - 1;
  std::vector<Component<Real>> out;
  std::size_t i = 1;
  while (i < last) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < last && ok[j + 1]) ++j;
    Component<Real> c;
    c.lo = bisect_edge(probe, xs[i], xs[i - 1], res);
    c.hi = bisect_edge(probe, xs[j], xs[j + 1], res);
    c.witness = probe.warm;
    out.push_back(std::move(c));
    i = j + 1;
  }
  return out;
}

// Maximizes the two-slot margin over (lo, hi) and grows a component from the
// maximizer when it is feasible.
template <class Real>
std::optional<Component<Real>> locate_by_margin(Probe<Real>& probe, const Real& lo, const Real& hi, const Real& res) {
  auto neg = [&](const Real& E) { return Real(-margin_at(probe.spec, E, probe.pmax)); };
  const int n = 32;
  std::vector<Real> xs, fs;
  for (int i = 0; i <= n; ++i) {
    xs.push_back(lo + (hi - lo) * Real(i) / Real(n));
    fs.push_back(i == 0 || i == n ? Real(1) : neg(xs.back()));
  }
  int best = 1;
  for (int i = 2; i < n; ++i)
    if (fs[i] < fs[best]) best = i;
  Real E = xs[best];
  if (fs[best - 1] > fs[best] && fs[best + 1] > fs[best]) {
    try {
      E = bracketed_minimum(neg, xs[best - 1], xs[best], xs[best + 1]).first;
    } catch (const error&) {
    }
  }
  if (!probe(E)) return std::nullopt;
  Component<Real> c;
  c.witness = probe.warm;
  c.lo = bisect_edge(probe, E, lo, res);
  c.hi = bisect_edge(probe, E, hi, res);
  return c;
}
}  // namespace detail

// Brackets of every feasible component in the window at order pmax, in
// increasing energy. Orders are raised from a low starting order, each step
// searching only the previous brackets, so narrow feasible sets are not
// missed by the grid.
template <class Real>
std::vector<EnergyInterval<Real>> emm_energy_intervals(const ProblemSpec<Real>& spec, int pmax, const Real& lo,
                                                       const Real& hi, const EmmOptions<Real>& opt = {}) {
  using std::abs;
  if (!(lo < hi)) throw invalid_window("window lower end must be below upper end");
  EnergyInterval<Real> proto;
  proto.method = "emm-" + to_string(spec.representation);
  proto.order = pmax;
  const int ms = spec.missing_order();
  if (spec.representation == Representation::PhiSigma3 && spec.b == 0) {
    // tau(1) = 0 is forced except at E = 2 exactly, where it is free.
    if (!(lo <= 2 && Real(2) <= hi)) throw no_feasible_point("only E = 2 is feasible at b = 0");
    auto r = feasible_fixed_E(spec, Real(2), pmax, opt);
    if (!r.feasible) throw no_feasible_point("E = 2 not certified feasible");
    proto.E_L = proto.E_U = Real(2);
    proto.degenerate = true;
    return {proto};
  }
  const long digits = static_cast<long>(working_digits<Real>());
  Real final_res = opt.resolution > 0
                       ? opt.resolution
                       : (ms == 0 ? ten_to_minus<Real>(digits / 2) : ten_to_minus<Real>(std::min(digits / 3, 12L)));
  int start = ms == 0 ? 1 : std::min(pmax, ms == 1 ? 2 : 4);
  int step = ms == 0 ? 1 : std::max(1, opt.order_step);
  if (ms >= 3 && opt.order_step == 2) step = 3;
  if ((pmax - start) % step) start += (pmax - start) % step;
  std::size_t grid = opt.grid ? opt.grid : default_grid_emm(to_double(lo), to_double(hi), ms);

  std::vector<detail::Component<Real>> comps;
  {
    detail::Probe<Real> probe{spec, start, opt, {}};
    Real res = (start == pmax || ms == 0) ? final_res : (hi - lo) * ten_to_minus<Real>(ms == 0 ? 6 : 3);
    comps = detail::scan_components(probe, lo, hi, grid, res);
    if (comps.empty()) comps = detail::scan_components(probe, lo, hi, grid, res, opt.end_probes);
  }
  if (comps.empty()) throw no_feasible_point("no feasible energy in window at order " + std::to_string(start));
  for (int p = start + step; p <= pmax; p += step) {
    std::vector<detail::Component<Real>> next;
    for (const auto& c : comps) {
      detail::Probe<Real> probe{spec, p, opt, c.witness};
      std::vector<detail::Component<Real>> found;
      Real res = (p == pmax || ms == 0) ? final_res : (c.hi - c.lo) * ten_to_minus<Real>(ms == 0 ? 6 : 3);
      // Keep the starting grid density inside wide components so that
      // states which separate at this order are not stepped over.
      const double share = to_double((c.hi - c.lo) / (hi - lo));
      const std::size_t g0 = std::max(opt.refine_grid, static_cast<std::size_t>(std::ceil(share * double(grid))));
      found = detail::scan_components(probe, c.lo, c.hi, g0, res);
      // A component that vanishes costs every escalation step, so the search
      // is wider when the per-energy test is cheap.
      const std::size_t cap = ms == 0 ? 64 * g0 : 4 * g0;
      for (std::size_t g = g0; found.empty() && g <= cap; g *= 4)
        found = detail::scan_components(probe, c.lo, c.hi, g, res, ms == 0 ? opt.end_probes : opt.end_probes / 4);
      if (found.empty() && ms == 1) {
        auto f = detail::locate_by_margin(probe, c.lo, c.hi, res);
        if (f) found.push_back(std::move(*f));
      }
      for (auto& f : found) next.push_back(std::move(f));
    }
    if (next.empty()) throw no_feasible_point("feasible set vanished at order " + std::to_string(p));
    comps = std::move(next);
  }
  std::vector<EnergyInterval<Real>> out;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    EnergyInterval<Real> iv = proto;
    iv.E_L = comps[k].lo;
    iv.E_U = comps[k].hi;
    iv.state_index = static_cast<int>(k);
    out.push_back(std::move(iv));
  }
  return out;
}

// Bracket of the state-th feasible component in the window at order pmax.
template <class Real>
EnergyInterval<Real> emm_energy_interval(const ProblemSpec<Real>& spec, int pmax, const Real& lo, const Real& hi,
                                         int state = 0, const EmmOptions<Real>& opt = {}) {
  auto all = emm_energy_intervals(spec, pmax, lo, hi, opt);
  if (state < 0 || static_cast<std::size_t>(state) >= all.size())
    throw no_feasible_point("window holds " + std::to_string(all.size()) + " feasible components");
  return all[static_cast<std::size_t>(state)];
}

}  // namespace moment_bounds

#endif
