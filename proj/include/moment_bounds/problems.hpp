#ifndef MOMENT_BOUNDS_PROBLEMS_HPP
#define MOMENT_BOUNDS_PROBLEMS_HPP

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "precision.hpp"

namespace moment_bounds {

enum class Family { SpikedAQ, WalledCQ };
enum class Representation { PsiTilde, PhiSigma0, PhiSigma3, PsiSquared };
enum class Branch { Physical, Unphysical };

inline std::string to_string(Family f) { return f == Family::SpikedAQ ? "spiked" : "walled"; }
inline std::string to_string(Branch b) { return b == Branch::Physical ? "physical" : "unphysical"; }
inline std::string to_string(Representation r) {
  switch (r) {
    case Representation::PsiTilde: return "psi";
    case Representation::PhiSigma0: return "phi-sigma0";
    case Representation::PhiSigma3: return "phi-sigma3";
    case Representation::PsiSquared: return "psi-squared";
  }
  return "?";
}

// -Psi'' + (gamma/chi^2 + (chi-b)^2) Psi = 2 E Psi on chi > 0 (SpikedAQ), or
// -Psi'' + x^2 Psi = 2 E Psi with a wall at x = -b, written in chi = x + b
// (WalledCQ).
template <class Real>
struct ProblemSpec {
  Family family = Family::SpikedAQ;
  Real b = 0;
  Real gamma = Real(3) / 4;
  Representation representation = Representation::PsiTilde;
  Branch branch = Branch::Physical;

  // Local exponent at the origin: Psi ~ chi^alpha.
  Real alpha() const {
    using std::sqrt;
    return (1 + sqrt(1 + 4 * gamma)) / 2;
  }
  Real beta() const { return -2 * b; }
  Real lambda_shift(const Real& E) const { return 2 * E - b * b; }

  // Number of free missing moments minus one.
  int missing_order() const {
    if (family == Family::WalledCQ) return 2;
    switch (representation) {
      case Representation::PhiSigma3: return 0;
      case Representation::PhiSigma0: return 1;
      default: return 3;
    }
  }

  void validate() const {
    if (!(b >= 0)) throw out_of_domain("b must be non-negative");
    if (family == Family::SpikedAQ && !(gamma > 0)) throw out_of_domain("gamma must be positive");
  }

  static ProblemSpec spiked(const Real& b, Representation r = Representation::PsiTilde,
                            const Real& gamma = Real(3) / 4) {
    ProblemSpec s;
    s.family = Family::SpikedAQ;
    s.b = b;
    s.gamma = gamma;
    s.representation = r;
    return s;
  }
  static ProblemSpec walled(const Real& b, Branch br) {
    ProblemSpec s;
    s.family = Family::WalledCQ;
    s.b = b;
    s.branch = br;
    return s;
  }
};

// Coefficients M_E(p, l) expressing moment p through the missing slots l.
// Rows run from first_row (-1 when a boundary slot exists) to max_p.
template <class Real>
struct MERTable {
  int missing_order = 0;
  int first_slot = 0;
  std::vector<std::vector<Real>> rows;
  std::vector<Real> poles;  // energies where a recursion denominator vanishes

  int first_row() const { return first_slot < 0 ? first_slot : 0; }
  int max_p() const { return static_cast<int>(rows.size()) - 1 + first_row(); }
  std::size_t slots() const { return static_cast<std::size_t>(missing_order + 1); }
  bool boundary_slot() const { return first_slot < 0; }

  const Real& coeff(int p, int l) const { return rows.at(p - first_row()).at(l - first_slot); }

  // Moments 0..max_p for the missing-moment tuple u (slot order first_slot..).
  std::vector<Real> moments(const std::vector<Real>& u) const {
    std::vector<Real> out;
    for (int p = 0; p <= max_p(); ++p) {
      Real s = 0;
      const auto& r = rows[p - first_row()];
      for (std::size_t l = 0; l < r.size(); ++l) s += r[l] * u[l];
      out.push_back(s);
    }
    return out;
  }
};

template <class Real>
struct WeightMoments {
  enum class Kind { SpikedWeight, WalledWeight };
  Real b = 0;
  Kind kind = Kind::SpikedWeight;
  Real alpha = Real(3) / 2;
  std::vector<Real> values;
};

template <class Real>
Real exact_spectrum_spiked_b0(int n) {
  if (n < 0) throw out_of_domain("state index must be non-negative");
  return Real(2 * (n + 1));
}

template <class Real>
Real exact_spectrum_gamma(const Real& gamma, int n) {
  using std::sqrt;
  if (!(gamma > 0)) throw out_of_domain("gamma must be positive");
  if (n < 0) throw out_of_domain("state index must be non-negative");
  Real alpha = (1 + sqrt(1 + 4 * gamma)) / 2;
  return alpha + 2 * n + Real(1) / 2;
}

namespace detail {
template <class Real>
std::vector<std::vector<Real>> identity_rows(int slots) {
  std::vector<std::vector<Real>> r(slots, std::vector<Real>(slots, Real(0)));
  for (int i = 0; i < slots; ++i) r[i][i] = 1;
  return r;
}

template <class Real>
void check_denominator(const Real& d, int q) {
  using std::abs;
  if (abs(d) < ten_to_minus<Real>(static_cast<long>(working_digits<Real>()) / 2)) throw pole_at_energy(q);
}
}  // namespace detail

// u(p+4) = -beta u(p+3) + (2E - b^2) u(p+2) + (p(p-1) - gamma) u(p); u(p) are
// moments of chi^-2 Psi.
template <class Real>
MERTable<Real> mer_psi(const ProblemSpec<Real>& spec, const Real& E, int pmax) {
  if (pmax < 4) throw order_too_small("mer_psi needs pmax >= 4");
  MERTable<Real> t;
  t.missing_order = 3;
  t.rows = detail::identity_rows<Real>(4);
  const Real mb = -spec.beta(), lam = spec.lambda_shift(E);
  for (int p = 0; p + 4 <= pmax; ++p) {
    std::vector<Real> r(4);
    Real c0 = Real(p) * (p - 1) - spec.gamma;
    for (int l = 0; l < 4; ++l) r[l] = mb * t.rows[p + 3][l] + lam * t.rows[p + 2][l] + c0 * t.rows[p][l];
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Pole energies of the sigma = 3 recursion up to index qmax: E = q + 2.
template <class Real>
std::vector<Real> poles_ms0(int qmax) {
  std::vector<Real> p;
  for (int q = 0; q < qmax; ++q) p.push_back(Real(q + 2));
  return p;
}

// Pole energies of the sigma = 0 recursion up to index qmax: E = q + 1/2.
template <class Real>
std::vector<Real> poles_ms1(int qmax) {
  std::vector<Real> p;
  for (int q = 0; q + 2 <= qmax; ++q) p.push_back(Real(q) + Real(1) / 2);
  return p;
}

// sigma = 3 representation: tau(0) = 1 and every later moment follows from E.
// At b = 0 the q = 0 relation reads 0 * tau(1) = 0 only when E = 2; callers
// that need that case use phi_mer_ms0_removable.
template <class Real>
std::vector<Real> phi_moments_ms0(const ProblemSpec<Real>& spec, const Real& E, int qmax) {
  if (qmax < 0) throw order_too_small("qmax must be non-negative");
  const Real& b = spec.b;
  std::vector<Real> tau{Real(1)};
  if (qmax == 0) return tau;
  if (b == 0) {
    tau.push_back(Real(0));
  } else {
    Real d = 2 * E - 4;
    detail::check_denominator(d, 0);
    tau.push_back(-3 * b / d);
  }
  for (int q = 1; q + 1 <= qmax; ++q) {
    Real d = 4 + 2 * Real(q) - 2 * E;
    detail::check_denominator(d, q);
    tau.push_back((Real(q) * (q + 2) * tau[q - 1] + 2 * b * (Real(q) + Real(3) / 2) * tau[q]) / d);
  }
  return tau;
}

// The sigma = 3 recursion wrapped as a one-slot table.
template <class Real>
MERTable<Real> phi_mer_ms0(const ProblemSpec<Real>& spec, const Real& E, int qmax) {
  MERTable<Real> t;
  t.missing_order = 0;
  for (const auto& v : phi_moments_ms0(spec, E, qmax)) t.rows.push_back({v});
  t.poles = poles_ms0<Real>(qmax);
  return t;
}

// b = 0, E = 2: the q = 0 relation no longer fixes tau(1), which becomes a
// second free slot.
template <class Real>
MERTable<Real> phi_mer_ms0_removable(const ProblemSpec<Real>& spec, int qmax) {
  MERTable<Real> t;
  t.missing_order = 1;
  t.rows = detail::identity_rows<Real>(2);
  const Real E = 2;
  for (int q = 1; q + 1 <= qmax; ++q) {
    Real d = 4 + 2 * Real(q) - 2 * E;
    std::vector<Real> r(2);
    for (int l = 0; l < 2; ++l)
      r[l] = (Real(q) * (q + 2) * t.rows[q - 1][l] + 2 * spec.b * (Real(q) + Real(3) / 2) * t.rows[q][l]) / d;
    t.rows.push_back(std::move(r));
  }
  return t;
}

// sigma = 0 representation:
// u(q+2) = [(3/4 - q(q-1)) u(q) - 2 b q u(q+1)] / (2E - 1 - 2q).
template <class Real>
MERTable<Real> phi_mer_ms1(const ProblemSpec<Real>& spec, const Real& E, int qmax) {
  if (qmax < 1) throw order_too_small("qmax must be at least 1");
  MERTable<Real> t;
  t.missing_order = 1;
  t.rows = detail::identity_rows<Real>(2);
  t.poles = poles_ms1<Real>(qmax);
  for (int q = 0; q + 2 <= qmax; ++q) {
    Real d = 2 * E - 1 - 2 * Real(q);
    detail::check_denominator(d, q);
    Real c0 = Real(3) / 4 - Real(q) * (q - 1);
    Real c1 = -2 * spec.b * q;
    std::vector<Real> r(2);
    for (int l = 0; l < 2; ++l) r[l] = (c0 * t.rows[q][l] + c1 * t.rows[q + 1][l]) / d;
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Moments of chi^-3 Psi^2:
// 4(1+p) u(p+4) = 4b(1+2p) u(p+3) + (8E - 4b^2) p u(p+2) + (p-1)(p(p-2)-3) u(p).
template <class Real>
MERTable<Real> psisq_mer(const ProblemSpec<Real>& spec, const Real& E, int pmax) {
  if (pmax < 4) throw order_too_small("psisq_mer needs pmax >= 4");
  MERTable<Real> t;
  t.missing_order = 3;
  t.rows = detail::identity_rows<Real>(4);
  const Real& b = spec.b;
  for (int p = 0; p + 4 <= pmax; ++p) {
    Real c3 = 4 * b * (1 + 2 * Real(p));
    Real c2 = (8 * E - 4 * b * b) * p;
    Real c0 = Real(p - 1) * (Real(p) * (p - 2) - 3);
    Real d = 4 * (1 + Real(p));
    std::vector<Real> r(4);
    for (int l = 0; l < 4; ++l) r[l] = (c3 * t.rows[p + 3][l] + c2 * t.rows[p + 2][l] + c0 * t.rows[p][l]) / d;
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Walled oscillator in chi = x + b, slots l = -1 (boundary value), 0, 1:
// v(p+2) = 2b v(p+1) + (2E - b^2) v(p) + p(p-1) v(p-2) + boundary term,
// boundary term -delta(p,0) v(-1) on the physical branch (v(-1) = Psi'(0))
// and +delta(p,1) v(-1) on the unphysical one (v(-1) = Psi(0)).
template <class Real>
MERTable<Real> walled_mer(const ProblemSpec<Real>& spec, const Real& E, int pmax) {
  if (pmax < 2) throw order_too_small("walled_mer needs pmax >= 2");
  MERTable<Real> t;
  t.missing_order = 2;
  t.first_slot = -1;
  t.rows = detail::identity_rows<Real>(3);  // rows p = -1, 0, 1
  const Real& b = spec.b;
  const Real lam = 2 * E - b * b;
  auto row = [&](int p) -> const std::vector<Real>& { return t.rows[p + 1]; };
  for (int p = 0; p + 2 <= pmax; ++p) {
    std::vector<Real> r(3);
    for (int l = 0; l < 3; ++l) {
      r[l] = 2 * b * row(p + 1)[l] + lam * row(p)[l];
      if (p >= 2) r[l] += Real(p) * (p - 1) * row(p - 2)[l];
    }
    if (spec.branch == Branch::Physical && p == 0) r[0] -= 1;
    if (spec.branch == Branch::Unphysical && p == 1) r[0] += 1;
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Table for whichever representation the spec selects.
template <class Real>
MERTable<Real> mer_table(const ProblemSpec<Real>& spec, const Real& E, int pmax) {
  if (spec.family == Family::WalledCQ) return walled_mer(spec, E, pmax);
  switch (spec.representation) {
    case Representation::PsiTilde: return mer_psi(spec, E, pmax);
    case Representation::PhiSigma0: return phi_mer_ms1(spec, E, pmax);
    case Representation::PhiSigma3: return phi_mer_ms0(spec, E, pmax);
    case Representation::PsiSquared: return psisq_mer(spec, E, pmax);
  }
  throw usage_error("unknown representation");
}

// Poles a scan over E must avoid for this spec.
template <class Real>
std::vector<Real> mer_poles(const ProblemSpec<Real>& spec, int pmax) {
  if (spec.family == Family::SpikedAQ) {
    if (spec.representation == Representation::PhiSigma3) {
      if (spec.b == 0) {
        auto p = poles_ms0<Real>(pmax);
        p.erase(p.begin());
        return p;
      }
      return poles_ms0<Real>(pmax);
    }
    if (spec.representation == Representation::PhiSigma0) return poles_ms1<Real>(pmax);
  }
  return {};
}

// Moments of chi^(alpha-2) exp(-(chi-b)^2/2); seeds by quadrature, the rest by
// w(p+2) = (p + alpha - 1) w(p) + b w(p+1).
template <class Real>
WeightMoments<Real> weight_moments_spiked(const Real& b, const Real& alpha, int pmax) {
  using std::exp;
  using std::pow;
  if (!(alpha > 1)) throw non_integrable_weight("alpha must exceed 1");
  WeightMoments<Real> w;
  w.b = b;
  w.alpha = alpha;
  w.kind = WeightMoments<Real>::Kind::SpikedWeight;
  for (int s = 0; s < 2 && s <= pmax; ++s) {
    Real power = alpha - 2 + s;
    auto f = [&](const Real& x) {
      Real d = x - b;
      return Real(pow(x, power) * exp(-d * d / 2));
    };
    w.values.push_back(singular_integral(f, power, b));
  }
  for (int p = 0; p + 2 <= pmax; ++p) w.values.push_back((Real(p) + alpha - 1) * w.values[p] + b * w.values[p + 1]);
  return w;
}

// Moments of exp(-chi^2/2 + b chi) on (0, inf); w(0) by quadrature, then
// w(p+1) = delta(p,0) + b w(p) + p w(p-1).
template <class Real>
WeightMoments<Real> weight_moments_walled(const Real& b, int pmax) {
  using std::exp;
  WeightMoments<Real> w;
  w.b = b;
  w.alpha = 0;
  w.kind = WeightMoments<Real>::Kind::WalledWeight;
  auto f = [&](const Real& x) { return Real(exp(-x * x / 2 + b * x)); };
  w.values.push_back(singular_integral(f, Real(0), b));
  for (int p = 0; p + 1 <= pmax; ++p) {
    Real v = b * w.values[p];
    if (p == 0) v += 1;
    if (p >= 1) v += Real(p) * w.values[p - 1];
    w.values.push_back(v);
  }
  return w;
}

// Reference weight R(chi) matching weight_moments for this spec.
template <class Real>
Real reference_weight(const ProblemSpec<Real>& spec, const Real& chi) {
  using std::exp;
  using std::pow;
  Real d = chi - spec.b;
  if (spec.family == Family::WalledCQ) return exp(-chi * chi / 2 + spec.b * chi);
  return pow(chi, spec.alpha() - 2) * exp(-d * d / 2);
}

template <class Real>
WeightMoments<Real> weight_moments(const ProblemSpec<Real>& spec, int pmax) {
  if (spec.family == Family::WalledCQ) return weight_moments_walled(spec.b, pmax);
  return weight_moments_spiked(spec.b, spec.alpha(), pmax);
}

}  // namespace moment_bounds

#endif
