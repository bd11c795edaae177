#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <moment_bounds/problems.hpp>

using namespace moment_bounds;
using R = PrecScalar;

namespace {

// Moment s of exp(-(x-b)^2/2) on (0, inf) from the series
// e^{-b^2/2} sum_k b^k/k! 2^{(s+k-1)/2} Gamma((s+k+1)/2).
R series_moment(const R& b, const R& s) {
  R total = 0, bk = 1, fact = 1;
  for (int k = 0; k < 5000; ++k) {
    if (k > 0) {
      bk *= b;
      fact *= k;
    }
    R t = bk / fact * pow(R(2), (s + k - 1) / 2) * boost::math::tgamma((s + k + 1) / 2);
    total += t;
    if (b == 0 || (k > 10 && t < total * ten_to_minus<R>(working_digits<R>() + 5))) break;
  }
  return exp(-b * b / 2) * total;
}

R rel(const R& a, const R& b) { return abs(a - b) / std::max(R(abs(b)), R(1)); }

// Moments of chi^-2 Psi for Psi = chi^(3/2) exp(-chi^2/2): 2^{(p-3/2)/2} Gamma((p+1/2)/2).
R ground_u(int p) { return pow(R(2), (R(p) - R(3) / 2) / 2) * boost::math::tgamma((R(p) + R(1) / 2) / 2); }

}  // namespace

TEST(Spectrum, ClosedForms) {
  precision_scope p(50);
  EXPECT_EQ(exact_spectrum_spiked_b0<R>(3), 8);
  EXPECT_LT(abs(exact_spectrum_gamma(R(3) / 4, 3) - 8), ten_to_minus<R>(45));
  EXPECT_LT(abs(exact_spectrum_gamma(R(2), 0) - R(5) / 2), ten_to_minus<R>(45));  // alpha = 2
  EXPECT_LT(abs(exact_spectrum_gamma(R(6), 1) - R(11) / 2), ten_to_minus<R>(45));  // alpha = 3
  EXPECT_THROW(exact_spectrum_gamma(R(-1), 0), error);
}

TEST(Spec, Validation) {
  precision_scope p(50);
  EXPECT_THROW(ProblemSpec<R>::spiked(R(-1)).validate(), error);
  EXPECT_THROW(ProblemSpec<R>::spiked(R(1), Representation::PsiTilde, R(0)).validate(), error);
  EXPECT_EQ(ProblemSpec<R>::spiked(R(1)).alpha(), R(3) / 2);
  EXPECT_EQ(ProblemSpec<R>::spiked(R(1), Representation::PhiSigma3).missing_order(), 0);
  EXPECT_EQ(ProblemSpec<R>::spiked(R(1), Representation::PhiSigma0).missing_order(), 1);
  EXPECT_EQ(ProblemSpec<R>::spiked(R(1), Representation::PsiSquared).missing_order(), 3);
  EXPECT_EQ(ProblemSpec<R>::walled(R(1), Branch::Physical).missing_order(), 2);
}

TEST(Weights, SpikedMatchSeries) {
  precision_scope p(100);
  for (const char* bt : {"0", "0.5", "3", "12"}) {
    R b(bt);
    auto w = weight_moments_spiked(b, R(3) / 2, 24);
    ASSERT_EQ(w.values.size(), 25u);
    for (int q = 0; q <= 24; ++q)
      EXPECT_LT(rel(w.values[q], series_moment(b, R(-1) / 2 + q)), ten_to_minus<R>(85)) << "b=" << bt << " p=" << q;
  }
}

TEST(Weights, SpikedOtherAlpha) {
  precision_scope p(100);
  R alpha = 3;  // gamma = 6
  auto w = weight_moments_spiked(R(1), alpha, 10);
  for (int q = 0; q <= 10; ++q) EXPECT_LT(rel(w.values[q], series_moment(R(1), alpha - 2 + q)), ten_to_minus<R>(85));
  EXPECT_THROW(weight_moments_spiked(R(1), R(1), 4), error);
}

TEST(Weights, WalledClosedForm) {
  precision_scope p(100);
  for (int bi : {0, 1, 10}) {
    R b = bi;
    auto w = weight_moments_walled(b, 12);
    R w0 = exp(b * b / 2) * sqrt(boost::math::constants::half_pi<R>()) * (1 + boost::math::erf(b / sqrt(R(2))));
    EXPECT_LT(rel(w.values[0], w0), ten_to_minus<R>(85));
    // At b = 0 the moments are 2^{(p-1)/2} Gamma((p+1)/2).
    if (bi == 0) {
      for (int q = 0; q <= 12; ++q)
        EXPECT_LT(rel(w.values[q], pow(R(2), R(q - 1) / 2) * boost::math::tgamma(R(q + 1) / 2)), ten_to_minus<R>(85));
    }
  }
}

TEST(Mer, PsiGeneratesGroundStateMoments) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R(0));
  auto t = mer_psi(spec, R(2), 30);
  std::vector<R> u;
  for (int q = 0; q < 4; ++q) u.push_back(ground_u(q));
  auto m = t.moments(u);
  ASSERT_EQ(m.size(), 31u);
  for (int q = 0; q <= 30; ++q) EXPECT_LT(rel(m[q], ground_u(q)), ten_to_minus<R>(85)) << q;
}

TEST(Mer, PsiRecursionResidual) {
  precision_scope p(80);
  auto spec = ProblemSpec<R>::spiked(R("0.7"));
  R E("1.3");
  auto t = mer_psi(spec, E, 20);
  std::vector<R> u{R("0.3"), R("-1.1"), R("2"), R("0.25")};
  auto m = t.moments(u);
  for (int q = 0; q + 4 <= 20; ++q) {
    R lhs = m[q + 4];
    R rhs = 2 * spec.b * m[q + 3] + (2 * E - spec.b * spec.b) * m[q + 2] + (R(q) * (q - 1) - spec.gamma) * m[q];
    EXPECT_LT(rel(lhs, rhs), ten_to_minus<R>(70));
  }
}

TEST(Mer, PsiSquaredGeneratesGroundStateDensity) {
  precision_scope p(100);
  // Psi^2 = chi^3 exp(-chi^2) at b = 0, E = 2; moments of chi^-3 Psi^2 are Gamma((p+1)/2)/2.
  auto spec = ProblemSpec<R>::spiked(R(0), Representation::PsiSquared);
  auto t = psisq_mer(spec, R(2), 24);
  auto v = [](int q) { return boost::math::tgamma(R(q + 1) / 2) / 2; };
  auto m = t.moments({v(0), v(1), v(2), v(3)});
  for (int q = 0; q <= 24; ++q) EXPECT_LT(rel(m[q], v(q)), ten_to_minus<R>(85)) << q;
}

TEST(Mer, WalledBoundaryTerms) {
  precision_scope p(100);
  // Physical b = 0, E = 3/2: Psi = chi exp(-chi^2/2), Psi'(0) = 1.
  {
    auto spec = ProblemSpec<R>::walled(R(0), Branch::Physical);
    auto t = walled_mer(spec, R(3) / 2, 20);
    auto v = [](int q) { return pow(R(2), R(q) / 2) * boost::math::tgamma(R(q) / 2 + 1); };
    auto m = t.moments({R(1), v(0), v(1)});
    for (int q = 0; q <= 20; ++q) EXPECT_LT(rel(m[q], v(q)), ten_to_minus<R>(85)) << q;
  }
  // Unphysical b = 0, E = 1/2: Psi = exp(-chi^2/2), Psi(0) = 1.
  {
    auto spec = ProblemSpec<R>::walled(R(0), Branch::Unphysical);
    auto t = walled_mer(spec, R(1) / 2, 20);
    auto v = [](int q) { return pow(R(2), R(q - 1) / 2) * boost::math::tgamma(R(q + 1) / 2); };
    auto m = t.moments({R(1), v(0), v(1)});
    for (int q = 0; q <= 20; ++q) EXPECT_LT(rel(m[q], v(q)), ten_to_minus<R>(85)) << q;
  }
}

TEST(Mer, SigmaThreeRecursionAndPoles) {
  precision_scope p(80);
  auto spec = ProblemSpec<R>::spiked(R("0.5"), Representation::PhiSigma3);
  R E("1.4");
  auto tau = phi_moments_ms0(spec, E, 12);
  EXPECT_EQ(tau[0], 1);
  EXPECT_LT(rel(tau[1], -3 * spec.b / (2 * E - 4)), ten_to_minus<R>(75));
  for (int q = 1; q + 1 <= 12; ++q) {
    R lhs = (4 + 2 * R(q) - 2 * E) * tau[q + 1];
    R rhs = R(q) * (q + 2) * tau[q - 1] + 2 * spec.b * (R(q) + R(3) / 2) * tau[q];
    EXPECT_LT(rel(lhs, rhs), ten_to_minus<R>(70));
  }
  EXPECT_THROW(phi_moments_ms0(spec, R(2), 4), pole_at_energy);
  EXPECT_THROW(phi_moments_ms0(spec, R(3), 4), pole_at_energy);
  auto poles = mer_poles(spec, 5);
  ASSERT_EQ(poles.size(), 5u);
  EXPECT_EQ(poles.front(), 2);
  // At b = 0 the first relation is removable and only later poles remain.
  auto b0 = ProblemSpec<R>::spiked(R(0), Representation::PhiSigma3);
  EXPECT_EQ(mer_poles(b0, 5).front(), 3);
  auto rem = phi_mer_ms0_removable(b0, 6);
  EXPECT_EQ(rem.slots(), 2u);
}

TEST(Mer, SigmaZeroRecursionAndPoles) {
  precision_scope p(80);
  auto spec = ProblemSpec<R>::spiked(R(2), Representation::PhiSigma0);
  R E("0.7");
  auto t = phi_mer_ms1(spec, E, 12);
  auto u = t.moments({R(1), R("0.4")});
  for (int q = 0; q + 2 <= 12; ++q) {
    R lhs = (2 * E - 1 - 2 * R(q)) * u[q + 2];
    R rhs = (R(3) / 4 - R(q) * (q - 1)) * u[q] - 2 * spec.b * q * u[q + 1];
    EXPECT_LT(rel(lhs, rhs), ten_to_minus<R>(70));
  }
  EXPECT_THROW(phi_mer_ms1(spec, R(1) / 2, 6), pole_at_energy);
  EXPECT_THROW(phi_mer_ms1(spec, R(5) / 2, 6), pole_at_energy);
  EXPECT_EQ(mer_poles(spec, 6).front(), R(1) / 2);
}

TEST(Mer, DispatchAndShape) {
  precision_scope p(50);
  auto w = ProblemSpec<R>::walled(R(1), Branch::Physical);
  auto t = mer_table(w, R(1), 10);
  EXPECT_EQ(t.first_slot, -1);
  EXPECT_EQ(t.first_row(), -1);
  EXPECT_EQ(t.max_p(), 10);
  EXPECT_EQ(t.coeff(-1, -1), 1);
  EXPECT_EQ(t.coeff(2, -1), -1);
  EXPECT_THROW(mer_psi(ProblemSpec<R>::spiked(R(1)), R(1), 3), error);
}
