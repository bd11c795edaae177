#include <gtest/gtest.h>

#include <moment_bounds/emm.hpp>

using namespace moment_bounds;
using R = PrecScalar;

namespace {

std::vector<R> factorial_moments(int count) {
  std::vector<R> m{R(1)};
  for (int k = 1; k < count; ++k) m.push_back(m.back() * k);
  return m;
}

}  // namespace

TEST(Stieltjes, ExponentialMomentsAreFeasible) {
  precision_scope p(80);
  auto m = factorial_moments(16);
  EXPECT_TRUE(stieltjes_feasible(m, 6));
  EXPECT_FALSE(stieltjes_failure(m, 12).has_value());
}

TEST(Stieltjes, DegenerateAndSignedSequences) {
  precision_scope p(80);
  // Atoms at 1 and 2 (weights 1/2): the 3x3 Hankel is singular.
  std::vector<R> two_point;
  for (int k = 0; k < 8; ++k) two_point.push_back((1 + pow(R(2), k)) / 2);
  EXPECT_TRUE(stieltjes_feasible(two_point, 2));
  EXPECT_FALSE(stieltjes_feasible(two_point, 3));
  // Zero variance fails at the 2x2 unshifted Hankel.
  std::vector<R> m{R(1), R(1), R(1), R(6)};
  auto f = stieltjes_failure(m, 3);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->first, 0u);
  EXPECT_EQ(f->second, 2u);
  // A negative first moment fails the shifted Hankel.
  std::vector<R> neg{R(1), R(-1), R(2), R(1)};
  f = stieltjes_failure(neg, 3);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->first, 1u);
  EXPECT_THROW(stieltjes_feasible(m, 3), error);
}

TEST(FixedEnergy, SigmaThreeInsideAndOutside) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R("0.5"), Representation::PhiSigma3);
  EXPECT_TRUE(feasible_fixed_E(spec, R("1.4292927197"), 20).feasible);
  auto out = feasible_fixed_E(spec, R("1.40"), 20);
  EXPECT_FALSE(out.feasible);
  EXPECT_TRUE(out.failing_matrix.has_value());
}

TEST(FixedEnergy, PsiPencilAtExactGroundState) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R(0), Representation::PsiTilde);
  auto in = feasible_fixed_E(spec, R(2), 10);
  EXPECT_TRUE(in.feasible);
  ASSERT_EQ(in.witness.size(), 4u);
  R nrm = 0;
  for (const auto& x : in.witness) nrm += x * x;
  EXPECT_LT(abs(nrm - 1), ten_to_minus<R>(40));
  EXPECT_FALSE(feasible_fixed_E(spec, R("1.2"), 14).feasible);
}

TEST(FixedEnergy, WalledIsRejected) {
  precision_scope p(60);
  EXPECT_THROW(feasible_fixed_E(ProblemSpec<R>::walled(R(1), Branch::Physical), R(1), 8), error);
}

TEST(Interval, SigmaThreeTightBracket) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R("0.5"), Representation::PhiSigma3);
  auto iv = emm_energy_interval(spec, 24, R("0.5"), R(2));
  EXPECT_LT(iv.E_L, R("1.42929271975"));
  EXPECT_GT(iv.E_U, R("1.42929271975"));
  EXPECT_LE(iv.E_U - iv.E_L, R("5e-12"));
  EXPECT_EQ(iv.order, 24);
}

TEST(Interval, RemovableCaseAtZeroDisplacement) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R(0), Representation::PhiSigma3);
  auto iv = emm_energy_interval(spec, 1, R("0.5"), R(3));
  EXPECT_TRUE(iv.degenerate);
  EXPECT_EQ(iv.E_L, 2);
  EXPECT_EQ(iv.E_U, 2);
  EXPECT_THROW(emm_energy_interval(spec, 1, R("0.5"), R("1.5")), error);
}

TEST(Interval, ShrinksWithOrderAndContainsEstimate) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R("0.1"), Representation::PhiSigma3);
  R lo = 0, hi = 10;
  for (int P : {10, 14, 18, 22}) {
    auto iv = emm_energy_interval(spec, P, R("0.5"), R(2));
    EXPECT_GE(iv.E_L, lo) << P;
    EXPECT_LE(iv.E_U, hi) << P;
    EXPECT_LT(iv.E_L, R("1.8709141846105")) << P;
    EXPECT_GT(iv.E_U, R("1.8709141846105")) << P;
    lo = iv.E_L;
    hi = iv.E_U;
  }
}

TEST(Interval, SigmaZeroLargeDisplacement) {
  precision_scope p(100);
  auto spec = ProblemSpec<R>::spiked(R(20), Representation::PhiSigma0);
  auto iv = emm_energy_interval(spec, 10, R("0.5"), R(2));
  EXPECT_LE(iv.E_U - iv.E_L, R("1e-9"));
  EXPECT_LT(iv.E_L, R("0.5009410336"));
  EXPECT_GT(iv.E_U, R("0.5009410336"));
}

TEST(Interval, RejectsEmptyWindow) {
  precision_scope p(60);
  auto spec = ProblemSpec<R>::spiked(R(1), Representation::PhiSigma3);
  EXPECT_THROW(emm_energy_interval(spec, 8, R(2), R(1)), error);
}
