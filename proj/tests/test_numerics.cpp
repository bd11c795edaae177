#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cstdlib>
#include <random>

#include <moment_bounds/numerics.hpp>

using namespace moment_bounds;
using R = PrecScalar;

namespace {

SymMatrix<R> from_rows(const std::vector<std::vector<int>>& rows) {
  SymMatrix<R> m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = rows[i][j];
  return m;
}

SymMatrix<R> random_spd(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> dist(-9, 9);
  std::vector<std::vector<R>> a(n, std::vector<R>(n));
  for (auto& row : a)
    for (auto& x : row) x = R(dist(gen)) / 7;
  SymMatrix<R> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      R s = 0;
      for (std::size_t k = 0; k < n; ++k) s += a[i][k] * a[j][k];
      m(i, j) = s;
    }
  for (std::size_t i = 0; i < n; ++i) m(i, i) += R(1) / 100;
  return m;
}

}  // namespace

TEST(Cholesky, HandFactor) {
  precision_scope p(60);
  auto L = cholesky(from_rows({{4}, {2, 3}}));
  EXPECT_EQ(L(0, 0), 2);
  EXPECT_EQ(L(1, 0), 1);
  EXPECT_LT(abs(L(1, 1) - sqrt(R(2))), ten_to_minus<R>(55));
}

TEST(Cholesky, ReportsFailingPivot) {
  precision_scope p(60);
  auto m = from_rows({{1}, {2, 1}});
  auto r = try_cholesky(m);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.fail_index, 1u);
  EXPECT_FALSE(is_positive_definite(m));
  try {
    cholesky(m);
    FAIL() << "expected not_positive_definite";
  } catch (const not_positive_definite& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Cholesky, RejectsNonFinite) {
  precision_scope p(60);
  SymMatrix<R> m(2);
  m(0, 0) = 1;
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    try_cholesky(m);
    FAIL() << "expected InvalidMatrix";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), "InvalidMatrix");
  }
}

TEST(Eigen, TwoByTwoClosedForm) {
  precision_scope p(80);
  auto m = from_rows({{2}, {1, 2}});
  EXPECT_LT(abs(smallest_eigenvalue(m, ten_to_minus<R>(70)) - 1), ten_to_minus<R>(65));
  EXPECT_LT(abs(smallest_eigenvalue_ql(m) - 1), ten_to_minus<R>(70));
  auto e = symmetric_eigen(m);
  EXPECT_LT(abs(e.values[1] - 3), ten_to_minus<R>(70));
}

TEST(Eigen, BisectionAgreesWithQlAndResidualsVanish) {
  precision_scope p(100);
  for (unsigned seed : {1u, 2u, 3u}) {
    auto m = random_spd(9, seed);
    auto e = symmetric_eigen(m);
    R bis = smallest_eigenvalue(m, ten_to_minus<R>(90));
    EXPECT_LT(abs(bis - e.values.front()), ten_to_minus<R>(80));
    for (std::size_t k = 0; k < e.values.size(); ++k) {
      R res = 0;
      for (std::size_t i = 0; i < 9; ++i) {
        R s = -e.values[k] * e.vectors[k][i];
        for (std::size_t j = 0; j < 9; ++j) s += m(i, j) * e.vectors[k][j];
        res = std::max(res, R(abs(s)));
      }
      EXPECT_LT(res, ten_to_minus<R>(80));
    }
    for (std::size_t k = 1; k < e.values.size(); ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(Eigen, BottomEigenvectorMatchesQl) {
  precision_scope p(100);
  auto m = random_spd(7, 11);
  auto e = symmetric_eigen(m);
  auto v = bottom_eigenvector(m, smallest_eigenvalue_ql(m));
  R dot = 0;
  for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * e.vectors[0][i];
  EXPECT_LT(abs(abs(dot) - 1), ten_to_minus<R>(60));
}

TEST(Hankel, Layout) {
  precision_scope p(40);
  std::vector<R> mu{1, 2, 3, 4, 5, 6, 7};
  auto h = hankel(mu, 1, 3);
  EXPECT_EQ(h(0, 0), 2);
  EXPECT_EQ(h(2, 1), 5);
  EXPECT_EQ(h(2, 2), 6);
}

TEST(Determinant, MatchesExpansion) {
  precision_scope p(50);
  std::vector<std::vector<R>> a{{0, 2, 1}, {3, 1, 4}, {1, 5, 9}};
  // 0*(9-20) - 2*(27-4) + 1*(15-1) = -32
  EXPECT_LT(abs(small_determinant(a) + 32), ten_to_minus<R>(45));
}

TEST(Roots, CubicRootsAndPoleSkipping) {
  precision_scope p(60);
  auto f = [](const R& x) { return R((x - 1) * (x - 2) * (x - 3)); };
  auto scan = scan_roots(f, R(0), R(4), 37);
  ASSERT_EQ(scan.roots.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_LT(abs(scan.roots[k] - (k + 1)), ten_to_minus<R>(50));

  // Sign change across a pole is not a root.
  auto g = [](const R& x) { return R(1 / (x - R(3) / 2)); };
  std::vector<R> poles{R(3) / 2};
  EXPECT_TRUE(scan_roots(g, R(1), R(2), 16, poles).roots.empty());
}

TEST(Minimum, BrentOnQuadratic) {
  precision_scope p(60);
  auto f = [](const R& x) { return R((x - R(3) / 10) * (x - R(3) / 10) + 1); };
  auto m = bracketed_minimum(f, R(0), R(1) / 4, R(1));
  EXPECT_LT(abs(m.first - R(3) / 10), ten_to_minus<R>(25));
  EXPECT_LT(abs(m.second - 1), ten_to_minus<R>(50));
  EXPECT_THROW(bracketed_minimum(f, R(0), R(1), R(2)), error);
}

TEST(Quadrature, SingularOriginClosedForm) {
  precision_scope p(100);
  // Integral of chi^(-1/2) exp(-chi^2/2) is 2^(-3/4) Gamma(1/4).
  auto f = [](const R& x) { return R(pow(x, R(-1) / 2) * exp(-x * x / 2)); };
  R got = singular_integral(f, R(-1) / 2, R(0));
  R want = pow(R(2), R(-3) / 4) * boost::math::tgamma(R(1) / 4);
  EXPECT_LT(abs(got / want - 1), ten_to_minus<R>(90));
}

TEST(Quadrature, ShiftedGaussianClosedForm) {
  precision_scope p(100);
  for (int bi : {0, 3, 40}) {
    R b = bi;
    auto f = [&](const R& x) { return R(exp(-x * x / 2 + b * x)); };
    R got = singular_integral(f, R(0), b);
    R want = exp(b * b / 2) * sqrt(boost::math::constants::half_pi<R>()) * (1 + boost::math::erf(b / sqrt(R(2))));
    EXPECT_LT(abs(got / want - 1), ten_to_minus<R>(90)) << "b=" << bi;
  }
  EXPECT_THROW(singular_integral([](const R& x) { return R(1 / x); }, R(-1), R(0)), error);
}

TEST(Precision, ScopeRestoresAndParsesExactly) {
  unsigned before = working_digits<R>();
  {
    precision_scope p(200);
    EXPECT_EQ(working_digits<R>(), 200u);
    R tenth = parse_decimal<R>("0.1");
    EXPECT_LT(abs(tenth - R(1) / 10), ten_to_minus<R>(198));
    EXPECT_EQ(parse_decimal<R>("0.5"), R(1) / 2);
    EXPECT_THROW(parse_decimal<R>("1.2.3"), error);
  }
  EXPECT_EQ(working_digits<R>(), before);
}

TEST(Precision, FlagBeatsEnvironment) {
  setenv("MOMENT_BOUNDS_DIGITS", "150", 1);
  EXPECT_EQ(resolve_digits(0, 10), 150u);
  EXPECT_EQ(resolve_digits(64, 10), 64u);
  unsetenv("MOMENT_BOUNDS_DIGITS");
  EXPECT_EQ(resolve_digits(0, 10), 100u);
  EXPECT_EQ(resolve_digits(0, 100), 420u);
}

TEST(Precision, FormatUsesPointAndLowercaseExponent) {
  precision_scope p(50);
  EXPECT_EQ(format_number(R("0.0001595"), 4), "0.0001595");
  EXPECT_EQ(format_number(R("1.5e-30"), 3), "1.5e-30");
  EXPECT_EQ(format_number(R(1234567), 3), "1.23e+06");
}
