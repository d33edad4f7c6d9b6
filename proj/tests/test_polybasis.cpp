#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sos_cones/errors.hpp"
#include "sos_cones/polybasis.hpp"

namespace {

using namespace sos_cones;

TEST(ChebyshevBasis, HandValues) {
  VectorXd x(1);
  x << 0.5;
  const VectorXd v1 = chebyshev_basis_eval(1, 1, x);
  ASSERT_EQ(v1.size(), 2);
  EXPECT_DOUBLE_EQ(v1(0), 1.0);
  EXPECT_DOUBLE_EQ(v1(1), 0.5);
  const VectorXd v2 = chebyshev_basis_eval(1, 2, x);
  ASSERT_EQ(v2.size(), 3);
  EXPECT_DOUBLE_EQ(v2(2), 2.0 * 0.25 - 1.0);

  VectorXd xy(2);
  xy << 0.3, -0.7;
  const VectorXd v3 = chebyshev_basis_eval(2, 1, xy);
  ASSERT_EQ(v3.size(), 3);
  EXPECT_DOUBLE_EQ(v3(0), 1.0);
  EXPECT_DOUBLE_EQ(v3(1), 0.3);
  EXPECT_DOUBLE_EQ(v3(2), -0.7);
}

TEST(ChebyshevBasis, GradedOrderAndCounts) {
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 4; ++d) {
      const auto exps = graded_exponents(n, d);
      ASSERT_EQ(static_cast<std::int64_t>(exps.size()), binomial(n + d, n));
      int prev = 0;
      for (const auto& e : exps) {
        int total = 0;
        for (int a : e) total += a;
        EXPECT_GE(total, prev);
        prev = total;
      }
    }
  // Stable order: repeated calls agree.
  EXPECT_EQ(graded_exponents(3, 3), graded_exponents(3, 3));
}

TEST(ChebyshevBasis, ProductOfUnivariateValues) {
  // Independent evaluation via cos(k arccos x).
  VectorXd x(2);
  x << 0.2, -0.9;
  const auto exps = graded_exponents(2, 3);
  const VectorXd v = chebyshev_basis_eval(2, 3, x);
  for (std::size_t j = 0; j < exps.size(); ++j) {
    const double expected = std::cos(exps[j][0] * std::acos(x(0))) * std::cos(exps[j][1] * std::acos(x(1)));
    EXPECT_NEAR(v(static_cast<Index>(j)), expected, 1e-13);
  }
}

TEST(SelectPoints, SmallCaseShapesAndDeterminism) {
  const PointSelection a = select_points(1, 1, 7);
  ASSERT_EQ(a.points.rows(), 3);
  ASSERT_EQ(a.p.cols(), 2);
  EXPECT_EQ(Eigen::FullPivLU<MatrixXd>(a.p).rank(), 2);
  EXPECT_NE(a.points(0, 0), a.points(1, 0));
  EXPECT_NE(a.points(1, 0), a.points(2, 0));
  EXPECT_NE(a.points(0, 0), a.points(2, 0));
  const PointSelection b = select_points(1, 1, 7);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.p, b.p);
}

TEST(SelectPoints, TwoVariablesDegreeTwoInvertible) {
  const PointSelection s = select_points(2, 2, 1);
  ASSERT_EQ(s.points.rows(), 15);
  Eigen::JacobiSVD<MatrixXd> svd(s.vandermonde);
  const auto& sv = svd.singularValues();
  EXPECT_LT(sv(0) / sv(sv.size() - 1), 1e12);
}

TEST(SelectPoints, UnisolventAcrossGrid) {
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 4; ++d) {
      const PointSelection s = select_points(n, d, 3);
      ASSERT_EQ(s.points.rows(), binomial(n + 2 * d, n));
      EXPECT_LE(s.points.cwiseAbs().maxCoeff(), 1.0);
      Eigen::BDCSVD<MatrixXd> svd(s.vandermonde);
      const auto& sv = svd.singularValues();
      EXPECT_LT(sv(0) / sv(sv.size() - 1), 1e12) << "n=" << n << " d=" << d;
      EXPECT_EQ(Eigen::ColPivHouseholderQR<MatrixXd>(s.p).rank(), s.p.cols());
    }
}

TEST(Quadrature, MomentsOfLowPowers) {
  for (int d = 1; d <= 3; ++d) {
    const BasisContext ctx = BasisContext::build(1, d, 5);
    const VectorXd& w = ctx.quad();
    const VectorXd t = ctx.points().col(0);
    EXPECT_NEAR(w.sum(), 2.0, 1e-10);
    EXPECT_NEAR(w.dot(t), 0.0, 1e-10);
    EXPECT_NEAR(w.dot(t.cwiseProduct(t)), 2.0 / 3.0, 1e-10);
  }
  for (int n = 2; n <= 3; ++n) {
    const BasisContext ctx = BasisContext::build(n, 2, 5);
    EXPECT_NEAR(ctx.quad().sum(), std::pow(2.0, n), 1e-10 * std::pow(2.0, n));
  }
}

TEST(Quadrature, ExactOnRandomPolynomials) {
  // Integral of sum_j c_j prod_k x_k^{a_jk} over the box is a closed form; the
  // polynomial is evaluated directly in the monomial basis.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (auto [n, d] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {3, 1}, {2, 3}}) {
    const BasisContext ctx = BasisContext::build(n, d, 17);
    const auto exps = graded_exponents(n, 2 * d);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> c(exps.size());
      for (auto& v : c) v = unif(rng);
      double exact = 0.0;
      for (std::size_t j = 0; j < exps.size(); ++j) {
        double moment = c[j];
        for (int k = 0; k < n; ++k) moment *= (exps[j][k] % 2 == 1) ? 0.0 : 2.0 / (exps[j][k] + 1);
        exact += moment;
      }
      VectorXd values(ctx.U());
      for (Index u = 0; u < ctx.U(); ++u) {
        double acc = 0.0;
        for (std::size_t j = 0; j < exps.size(); ++j) {
          double term = c[j];
          for (int k = 0; k < n; ++k) term *= std::pow(ctx.points()(u, k), exps[j][k]);
          acc += term;
        }
        values(u) = acc;
      }
      EXPECT_NEAR(ctx.quad().dot(values), exact, 1e-8 * (1.0 + std::abs(exact)));
    }
  }
}

TEST(BoxWeights, CountsAndValues) {
  const BasisContext one = BasisContext::build(1, 1, 2);
  ASSERT_EQ(one.weights().size(), 2u);
  for (Index u = 0; u < one.U(); ++u) {
    const double t = one.points()(u, 0);
    EXPECT_DOUBLE_EQ(one.weights()[1].values(u), 1.0 - t * t);
  }
  const BasisContext two = BasisContext::build(2, 2, 2);
  ASSERT_EQ(two.weights().size(), 3u);
  EXPECT_EQ(two.weights()[0].cols, 6);
  EXPECT_EQ(two.weights()[1].cols, 3);
  EXPECT_EQ(two.weights()[2].cols, 3);
  for (const auto& w : two.weights()) {
    EXPECT_GE(w.values.minCoeff(), 0.0);
    EXPECT_EQ(w.p, two.p().leftCols(w.cols));
  }
  EXPECT_TRUE(two.weights()[0].values.isOnes());
  EXPECT_EQ(two.total_weight_cols(), 12);
}

TEST(BasisContext, InvariantsAndErrors) {
  const BasisContext ctx = BasisContext::build(2, 2, 4);
  EXPECT_EQ(ctx.L(), 6);
  EXPECT_EQ(ctx.U(), 15);
  EXPECT_THROW(select_points(0, 1, 1), ShapeMismatch);
  EXPECT_THROW(BasisContext::from_points(1, 1, MatrixXd::Zero(2, 1)), ShapeMismatch);
  // Repeated points are not unisolvent.
  MatrixXd pts(3, 1);
  pts << 0.0, 0.0, 0.5;
  EXPECT_THROW(BasisContext::from_points(1, 1, pts), DegeneratePoints);
}

}  // namespace
