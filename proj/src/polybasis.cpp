#include "sos_cones/polybasis.hpp"

#include <random>
#include <string>

#include "sos_cones/errors.hpp"

namespace sos_cones {
namespace {

constexpr double kMaxVandermondeCondition = 1e12;
constexpr Index kCandidatesPerPoint = 100;

// Appends every tuple of `n` nonnegative entries summing to `total`, larger
// leading entries first.
void exponents_of_degree(int n, int total, Exponent& prefix,
                         std::vector<Exponent>& out) {
  if (static_cast<int>(prefix.size()) == n - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    prefix.push_back(a);
    exponents_of_degree(n, total - a, prefix, out);
    prefix.pop_back();
  }
}

// T_0..T_degree at x via the three-term recurrence.
void chebyshev_1d(double x, int degree, double* t) {
  t[0] = 1.0;
  if (degree >= 1) t[1] = x;
  for (int k = 2; k <= degree; ++k) t[k] = 2.0 * x * t[k - 1] - t[k - 2];
}

double chebyshev_integral(int k) {
  return (k % 2 == 1) ? 0.0 : 2.0 / (1.0 - static_cast<double>(k) * k);
}

void check_dims(int n, int d) {
  if (n < 1 || d < 0)
    throw ShapeMismatch("basis requires n >= 1 and d >= 0, got n=" +
                        std::to_string(n) + " d=" + std::to_string(d));
}

}  // namespace

std::vector<Exponent> graded_exponents(int n, int degree) {
  check_dims(n, degree);
  std::vector<Exponent> out;
  out.reserve(static_cast<std::size_t>(binomial(n + degree, n)));
  Exponent prefix;
  for (int total = 0; total <= degree; ++total)
    exponents_of_degree(n, total, prefix, out);
  return out;
}

MatrixXd chebyshev_vandermonde(int n, int d, const MatrixXd& points) {
  if (points.cols() != n)
    throw ShapeMismatch("chebyshev_vandermonde: points must have n columns");
  const auto exps = graded_exponents(n, d);
  MatrixXd v(points.rows(), static_cast<Index>(exps.size()));
  MatrixXd t(d + 1, n);
  for (Index u = 0; u < points.rows(); ++u) {
    for (int k = 0; k < n; ++k) chebyshev_1d(points(u, k), d, t.col(k).data());
    for (std::size_t j = 0; j < exps.size(); ++j) {
      double prod = 1.0;
      for (int k = 0; k < n; ++k) prod *= t(exps[j][k], k);
      v(u, static_cast<Index>(j)) = prod;
    }
  }
  return v;
}

VectorXd chebyshev_basis_eval(int n, int d, const VectorXd& x) {
  if (x.size() != n) throw ShapeMismatch("chebyshev_basis_eval: x must have n entries");
  return chebyshev_vandermonde(n, d, x.transpose()).row(0).transpose();
}

VectorXd chebyshev_moments(int n, int degree) {
  const auto exps = graded_exponents(n, degree);
  VectorXd m(static_cast<Index>(exps.size()));
  for (std::size_t j = 0; j < exps.size(); ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) prod *= chebyshev_integral(exps[j][k]);
    m(static_cast<Index>(j)) = prod;
  }
  return m;
}

PointSelection select_points(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ShapeMismatch("select_points requires n, d >= 1");
  const Index num_u = binomial(n + 2 * d, n);
  const Index num_candidates = kCandidatesPerPoint * num_u;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  MatrixXd candidates(num_candidates, n);
  for (Index i = 0; i < num_candidates; ++i)
    for (int k = 0; k < n; ++k) candidates(i, k) = unif(rng);

  const MatrixXd full = chebyshev_vandermonde(n, 2 * d, candidates);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(full.transpose());
  const auto& perm = qr.colsPermutation().indices();

  PointSelection sel;
  sel.points.resize(num_u, n);
  sel.vandermonde.resize(num_u, num_u);
  for (Index u = 0; u < num_u; ++u) {
    sel.points.row(u) = candidates.row(perm[u]);
    sel.vandermonde.row(u) = full.row(perm[u]);
  }

  Eigen::BDCSVD<MatrixXd> svd(sel.vandermonde);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (!(smallest > 0.0) || sv(0) / smallest > kMaxVandermondeCondition)
    throw DegeneratePoints("select_points: selected Vandermonde is singular (seed " +
                           std::to_string(seed) + ")");

  sel.p = sel.vandermonde.leftCols(binomial(n + d, n));
  return sel;
}

VectorXd quadrature_weights(int n, int d, const MatrixXd& vandermonde) {
  const Index num_u = binomial(n + 2 * d, n);
  if (vandermonde.rows() != num_u || vandermonde.cols() != num_u)
    throw ShapeMismatch("quadrature_weights: Vandermonde must be U x U");
  Eigen::FullPivLU<MatrixXd> lu(vandermonde.transpose());
  if (!lu.isInvertible()) throw DegeneratePoints("quadrature_weights: singular system");
  VectorXd w = lu.solve(chebyshev_moments(n, 2 * d));
  if (!w.allFinite()) throw DegeneratePoints("quadrature_weights: non-finite solution");
  return w;
}

std::vector<WeightRecord> box_weights(int n, int d, const MatrixXd& points,
                                      const MatrixXd& p) {
  if (points.cols() != n || points.rows() != p.rows())
    throw ShapeMismatch("box_weights: points and P disagree");
  std::vector<WeightRecord> weights;
  weights.push_back({VectorXd::Ones(points.rows()), p.cols(), p});
  const Index lower_cols = binomial(n + d - 1, n);
  for (int k = 0; k < n; ++k) {
    WeightRecord rec;
    rec.values = (1.0 - points.col(k).array().square()).matrix();
    rec.cols = lower_cols;
    rec.p = p.leftCols(lower_cols);
    weights.push_back(std::move(rec));
  }
  return weights;
}

BasisContext BasisContext::build(int n, int d, std::uint64_t seed) {
  PointSelection sel = select_points(n, d, seed);
  BasisContext ctx;
  ctx.n_ = n;
  ctx.d_ = d;
  ctx.quad_ = quadrature_weights(n, d, sel.vandermonde);
  ctx.weights_ = box_weights(n, d, sel.points, sel.p);
  ctx.points_ = std::move(sel.points);
  ctx.p_ = std::move(sel.p);
  return ctx;
}

BasisContext BasisContext::from_points(int n, int d, const MatrixXd& points,
                                       bool box) {
  check_dims(n, d);
  const Index num_u = binomial(n + 2 * d, n);
  if (points.rows() != num_u || points.cols() != n)
    throw ShapeMismatch("from_points: expected U x n points");
  const MatrixXd v = chebyshev_vandermonde(n, 2 * d, points);
  BasisContext ctx;
  ctx.n_ = n;
  ctx.d_ = d;
  ctx.points_ = points;
  ctx.p_ = v.leftCols(binomial(n + d, n));
  ctx.quad_ = quadrature_weights(n, d, v);
  if (box && d >= 1) {
    ctx.weights_ = box_weights(n, d, points, ctx.p_);
  } else {
    ctx.weights_.push_back({VectorXd::Ones(num_u), ctx.p_.cols(), ctx.p_});
  }
  return ctx;
}

BasisContext BasisContext::custom(int n, int d, MatrixXd points, MatrixXd p,
                                  std::vector<WeightRecord> weights, VectorXd quad) {
  if (weights.empty()) throw ShapeMismatch("custom basis needs at least one weight");
  for (auto& w : weights) {
    if (w.values.size() != p.rows() || w.cols > p.cols() || w.cols < 1)
      throw ShapeMismatch("custom basis: weight record inconsistent with P");
    if (w.p.size() == 0) w.p = p.leftCols(w.cols);
  }
  if (quad.size() != p.rows()) throw ShapeMismatch("custom basis: quad must have U entries");
  BasisContext ctx;
  ctx.n_ = n;
  ctx.d_ = d;
  ctx.points_ = std::move(points);
  ctx.p_ = std::move(p);
  ctx.weights_ = std::move(weights);
  ctx.quad_ = std::move(quad);
  return ctx;
}

Index BasisContext::total_weight_cols() const {
  Index total = 0;
  for (const auto& w : weights_) total += w.cols;
  return total;
}

}  // namespace sos_cones
