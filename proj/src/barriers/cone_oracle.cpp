#include <algorithm>
#include <limits>
#include <string>

#include "sos_cones/barriers.hpp"
#include "sos_cones/errors.hpp"

namespace sos_cones {

namespace {

// Starting points whose lifted matrices are this well conditioned are used
// without looking further.
constexpr double kWellConditioned = 1e-3;

}  // namespace

std::string_view cone_kind_name(ConeKind kind) {
  switch (kind) {
    case ConeKind::kWsos: return "wsos";
    case ConeKind::kWsosPsd: return "wsos_psd";
    case ConeKind::kWsosL2: return "wsos_l2";
    case ConeKind::kWsosL1: return "wsos_l1";
  }
  return "unknown";
}

const MatrixXd& BarrierPoint::hessian() const {
  if (!hessian_) hessian_ = compute_hessian();
  return *hessian_;
}

MatrixXd BarrierPoint::hessian_inverse_apply(const MatrixXd& rhs) const {
  const MatrixXd& h = hessian();
  if (rhs.rows() != h.rows()) throw ShapeMismatch("hessian_inverse_apply: rhs has wrong length");
  if (!hessian_chol_) {
    hessian_chol_.emplace(h);
    if (hessian_chol_->info() != Eigen::Success) {
      hessian_chol_.reset();
      throw NumericallySingularHessian("barrier Hessian is not numerically positive definite");
    }
  }
  MatrixXd out = hessian_chol_->solve(rhs);
  if (!out.allFinite()) throw NumericallySingularHessian("barrier Hessian solve is not finite");
  return out;
}

ConeOracle::ConeOracle(std::shared_ptr<const WeightList> weights, Index components)
    : weights_(std::move(weights)), components_(components) {
  if (!weights_ || weights_->empty()) throw ShapeMismatch("cone oracle needs at least one weight");
  const Index num_u = weights_->front().values.size();
  for (const auto& w : *weights_) {
    if (w.values.size() != num_u || w.p.rows() != num_u || w.p.cols() != w.cols || w.cols < 1)
      throw ShapeMismatch("cone oracle: inconsistent weight record");
  }
}

void ConeOracle::check_shape(const VectorXd& s) const {
  if (s.size() != dim())
    throw ShapeMismatch(std::string(cone_kind_name(kind())) + ": expected vector of length " +
                        std::to_string(dim()) + ", got " + std::to_string(s.size()));
}

VectorXd lifting_least_squares(const WeightList& weights) {
  if (weights.empty()) throw ShapeMismatch("lifting_least_squares: no weights");
  const Index num_u = weights.front().values.size();
  // ||sum_u s_u g_u p_u p_u^T - I||_F^2 has normal equations G s = r with
  // G_uv = g_u g_v (p_u . p_v)^2 and r_u = g_u |p_u|^2.
  MatrixXd gram = MatrixXd::Zero(num_u, num_u);
  VectorXd rhs = VectorXd::Zero(num_u);
  for (const auto& w : weights) {
    const MatrixXd inner = w.p * w.p.transpose();
    MatrixXd weighted = w.values.asDiagonal() * inner * w.values.asDiagonal();
    hadamard_axpy(gram, 1.0, weighted, inner);
    rhs += w.values.cwiseProduct(inner.diagonal());
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(gram);
  qr.setThreshold(1e-12);
  if (qr.rank() < num_u)
    throw DegenerateBasis("least-squares system for the initial point is rank deficient (rank " +
                          std::to_string(qr.rank()) + " of " + std::to_string(num_u) + ")");
  return qr.solve(rhs);
}

VectorXd ConeOracle::scalar_interior_point() const {
  // Spread of the lifted matrices measured against those of the all-ones
  // vector (generalized eigenvalues, pooled over weights): min / max, or 0 if
  // some weight is not strictly positive definite.
  const VectorXd ones = VectorXd::Ones(num_points());
  const auto quality = [&](const VectorXd& s) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& w : *weights_) {
      const MatrixXd lifted = lambda_sos(w, s);
      if (!strict_cholesky(lifted)) return 0.0;
      const MatrixXd reference = lambda_sos(w, ones);
      VectorXd ev;
      if (strict_cholesky(reference)) {
        ev = Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd>(lifted, reference,
                                                                Eigen::EigenvaluesOnly)
                 .eigenvalues();
      } else {
        ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(lifted, Eigen::EigenvaluesOnly).eigenvalues();
      }
      lo = std::min(lo, ev(0));
      hi = std::max(hi, ev(ev.size() - 1));
    }
    return hi > 0.0 ? lo / hi : 0.0;
  };
  std::vector<VectorXd> candidates{lifting_least_squares(WeightList{weights_->front()})};
  if (weights_->size() > 1) candidates.push_back(lifting_least_squares(*weights_));
  candidates.push_back(ones);

  double best_quality = 0.0;
  const VectorXd* best = nullptr;
  for (const auto& c : candidates) {
    const double q = quality(c);
    if (q >= kWellConditioned) return c;
    if (q > best_quality) {
      best_quality = q;
      best = &c;
    }
  }
  if (!best) throw DegenerateBasis("no strictly interior starting point found");
  return *best;
}

std::unique_ptr<ConeOracle> make_cone(ConeKind kind, const BasisContext& ctx, Index m) {
  auto weights = std::make_shared<const WeightList>(ctx.weights());
  switch (kind) {
    case ConeKind::kWsos: return make_wsos(std::move(weights));
    case ConeKind::kWsosPsd: return make_wsos_psd(std::move(weights), m);
    case ConeKind::kWsosL2: return make_wsos_l2(std::move(weights), m);
    case ConeKind::kWsosL1: return make_wsos_l1(std::move(weights), m);
  }
  throw ShapeMismatch("make_cone: unknown cone kind");
}

namespace {

std::unique_ptr<BarrierPoint> evaluate_or_throw(const ConeOracle& cone, const VectorXd& s) {
  auto point = cone.evaluate(s);
  if (!point)
    throw InfeasiblePoint(std::string(cone_kind_name(cone.kind())) +
                          ": point is not strictly feasible");
  return point;
}

}  // namespace

bool feasibility(const ConeOracle& cone, const VectorXd& s) { return cone.is_feasible(s); }

double barrier_value(const ConeOracle& cone, const VectorXd& s) {
  return evaluate_or_throw(cone, s)->value();
}

VectorXd barrier_gradient(const ConeOracle& cone, const VectorXd& s) {
  return evaluate_or_throw(cone, s)->gradient();
}

MatrixXd barrier_hessian(const ConeOracle& cone, const VectorXd& s) {
  return evaluate_or_throw(cone, s)->hessian();
}

VectorXd hessian_inverse_apply(const ConeOracle& cone, const VectorXd& s, const VectorXd& rhs) {
  return evaluate_or_throw(cone, s)->hessian_inverse_apply(rhs);
}

}  // namespace sos_cones
