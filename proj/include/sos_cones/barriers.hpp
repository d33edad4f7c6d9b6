#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sos_cones/lifting.hpp"
#include "sos_cones/linalg.hpp"
#include "sos_cones/polybasis.hpp"

/// Barrier oracles for the dual weighted polynomial cones. Every cone is the
/// intersection over the weights g_k of the corresponding unweighted dual
/// cone, so values, gradients and Hessians are sums over the weights.
namespace sos_cones {

enum class ConeKind { kWsos, kWsosPsd, kWsosL2, kWsosL1 };

std::string_view cone_kind_name(ConeKind kind);

using WeightList = std::vector<WeightRecord>;

/// Barrier quantities at one strictly feasible point. Produced only by
/// ConeOracle::evaluate, so holding one certifies feasibility; the
/// factorizations computed by the membership check are reused here.
class BarrierPoint {
 public:
  virtual ~BarrierPoint() = default;

  virtual double value() const = 0;
  virtual VectorXd gradient() const = 0;

  /// Dense Hessian (computed on first use, then cached).
  const MatrixXd& hessian() const;

  /// H^{-1} rhs, column by column. Throws NumericallySingularHessian when the
  /// Hessian cannot be factorized.
  virtual MatrixXd hessian_inverse_apply(const MatrixXd& rhs) const;

 protected:
  virtual MatrixXd compute_hessian() const = 0;

 private:
  mutable std::optional<MatrixXd> hessian_;
  mutable std::optional<Cholesky> hessian_chol_;
};

/// Uniform oracle contract consumed by the interior-point solver. Oracles are
/// immutable; evaluate() allocates its own workspace so distinct points may
/// be evaluated concurrently.
class ConeOracle {
 public:
  ConeOracle(std::shared_ptr<const WeightList> weights, Index components);
  virtual ~ConeOracle() = default;

  virtual ConeKind kind() const = 0;
  /// Ambient dimension of the coefficient vector.
  virtual Index dim() const = 0;
  /// Barrier parameter.
  virtual double nu() const = 0;

  /// Strictly feasible starting point.
  virtual VectorXd initial_point() const = 0;

  /// Membership check plus cached factorizations. Returns nullptr when s is
  /// not strictly feasible; throws ShapeMismatch on a wrong-sized s.
  virtual std::unique_ptr<BarrierPoint> evaluate(const VectorXd& s) const = 0;

  bool is_feasible(const VectorXd& s) const { return evaluate(s) != nullptr; }

  const WeightList& weights() const { return *weights_; }
  Index num_points() const { return weights_->front().values.size(); }
  /// m for vector and matrix cones, 1 for the scalar cone.
  Index components() const { return components_; }

 protected:
  void check_shape(const VectorXd& s) const;
  /// Least-squares point for the first weight's lifting operator, falling back
  /// to a least-squares fit over all weights and then to the all-ones vector
  /// when a candidate leaves some weight's lifted matrix badly conditioned.
  VectorXd scalar_interior_point() const;

 private:
  std::shared_ptr<const WeightList> weights_;
  Index components_;
};

std::unique_ptr<ConeOracle> make_wsos(std::shared_ptr<const WeightList> weights);
std::unique_ptr<ConeOracle> make_wsos_psd(std::shared_ptr<const WeightList> weights, Index m);
std::unique_ptr<ConeOracle> make_wsos_l2(std::shared_ptr<const WeightList> weights, Index m);
std::unique_ptr<ConeOracle> make_wsos_l1(std::shared_ptr<const WeightList> weights, Index m);

/// Convenience overloads drawing the weights from a basis.
std::unique_ptr<ConeOracle> make_cone(ConeKind kind, const BasisContext& ctx, Index m = 1);

/// Least-squares fit argmin_s ||Lambda_w(s) - I||_F summed over `weights`.
/// Throws DegenerateBasis if the normal equations are rank deficient.
VectorXd lifting_least_squares(const WeightList& weights);

// Free-function forms of the oracle contract. The derivative functions throw
// InfeasiblePoint when s is not strictly feasible.
bool feasibility(const ConeOracle& cone, const VectorXd& s);
double barrier_value(const ConeOracle& cone, const VectorXd& s);
VectorXd barrier_gradient(const ConeOracle& cone, const VectorXd& s);
MatrixXd barrier_hessian(const ConeOracle& cone, const VectorXd& s);
VectorXd hessian_inverse_apply(const ConeOracle& cone, const VectorXd& s, const VectorXd& rhs);

/// Column i of a component-major coefficient vector (U entries per component).
inline auto component(const VectorXd& s, Index i, Index num_u) { return s.segment(i * num_u, num_u); }

}  // namespace sos_cones
