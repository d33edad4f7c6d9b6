#include "sos_cones/errors.hpp"
#include "terms.hpp"

namespace sos_cones {
namespace {

class WsosL1Oracle final : public ConeOracle {
 public:
  WsosL1Oracle(std::shared_ptr<const WeightList> weights, Index m)
      : ConeOracle(std::move(weights), m) {
    if (m < 2) throw ShapeMismatch("wsos_l1: need m >= 2 components");
  }

  ConeKind kind() const override { return ConeKind::kWsosL1; }
  Index dim() const override { return num_points() * components(); }
  double nu() const override {
    double nu = 0.0;
    for (const auto& w : weights()) nu += static_cast<double>(w.cols * components());
    return nu;
  }

  VectorXd initial_point() const override {
    VectorXd s = VectorXd::Zero(dim());
    s.head(num_points()) = scalar_interior_point();
    return s;
  }

  // F = -sum_i logdet(X_1 - X_i X_1^{-1} X_i) - logdet X_1. Each pair
  // (s_1, s_i) contributes the 2x2 block arrowhead [X_1 X_i; X_i X_1], so the
  // Hessian couples component 1 with every i but never i with i'.
  std::unique_ptr<BarrierPoint> evaluate(const VectorXd& s) const override {
    check_shape(s);
    const Index m = components();
    const Index num_u = num_points();
    double value = 0.0;
    std::vector<detail::Term> terms;
    for (const auto& w : weights()) {
      const MatrixXd first = lambda_sos(w, component(s, 0, num_u));
      std::optional<Cholesky> chol_first;
      for (Index i = 1; i < m; ++i) {
        auto factors = factor_arrow({first, lambda_sos(w, component(s, i, num_u))});
        if (!factors) return nullptr;
        value -= logdet(factors->chol_pi);
        if (!chol_first) chol_first = factors->chol_first;
        terms.push_back({detail::sandwich_grid(w.p, arrow_inverse(*factors)), w.values,
                         {{0, {{0, 0}, {1, 1}}}, {i, {{0, 1}, {1, 0}}}}, 1.0});
      }
      value -= logdet(*chol_first);
      if (m > 2) {
        BlockGrid r(1, num_u);
        r.at(0, 0) = detail::r_matrix(w.p, *chol_first);
        terms.push_back({std::move(r), w.values, {{0, {{0, 0}}}}, -static_cast<double>(m - 2)});
      }
    }
    return std::make_unique<detail::TermPoint>(value, dim(), num_u, std::move(terms), true);
  }
};

}  // namespace

std::unique_ptr<ConeOracle> make_wsos_l1(std::shared_ptr<const WeightList> weights, Index m) {
  return std::make_unique<WsosL1Oracle>(std::move(weights), m);
}

}  // namespace sos_cones
