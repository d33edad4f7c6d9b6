#include "terms.hpp"

namespace sos_cones {
namespace {

class WsosOracle final : public ConeOracle {
 public:
  explicit WsosOracle(std::shared_ptr<const WeightList> weights)
      : ConeOracle(std::move(weights), 1) {}

  ConeKind kind() const override { return ConeKind::kWsos; }
  Index dim() const override { return num_points(); }
  double nu() const override {
    double nu = 0.0;
    for (const auto& w : weights()) nu += static_cast<double>(w.cols);
    return nu;
  }

  VectorXd initial_point() const override { return scalar_interior_point(); }

  std::unique_ptr<BarrierPoint> evaluate(const VectorXd& s) const override {
    check_shape(s);
    const Index num_u = num_points();
    double value = 0.0;
    std::vector<detail::Term> terms;
    terms.reserve(weights().size());
    for (const auto& w : weights()) {
      auto chol = strict_cholesky(lambda_sos(w, s));
      if (!chol) return nullptr;
      value -= logdet(*chol);
      detail::Term term{detail::grid_from_cholesky(w.p, *chol, 1), w.values, {{0, {{0, 0}}}}, 1.0};
      terms.push_back(std::move(term));
    }
    return std::make_unique<detail::TermPoint>(value, num_u, num_u, std::move(terms), false);
  }
};

}  // namespace

std::unique_ptr<ConeOracle> make_wsos(std::shared_ptr<const WeightList> weights) {
  return std::make_unique<WsosOracle>(std::move(weights));
}

}  // namespace sos_cones
