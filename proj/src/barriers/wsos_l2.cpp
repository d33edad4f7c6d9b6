#include "sos_cones/errors.hpp"
#include "terms.hpp"

namespace sos_cones {
namespace {

// Lambda(s_1) sits on every diagonal block, Lambda(s_i) at (1, i) and (i, 1).
std::vector<detail::RepSet> arrow_reps(Index m) {
  std::vector<detail::RepSet> reps;
  detail::RepSet first{0, {}};
  for (Index j = 0; j < m; ++j) first.pairs.emplace_back(j, j);
  reps.push_back(std::move(first));
  for (Index i = 1; i < m; ++i) reps.push_back({i, {{0, i}, {i, 0}}});
  return reps;
}

class WsosL2Oracle final : public ConeOracle {
 public:
  WsosL2Oracle(std::shared_ptr<const WeightList> weights, Index m)
      : ConeOracle(std::move(weights), m), reps_(arrow_reps(m)) {
    if (m < 2) throw ShapeMismatch("wsos_l2: need m >= 2 components");
  }

  ConeKind kind() const override { return ConeKind::kWsosL2; }
  Index dim() const override { return num_points() * components(); }
  double nu() const override {
    double nu = 0.0;
    for (const auto& w : weights()) nu += static_cast<double>(2 * w.cols);
    return nu;
  }

  VectorXd initial_point() const override {
    VectorXd s = VectorXd::Zero(dim());
    s.head(num_points()) = scalar_interior_point();
    return s;
  }

  // F = -logdet Pi - logdet Lambda(s_1), differentiated in the equivalent form
  // -logdet(lifted arrowhead) + (m - 2) logdet Lambda(s_1).
  std::unique_ptr<BarrierPoint> evaluate(const VectorXd& s) const override {
    check_shape(s);
    const Index m = components();
    const Index num_u = num_points();
    double value = 0.0;
    std::vector<detail::Term> terms;
    for (const auto& w : weights()) {
      std::vector<MatrixXd> lifted;
      lifted.reserve(static_cast<std::size_t>(m));
      for (Index i = 0; i < m; ++i) lifted.push_back(lambda_sos(w, component(s, i, num_u)));
      auto factors = factor_arrow(std::move(lifted));
      if (!factors) return nullptr;
      value -= logdet(factors->chol_pi) + logdet(factors->chol_first);
      terms.push_back({detail::sandwich_grid(w.p, arrow_inverse(*factors)), w.values, reps_, 1.0});
      if (m > 2) {
        BlockGrid r(1, num_u);
        r.at(0, 0) = detail::r_matrix(w.p, factors->chol_first);
        terms.push_back({std::move(r), w.values, {{0, {{0, 0}}}}, -static_cast<double>(m - 2)});
      }
    }
    return std::make_unique<detail::TermPoint>(value, dim(), num_u, std::move(terms), false);
  }

 private:
  std::vector<detail::RepSet> reps_;
};

}  // namespace

std::unique_ptr<ConeOracle> make_wsos_l2(std::shared_ptr<const WeightList> weights, Index m) {
  return std::make_unique<WsosL2Oracle>(std::move(weights), m);
}

}  // namespace sos_cones
