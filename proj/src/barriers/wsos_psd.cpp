#include "sos_cones/errors.hpp"
#include "terms.hpp"

namespace sos_cones {
namespace {

// Component tri_index(i, j) enters the lifted matrix at (i, j) and, off the
// diagonal, also at (j, i); this is where the stored-triangle factor of two
// comes from.
std::vector<detail::RepSet> psd_reps(Index m) {
  std::vector<detail::RepSet> reps;
  for (Index j = 0; j < m; ++j) {
    for (Index i = j; i < m; ++i) {
      detail::RepSet rep{tri_index(m, i, j), {{i, j}}};
      if (i != j) rep.pairs.emplace_back(j, i);
      reps.push_back(std::move(rep));
    }
  }
  return reps;
}

class WsosPsdOracle final : public ConeOracle {
 public:
  WsosPsdOracle(std::shared_ptr<const WeightList> weights, Index m)
      : ConeOracle(std::move(weights), m), reps_(psd_reps(m)) {
    if (m < 1) throw ShapeMismatch("wsos_psd: side must be >= 1");
  }

  ConeKind kind() const override { return ConeKind::kWsosPsd; }
  Index dim() const override { return num_points() * sdim(components()); }
  double nu() const override {
    double nu = 0.0;
    for (const auto& w : weights()) nu += static_cast<double>(w.cols * components());
    return nu;
  }

  VectorXd initial_point() const override {
    const Index m = components();
    const Index num_u = num_points();
    const VectorXd base = scalar_interior_point();
    VectorXd s = VectorXd::Zero(dim());
    for (Index i = 0; i < m; ++i) s.segment(tri_index(m, i, i) * num_u, num_u) = base;
    return s;
  }

  std::unique_ptr<BarrierPoint> evaluate(const VectorXd& s) const override {
    check_shape(s);
    const Index m = components();
    const Index num_u = num_points();
    PolyMat mat(m, num_u);
    mat.coeffs = Eigen::Map<const MatrixXd>(s.data(), num_u, sdim(m));
    double value = 0.0;
    std::vector<detail::Term> terms;
    terms.reserve(weights().size());
    for (const auto& w : weights()) {
      auto chol = strict_cholesky(lambda_psd(w, mat));
      if (!chol) return nullptr;
      value -= logdet(*chol);
      terms.push_back({detail::grid_from_cholesky(w.p, *chol, m), w.values, reps_, 1.0});
    }
    return std::make_unique<detail::TermPoint>(value, dim(), num_u, std::move(terms), false);
  }

 private:
  std::vector<detail::RepSet> reps_;
};

}  // namespace

std::unique_ptr<ConeOracle> make_wsos_psd(std::shared_ptr<const WeightList> weights, Index m) {
  return std::make_unique<WsosPsdOracle>(std::move(weights), m);
}

}  // namespace sos_cones
