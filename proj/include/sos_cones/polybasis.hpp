#pragma once

#include <cstdint>
#include <vector>

#include "sos_cones/linalg.hpp"

/// Interpolation bases: multivariate Chebyshev polynomials, unisolvent point
/// selection, box-domain weights and quadrature on [-1, 1]^n.
namespace sos_cones {

/// Exponent tuple of a multivariate Chebyshev product T_a1(x1) ... T_an(xn).
using Exponent = std::vector<int>;

/// All exponent tuples with total degree <= degree, graded lexicographic
/// (by total degree, then larger leading exponents first).
std::vector<Exponent> graded_exponents(int n, int degree);

/// Chebyshev products for every exponent of graded_exponents(n, d) at x.
VectorXd chebyshev_basis_eval(int n, int d, const VectorXd& x);

/// Row u holds chebyshev_basis_eval(n, d, points.row(u)).
MatrixXd chebyshev_vandermonde(int n, int d, const MatrixXd& points);

/// Analytic integral over [-1, 1]^n of each degree-`degree` Chebyshev product.
VectorXd chebyshev_moments(int n, int degree);

/// One weight g_k of a weighted SOS cone, tabulated at the interpolation
/// points, together with the Vandermonde slice P_k (first `cols` columns of P).
struct WeightRecord {
  VectorXd values;
  Index cols = 0;
  MatrixXd p;
};

struct PointSelection {
  MatrixXd points;       // U x n
  MatrixXd p;            // U x L, degree-d Chebyshev basis at the points
  MatrixXd vandermonde;  // U x U, degree-2d Chebyshev basis at the points
};

/// Samples 100 U uniform candidates in the box and keeps the U rows chosen by
/// a column-pivoted QR of the transposed degree-2d Vandermonde.
/// Throws DegeneratePoints if the kept Vandermonde has condition > 1e12.
PointSelection select_points(int n, int d, std::uint64_t seed);

/// Solves V^T w = moments so that w . f integrates every degree-2d polynomial.
/// Throws DegeneratePoints if the solve fails.
VectorXd quadrature_weights(int n, int d, const MatrixXd& vandermonde);

/// g_1 = 1 on the full basis and g_{1+k} = 1 - x_k^2 on the half-degree d-1
/// basis, for k = 1..n.
std::vector<WeightRecord> box_weights(int n, int d, const MatrixXd& points,
                                      const MatrixXd& p);

/// Immutable interpolation data for one (n, d) pair.
class BasisContext {
 public:
  /// select_points + quadrature_weights + box_weights.
  static BasisContext build(int n, int d, std::uint64_t seed);

  /// Uses caller-supplied points (must be unisolvent for degree 2d). With
  /// `box = false` only the unit weight g_1 is attached.
  static BasisContext from_points(int n, int d, const MatrixXd& points,
                                  bool box = true);

  /// Fully explicit construction, used by deserialization and by tests that
  /// need degenerate stubs (e.g. a one-point basis).
  static BasisContext custom(int n, int d, MatrixXd points, MatrixXd p,
                             std::vector<WeightRecord> weights, VectorXd quad);

  int n() const { return n_; }
  int d() const { return d_; }
  Index L() const { return p_.cols(); }
  Index U() const { return p_.rows(); }
  const MatrixXd& points() const { return points_; }
  const MatrixXd& p() const { return p_; }
  const std::vector<WeightRecord>& weights() const { return weights_; }
  const VectorXd& quad() const { return quad_; }

  /// Sum of the weight column counts: the per-unit-m barrier parameter.
  Index total_weight_cols() const;

 private:
  BasisContext() = default;

  int n_ = 0;
  int d_ = 0;
  MatrixXd points_;
  MatrixXd p_;
  std::vector<WeightRecord> weights_;
  VectorXd quad_;
};

}  // namespace sos_cones
