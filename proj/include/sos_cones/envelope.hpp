#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sos_cones/ipm.hpp"
#include "sos_cones/lifting.hpp"
#include "sos_cones/polybasis.hpp"

/// Polynomial envelope benchmark: find the lowest-integral q_1 with
/// q_1(x) >= |(q_2(x), ..., q_m(x))|_p on the box, for random q_i.
namespace sos_cones {

enum class Formulation { kSosL2, kSos, kSosPsd, kSosL1, kSosExt };

std::string_view formulation_name(Formulation f);
/// Parses "sosl2", "sos", "sospsd", "sosl1", "sos_ext".
std::optional<Formulation> parse_formulation(std::string_view name);
/// Norm p that a formulation certifies.
int formulation_norm(Formulation f);

struct RandomPolys {
  MatrixXd coeffs;  // Chebyshev coefficients of degree 2 d_r, one column per q_i
  MatrixXd values;  // U x (m - 1), values at the interpolation points
};

/// I.i.d. uniform [-1, 1] Chebyshev coefficients for q_2..q_m of degree
/// 2 d_r, evaluated at the basis points. Deterministic per seed.
RandomPolys random_polys(const BasisContext& basis, int d_r, Index m, std::uint64_t seed,
                         bool zero = false);

struct EnvelopeInstance {
  int n = 1;
  int d_r = 1;
  int d = 1;
  Index m = 2;
  int p = 2;
  std::uint64_t seed = 0;
  bool zero_polys = false;
  std::shared_ptr<const BasisContext> basis;
  RandomPolys polys;

  Index U() const { return basis->U(); }
};

/// Validates (n, d_r, d, m, p), builds the basis with `seed` (advancing the
/// seed on degenerate point draws) and draws the polynomials.
/// `d = 0` selects d_r. Throws FormulationMismatch on an invalid combination.
EnvelopeInstance make_instance(int n, int d_r, Index m, int p, int d, std::uint64_t seed,
                               bool zero_polys = false);

/// Primal conic form  min obj^T v  s.t.  B v + offset in K, with K paired
/// against the barrier cones through the diagonal inner product
/// <a, z> = sum_i scale_i a_i z_i.
struct PrimalForm {
  MatrixXd B;
  VectorXd offset;
  VectorXd scale;
  VectorXd obj;
  std::vector<ConeBlock> cones;
};

/// The conic dual handed to the solver:
///   min (scale o offset)^T z  s.t.  B^T diag(scale) z = obj,  z in K*.
ConicProblem dualize(const PrimalForm& primal);

/// Primal variables recovered from the solver's equality multipliers.
VectorXd recover_primal(const SolveResult& result);

struct FormulationDims {
  Index cone_dim = 0;
  Index num_cones = 0;
  Index equalities = 0;        // rows handed to the solver
  Index aux_equalities = 0;    // equalities beyond the envelope variables
  Index aux_variables = 0;     // variables beyond q_1
  double nu = 0.0;
};

struct BuiltProblem {
  PrimalForm primal;
  ConicProblem conic;
  FormulationDims dims;
};

/// Throws FormulationMismatch unless the formulation certifies the
/// instance's norm.
BuiltProblem build(const EnvelopeInstance& inst, Formulation f);

/// Interpolation points (t_u, e_i + e_j) and product Vandermonde for the
/// scalar formulation of the p = 2 envelope: index v * U + u, v running over
/// the lower triangle of an m x m matrix.
WeightList product_weights(const WeightList& weights, Index m);

/// Witness problem  min t  s.t.  q + t e_1 in K, for the L2 cone or for the
/// arrow embedding into the PSD cone.
BuiltProblem build_separation(const BasisContext& basis, const MatrixXd& q, bool arrow_psd);

struct ResultRow {
  int n = 0;
  int d_r = 0;
  Index m = 0;
  int d = 0;
  int p = 0;
  std::uint64_t seed = 0;
  std::string formulation;
  std::string st;
  int iter = 0;
  double time = 0.0;
  double obj = 0.0;
  FormulationDims dims;
  VectorXd envelope;  // recovered q_1 values at the points
  std::string detail;
};

ResultRow run_instance(const EnvelopeInstance& inst, Formulation f,
                       const SolveOptions& options = {});

/// q_1 at arbitrary x from its values at the basis points.
double interpolate(const BasisContext& basis, const VectorXd& values, const VectorXd& x);

/// q_i(x) for i >= 2 (column i - 2 of the coefficient matrix).
double eval_random_poly(const EnvelopeInstance& inst, Index column, const VectorXd& x);

/// Largest value of |q(x)|_p - q_1(x) - slack (1 + |q_1(x)|) over `samples`
/// uniform box points; <= 0 means the envelope holds everywhere sampled.
double envelope_violation(const EnvelopeInstance& inst, const VectorXd& envelope,
                          int samples = 1000, double slack = 1e-5, std::uint64_t seed = 0);

/// Markdown table with one line per instance and st / iter / time per
/// formulation; p = 2 rows add obj(sos or sospsd) / obj(sosl2).
std::string markdown_table(const std::vector<ResultRow>& rows);

}  // namespace sos_cones
