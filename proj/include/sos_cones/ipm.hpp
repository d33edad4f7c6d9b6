#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sos_cones/barriers.hpp"

/// Homogeneous self-dual predictor-corrector path following for
///   min c^T x  s.t.  A x = b,  x in K_1 x ... x K_p,
/// where each K_j is described only by its barrier oracle.
namespace sos_cones {

struct ConeBlock {
  std::shared_ptr<const ConeOracle> cone;
  Index offset = 0;  // first index of the block inside x
};

struct ConicProblem {
  VectorXd c;
  MatrixXd A;
  VectorXd b;
  std::vector<ConeBlock> cones;

  Index num_vars() const { return c.size(); }
  Index num_eqs() const { return b.size(); }
  double nu() const;
  /// Throws ShapeMismatch unless A is M x N and the blocks tile 0..N-1 in order.
  void validate() const;
};

enum class SolveStatus { kConverged, kTimeLimit, kSlowProgress, kError };

/// Two-letter status code: co, tl, sp, er.
std::string_view status_code(SolveStatus status);

struct SolveOptions {
  double tol = 1e-7;
  int max_iters = 500;
  double time_limit_s = std::numeric_limits<double>::infinity();
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  VectorXd x;
  VectorXd y;
  VectorXd s;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  std::string detail;
};

SolveResult solve(const ConicProblem& problem, const SolveOptions& options = {});

namespace ipm_detail {

/// Full HSDE iterate.
struct Iterate {
  VectorXd x;
  VectorXd y;
  VectorXd s;
  double tau = 1.0;
  double kappa = 1.0;
};

/// Barrier points for every cone block at one x.
struct ConePoints {
  std::vector<std::unique_ptr<BarrierPoint>> points;
  bool feasible = false;
};

ConePoints evaluate_cones(const ConicProblem& problem, const VectorXd& x);

double complementarity(const ConicProblem& problem, const Iterate& it);

/// sqrt(sum_j |s_j + mu g_j|^2_{H_j^{-1}} + (tau kappa - mu)^2) / mu.
double proximity(const ConicProblem& problem, const Iterate& it, const ConePoints& pts);

struct Direction {
  VectorXd dx, dy, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

/// Predictor (centering = false) or corrector (centering = true) direction at
/// `it`, with mu taken as mu_scale times the current complementarity.
/// Throws NumericallySingularHessian on factorization failure.
Direction newton_direction(const ConicProblem& problem, const Iterate& it,
                           const ConePoints& pts, bool centering, double mu_scale = 1.0);

Iterate initial_iterate(const ConicProblem& problem);

}  // namespace ipm_detail

}  // namespace sos_cones
