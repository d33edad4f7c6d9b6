#include "sos_cones/ipm.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "sos_cones/errors.hpp"

namespace sos_cones {

namespace {

constexpr double kNeighborhood = 0.99;
constexpr double kCenteredEnough = 0.5;
constexpr double kBacktrack = 0.8;
constexpr double kMinStep = 1e-10;
constexpr double kStallStep = 1e-8;
constexpr int kStallLimit = 10;
constexpr int kMaxCorrectors = 4;
constexpr int kMaxHessianFailures = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view status_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "co";
    case SolveStatus::kTimeLimit: return "tl";
    case SolveStatus::kSlowProgress: return "sp";
    case SolveStatus::kError: return "er";
  }
  return "er";
}

double ConicProblem::nu() const {
  double total = 0.0;
  for (const auto& blk : cones) total += blk.cone->nu();
  return total;
}

void ConicProblem::validate() const {
  if (A.rows() != b.size() || A.cols() != c.size())
    throw ShapeMismatch("conic problem: A must be " + std::to_string(b.size()) + " x " +
                        std::to_string(c.size()));
  if (cones.empty()) throw ShapeMismatch("conic problem: no cone blocks");
  Index next = 0;
  for (const auto& blk : cones) {
    if (!blk.cone) throw ShapeMismatch("conic problem: null cone oracle");
    if (blk.offset != next) throw ShapeMismatch("conic problem: cone blocks must tile x in order");
    next += blk.cone->dim();
  }
  if (next != c.size()) throw ShapeMismatch("conic problem: cone dimensions do not sum to N");
  if (!c.allFinite() || !A.allFinite() || !b.allFinite())
    throw ShapeMismatch("conic problem: non-finite data");
}

namespace ipm_detail {

ConePoints evaluate_cones(const ConicProblem& problem, const VectorXd& x) {
  ConePoints out;
  out.points.reserve(problem.cones.size());
  for (const auto& blk : problem.cones) {
    auto pt = blk.cone->evaluate(x.segment(blk.offset, blk.cone->dim()));
    if (!pt) return out;
    out.points.push_back(std::move(pt));
  }
  out.feasible = true;
  return out;
}

double complementarity(const ConicProblem& problem, const Iterate& it) {
  return (it.x.dot(it.s) + it.tau * it.kappa) / (problem.nu() + 1.0);
}

double proximity(const ConicProblem& problem, const Iterate& it, const ConePoints& pts) {
  const double mu = complementarity(problem, it);
  if (!(mu > 0.0)) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t j = 0; j < problem.cones.size(); ++j) {
    const auto& blk = problem.cones[j];
    const VectorXd r = it.s.segment(blk.offset, blk.cone->dim()) + mu * pts.points[j]->gradient();
    acc += r.dot(pts.points[j]->hessian_inverse_apply(r).col(0));
  }
  const double centr = it.tau * it.kappa - mu;
  acc += centr * centr;
  return std::sqrt(std::max(acc, 0.0)) / mu;
}

Direction newton_direction(const ConicProblem& problem, const Iterate& it,
                           const ConePoints& pts, bool centering, double mu_scale) {
  const Index n = problem.num_vars();
  const Index m = problem.num_eqs();
  const MatrixXd& a = problem.A;
  const VectorXd& b = problem.b;
  const VectorXd& c = problem.c;
  const double mu = mu_scale * complementarity(problem, it);
  const double tau = it.tau;

  VectorXd r1, r2, rs;
  double r3 = 0.0;
  double rk = 0.0;
  if (centering) {
    r1 = VectorXd::Zero(m);
    r2 = VectorXd::Zero(n);
    rs.resize(n);
    for (std::size_t j = 0; j < problem.cones.size(); ++j) {
      const auto& blk = problem.cones[j];
      const Index dim = blk.cone->dim();
      rs.segment(blk.offset, dim) =
          -(it.s.segment(blk.offset, dim) + mu * pts.points[j]->gradient());
    }
    rk = -(it.kappa - mu / tau);
  } else {
    r1 = -(a * it.x - b * tau);
    r2 = -(-a.transpose() * it.y + c * tau - it.s);
    r3 = -(b.dot(it.y) - c.dot(it.x) - it.kappa);
    rs = -it.s;
    rk = -it.kappa;
  }

  // Apply H^{-1} blockwise to [A^T, c, r2 + rs] in one pass.
  const VectorXd q = r2 + rs;
  MatrixXd stacked(n, m + 2);
  stacked.leftCols(m) = a.transpose();
  stacked.col(m) = c;
  stacked.col(m + 1) = q;
  MatrixXd applied(n, m + 2);
  for (std::size_t j = 0; j < problem.cones.size(); ++j) {
    const auto& blk = problem.cones[j];
    const Index dim = blk.cone->dim();
    applied.middleRows(blk.offset, dim) =
        pts.points[j]->hessian_inverse_apply(stacked.middleRows(blk.offset, dim));
  }
  const auto q_at = applied.leftCols(m);
  const VectorXd qc = applied.col(m);
  const VectorXd qq = applied.col(m + 1);

  MatrixXd k(m + 1, m + 1);
  k.topLeftCorner(m, m).noalias() = a * q_at;
  const VectorXd aqc = a * qc;
  k.topRightCorner(m, 1) = -(aqc + mu * b);
  k.bottomLeftCorner(1, m) = (mu * b - aqc).transpose();
  k(m, m) = c.dot(qc) + mu * mu / (tau * tau);

  VectorXd rhs(m + 1);
  rhs.head(m) = mu * r1 - a * qq;
  rhs(m) = mu * (r3 + rk) + c.dot(qq);

  const VectorXd sol = k.partialPivLu().solve(rhs);
  if (!sol.allFinite()) throw NumericallySingularHessian("Newton system solve is not finite");

  Direction dir;
  dir.dy = sol.head(m);
  dir.dtau = sol(m);
  dir.dx = (qq + q_at * dir.dy - qc * dir.dtau) / mu;
  dir.ds = -a.transpose() * dir.dy + c * dir.dtau - r2;
  dir.dkappa = rk - (mu / (tau * tau)) * dir.dtau;
  return dir;
}

Iterate initial_iterate(const ConicProblem& problem) {
  Iterate it;
  it.x.resize(problem.num_vars());
  it.s.resize(problem.num_vars());
  for (const auto& blk : problem.cones) {
    const VectorXd x0 = blk.cone->initial_point();
    const auto pt = blk.cone->evaluate(x0);
    if (!pt) throw InfeasiblePoint("initial point of a cone block is not interior");
    it.x.segment(blk.offset, x0.size()) = x0;
    it.s.segment(blk.offset, x0.size()) = -pt->gradient();
  }
  it.y = VectorXd::Zero(problem.num_eqs());
  it.tau = 1.0;
  it.kappa = 1.0;
  return it;
}

}  // namespace ipm_detail

namespace {

using ipm_detail::ConePoints;
using ipm_detail::Direction;
using ipm_detail::Iterate;

Iterate step(const Iterate& it, const Direction& d, double alpha) {
  Iterate out;
  out.x = it.x + alpha * d.dx;
  out.y = it.y + alpha * d.dy;
  out.s = it.s + alpha * d.ds;
  out.tau = it.tau + alpha * d.dtau;
  out.kappa = it.kappa + alpha * d.dkappa;
  return out;
}

struct Trial {
  Iterate it;
  ConePoints pts;
  double prox = 0.0;
};

// Backtracks from a unit step until the trial point is interior, tau and
// kappa stay positive and the proximity is at most `limit`.
std::optional<Trial> line_search(const ConicProblem& problem, const Iterate& it,
                                 const Direction& d, double limit, double& alpha) {
  for (alpha = 1.0; alpha >= kMinStep; alpha *= kBacktrack) {
    Trial t{step(it, d, alpha), {}, 0.0};
    if (!(t.it.tau > 0.0) || !(t.it.kappa > 0.0)) continue;
    if (ipm_detail::complementarity(problem, t.it) <= 0.0) continue;
    t.pts = ipm_detail::evaluate_cones(problem, t.it.x);
    if (!t.pts.feasible) continue;
    try {
      t.prox = ipm_detail::proximity(problem, t.it, t.pts);
    } catch (const NumericallySingularHessian&) {
      continue;
    }
    if (t.prox <= limit) return t;
  }
  alpha = 0.0;
  return std::nullopt;
}

struct Metrics {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double pobj = 0.0;
  double dobj = 0.0;
};

Metrics metrics(const ConicProblem& p, const Iterate& it) {
  Metrics m;
  const double tau = it.tau;
  m.pobj = p.c.dot(it.x) / tau;
  m.dobj = p.b.dot(it.y) / tau;
  m.primal = (p.A * it.x - p.b * tau).norm() / tau / (1.0 + p.b.norm());
  m.dual = (p.A.transpose() * it.y + it.s - p.c * tau).norm() / tau / (1.0 + p.c.norm());
  m.gap = std::abs(m.pobj - m.dobj) / (1.0 + std::abs(m.pobj));
  return m;
}

void fill(SolveResult& r, const ConicProblem& p, const Iterate& it) {
  const Metrics m = metrics(p, it);
  r.x = it.x / it.tau;
  r.y = it.y / it.tau;
  r.s = it.s / it.tau;
  r.primal_obj = m.pobj;
  r.dual_obj = m.dobj;
  r.primal_residual = m.primal;
  r.dual_residual = m.dual;
  r.relative_gap = m.gap;
}

}  // namespace

SolveResult solve(const ConicProblem& problem, const SolveOptions& options) {
  problem.validate();
  const auto start = Clock::now();
  SolveResult result;

  Iterate it;
  ConePoints pts;
  try {
    it = ipm_detail::initial_iterate(problem);
    pts = ipm_detail::evaluate_cones(problem, it.x);
  } catch (const Error& e) {
    result.status = SolveStatus::kError;
    result.detail = std::string("initialization failed: ") + e.what();
    result.wall_time = seconds_since(start);
    return result;
  }

  int stalled = 0;
  int hessian_failures = 0;
  double mu_scale = 1.0;
  const auto finish = [&](SolveStatus status, std::string detail, int iters) {
    result.status = status;
    result.detail = std::move(detail);
    result.iterations = iters;
    fill(result, problem, it);
    result.wall_time = seconds_since(start);
    return result;
  };

  for (int iter = 0;; ++iter) {
    const Metrics m = metrics(problem, it);
    const double mu = ipm_detail::complementarity(problem, it);
    if (options.verbose)
      std::fprintf(stderr, "%4d  pobj % .8e  dobj % .8e  pres %.2e  dres %.2e  gap %.2e  mu %.2e  tau %.2e\n",
                   iter, m.pobj, m.dobj, m.primal, m.dual, m.gap, mu, it.tau);
    if (m.primal <= options.tol && m.dual <= options.tol && m.gap <= options.tol)
      return finish(SolveStatus::kConverged, "", iter);
    if (iter >= options.max_iters)
      return finish(SolveStatus::kSlowProgress, "iteration limit reached", iter);
    if (seconds_since(start) > options.time_limit_s)
      return finish(SolveStatus::kTimeLimit, "time limit reached", iter);
    if (it.tau < 1e-12 * std::max(1.0, it.kappa) && mu < options.tol * options.tol)
      return finish(SolveStatus::kError, "tau vanished: problem looks infeasible or unbounded", iter);

    // Predictor.
    Direction dir;
    try {
      dir = ipm_detail::newton_direction(problem, it, pts, false, mu_scale);
    } catch (const NumericallySingularHessian& e) {
      if (++hessian_failures >= kMaxHessianFailures)
        return finish(SolveStatus::kError, std::string("repeated Hessian failure: ") + e.what(), iter);
      mu_scale *= 0.5;
      continue;
    }
    double alpha = 0.0;
    auto trial = line_search(problem, it, dir, kNeighborhood, alpha);
    stalled = (alpha < kStallStep) ? stalled + 1 : 0;
    if (stalled >= kStallLimit)
      return finish(SolveStatus::kSlowProgress, "step length stalled", iter + 1);
    if (!trial) continue;
    it = std::move(trial->it);
    pts = std::move(trial->pts);
    double prox = trial->prox;

    // Correctors.
    for (int k = 0; k < kMaxCorrectors && prox > kCenteredEnough; ++k) {
      Direction cdir;
      try {
        cdir = ipm_detail::newton_direction(problem, it, pts, true, 1.0);
      } catch (const NumericallySingularHessian&) {
        break;
      }
      double calpha = 0.0;
      auto ctrial = line_search(problem, it, cdir, prox, calpha);
      if (!ctrial) break;
      it = std::move(ctrial->it);
      pts = std::move(ctrial->pts);
      prox = ctrial->prox;
    }
    mu_scale = 1.0;
  }
}

}  // namespace sos_cones
