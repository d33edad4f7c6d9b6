// Acceptance suite: one PASS/FAIL line per criterion. Expected values come
// from dense linear algebra and explicit Chebyshev evaluation written here,
// not from the library's own fast paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sos_cones/barriers.hpp"
#include "sos_cones/envelope.hpp"
#include "sos_cones/kernels.hpp"
#include "sos_cones/selfcheck.hpp"

using namespace sos_cones;

namespace {

// Pinned tolerances.
constexpr double kGradTol = 1e-6;
constexpr double kHessTol = 1e-5;
constexpr double kNuTol = 1e-8;
constexpr double kHomogTol = 1e-9;
constexpr double kEigBand = 1e-10;
constexpr double kIdentityTol = 1e-9;
constexpr double kArrowInvTol = 1e-8;
constexpr double kSchurTol = 1e-9;
constexpr double kWitnessArrowTol = 1e-6;
constexpr double kWitnessL2Gap = 1e-4;
constexpr double kSosPsdTol = 1e-6;
constexpr double kL1ExtTol = 1e-5;
constexpr double kConservTol = 1e-6;
constexpr double kTightRatio = 0.99;
constexpr int kTightSeedsNeeded = 4;
constexpr double kSolveTol = 1e-7;
constexpr int kMaxIters = 200;
constexpr double kMaxSolveSeconds = 60.0;
constexpr double kPointwiseSlack = 1e-5;
constexpr int kPointwiseSamples = 1000;

constexpr double kC1Seconds = 120.0;
constexpr double kC5Seconds = 30.0;
constexpr double kC6Seconds = 300.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] C%d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double dense_logdet(const MatrixXd& a) {
  Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double min_eig(const MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Fully assembled lifted matrix Pᵀ diag(g∘s) P, written out directly.
MatrixXd lift(const WeightRecord& w, const VectorXd& s) {
  return w.p.transpose() * w.values.cwiseProduct(s).asDiagonal() * w.p;
}

// m x m block matrix whose (i,j) block is lift of `slice(i, j)`.
MatrixXd lift_blocks(const WeightRecord& w, Index m,
                     const std::function<VectorXd(Index, Index)>& slice) {
  const Index l = w.cols;
  MatrixXd out = MatrixXd::Zero(l * m, l * m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) out.block(i * l, j * l, l, l) = lift(w, slice(i, j));
  return out;
}

Index tri(Index m, Index i, Index j) {
  if (i < j) std::swap(i, j);
  Index pos = 0;
  for (Index c = 0; c < j; ++c) pos += m - c;
  return pos + (i - j);
}

// Matrices whose joint positive definiteness is strict membership.
std::vector<MatrixXd> membership_matrices(const ConeOracle& cone, const VectorXd& s) {
  const Index u = cone.num_points();
  const Index m = cone.components();
  const auto comp = [&](Index k) -> VectorXd { return s.segment(k * u, u); };
  std::vector<MatrixXd> out;
  for (const auto& w : cone.weights()) {
    switch (cone.kind()) {
      case ConeKind::kWsos:
        out.push_back(lift(w, s));
        break;
      case ConeKind::kWsosPsd:
        out.push_back(lift_blocks(w, m, [&](Index i, Index j) { return comp(tri(m, i, j)); }));
        break;
      case ConeKind::kWsosL2:
        out.push_back(lift_blocks(w, m, [&](Index i, Index j) -> VectorXd {
          if (i == j) return comp(0);
          if (i == 0) return comp(j);
          if (j == 0) return comp(i);
          return VectorXd::Zero(u);
        }));
        break;
      case ConeKind::kWsosL1:
        for (Index i = 1; i < m; ++i) {
          out.push_back(lift(w, comp(0) + comp(i)));
          out.push_back(lift(w, comp(0) - comp(i)));
        }
        break;
    }
  }
  return out;
}

// Barrier value from the dense matrices above.
double dense_barrier(const ConeOracle& cone, const VectorXd& s) {
  const Index u = cone.num_points();
  const Index m = cone.components();
  double f = 0.0;
  for (const auto& mat : membership_matrices(cone, s)) f -= dense_logdet(mat);
  if (cone.kind() == ConeKind::kWsosL2 || cone.kind() == ConeKind::kWsosL1)
    for (const auto& w : cone.weights()) f += double(m - 2) * dense_logdet(lift(w, s.head(u)));
  return f;
}

struct GridPoint {
  int n, d;
  Index m;
};
const std::vector<GridPoint> kGrid{{1, 2, 3}, {2, 1, 2}, {1, 1, 4}, {2, 2, 2}};
const std::vector<ConeKind> kKinds{ConeKind::kWsos, ConeKind::kWsosPsd, ConeKind::kWsosL2,
                                   ConeKind::kWsosL1};

std::vector<std::unique_ptr<ConeOracle>> grid_cones(std::vector<BasisContext>& keep) {
  std::vector<std::unique_ptr<ConeOracle>> out;
  keep.reserve(kGrid.size());
  for (const auto& g : kGrid) {
    keep.push_back(BasisContext::build(g.n, g.d, 1));
    for (auto k : kKinds) out.push_back(make_cone(k, keep.back(), g.m));
  }
  return out;
}

void criterion1() {
  const auto start = Clock::now();
  std::vector<BasisContext> bases;
  const auto cones = grid_cones(bases);
  std::mt19937_64 rng(101);
  double worst_g = 0.0, worst_h = 0.0;
  for (const auto& cone : cones) {
    for (int t = 0; t < 20; ++t) {
      const VectorXd s = random_interior_point(*cone, rng);
      const auto pt = cone->evaluate(s);
      const VectorXd g = pt->gradient();
      const MatrixXd h = pt->hessian();
      VectorXd fd_g(s.size());
      MatrixXd fd_h(s.size(), s.size());
      for (Index i = 0; i < s.size(); ++i) {
        const double step_g = 1e-5, step_h = 1e-4;
        VectorXd a = s, b = s;
        a(i) += step_g;
        b(i) -= step_g;
        fd_g(i) = (dense_barrier(*cone, a) - dense_barrier(*cone, b)) / (2 * step_g);
        a = s;
        b = s;
        a(i) += step_h;
        b(i) -= step_h;
        fd_h.col(i) = (cone->evaluate(a)->gradient() - cone->evaluate(b)->gradient()) / (2 * step_h);
      }
      worst_g = std::max(worst_g, (g - fd_g).norm() / std::max(1.0, g.norm()));
      worst_h = std::max(worst_h, (h - fd_h).norm() / std::max(1.0, h.norm()));
    }
  }
  const double secs = seconds_since(start);
  report(1, "derivative correctness", worst_g <= kGradTol && worst_h <= kHessTol && secs < kC1Seconds,
         fmt("gradient rel err %.2e", worst_g) + fmt(" (tol %.0e), ", kGradTol) +
             fmt("Hessian rel err %.2e", worst_h) + fmt(" (tol %.0e), ", kHessTol) +
             fmt("%.1f s", secs) + fmt(" (limit %.0f s)", kC1Seconds));
}

double expected_nu(const ConeOracle& cone) {
  double sum_l = 0.0;
  for (const auto& w : cone.weights()) sum_l += double(w.cols);
  switch (cone.kind()) {
    case ConeKind::kWsos: return sum_l;
    case ConeKind::kWsosPsd:
    case ConeKind::kWsosL1: return sum_l * double(cone.components());
    case ConeKind::kWsosL2: return 2.0 * sum_l;
  }
  return 0.0;
}

void criterion2() {
  std::vector<BasisContext> bases;
  const auto cones = grid_cones(bases);
  std::mt19937_64 rng(202);
  double worst_nu = 0.0, worst_param = 0.0, worst_h = 0.0;
  for (const auto& cone : cones) {
    const double nu = expected_nu(*cone);
    worst_param = std::max(worst_param, std::abs(cone->nu() - nu));
    for (int t = 0; t < 20; ++t) {
      const VectorXd s = random_interior_point(*cone, rng);
      worst_nu = std::max(worst_nu, std::abs(barrier_gradient(*cone, s).dot(s) + nu) / nu);
      const double f = barrier_value(*cone, s);
      for (double scale : {0.5, 2.0, 10.0})
        worst_h = std::max(worst_h, std::abs(barrier_value(*cone, scale * s) - f + nu * std::log(scale)));
    }
  }
  report(2, "barrier parameters",
         worst_param == 0.0 && worst_nu <= kNuTol && worst_h <= kHomogTol,
         fmt("reported nu mismatch %.1e, ", worst_param) + fmt("<g,s>+nu rel err %.2e", worst_nu) +
             fmt(" (tol %.0e), ", kNuTol) + fmt("log-homogeneity err %.2e", worst_h) +
             fmt(" (tol %.0e)", kHomogTol));
}

void criterion3() {
  std::vector<BasisContext> bases;
  const auto cones = grid_cones(bases);
  std::mt19937_64 rng(303);
  std::normal_distribution<double> nd;
  int disagreements = 0, compared = 0, banded = 0, inside = 0;
  for (const auto& cone : cones) {
    const VectorXd s0 = cone->initial_point();
    const double radius = s0.norm();
    for (int t = 0; t < 200; ++t) {
      VectorXd dir(s0.size());
      for (Index i = 0; i < dir.size(); ++i) dir(i) = nd(rng);
      // Radii from well inside to well outside the cone.
      const double r = radius * std::pow(10.0, -2.0 + 2.5 * double(t % 20) / 19.0);
      const VectorXd s = s0 + r * dir / dir.norm();
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& mat : membership_matrices(*cone, s)) lo = std::min(lo, min_eig(mat));
      if (std::abs(lo) <= kEigBand) {
        ++banded;
        continue;
      }
      ++compared;
      if (lo > 0) ++inside;
      if (cone->is_feasible(s) != (lo > 0.0)) ++disagreements;
    }
  }
  report(3, "membership brute force", disagreements == 0,
         std::to_string(disagreements) + " disagreements over " + std::to_string(compared) +
             " probes (" + std::to_string(inside) + " interior, " + std::to_string(banded) +
             " inside the eigenvalue band)");
}

void criterion4() {
  std::mt19937_64 rng(404);
  double worst_id = 0.0, worst_inv = 0.0, worst_pi = 0.0;
  int count = 0;
  for (const auto& g : {GridPoint{1, 2, 3}, GridPoint{2, 1, 4}}) {
    const BasisContext ctx = BasisContext::build(g.n, g.d, 2);
    const auto cone = make_cone(ConeKind::kWsosL2, ctx, g.m);
    const Index u = ctx.U();
    for (int t = 0; t < 25; ++t, ++count) {
      const VectorXd s = random_interior_point(*cone, rng);
      const PolyVec pv{Eigen::Map<const MatrixXd>(s.data(), u, g.m)};
      double f = 0.0;
      for (const auto& w : ctx.weights()) {
        const Index l = w.cols;
        const MatrixXd dense = lift_blocks(w, g.m, [&](Index i, Index j) -> VectorXd {
          if (i == j) return pv.coeffs.col(0);
          if (i == 0 || j == 0) return pv.coeffs.col(i + j);
          return VectorXd::Zero(u);
        });
        // Dense block elimination of the trailing diagonal blocks.
        const MatrixXd a = dense.topLeftCorner(l, l);
        const MatrixXd b = dense.topRightCorner(l, l * (g.m - 1));
        const MatrixXd d = dense.bottomRightCorner(l * (g.m - 1), l * (g.m - 1));
        const MatrixXd pi = a - b * d.llt().solve(b.transpose());
        f -= dense_logdet(pi) + dense_logdet(a);

        const MatrixXd pi_lib = schur_pi(w, pv, Cholesky(lambda_sos(w, s.head(u))));
        worst_pi = std::max(worst_pi, (pi_lib - pi).norm() / std::max(1.0, pi.norm()));

        const MatrixXd inv = dense.inverse();
        const MatrixXd inv_lib = block_arrow_inverse_blocks(w, pv).assemble();
        worst_inv = std::max(worst_inv, (inv_lib - inv).norm() / std::max(1.0, inv.norm()));
      }
      const double v = barrier_value(*cone, s);
      worst_id = std::max(worst_id, std::abs(v - f) / std::max(1.0, std::abs(f)));
    }
  }
  report(4, "Schur and arrow identities",
         worst_id <= kIdentityTol && worst_inv <= kArrowInvTol && worst_pi <= kSchurTol,
         std::to_string(count) + " points; barrier identity " + fmt("%.2e", worst_id) +
             fmt(" (tol %.0e), ", kIdentityTol) + "arrow inverse " + fmt("%.2e", worst_inv) +
             fmt(" (tol %.0e), ", kArrowInvTol) + "schur_pi " + fmt("%.2e", worst_pi) +
             fmt(" (tol %.0e)", kSchurTol));
}

// Solve statistics collected for the convergence criterion.
struct SolveRecord {
  std::string label;
  std::string st;
  int iter;
  double time;
};
std::vector<SolveRecord> solves;

SolveOptions solve_options() {
  SolveOptions o;
  o.tol = kSolveTol;
  return o;
}

void criterion5() {
  const auto start = Clock::now();
  const BasisContext basis = BasisContext::build(1, 1, 1);
  MatrixXd q(basis.U(), 3);
  for (Index u = 0; u < basis.U(); ++u) {
    const double x = basis.points()(u, 0);
    q.row(u) << 1 + x * x, 1 - x * x, 2 * x;
  }
  double t_star[2];
  bool converged = true;
  for (int arrow = 0; arrow < 2; ++arrow) {
    const SolveResult r = solve(build_separation(basis, q, arrow == 1).conic, solve_options());
    t_star[arrow] = -r.primal_obj;
    converged = converged && r.status == SolveStatus::kConverged;
    solves.push_back({arrow ? "witness/arrow-psd" : "witness/l2", std::string(status_code(r.status)),
                      r.iterations, r.wall_time});
  }
  const double secs = seconds_since(start);
  report(5, "separation witness",
         converged && t_star[1] <= kWitnessArrowTol && t_star[0] > kWitnessL2Gap && secs < kC5Seconds,
         fmt("arrow-PSD t* = %.3e", t_star[1]) + fmt(" (need <= %.0e), ", kWitnessArrowTol) +
             fmt("L2 t* = %.6f", t_star[0]) + fmt(" (need > %.0e), ", kWitnessL2Gap) +
             fmt("%.2f s", secs));
}

// Independent univariate evaluation: T_k(x) = cos(k acos x).
double cheb_series(const VectorXd& coeffs, double x) {
  double v = 0.0;
  for (Index k = 0; k < coeffs.size(); ++k) v += coeffs(k) * std::cos(double(k) * std::acos(x));
  return v;
}

// Max over samples of |q(x)|_p - q_1(x) - slack(1 + |q_1(x)|), n = 1 only.
double pointwise_violation(const EnvelopeInstance& inst, const VectorXd& envelope) {
  const Index u = inst.U();
  MatrixXd v(u, u);
  for (Index i = 0; i < u; ++i)
    for (Index k = 0; k < u; ++k) v(i, k) = std::cos(double(k) * std::acos(inst.basis->points()(i, 0)));
  const VectorXd c1 = v.fullPivLu().solve(envelope);
  std::mt19937_64 rng(909 + inst.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < kPointwiseSamples; ++t) {
    const double x = unif(rng);
    const double q1 = cheb_series(c1, x);
    VectorXd rest(inst.m - 1);
    for (Index i = 0; i + 1 < inst.m; ++i) rest(i) = cheb_series(inst.polys.coeffs.col(i), x);
    const double norm = inst.p == 1 ? rest.lpNorm<1>() : rest.norm();
    worst = std::max(worst, norm - q1 - kPointwiseSlack * (1.0 + std::abs(q1)));
  }
  return worst;
}

struct Validity {
  int checked = 0;
  int violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
} validity;

ResultRow run(const EnvelopeInstance& inst, Formulation f) {
  const ResultRow r = run_instance(inst, f, solve_options());
  solves.push_back({std::string(formulation_name(f)) + " m=" + std::to_string(inst.m) + " d=" +
                        std::to_string(inst.d) + " seed=" + std::to_string(inst.seed),
                    r.st, r.iter, r.time});
  if (r.st == "co") {
    const double v = pointwise_violation(inst, r.envelope);
    ++validity.checked;
    validity.worst = std::max(validity.worst, v);
    if (v > 0.0) ++validity.violations;
  }
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-12, std::abs(b)); }

void criterion6() {
  const auto start = Clock::now();
  double worst_psd = 0.0, worst_l1 = 0.0;
  bool all_co = true;
  for (Index m : {3, 4}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const EnvelopeInstance i2 = make_instance(1, 2, m, 2, 2, seed);
      const ResultRow sos = run(i2, Formulation::kSos);
      const ResultRow psd = run(i2, Formulation::kSosPsd);
      const EnvelopeInstance i1 = make_instance(1, 2, m, 1, 2, seed);
      const ResultRow l1 = run(i1, Formulation::kSosL1);
      const ResultRow ext = run(i1, Formulation::kSosExt);
      all_co = all_co && sos.st == "co" && psd.st == "co" && l1.st == "co" && ext.st == "co";
      worst_psd = std::max(worst_psd, rel(sos.obj, psd.obj));
      worst_l1 = std::max(worst_l1, rel(l1.obj, ext.obj));
    }
  }
  const double secs = seconds_since(start);
  report(6, "formulation equivalences",
         all_co && worst_psd <= kSosPsdTol && worst_l1 <= kL1ExtTol && secs < kC6Seconds,
         fmt("sos vs sospsd rel diff %.2e", worst_psd) + fmt(" (tol %.0e), ", kSosPsdTol) +
             fmt("sosl1 vs sos_ext rel diff %.2e", worst_l1) + fmt(" (tol %.0e), ", kL1ExtTol) +
             fmt("%.1f s", secs));
}

void criterion7() {
  double worst_equal = 0.0;
  std::string tight;
  int tight_seeds = 0;
  bool all_co = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const EnvelopeInstance eq = make_instance(1, 2, 3, 2, 2, seed);
    const ResultRow l2 = run(eq, Formulation::kSosL2);
    const ResultRow sos = run(eq, Formulation::kSos);
    all_co = all_co && l2.st == "co" && sos.st == "co";
    worst_equal = std::max(worst_equal, sos.obj / l2.obj);

    const EnvelopeInstance hi = make_instance(1, 2, 3, 2, 4, seed);
    const ResultRow l2h = run(hi, Formulation::kSosL2);
    const ResultRow sosh = run(hi, Formulation::kSos);
    all_co = all_co && l2h.st == "co" && sosh.st == "co";
    const double ratio = sosh.obj / l2h.obj;
    if (ratio >= kTightRatio) ++tight_seeds;
    tight += (tight.empty() ? "" : ", ") + fmt("%.5f", ratio);
  }
  report(7, "conservatism and near-tightness",
         all_co && worst_equal <= 1.0 + kConservTol && tight_seeds >= kTightSeedsNeeded,
         fmt("max ratio at d = d_r %.8f", worst_equal) + fmt(" (need <= 1 + %.0e); ", kConservTol) +
             "ratios at d = 2 d_r [" + tight + "], " + std::to_string(tight_seeds) + " of 5 >= " +
             fmt("%.2f", kTightRatio) + " (need " + std::to_string(kTightSeedsNeeded) + ")");
}

void criterion8() {
  int bad = 0, max_iter = 0;
  double max_time = 0.0;
  std::string first_bad;
  for (const auto& s : solves) {
    max_iter = std::max(max_iter, s.iter);
    max_time = std::max(max_time, s.time);
    if (s.st != "co" || s.iter > kMaxIters || s.time > kMaxSolveSeconds) {
      if (bad++ == 0) first_bad = s.label + " -> " + s.st;
    }
  }
  report(8, "solver convergence", bad == 0 && !solves.empty(),
         std::to_string(solves.size()) + " solves, " + std::to_string(bad) + " failing" +
             (first_bad.empty() ? "" : " (first: " + first_bad + ")") + ", max iterations " +
             std::to_string(max_iter) + " (limit " + std::to_string(kMaxIters) + "), max time " +
             fmt("%.3f s", max_time) + fmt(" (limit %.0f s)", kMaxSolveSeconds));
}

void criterion9() {
  report(9, "pointwise validity", validity.checked > 0 && validity.violations == 0,
         std::to_string(validity.checked) + " envelopes x " + std::to_string(kPointwiseSamples) +
             " points, " + std::to_string(validity.violations) + " violating, worst margin " +
             fmt("%.3e", validity.worst) + fmt(" (slack %.0e)", kPointwiseSlack));
}

}  // namespace

int main() {
  std::printf("kernel ISA: %s\n", std::string(kernels::isa_name(kernels::active_isa())).c_str());
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
