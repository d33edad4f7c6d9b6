#include "sos_cones/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

#include "sos_cones/kernels.hpp"

namespace sos_cones {

namespace {

constexpr ConeKind kAllKinds[] = {ConeKind::kWsos, ConeKind::kWsosPsd, ConeKind::kWsosL2,
                                  ConeKind::kWsosL1};

VectorXd gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

double min_eigenvalue(const MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

struct GridCase {
  int n, d;
  Index m;
};

// Calls fn(label, cone, rng) for every cone on the grid.
void for_each_cone(std::uint64_t seed,
                   const std::function<void(const std::string&, const ConeOracle&, std::mt19937_64&)>& fn) {
  const GridCase grid[] = {{1, 2, 3}, {2, 1, 2}, {1, 1, 4}};
  std::mt19937_64 rng(seed);
  for (const auto& g : grid) {
    const BasisContext basis = BasisContext::build(g.n, g.d, seed);
    for (ConeKind kind : kAllKinds) {
      const auto cone = make_cone(kind, basis, g.m);
      const std::string label = std::string(cone_kind_name(kind)) + " n=" + std::to_string(g.n) +
                                " d=" + std::to_string(g.d) + " m=" + std::to_string(g.m);
      fn(label, *cone, rng);
    }
  }
}

CheckResult finish(std::string name, double worst, double tol, std::string where) {
  CheckResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.tolerance = tol;
  r.passed = worst <= tol;
  r.detail = std::move(where);
  return r;
}

constexpr int kPointsPerCone = 5;

}  // namespace

VectorXd random_interior_point(const ConeOracle& cone, std::mt19937_64& rng, double spread) {
  const VectorXd base = cone.initial_point();
  const double scale = base.lpNorm<Eigen::Infinity>();
  for (int attempt = 0; attempt < 60; ++attempt, spread *= 0.5) {
    const VectorXd s = base + spread * scale * gaussian(base.size(), rng);
    // The midpoint keeps half of the starting point's margin to the boundary.
    if (cone.is_feasible(s)) return 0.5 * (base + s);
  }
  return base;
}

std::vector<MatrixXd> dense_membership_matrices(const ConeOracle& cone, const VectorXd& s) {
  const Index num_u = cone.num_points();
  const Index m = cone.components();
  std::vector<MatrixXd> out;
  for (const auto& w : cone.weights()) {
    switch (cone.kind()) {
      case ConeKind::kWsos: out.push_back(lambda_sos(w, s)); break;
      case ConeKind::kWsosPsd: {
        PolyMat mat(m, num_u);
        mat.coeffs = Eigen::Map<const MatrixXd>(s.data(), num_u, sdim(m));
        out.push_back(lambda_psd(w, mat));
        break;
      }
      case ConeKind::kWsosL2:
        out.push_back(lambda_l2(w, PolyVec{Eigen::Map<const MatrixXd>(s.data(), num_u, m)}));
        break;
      case ConeKind::kWsosL1: {
        const VectorXd first = s.head(num_u);
        for (Index i = 1; i < m; ++i) {
          out.push_back(lambda_sos(w, first + s.segment(i * num_u, num_u)));
          out.push_back(lambda_sos(w, first - s.segment(i * num_u, num_u)));
        }
        break;
      }
    }
  }
  return out;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> results;

  {
    double worst_g = 0.0, worst_h = 0.0;
    std::string at_g, at_h;
    for_each_cone(seed, [&](const std::string& label, const ConeOracle& cone, std::mt19937_64& rng) {
      for (int k = 0; k < kPointsPerCone; ++k) {
        const VectorXd s = random_interior_point(cone, rng);
        const auto pt = cone.evaluate(s);
        const VectorXd g = pt->gradient();
        const MatrixXd& h = pt->hessian();
        VectorXd g_fd(s.size());
        MatrixXd h_fd(s.size(), s.size());
        for (Index i = 0; i < s.size(); ++i) {
          VectorXd e = VectorXd::Zero(s.size());
          e(i) = 1e-5;
          g_fd(i) = (cone.evaluate(s + e)->value() - cone.evaluate(s - e)->value()) / 2e-5;
          e(i) = 1e-4;
          h_fd.col(i) = (cone.evaluate(s + e)->gradient() - cone.evaluate(s - e)->gradient()) / 2e-4;
        }
        const double eg = (g - g_fd).norm() / g.norm();
        const double eh = (h - h_fd).norm() / h.norm();
        if (eg > worst_g) { worst_g = eg; at_g = label; }
        if (eh > worst_h) { worst_h = eh; at_h = label; }
      }
    });
    results.push_back(finish("gradient vs finite differences", worst_g, 1e-6, at_g));
    results.push_back(finish("hessian vs finite differences", worst_h, 1e-5, at_h));
  }

  {
    double worst_nu = 0.0, worst_log = 0.0, worst_inv = 0.0;
    std::string at_nu, at_log, at_inv;
    for_each_cone(seed + 1, [&](const std::string& label, const ConeOracle& cone, std::mt19937_64& rng) {
      for (int k = 0; k < kPointsPerCone; ++k) {
        const VectorXd s = random_interior_point(cone, rng);
        const auto pt = cone.evaluate(s);
        const double e_nu = std::abs(pt->gradient().dot(s) + cone.nu()) / cone.nu();
        if (e_nu > worst_nu) { worst_nu = e_nu; at_nu = label; }
        for (double t : {0.5, 2.0, 10.0}) {
          const double e = std::abs(cone.evaluate(t * s)->value() - pt->value() + cone.nu() * std::log(t));
          if (e > worst_log) { worst_log = e; at_log = label; }
        }
        const VectorXd r = gaussian(s.size(), rng);
        const double e_inv = (pt->hessian() * pt->hessian_inverse_apply(r) - r).norm() / r.norm();
        if (e_inv > worst_inv) { worst_inv = e_inv; at_inv = label; }
      }
    });
    results.push_back(finish("<grad F(s), s> = -nu", worst_nu, 1e-8, at_nu));
    results.push_back(finish("F(ts) = F(s) - nu log t", worst_log, 1e-9, at_log));
    results.push_back(finish("H (H^-1 r) = r", worst_inv, 1e-7, at_inv));
  }

  {
    double disagreements = 0.0;
    std::string where;
    for_each_cone(seed + 2, [&](const std::string& label, const ConeOracle& cone, std::mt19937_64& rng) {
      const VectorXd base = cone.initial_point();
      const double scale = base.lpNorm<Eigen::Infinity>();
      for (int k = 0; k < 40; ++k) {
        const double spread = (k % 4 == 0) ? 0.1 : (k % 4 == 1) ? 0.5 : (k % 4 == 2) ? 1.0 : 3.0;
        const VectorXd s = base + spread * scale * gaussian(base.size(), rng);
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& mat : dense_membership_matrices(cone, s))
          lo = std::min(lo, min_eigenvalue(mat) / std::max(1.0, mat.diagonal().cwiseAbs().maxCoeff()));
        if (std::abs(lo) <= 1e-10) continue;
        if ((lo > 0.0) != cone.is_feasible(s)) {
          disagreements += 1.0;
          where = label;
        }
      }
    });
    results.push_back(finish("membership vs dense eigenvalues", disagreements, 0.0, where));
  }

  {
    using namespace kernels;
    CheckResult r;
    r.name = "scalar vs " + std::string(isa_name(Isa::kAvx2)) + " kernels";
    r.tolerance = 1e-12;
    if (!isa_available(Isa::kAvx2)) {
      r.passed = true;
      r.detail = "avx2 unavailable; scalar only";
    } else {
      std::mt19937_64 rng(seed + 3);
      const KernelTable& a = scalar_table();
      const KernelTable& b = avx2_table();
      double worst = 0.0;
      for (std::size_t rows : {1u, 3u, 7u, 16u, 33u}) {
        for (std::size_t cols : {1u, 2u, 5u, 9u}) {
          const VectorXd p = gaussian(static_cast<Index>(rows * cols), rng);
          const VectorXd q = gaussian(static_cast<Index>(rows * cols), rng);
          const VectorXd v = gaussian(static_cast<Index>(rows), rng);
          VectorXd ga(cols * cols), gb(cols * cols), ra(rows), rb(rows);
          a.weighted_gram(p.data(), rows, cols, v.data(), ga.data());
          b.weighted_gram(p.data(), rows, cols, v.data(), gb.data());
          a.rowwise_dot(p.data(), q.data(), rows, cols, ra.data());
          b.rowwise_dot(p.data(), q.data(), rows, cols, rb.data());
          VectorXd ha = v.head(rows), hb = v.head(rows);
          a.hadamard_axpy(0.7, p.data(), q.data(), rows, ha.data());
          b.hadamard_axpy(0.7, p.data(), q.data(), rows, hb.data());
          const double da = a.dot(p.data(), q.data(), rows * cols);
          const double db = b.dot(p.data(), q.data(), rows * cols);
          const double scale = 1.0 + p.norm() * q.norm();
          worst = std::max({worst, (ga - gb).norm() / scale, (ra - rb).norm() / scale,
                            (ha - hb).norm() / scale, std::abs(da - db) / scale});
        }
      }
      r.worst = worst;
      r.passed = worst <= r.tolerance;
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace sos_cones
