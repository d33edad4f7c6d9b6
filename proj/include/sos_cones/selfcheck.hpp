#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sos_cones/barriers.hpp"

/// Quick numerical self-checks behind the `selftest` command: finite
/// differences, homogeneity identities, dense-eigenvalue membership and
/// scalar / SIMD kernel agreement on a small grid.
namespace sos_cones {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest observed error (or disagreement count)
  double tolerance = 0.0;
  std::string detail;
};

/// Perturbs the cone's initial point by `spread` times its sup norm in random
/// Gaussian directions, halving the spread until the result is interior, and
/// returns the midpoint between that point and the initial point.
VectorXd random_interior_point(const ConeOracle& cone, std::mt19937_64& rng, double spread = 0.3);

/// Dense matrices whose joint positive definiteness is equivalent to strict
/// membership: the lifted matrices per weight, and for the L1 cone
/// Lambda(s_1 + s_i) and Lambda(s_1 - s_i).
std::vector<MatrixXd> dense_membership_matrices(const ConeOracle& cone, const VectorXd& s);

std::vector<CheckResult> run_selftest(std::uint64_t seed = 1);

}  // namespace sos_cones
