#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "quadric/quadric.hpp"
#include "quadric/rng.hpp"
#include "quadric/sphere.hpp"

namespace testutil {

using quadric::Branch;
using quadric::SolutionParams;
using quadric::SpherePoint;
using quadric::SplitMix64;
using quadric::TangentFrame;

inline Eigen::VectorXd random_unit(SplitMix64& rng, int dim) { return rng.unit_vector(dim); }

/// Bitwise equality of dense Eigen objects (for determinism contracts).
template <typename A, typename B>
bool exact_equal(const A& a, const B& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return ((a - b).array() == 0.0).all();
}

/// Random orthogonal matrix via Householder QR with a fixed sign convention.
inline Eigen::MatrixXd random_orthogonal(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

/// A second orthonormal frame at the same base point: the deterministic
/// frame columns mixed by a random in-tangent-space rotation.
inline TangentFrame rotated_frame(const TangentFrame& frame, std::uint64_t seed) {
  const int n = frame.n();
  const Eigen::MatrixXd rot = random_orthogonal(n, seed);
  return TangentFrame{frame.base, frame.basis * rot};
}

enum class FamilyCase { a, b, c_interior, c_boundary };

/// Seeded solution-family parameter sets spanning the ellipsoid, paraboloid,
/// hyperboloid-interior and hyperplane-boundary cases. The
/// amplitude ranges keep |C| (|S| + |C|) small enough that the h^2 truncation
/// of the finite-difference Hessian stays within the acceptance budget.
inline SolutionParams draw_solution(int index, std::uint64_t seed, int dimension = 0) {
  SplitMix64 rng(SplitMix64::stream_seed(seed, static_cast<std::uint64_t>(index)));
  const FamilyCase fc = static_cast<FamilyCase>(index % 4);
  const int n = dimension > 0 ? dimension : 2 + ((index / 4) % 4);

  SolutionParams sol;
  sol.branch = Branch::plus;
  switch (fc) {
    case FamilyCase::a: {
      sol.c2 = 1.0 + 1e-3 + (9.0 - 1e-3) * rng.uniform01();
      const double s0 = std::sqrt(sol.c2 - 1.0);
      sol.C = (0.03 + 0.27 * rng.uniform01()) / (1.0 + s0);
      break;
    }
    case FamilyCase::b:
      sol.c2 = 1.0;
      sol.C = 0.05 + 0.25 * rng.uniform01();
      break;
    case FamilyCase::c_interior:
      sol.c2 = 0.9 + 0.09 * rng.uniform01();
      sol.C = std::sqrt(1.0 - sol.c2) + 0.01 + 0.09 * rng.uniform01();
      if (rng.uniform01() < 0.5) sol.branch = Branch::minus;
      break;
    case FamilyCase::c_boundary:
      sol.c2 = 0.9 + 0.09 * rng.uniform01();
      sol.C = std::sqrt(1.0 - sol.c2);
      break;
  }
  if (rng.uniform01() < 0.5) sol.C = -sol.C;
  sol.xi = random_unit(rng, n + 1);
  return sol;
}

inline std::vector<SpherePoint> unit_points(int n, std::size_t count, std::uint64_t seed) {
  return quadric::sample_sphere(n, count, quadric::SampleStrategy::uniform_random, seed);
}

}  // namespace testutil
