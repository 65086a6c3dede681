#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "quadric/batch.hpp"
#include "quadric/sphere.hpp"

namespace quadric {

enum class Branch { plus, minus };

/// Parameters of the affine solution family w = S + C<x, xi> on the unit
/// sphere, with S = branch * sqrt(C^2 + c2 - 1). For c2 >= 1 only the plus
/// branch is admissible (the solution positive somewhere has S > 0).
struct SolutionParams {
  double c2 = 2.0;
  double C = 1.0;
  Eigen::VectorXd xi;
  Branch branch = Branch::plus;

  double S() const;
  void validate() const;

  /// The induced field w(x) = S + <x, C xi> on the unit sphere.
  ScalarField field() const;
};

enum class QuadricKind { ellipsoid, paraboloid, hyperboloid_sheet, hyperplane, centered_sphere };

const char* kind_name(QuadricKind kind);

/// Canonical radial-function parameters rho(x) = f / (1 - eps <x, axis>)
/// with eps >= 0. For hyperboloid sheets f is signed: f > 0 selects the
/// sheet around the origin focus, f < 0 the opposite sheet. The hyperplane
/// stores rho(x) = f / <x, axis>, and centered_sphere marks the excluded
/// constant branch (rho = f on all of the sphere).
struct QuadricParams {
  QuadricKind kind = QuadricKind::ellipsoid;
  double f = 1.0;
  double eps = 0.0;
  Eigen::VectorXd axis;

  void validate() const;
  int ambient_dim() const { return static_cast<int>(axis.size()); }
};

/// Center, second focus and semi-axes of a central quadric (the first focus
/// is the origin).
struct GeometricElements {
  Eigen::VectorXd center;
  Eigen::VectorXd second_focus;
  double semi_major = 0.0;
  double semi_minor = 0.0;
};

/// Margin (relative to the denominator scale) inside which directions near
/// the boundary of the positivity domain are rejected.
inline constexpr double kDomainMargin = 1e-9;

/// Per-direction rejection cap in surface sampling; exceeding it indicates
/// an acceptance rate below ~1e-3.
inline constexpr std::size_t kMaxRejects = 100000;

QuadricParams solution_to_quadric(const SolutionParams& sol);
SolutionParams quadric_to_solution(const QuadricParams& q);

/// Radial value f / (1 - eps <x, axis>) (or f / <x, axis> for hyperplanes);
/// throws a domain error outside the positivity domain.
double radial(const QuadricParams& q, const SpherePoint& x);

/// True iff x lies in the positivity domain with margin.
bool domain_indicator(const QuadricParams& q, const SpherePoint& x);

struct RadialSample {
  SpherePoint x;  // unit direction
  double rho;     // positive radial value
};

/// Directions drawn uniformly on the positivity domain by per-index
/// rejection sampling, paired with their radial values. Deterministic given
/// the seed; parallel generation equals sequential output.
std::vector<RadialSample> sample_radial(const QuadricParams& q, std::size_t count,
                                        std::uint64_t seed,
                                        batch::Exec exec = batch::Exec::parallel);

/// Surface points rho(x) x of the quadric.
std::vector<Eigen::VectorXd> sample_surface(const QuadricParams& q, std::size_t count,
                                            std::uint64_t seed,
                                            batch::Exec exec = batch::Exec::parallel);

GeometricElements geometric_elements(const QuadricParams& q);

}  // namespace quadric
