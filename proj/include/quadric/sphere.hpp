#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace quadric {

/// A point on the sphere of the given radius in R^{n+1}, n >= 2.
struct SpherePoint {
  Eigen::VectorXd coords;
  double radius = 1.0;

  SpherePoint(Eigen::VectorXd c, double r = 1.0);

  /// Sphere dimension n (ambient dimension minus one).
  int n() const { return static_cast<int>(coords.size()) - 1; }
  int ambient_dim() const { return static_cast<int>(coords.size()); }

  /// Unit direction coords / radius.
  Eigen::VectorXd unit() const { return coords / radius; }

  /// Same direction on a sphere of another radius.
  SpherePoint rescaled(double new_radius) const;
};

/// Radial projection of a nonzero ambient vector onto the radius-r sphere.
SpherePoint project_to_sphere(const Eigen::VectorXd& v, double radius = 1.0);

/// Orthonormal basis of the tangent space at a point. Construction is
/// deterministic (largest-component pivot, then Gram-Schmidt over the
/// remaining coordinate directions), so repeated calls agree exactly.
struct TangentFrame {
  SpherePoint base;
  Eigen::MatrixXd basis;  // (n+1) x n, columns orthonormal and orthogonal to base

  int n() const { return static_cast<int>(basis.cols()); }
};

TangentFrame tangent_frame(const SpherePoint& x);

enum class SampleStrategy { fibonacci, uniform_random };

/// `count` points on the unit n-sphere. Fibonacci lattice is quasi-uniform
/// and supported for n = 2 only; uniform_random works in any dimension via
/// normalized Gaussian vectors with one stream per index.
std::vector<SpherePoint> sample_sphere(int n, std::size_t count, SampleStrategy strategy,
                                       std::uint64_t seed);

/// Scalar field on a sphere: either closed-form affine w(x) = offset + <x, v>
/// (x the ambient point of the sphere) or an arbitrary total evaluator.
class ScalarField {
 public:
  using Evaluator = std::function<double(const SpherePoint&)>;

  static ScalarField affine(double offset, Eigen::VectorXd v, double radius = 1.0);
  static ScalarField constant(double value, int ambient_dim, double radius = 1.0);
  static ScalarField generic(Evaluator eval, int ambient_dim, double radius = 1.0);

  double operator()(const SpherePoint& x) const;

  bool is_affine() const { return affine_; }
  double radius() const { return radius_; }
  int ambient_dim() const { return ambient_dim_; }
  double offset() const;
  const Eigen::VectorXd& linear() const;

  /// Degree-0 homogeneous extension W(y) = w(radius * y / |y|).
  double extension(const Eigen::VectorXd& y) const;

 private:
  ScalarField() = default;

  bool affine_ = false;
  double offset_ = 0.0;
  Eigen::VectorXd v_;
  Evaluator eval_;
  double radius_ = 1.0;
  int ambient_dim_ = 0;
};

enum class DerivPath { automatic, analytic, finite_difference };

/// Central-difference step sizes for the degree-0 homogeneous extension.
struct FdSteps {
  double gradient = 1e-4;
  double hessian = 1e-3;
};

struct EvalOptions {
  DerivPath path = DerivPath::automatic;
  FdSteps fd{};
};

/// Actual path taken for a field under the given options.
DerivPath resolve_path(const ScalarField& w, const EvalOptions& opts);
const char* path_name(DerivPath path);

/// Spherical gradient at x as an ambient vector tangent to the sphere.
Eigen::VectorXd gradient(const ScalarField& w, const SpherePoint& x,
                         const EvalOptions& opts = {});

/// Covariant Hessian restricted to the frame: H(i,j) = (Hess w)(b_i, b_j).
/// Analytic path (affine fields): -(<x, v> / r^2) * I. Finite-difference
/// path: ambient central differences of the extension, then B^T M B; the
/// second-fundamental-form correction vanishes because the extension's
/// radial derivative is zero.
Eigen::MatrixXd hessian(const ScalarField& w, const SpherePoint& x, const TangentFrame& frame,
                        const EvalOptions& opts = {});

/// Laplace-Beltrami operator: trace of the Hessian in any tangent frame.
double laplacian(const ScalarField& w, const SpherePoint& x, const EvalOptions& opts = {});

}  // namespace quadric
