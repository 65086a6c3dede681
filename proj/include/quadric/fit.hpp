#pragma once

#include <optional>
#include <span>

#include <Eigen/Core>

#include "quadric/quadric.hpp"
#include "quadric/residuals.hpp"

namespace quadric {

/// Absolute classification bands around the exact case split.
struct Tolerances {
  double c = 0.0;  // |c2 - 1| band for the paraboloid case
  double S = 0.0;  // |S| band for the hyperplane case
  double C = 0.0;  // |C| band for the excluded centered-sphere case
};

/// Magnitude-scaled default bands (no statistical term).
Tolerances default_tolerances(double S, double C, double scale_c = 1e-6, double scale_S = 1e-6,
                              double scale_C = 1e-6);

/// Case split on c2 = S^2 - C^2 + 1: centered sphere when |C| is under the
/// band, hyperplane when |S| is, paraboloid when c2 is within the band of 1,
/// otherwise ellipsoid (c2 > 1) or hyperboloid sheet (c2 < 1).
QuadricKind classify(double S, double C, const Tolerances& tol);

struct FitOptions {
  bool weighted = false;     // weight squared residuals by rho_i^2
  double cond_max = 1e8;     // rank-deficiency threshold on the design matrix
  double z = 4.0;            // width of the statistical band in standard errors
  double tol_scale_c = 1e-6;
  double tol_scale_S = 1e-6;
  double tol_scale_C = 1e-6;
  std::optional<Tolerances> tol_override;  // absolute bands, bypasses the above
};

struct FitResult {
  double S = 0.0;
  Eigen::VectorXd v;  // C * xi
  double C = 0.0;
  std::optional<Eigen::VectorXd> axis;  // v / |v|, absent for centered spheres
  double c2 = 0.0;                      // S^2 - |v|^2 + 1
  QuadricKind kind = QuadricKind::centered_sphere;
  double rms_residual = 0.0;  // on 1/rho values
  double condition = 0.0;     // singular-value ratio of the design matrix
  Tolerances tolerances;      // effective bands used for classification
  double se_S = 0.0, se_C = 0.0, se_c2 = 0.0;
  std::optional<QuadricParams> quadric;
};

/// Linear least squares for (S, v) minimizing sum (S + <x_i, v> - 1/rho_i)^2,
/// solved by singular value decomposition (orthogonal factorization with
/// exact condition reporting). Classification bands combine the scaled
/// defaults with z standard errors from the fit covariance.
FitResult fit_inverse_radial(std::span<const RadialSample> samples, const FitOptions& opts = {},
                             batch::Exec exec = batch::Exec::parallel);

/// Residual diagnostics of a fitted solution against the samples: the main
/// system with the fitted c2, S-constancy with A = c2 - 1, the shifted Obata
/// system and its trace with the fitted S, and the per-sample reciprocity
/// error |w(x_i) rho_i - 1|.
ResidualReport verify_solution(std::span<const RadialSample> samples, const FitResult& fit,
                               batch::Exec exec = batch::Exec::parallel);

}  // namespace quadric
