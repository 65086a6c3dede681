#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quadric/batch.hpp"
#include "quadric/sphere.hpp"

namespace quadric {

/// Admissibility floor for dividing by w: points with |w| <= floor count as
/// part of the zero set. Scaled to the field magnitude.
inline constexpr double kWFloorScale = 1e-5;

/// 2wH + (w^2 - |grad w|^2 - c2 + 1) I on the unit sphere; zero iff the
/// main system holds at x.
Eigen::MatrixXd main_residual(const ScalarField& w, const SpherePoint& x, double c2,
                             const EvalOptions& opts = {});

/// 2wH + (k^2 w^2 - |grad w|^2 - c2 + 1) I on the sphere of radius 1/k.
Eigen::MatrixXd main_residual_k(const ScalarField& w, const SpherePoint& x, double c2, double k,
                              const EvalOptions& opts = {});

/// H + k^2 w I on the sphere of radius 1/k.
Eigen::MatrixXd obata_residual(const ScalarField& w, const SpherePoint& x, double k = 1.0,
                               const EvalOptions& opts = {});

/// (w^2 + |grad w|^2 + A) / (2w); throws zero_set when |w(x)| is under the
/// floor. Pass w_floor < 0 to use kWFloorScale * (1 + |w(x)|).
double s_field(const ScalarField& w, const SpherePoint& x, double A,
               const EvalOptions& opts = {}, double w_floor = -1.0);

struct SConstancyStats {
  double mean = 0.0;
  double max_deviation = 0.0;
  std::size_t admissible = 0;
};

/// Mean and max deviation of the S-field over samples with |w| above the
/// floor kWFloorScale * (1 + max |w|).
SConstancyStats s_constancy(const ScalarField& w, std::span<const SpherePoint> samples, double A,
                            const EvalOptions& opts = {},
                            batch::Exec exec = batch::Exec::parallel);

/// H + (w - S) I on the unit sphere.
Eigen::MatrixXd obata_shifted_residual(const ScalarField& w, const SpherePoint& x, double S,
                                       const EvalOptions& opts = {});

/// laplacian(w) + n (w - S) on the unit sphere.
double trace_residual(const ScalarField& w, const SpherePoint& x, double S,
                      const EvalOptions& opts = {});

/// e^{2u} (H_u + g_u g_u^T + (1 - |g_u|^2)/2 I) - (c2-1)/2 I with u = log w.
/// The derivatives of u come from the field's own derivative path via the
/// chain rule, so for solutions this equals main_residual / 2 identically.
Eigen::MatrixXd schouten_residual(const ScalarField& w, const SpherePoint& x, double c2,
                                  const EvalOptions& opts = {});

/// Per-system aggregate over a sample set. Matrix systems report the
/// spectral norm max and Frobenius-norm RMS (both frame-invariant); scalar
/// systems use absolute values.
struct SystemStats {
  std::string system;
  double max_norm = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
  std::string path;
};

struct ReportParams {
  std::optional<double> c2;
  std::optional<double> k;
  std::optional<double> A;
  std::optional<double> S;
};

struct ResidualReport {
  std::size_t sample_count = 0;
  ReportParams params;
  std::vector<SystemStats> systems;
  std::optional<SConstancyStats> s_stats;
  std::optional<SystemStats> reciprocity;
  bool under_determined = false;

  double worst() const;  // max over system maxima, s deviation, reciprocity
};

SystemStats stats_main(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                      const EvalOptions& opts = {}, batch::Exec exec = batch::Exec::parallel);
SystemStats stats_main_k(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                       double k, const EvalOptions& opts = {},
                       batch::Exec exec = batch::Exec::parallel);
SystemStats stats_obata_shifted(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                                const EvalOptions& opts = {},
                                batch::Exec exec = batch::Exec::parallel);
SystemStats stats_trace(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                        const EvalOptions& opts = {}, batch::Exec exec = batch::Exec::parallel);
SystemStats stats_schouten(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                           const EvalOptions& opts = {},
                           batch::Exec exec = batch::Exec::parallel);
/// |wbar^2 + |grad wbar|^2 - C2| with wbar = w - S.
SystemStats stats_norm_identity(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                                double C2, const EvalOptions& opts = {},
                                batch::Exec exec = batch::Exec::parallel);

}  // namespace quadric
