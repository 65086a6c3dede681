#include "quadric/fit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "quadric/errors.hpp"

namespace quadric {

Tolerances default_tolerances(double S, double C, double scale_c, double scale_S,
                              double scale_C) {
  const double c2 = S * S - C * C + 1.0;
  Tolerances tol;
  tol.c = scale_c * (1.0 + std::abs(c2));
  tol.S = scale_S * (1.0 + std::abs(S) + std::abs(C));
  tol.C = scale_C * (1.0 + std::abs(S));
  return tol;
}

QuadricKind classify(double S, double C, const Tolerances& tol) {
  const double c2 = S * S - C * C + 1.0;
  if (std::abs(C) <= tol.C) return QuadricKind::centered_sphere;
  if (std::abs(S) <= tol.S) return QuadricKind::hyperplane;
  if (std::abs(c2 - 1.0) <= tol.c) return QuadricKind::paraboloid;
  return c2 > 1.0 ? QuadricKind::ellipsoid : QuadricKind::hyperboloid_sheet;
}

namespace {

std::optional<QuadricParams> quadric_for(QuadricKind kind, double S, double C,
                                         const std::optional<Eigen::VectorXd>& axis, int dim) {
  QuadricParams q;
  switch (kind) {
    case QuadricKind::centered_sphere: {
      if (S <= 0.0 || !std::isfinite(1.0 / S)) return std::nullopt;
      q.kind = kind;
      q.f = 1.0 / S;
      q.eps = 0.0;
      q.axis = Eigen::VectorXd::Unit(dim, 0);
      return q;
    }
    case QuadricKind::hyperplane: {
      if (!axis || C <= 0.0) return std::nullopt;
      q.kind = kind;
      q.f = 1.0 / C;
      q.eps = 0.0;
      q.axis = *axis;
      return q;
    }
    case QuadricKind::paraboloid: {
      if (!axis || C <= 0.0) return std::nullopt;
      SolutionParams sol{1.0, C, *axis, Branch::plus};
      return solution_to_quadric(sol);
    }
    default: {
      if (!axis || C <= 0.0) return std::nullopt;
      SolutionParams sol{S * S - C * C + 1.0, C, *axis,
                         S >= 0.0 ? Branch::plus : Branch::minus};
      return solution_to_quadric(sol);
    }
  }
}

}  // namespace

FitResult fit_inverse_radial(std::span<const RadialSample> samples, const FitOptions& opts,
                             batch::Exec exec) {
  const std::size_t m = samples.size();
  if (m == 0) errors::degenerate_geometry("no samples");
  const int d = samples[0].x.ambient_dim();
  const int p = d + 1;
  if (m < static_cast<std::size_t>(p)) {
    errors::degenerate_geometry("need at least " + std::to_string(p) + " samples, got " +
                                std::to_string(m));
  }

  for (const RadialSample& s : samples) {
    if (s.x.ambient_dim() != d) errors::parameter_mismatch("mixed sample dimensions");
    if (!(s.rho > 0.0) || !std::isfinite(s.rho)) errors::invalid("radial values must be positive");
  }

  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  batch::for_each_index(m, exec, [&](std::size_t i) {
    const RadialSample& s = samples[i];
    const double weight = opts.weighted ? s.rho : 1.0;
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    A(row, 0) = weight;
    A.row(row).tail(d) = weight * s.x.unit().transpose();
    y[row] = weight / s.rho;
  });

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv[0];
  const double sigma_min = sv[p - 1];
  const double condition = sigma_min > 0.0 ? sigma_max / sigma_min
                                           : std::numeric_limits<double>::infinity();
  if (!(condition < opts.cond_max)) {
    errors::degenerate_geometry("design matrix condition " + std::to_string(condition) +
                                " exceeds " + std::to_string(opts.cond_max) +
                                " (samples concentrated on a great subsphere?)");
  }
  const Eigen::VectorXd beta = svd.solve(y);

  FitResult fit;
  fit.S = beta[0];
  fit.v = beta.tail(d);
  fit.C = fit.v.norm();
  fit.c2 = fit.S * fit.S - fit.v.squaredNorm() + 1.0;
  fit.condition = condition;

  std::vector<double> sq(m);
  batch::for_each_index(m, exec, [&](std::size_t i) {
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    const double r = A.row(row).dot(beta) - y[row];
    sq[i] = r * r;
  });
  const double ssr = batch::pairwise_sum(sq, exec);
  fit.rms_residual = std::sqrt(ssr / static_cast<double>(m));

  // covariance sigma^2 (A^T A)^{-1} = sigma^2 V S^{-2} V^T via the SVD
  const double dof = static_cast<double>(m) - static_cast<double>(p);
  const double sigma2 = dof > 0.0 ? ssr / dof : 0.0;
  const Eigen::MatrixXd& V = svd.matrixV();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    cov += (sigma2 / (sv[j] * sv[j])) * V.col(j) * V.col(j).transpose();
  }
  fit.se_S = std::sqrt(cov(0, 0));
  fit.se_C = std::sqrt(cov.bottomRightCorner(d, d).trace());
  Eigen::VectorXd grad_c2(p);
  grad_c2[0] = 2.0 * fit.S;
  grad_c2.tail(d) = -2.0 * fit.v;
  fit.se_c2 = std::sqrt(grad_c2.dot(cov * grad_c2));

  if (opts.tol_override) {
    fit.tolerances = *opts.tol_override;
  } else {
    // scaled floors plus z standard errors, so that exact data classifies by
    // the exact case split and noisy data by statistically meaningful bands
    fit.tolerances =
        default_tolerances(fit.S, fit.C, opts.tol_scale_c, opts.tol_scale_S, opts.tol_scale_C);
    fit.tolerances.c += opts.z * fit.se_c2;
    fit.tolerances.S += opts.z * fit.se_S;
    fit.tolerances.C += opts.z * fit.se_C;
  }

  fit.kind = classify(fit.S, fit.C, fit.tolerances);
  if (fit.kind != QuadricKind::centered_sphere && fit.C > 0.0) {
    fit.axis = fit.v / fit.C;
  }
  fit.quadric = quadric_for(fit.kind, fit.S, fit.C, fit.axis, d);
  return fit;
}

ResidualReport verify_solution(std::span<const RadialSample> samples, const FitResult& fit,
                               batch::Exec exec) {
  if (samples.empty()) errors::invalid("verify_solution needs samples");
  const int d = samples[0].x.ambient_dim();
  if (fit.v.size() != d) errors::parameter_mismatch("fit/sample dimension mismatch");

  std::vector<SpherePoint> pts;
  pts.reserve(samples.size());
  for (const RadialSample& s : samples) pts.push_back(s.x);

  const ScalarField w = ScalarField::affine(fit.S, fit.v, 1.0);
  const double A = fit.c2 - 1.0;
  const EvalOptions opts{};

  ResidualReport report;
  report.sample_count = samples.size();
  report.params.c2 = fit.c2;
  report.params.k = 1.0;
  report.params.A = A;
  report.params.S = fit.S;
  report.under_determined = samples.size() < static_cast<std::size_t>(d + 1);

  report.systems.push_back(stats_main(w, pts, fit.c2, opts, exec));
  report.systems.push_back(stats_obata_shifted(w, pts, fit.S, opts, exec));
  report.systems.push_back(stats_trace(w, pts, fit.S, opts, exec));

  // S-invariant on the data: w_i = 1/rho_i with the model gradient. For
  // exact quadric data this reproduces the fitted S at every sample; data
  // off the family spreads it out.
  {
    std::vector<double> wdata(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) wdata[i] = 1.0 / samples[i].rho;
    double max_abs = 0.0;
    for (double value : wdata) max_abs = std::max(max_abs, std::abs(value));
    const double floor = kWFloorScale * (1.0 + max_abs);
    std::vector<double> s_vals(samples.size(), 0.0);
    std::vector<char> ok(samples.size(), 0);
    batch::for_each_index(samples.size(), exec, [&](std::size_t i) {
      if (std::abs(wdata[i]) <= floor) return;
      const double g2 = gradient(w, samples[i].x, opts).squaredNorm();
      s_vals[i] = (wdata[i] * wdata[i] + g2 + A) / (2.0 * wdata[i]);
      ok[i] = 1;
    });
    std::vector<double> admissible;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (ok[i]) admissible.push_back(s_vals[i]);
    }
    if (admissible.size() >= 2) {
      SConstancyStats stats;
      stats.admissible = admissible.size();
      stats.mean =
          batch::pairwise_sum(admissible, exec) / static_cast<double>(admissible.size());
      for (double s : admissible) {
        stats.max_deviation = std::max(stats.max_deviation, std::abs(s - stats.mean));
      }
      report.s_stats = stats;
    }
  }

  std::vector<double> rec(samples.size());
  batch::for_each_index(samples.size(), exec, [&](std::size_t i) {
    rec[i] = std::abs(w(samples[i].x) * samples[i].rho - 1.0);
  });
  SystemStats recip;
  recip.system = "reciprocity";
  recip.count = samples.size();
  recip.path = path_name(resolve_path(w, opts));
  const batch::NormStats ns = batch::norm_stats(rec, exec);
  recip.max_norm = ns.max;
  recip.rms = ns.rms;
  report.reciprocity = recip;
  return report;
}

}  // namespace quadric
