#include "quadric/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "quadric/errors.hpp"

namespace quadric {

namespace {

void require_radius(const ScalarField& w, double radius, const char* what) {
  if (std::abs(w.radius() - radius) > 1e-12 * radius) {
    errors::parameter_mismatch(std::string(what) + ": field radius " +
                               std::to_string(w.radius()) + " != required " +
                               std::to_string(radius));
  }
}

struct PointDerivatives {
  double value;
  Eigen::VectorXd grad;   // tangential, ambient coordinates
  Eigen::MatrixXd hess;   // in the deterministic frame at x
  Eigen::VectorXd grad_frame;  // frame components of grad
};

PointDerivatives derivatives(const ScalarField& w, const SpherePoint& x,
                             const EvalOptions& opts) {
  const TangentFrame frame = tangent_frame(x);
  PointDerivatives d;
  d.value = w(x);
  d.grad = gradient(w, x, opts);
  d.hess = hessian(w, x, frame, opts);
  d.grad_frame = frame.basis.transpose() * d.grad;
  return d;
}

double spectral_norm(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }

template <typename MatrixFn>
SystemStats matrix_stats(const char* name, const ScalarField& w,
                         std::span<const SpherePoint> pts, const EvalOptions& opts,
                         batch::Exec exec, MatrixFn&& fn) {
  std::vector<double> spec(pts.size());
  std::vector<double> frob(pts.size());
  batch::for_each_index(pts.size(), exec, [&](std::size_t i) {
    const Eigen::MatrixXd r = fn(pts[i]);
    spec[i] = spectral_norm(r);
    frob[i] = frobenius_norm(r);
  });
  SystemStats stats;
  stats.system = name;
  stats.count = pts.size();
  stats.path = path_name(resolve_path(w, opts));
  double mx = 0.0;
  for (double s : spec) mx = std::max(mx, s);
  stats.max_norm = mx;
  std::vector<double> squares(frob.size());
  for (std::size_t i = 0; i < frob.size(); ++i) squares[i] = frob[i] * frob[i];
  stats.rms = pts.empty() ? 0.0
                          : std::sqrt(batch::pairwise_sum(squares, exec) /
                                      static_cast<double>(pts.size()));
  return stats;
}

template <typename ScalarFn>
SystemStats scalar_stats(const char* name, const ScalarField& w,
                         std::span<const SpherePoint> pts, const EvalOptions& opts,
                         batch::Exec exec, ScalarFn&& fn) {
  std::vector<double> vals(pts.size());
  batch::for_each_index(pts.size(), exec,
                        [&](std::size_t i) { vals[i] = std::abs(fn(pts[i])); });
  SystemStats stats;
  stats.system = name;
  stats.count = pts.size();
  stats.path = path_name(resolve_path(w, opts));
  const batch::NormStats ns = batch::norm_stats(vals, exec);
  stats.max_norm = ns.max;
  stats.rms = ns.rms;
  return stats;
}

}  // namespace

Eigen::MatrixXd main_residual(const ScalarField& w, const SpherePoint& x, double c2,
                             const EvalOptions& opts) {
  require_radius(w, 1.0, "main_residual");
  return main_residual_k(w, x, c2, 1.0, opts);
}

Eigen::MatrixXd main_residual_k(const ScalarField& w, const SpherePoint& x, double c2, double k,
                              const EvalOptions& opts) {
  if (k <= 0.0) errors::invalid("k must be positive");
  require_radius(w, 1.0 / k, "main_residual_k");
  const PointDerivatives d = derivatives(w, x, opts);
  const int n = x.n();
  const double scalar = k * k * d.value * d.value - d.grad.squaredNorm() - c2 + 1.0;
  return 2.0 * d.value * d.hess + scalar * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd obata_residual(const ScalarField& w, const SpherePoint& x, double k,
                               const EvalOptions& opts) {
  if (k <= 0.0) errors::invalid("k must be positive");
  require_radius(w, 1.0 / k, "obata_residual");
  const TangentFrame frame = tangent_frame(x);
  const Eigen::MatrixXd h = hessian(w, x, frame, opts);
  return h + k * k * w(x) * Eigen::MatrixXd::Identity(x.n(), x.n());
}

double s_field(const ScalarField& w, const SpherePoint& x, double A, const EvalOptions& opts,
               double w_floor) {
  const double value = w(x);
  const double floor = w_floor >= 0.0 ? w_floor : kWFloorScale * (1.0 + std::abs(value));
  if (std::abs(value) <= floor) {
    errors::zero_set("point lies in the zero set of w (|w| = " + std::to_string(std::abs(value)) +
                     ")");
  }
  const Eigen::VectorXd g = gradient(w, x, opts);
  return (value * value + g.squaredNorm() + A) / (2.0 * value);
}

SConstancyStats s_constancy(const ScalarField& w, std::span<const SpherePoint> samples, double A,
                            const EvalOptions& opts, batch::Exec exec) {
  std::vector<double> values(samples.size());
  batch::for_each_index(samples.size(), exec, [&](std::size_t i) { values[i] = w(samples[i]); });
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  const double floor = kWFloorScale * (1.0 + max_abs);

  std::vector<double> s_vals(samples.size(), 0.0);
  std::vector<char> ok(samples.size(), 0);
  batch::for_each_index(samples.size(), exec, [&](std::size_t i) {
    if (std::abs(values[i]) <= floor) return;
    s_vals[i] = s_field(w, samples[i], A, opts, floor);
    ok[i] = 1;
  });

  std::vector<double> admissible;
  admissible.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (ok[i]) admissible.push_back(s_vals[i]);
  }
  if (admissible.size() < 2) {
    errors::degenerate_geometry("s_constancy needs at least 2 samples outside the zero set");
  }
  SConstancyStats stats;
  stats.admissible = admissible.size();
  stats.mean = batch::pairwise_sum(admissible, exec) / static_cast<double>(admissible.size());
  double dev = 0.0;
  for (double s : admissible) dev = std::max(dev, std::abs(s - stats.mean));
  stats.max_deviation = dev;
  return stats;
}

Eigen::MatrixXd obata_shifted_residual(const ScalarField& w, const SpherePoint& x, double S,
                                       const EvalOptions& opts) {
  require_radius(w, 1.0, "obata_shifted_residual");
  const TangentFrame frame = tangent_frame(x);
  const Eigen::MatrixXd h = hessian(w, x, frame, opts);
  return h + (w(x) - S) * Eigen::MatrixXd::Identity(x.n(), x.n());
}

double trace_residual(const ScalarField& w, const SpherePoint& x, double S,
                      const EvalOptions& opts) {
  require_radius(w, 1.0, "trace_residual");
  return laplacian(w, x, opts) + static_cast<double>(x.n()) * (w(x) - S);
}

Eigen::MatrixXd schouten_residual(const ScalarField& w, const SpherePoint& x, double c2,
                                  const EvalOptions& opts) {
  require_radius(w, 1.0, "schouten_residual");
  const PointDerivatives d = derivatives(w, x, opts);
  if (d.value <= 0.0) {
    errors::positivity("schouten_residual requires w > 0, got w = " + std::to_string(d.value));
  }
  const int n = x.n();
  // u = log w: g_u = g/w, H_u = H/w - g_u g_u^T, e^{2u} = w^2
  const Eigen::VectorXd gu = d.grad_frame / d.value;
  const Eigen::MatrixXd hu = d.hess / d.value - gu * gu.transpose();
  const Eigen::MatrixXd inner =
      hu + gu * gu.transpose() +
      0.5 * (1.0 - gu.squaredNorm()) * Eigen::MatrixXd::Identity(n, n);
  return d.value * d.value * inner - 0.5 * (c2 - 1.0) * Eigen::MatrixXd::Identity(n, n);
}

double ResidualReport::worst() const {
  double m = 0.0;
  for (const auto& s : systems) m = std::max(m, s.max_norm);
  if (s_stats) m = std::max(m, s_stats->max_deviation);
  if (reciprocity) m = std::max(m, reciprocity->max_norm);
  return m;
}

SystemStats stats_main(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                      const EvalOptions& opts, batch::Exec exec) {
  return matrix_stats("main", w, pts, opts, exec,
                      [&](const SpherePoint& x) { return main_residual(w, x, c2, opts); });
}

SystemStats stats_main_k(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                       double k, const EvalOptions& opts, batch::Exec exec) {
  return matrix_stats("main_k", w, pts, opts, exec,
                      [&](const SpherePoint& x) { return main_residual_k(w, x, c2, k, opts); });
}

SystemStats stats_obata_shifted(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                                const EvalOptions& opts, batch::Exec exec) {
  return matrix_stats("obata_shifted", w, pts, opts, exec, [&](const SpherePoint& x) {
    return obata_shifted_residual(w, x, S, opts);
  });
}

SystemStats stats_trace(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                        const EvalOptions& opts, batch::Exec exec) {
  return scalar_stats("trace", w, pts, opts, exec,
                      [&](const SpherePoint& x) { return trace_residual(w, x, S, opts); });
}

SystemStats stats_schouten(const ScalarField& w, std::span<const SpherePoint> pts, double c2,
                           const EvalOptions& opts, batch::Exec exec) {
  return matrix_stats("schouten", w, pts, opts, exec,
                      [&](const SpherePoint& x) { return schouten_residual(w, x, c2, opts); });
}

SystemStats stats_norm_identity(const ScalarField& w, std::span<const SpherePoint> pts, double S,
                                double C2, const EvalOptions& opts, batch::Exec exec) {
  return scalar_stats("norm_identity", w, pts, opts, exec, [&](const SpherePoint& x) {
    const double wbar = w(x) - S;
    const Eigen::VectorXd g = gradient(w, x, opts);
    return wbar * wbar + g.squaredNorm() - C2;
  });
}

}  // namespace quadric
