#include "quadric/sphere.hpp"

#include <cmath>
#include <utility>

#include "quadric/errors.hpp"
#include "quadric/rng.hpp"

namespace quadric {

namespace {
constexpr double kPointTol = 1e-12;
}

SpherePoint::SpherePoint(Eigen::VectorXd c, double r) : coords(std::move(c)), radius(r) {
  if (radius <= 0.0) errors::invalid("sphere radius must be positive");
  if (coords.size() < 3) errors::invalid("sphere dimension must be at least 2");
  const double norm = coords.norm();
  if (std::abs(norm - radius) > kPointTol * radius) {
    errors::invalid("point does not lie on the sphere: |coords| = " + std::to_string(norm) +
                    ", radius = " + std::to_string(radius));
  }
}

SpherePoint SpherePoint::rescaled(double new_radius) const {
  return project_to_sphere(coords, new_radius);
}

SpherePoint project_to_sphere(const Eigen::VectorXd& v, double radius) {
  if (radius <= 0.0) errors::invalid("sphere radius must be positive");
  const double norm = v.norm();
  if (norm == 0.0) errors::domain("cannot project the zero vector to a sphere");
  return SpherePoint((radius / norm) * v, radius);
}

TangentFrame tangent_frame(const SpherePoint& x) {
  const int d = x.ambient_dim();
  const int n = x.n();
  const Eigen::VectorXd unit = x.unit();

  int pivot = 0;
  for (int k = 1; k < d; ++k) {
    if (std::abs(unit[k]) > std::abs(unit[pivot])) pivot = k;
  }

  Eigen::MatrixXd basis(d, n);
  int col = 0;
  for (int j = 0; j < d; ++j) {
    if (j == pivot) continue;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    b[j] = 1.0;
    b -= b.dot(unit) * unit;
    for (int k = 0; k < col; ++k) b -= b.dot(basis.col(k)) * basis.col(k);
    // second orthogonalization pass against accumulated roundoff
    b -= b.dot(unit) * unit;
    for (int k = 0; k < col; ++k) b -= b.dot(basis.col(k)) * basis.col(k);
    basis.col(col++) = b / b.norm();
  }
  return TangentFrame{x, std::move(basis)};
}

std::vector<SpherePoint> sample_sphere(int n, std::size_t count, SampleStrategy strategy,
                                       std::uint64_t seed) {
  if (n < 2) errors::invalid("sphere dimension must be at least 2");
  if (count == 0) errors::invalid("sample count must be at least 1");

  std::vector<SpherePoint> pts;
  pts.reserve(count);
  if (strategy == SampleStrategy::fibonacci) {
    if (n != 2) errors::unsupported_strategy("fibonacci lattice is defined for n = 2 only");
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      Eigen::Vector3d p(r * std::cos(phi), r * std::sin(phi), z);
      pts.emplace_back(project_to_sphere(p, 1.0));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      SplitMix64 rng(SplitMix64::stream_seed(seed, i));
      pts.emplace_back(rng.unit_vector(n + 1), 1.0);
    }
  }
  return pts;
}

ScalarField ScalarField::affine(double offset, Eigen::VectorXd v, double radius) {
  if (radius <= 0.0) errors::invalid("field radius must be positive");
  if (v.size() < 3) errors::invalid("field dimension must be at least 2");
  ScalarField f;
  f.affine_ = true;
  f.offset_ = offset;
  f.v_ = std::move(v);
  f.radius_ = radius;
  f.ambient_dim_ = static_cast<int>(f.v_.size());
  return f;
}

ScalarField ScalarField::constant(double value, int ambient_dim, double radius) {
  return affine(value, Eigen::VectorXd::Zero(ambient_dim), radius);
}

ScalarField ScalarField::generic(Evaluator eval, int ambient_dim, double radius) {
  if (radius <= 0.0) errors::invalid("field radius must be positive");
  if (ambient_dim < 3) errors::invalid("field dimension must be at least 2");
  if (!eval) errors::invalid("generic field requires an evaluator");
  ScalarField f;
  f.eval_ = std::move(eval);
  f.radius_ = radius;
  f.ambient_dim_ = ambient_dim;
  return f;
}

double ScalarField::operator()(const SpherePoint& x) const {
  if (x.ambient_dim() != ambient_dim_) errors::parameter_mismatch("field/point dimension mismatch");
  if (std::abs(x.radius - radius_) > 1e-12 * radius_) {
    errors::parameter_mismatch("field defined on a sphere of different radius");
  }
  if (affine_) return offset_ + x.coords.dot(v_);
  return eval_(x);
}

double ScalarField::offset() const {
  if (!affine_) errors::invalid("offset is defined for affine fields only");
  return offset_;
}

const Eigen::VectorXd& ScalarField::linear() const {
  if (!affine_) errors::invalid("linear part is defined for affine fields only");
  return v_;
}

double ScalarField::extension(const Eigen::VectorXd& y) const {
  return (*this)(project_to_sphere(y, radius_));
}

DerivPath resolve_path(const ScalarField& w, const EvalOptions& opts) {
  switch (opts.path) {
    case DerivPath::automatic:
      return w.is_affine() ? DerivPath::analytic : DerivPath::finite_difference;
    case DerivPath::analytic:
      if (!w.is_affine()) errors::invalid("analytic derivatives require an affine field");
      return DerivPath::analytic;
    case DerivPath::finite_difference:
      return DerivPath::finite_difference;
  }
  return DerivPath::finite_difference;
}

const char* path_name(DerivPath path) {
  switch (path) {
    case DerivPath::analytic: return "analytic";
    case DerivPath::finite_difference: return "finite_difference";
    default: return "automatic";
  }
}

Eigen::VectorXd gradient(const ScalarField& w, const SpherePoint& x, const EvalOptions& opts) {
  const Eigen::VectorXd unit = x.unit();
  if (resolve_path(w, opts) == DerivPath::analytic) {
    const Eigen::VectorXd& v = w.linear();
    return v - v.dot(unit) * unit;
  }
  const int d = x.ambient_dim();
  const double h = opts.fd.gradient;
  Eigen::VectorXd g(d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd yp = x.coords;
    Eigen::VectorXd ym = x.coords;
    yp[k] += h;
    ym[k] -= h;
    g[k] = (w.extension(yp) - w.extension(ym)) / (2.0 * h);
  }
  return g - g.dot(unit) * unit;
}

Eigen::MatrixXd hessian(const ScalarField& w, const SpherePoint& x, const TangentFrame& frame,
                        const EvalOptions& opts) {
  const int n = x.n();
  if (frame.n() != n || frame.base.ambient_dim() != x.ambient_dim()) {
    errors::parameter_mismatch("frame does not match the point");
  }
  if (resolve_path(w, opts) == DerivPath::analytic) {
    const double r = x.radius;
    const double t = x.coords.dot(w.linear());
    return (-t / (r * r)) * Eigen::MatrixXd::Identity(n, n);
  }

  // ambient central differences of the extension, restricted to the frame;
  // the ambient Hessian is frame-independent, so traces and norms of
  // B^T M B agree across frames to roundoff
  const int d = x.ambient_dim();
  const double h = opts.fd.hessian;
  const double w0 = w.extension(x.coords);
  Eigen::MatrixXd M(d, d);
  for (int a = 0; a < d; ++a) {
    Eigen::VectorXd yp = x.coords;
    Eigen::VectorXd ym = x.coords;
    yp[a] += h;
    ym[a] -= h;
    M(a, a) = (w.extension(yp) - 2.0 * w0 + w.extension(ym)) / (h * h);
    for (int b = a + 1; b < d; ++b) {
      Eigen::VectorXd ypp = x.coords, ypm = x.coords, ymp = x.coords, ymm = x.coords;
      ypp[a] += h; ypp[b] += h;
      ypm[a] += h; ypm[b] -= h;
      ymp[a] -= h; ymp[b] += h;
      ymm[a] -= h; ymm[b] -= h;
      M(a, b) = (w.extension(ypp) - w.extension(ypm) - w.extension(ymp) + w.extension(ymm)) /
                (4.0 * h * h);
      M(b, a) = M(a, b);
    }
  }
  return frame.basis.transpose() * M * frame.basis;
}

double laplacian(const ScalarField& w, const SpherePoint& x, const EvalOptions& opts) {
  if (resolve_path(w, opts) == DerivPath::analytic) {
    const double r = x.radius;
    return -static_cast<double>(x.n()) * x.coords.dot(w.linear()) / (r * r);
  }
  return hessian(w, x, tangent_frame(x), opts).trace();
}

}  // namespace quadric
