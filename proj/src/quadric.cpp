#include "quadric/quadric.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "quadric/errors.hpp"
#include "quadric/rng.hpp"

namespace quadric {

namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(const Eigen::VectorXd& v, const char* what) {
  if (v.size() < 3) errors::invalid(std::string(what) + ": dimension must be at least 2");
  if (std::abs(v.norm() - 1.0) > kUnitTol) {
    errors::invalid(std::string(what) + " must be a unit vector");
  }
}

// S^2 = C^2 + c2 - 1; values within roundoff of zero are the hyperplane case
double discriminant(double C, double c2) { return C * C + c2 - 1.0; }

double discriminant_tol(double C, double c2) { return 4e-15 * (C * C + std::abs(c2) + 1.0); }

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

double SolutionParams::S() const {
  const double D = discriminant(C, c2);
  if (std::abs(D) <= discriminant_tol(C, c2)) return 0.0;
  const double root = std::sqrt(D);
  return branch == Branch::plus ? root : -root;
}

void SolutionParams::validate() const {
  require_unit(xi, "solution axis");
  const double D = discriminant(C, c2);
  if (D < -discriminant_tol(C, c2)) {
    errors::no_solution("C^2 + c2 - 1 = " + std::to_string(D) + " < 0: no real solution");
  }
  if (C == 0.0 && c2 <= 1.0) {
    errors::invalid("C = 0 with c2 <= 1 gives w identically 0");
  }
  if (branch == Branch::minus && c2 >= 1.0) {
    errors::invalid("for c2 >= 1 only the branch with S > 0 is admissible");
  }
}

ScalarField SolutionParams::field() const {
  validate();
  return ScalarField::affine(S(), C * xi, 1.0);
}

const char* kind_name(QuadricKind kind) {
  switch (kind) {
    case QuadricKind::ellipsoid: return "ellipsoid";
    case QuadricKind::paraboloid: return "paraboloid";
    case QuadricKind::hyperboloid_sheet: return "hyperboloid_sheet";
    case QuadricKind::hyperplane: return "hyperplane";
    case QuadricKind::centered_sphere: return "centered_sphere";
  }
  return "unknown";
}

void QuadricParams::validate() const {
  require_unit(axis, "quadric axis");
  switch (kind) {
    case QuadricKind::ellipsoid:
      if (f <= 0.0) errors::invalid("ellipsoid focal parameter must be positive");
      if (eps < 0.0 || eps >= 1.0) errors::invalid("ellipsoid eccentricity must be in [0, 1)");
      break;
    case QuadricKind::paraboloid:
      if (f <= 0.0) errors::invalid("paraboloid focal parameter must be positive");
      if (std::abs(eps - 1.0) > kUnitTol) errors::invalid("paraboloid eccentricity must be 1");
      break;
    case QuadricKind::hyperboloid_sheet:
      if (f == 0.0) errors::invalid("hyperboloid focal parameter must be nonzero");
      if (eps <= 1.0) errors::invalid("hyperboloid eccentricity must exceed 1");
      break;
    case QuadricKind::hyperplane:
      if (f == 0.0) errors::invalid("hyperplane offset must be nonzero");
      break;
    case QuadricKind::centered_sphere:
      if (f <= 0.0) errors::invalid("sphere radius must be positive");
      if (eps != 0.0) errors::invalid("centered sphere has eccentricity 0");
      break;
  }
}

QuadricParams solution_to_quadric(const SolutionParams& sol) {
  sol.validate();
  const double D = discriminant(sol.C, sol.c2);

  QuadricParams q;
  if (sol.C == 0.0) {
    // excluded branch w^2 == c2 - 1: the constant solution, a sphere about
    // the origin rather than a focal quadric
    q.kind = QuadricKind::centered_sphere;
    q.f = 1.0 / std::sqrt(sol.c2 - 1.0);
    q.eps = 0.0;
    q.axis = sol.xi;
    return q;
  }

  if (std::abs(D) <= discriminant_tol(sol.C, sol.c2)) {
    // S = 0: rho = 1 / (C <x, xi>), a hyperplane with normal along the axis
    q.kind = QuadricKind::hyperplane;
    q.f = 1.0 / std::abs(sol.C);
    q.eps = 0.0;
    q.axis = sign(sol.C) * sol.xi;
    return q;
  }

  const double root = std::sqrt(D);
  const bool plus = sol.branch == Branch::plus;
  if (sol.c2 > 1.0) {
    q.kind = QuadricKind::ellipsoid;
    q.f = 1.0 / root;
    q.eps = std::abs(sol.C) / root;
  } else if (sol.c2 == 1.0) {
    q.kind = QuadricKind::paraboloid;
    q.f = 1.0 / std::abs(sol.C);
    q.eps = 1.0;
  } else {
    q.kind = QuadricKind::hyperboloid_sheet;
    q.f = plus ? 1.0 / root : -1.0 / root;
    q.eps = std::abs(sol.C) / root;
  }
  q.axis = (plus ? -1.0 : 1.0) * sign(sol.C) * sol.xi;
  q.validate();
  return q;
}

SolutionParams quadric_to_solution(const QuadricParams& q) {
  q.validate();
  SolutionParams sol;
  switch (q.kind) {
    case QuadricKind::centered_sphere:
      errors::excluded_case(
          "centered sphere corresponds to the excluded constant branch w^2 == c2 - 1");
    case QuadricKind::hyperplane:
      sol.C = std::abs(1.0 / q.f);
      sol.xi = sign(q.f) * q.axis;
      sol.c2 = 1.0 - sol.C * sol.C;
      sol.branch = Branch::plus;
      break;
    case QuadricKind::paraboloid:
      sol.C = 1.0 / q.f;
      sol.xi = -q.axis;
      sol.c2 = 1.0;
      sol.branch = Branch::plus;
      break;
    default: {
      const double S = 1.0 / q.f;
      sol.C = q.eps / std::abs(q.f);
      sol.xi = -sign(q.f) * q.axis;
      sol.c2 = S * S - sol.C * sol.C + 1.0;
      sol.branch = S >= 0.0 ? Branch::plus : Branch::minus;
      break;
    }
  }
  sol.validate();
  return sol;
}

namespace {

struct RadialValue {
  bool admissible;
  double value;
};

RadialValue radial_value(const QuadricParams& q, const Eigen::VectorXd& unit) {
  const double t = unit.dot(q.axis);
  switch (q.kind) {
    case QuadricKind::centered_sphere:
      return {true, q.f};
    case QuadricKind::hyperplane: {
      const bool ok = t * sign(q.f) >= kDomainMargin;
      return {ok, q.f / t};
    }
    default: {
      const double denom = 1.0 - q.eps * t;
      const bool ok = denom * sign(q.f) >= kDomainMargin * (1.0 + q.eps);
      return {ok, q.f / denom};
    }
  }
}

}  // namespace

double radial(const QuadricParams& q, const SpherePoint& x) {
  q.validate();
  if (x.ambient_dim() != q.ambient_dim()) {
    errors::parameter_mismatch("quadric/point dimension mismatch");
  }
  const RadialValue rv = radial_value(q, x.unit());
  if (!rv.admissible) {
    errors::domain("direction outside the positivity domain of the radial function");
  }
  return rv.value;
}

bool domain_indicator(const QuadricParams& q, const SpherePoint& x) {
  q.validate();
  if (x.ambient_dim() != q.ambient_dim()) {
    errors::parameter_mismatch("quadric/point dimension mismatch");
  }
  return radial_value(q, x.unit()).admissible;
}

std::vector<RadialSample> sample_radial(const QuadricParams& q, std::size_t count,
                                        std::uint64_t seed, batch::Exec exec) {
  q.validate();
  if (count == 0) errors::invalid("sample count must be at least 1");
  const int d = q.ambient_dim();

  Eigen::MatrixXd dirs(static_cast<Eigen::Index>(count), d);
  std::vector<double> rhos(count);
  std::atomic<bool> failed{false};
  batch::for_each_index(count, exec, [&](std::size_t i) {
    if (failed.load(std::memory_order_relaxed)) return;
    SplitMix64 rng(SplitMix64::stream_seed(seed, i));
    for (std::size_t attempt = 0; attempt < kMaxRejects; ++attempt) {
      const Eigen::VectorXd dir = rng.unit_vector(d);
      const RadialValue rv = radial_value(q, dir);
      if (rv.admissible) {
        dirs.row(static_cast<Eigen::Index>(i)) = dir;
        rhos[i] = rv.value;
        return;
      }
    }
    failed.store(true, std::memory_order_relaxed);
  });
  if (failed.load()) {
    errors::sampling("rejection acceptance rate below 1e-3; positivity domain too small");
  }

  std::vector<RadialSample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    samples.push_back(
        {project_to_sphere(dirs.row(static_cast<Eigen::Index>(i)).transpose(), 1.0), rhos[i]});
  }
  return samples;
}

std::vector<Eigen::VectorXd> sample_surface(const QuadricParams& q, std::size_t count,
                                            std::uint64_t seed, batch::Exec exec) {
  const std::vector<RadialSample> samples = sample_radial(q, count, seed, exec);
  std::vector<Eigen::VectorXd> points;
  points.reserve(samples.size());
  for (const RadialSample& s : samples) points.push_back(s.rho * s.x.coords);
  return points;
}

GeometricElements geometric_elements(const QuadricParams& q) {
  q.validate();
  if (q.kind != QuadricKind::ellipsoid && q.kind != QuadricKind::hyperboloid_sheet) {
    errors::no_elements(std::string("no center/second focus for a ") + kind_name(q.kind));
  }
  const double denom = 1.0 - q.eps * q.eps;
  GeometricElements el;
  el.semi_major = std::abs(q.f) / std::abs(denom);
  el.semi_minor = std::abs(q.f) / std::sqrt(std::abs(denom));
  el.center = (q.f * q.eps / denom) * q.axis;
  el.second_focus = 2.0 * el.center;
  return el;
}

}  // namespace quadric
