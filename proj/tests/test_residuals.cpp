#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "quadric/errors.hpp"
#include "quadric/fit.hpp"
#include "quadric/residuals.hpp"

using namespace quadric;
using testutil::draw_solution;
using testutil::unit_points;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ScalarField squared_height(const Eigen::VectorXd& xi) {
  return ScalarField::generic(
      [xi](const SpherePoint& x) {
        const double t = x.coords.dot(xi);
        return t * t;
      },
      static_cast<int>(xi.size()), 1.0);
}

}  // namespace

TEST_CASE("main_residual on frozen examples") {
  SUBCASE("solution field vanishes") {
    const ScalarField w = ScalarField::affine(kSqrt2, Eigen::Vector3d(1, 0, 0));
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(main_residual(w, x, 2.0).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("excluded constant branch w^2 == c2 - 1 also vanishes") {
    const ScalarField w = ScalarField::constant(2.0, 3);
    const SpherePoint x(Eigen::Vector3d(0, 0, 1), 1.0);
    CHECK(main_residual(w, x, 5.0).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("constant away from the branch gives a scalar matrix") {
    const ScalarField w = ScalarField::constant(2.0, 3);
    const SpherePoint x(Eigen::Vector3d(0, 0, 1), 1.0);
    const Eigen::MatrixXd r = main_residual(w, x, 2.0);
    CHECK((r - 3.0 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("unit-sphere precondition") {
    const ScalarField w = ScalarField::constant(1.0, 3, 0.5);
    const SpherePoint x = project_to_sphere(Eigen::Vector3d(1, 0, 0), 0.5);
    CHECK_THROWS_AS(main_residual(w, x, 2.0), Error);
  }
}

TEST_CASE("main_residual_k") {
  SUBCASE("k = 1 reduces to the unit-sphere system") {
    const ScalarField w = ScalarField::affine(1.3, Eigen::Vector3d(0.4, 0.1, 0));
    const SpherePoint x(Eigen::Vector3d(0, 0, 1), 1.0);
    CHECK(testutil::exact_equal(main_residual_k(w, x, 1.9, 1.0), main_residual(w, x, 1.9)));
  }

  SUBCASE("the k-family solves the k-system") {
    SplitMix64 rng(3);
    for (double k : {0.5, 2.0}) {
      const double r = 1.0 / k;
      const double c2 = 2.0;
      const double C = 0.7;
      const double S = std::sqrt(C * C + c2 - 1.0);
      const Eigen::VectorXd xi = rng.unit_vector(3);
      const ScalarField w = ScalarField::affine(S / k, C * xi, r);
      for (int trial = 0; trial < 30; ++trial) {
        const SpherePoint x = project_to_sphere(rng.unit_vector(3), r);
        CHECK(main_residual_k(w, x, c2, k).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  SUBCASE("excluded branch k^2 w^2 == c2 - 1") {
    const ScalarField w = ScalarField::constant(1.0, 3, 0.5);
    const SpherePoint x = project_to_sphere(Eigen::Vector3d(0, 1, 0), 0.5);
    CHECK(main_residual_k(w, x, 5.0, 2.0).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("radius mismatch is rejected") {
    const ScalarField w = ScalarField::constant(1.0, 3, 1.0);
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK_THROWS_AS(main_residual_k(w, x, 5.0, 2.0), Error);
  }
}

TEST_CASE("obata_residual") {
  SplitMix64 rng(5);
  SUBCASE("first-order harmonics solve the system") {
    const Eigen::VectorXd xi = rng.unit_vector(4);
    const ScalarField w = ScalarField::affine(0.0, 1.7 * xi);
    for (int trial = 0; trial < 10; ++trial) {
      const SpherePoint x(rng.unit_vector(4), 1.0);
      CHECK(obata_residual(w, x, 1.0).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }

  SUBCASE("a constant is not a solution") {
    const ScalarField w = ScalarField::constant(1.0, 3);
    const SpherePoint x(Eigen::Vector3d(1, 0, 0), 1.0);
    const Eigen::MatrixXd r = obata_residual(w, x, 1.0);
    CHECK((r - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("squared height at the pole: residual is -I") {
    const Eigen::Vector3d xi(0, 0, 1);
    const ScalarField w = squared_height(xi);
    const SpherePoint x(xi, 1.0);
    const Eigen::MatrixXd r = obata_residual(w, x, 1.0);
    CHECK((r + Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("s_field") {
  const ScalarField w = ScalarField::affine(kSqrt2, Eigen::Vector3d(1, 0, 0));
  SUBCASE("at the axis") {
    const SpherePoint x(Eigen::Vector3d(1, 0, 0), 1.0);
    CHECK(s_field(w, x, 1.0) == doctest::Approx(kSqrt2).epsilon(1e-14));
  }
  SUBCASE("orthogonal to the axis") {
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(s_field(w, x, 1.0) == doctest::Approx(kSqrt2).epsilon(1e-14));
  }
  SUBCASE("zero set of the paraboloid family") {
    const ScalarField wp = ScalarField::affine(1.0, Eigen::Vector3d(1, 0, 0));
    const SpherePoint vanish(Eigen::Vector3d(-1, 0, 0), 1.0);
    CHECK_THROWS_AS(s_field(wp, vanish, 0.0), Error);
  }
}

TEST_CASE("s_constancy") {
  SUBCASE("constant on the solution family") {
    for (int index = 0; index < 24; ++index) {
      const SolutionParams sol = draw_solution(index, 77);
      const ScalarField w = sol.field();
      const auto pts = unit_points(sol.xi.size() - 1, 150, 1000 + index);
      const SConstancyStats stats = s_constancy(w, pts, sol.c2 - 1.0);
      CHECK(stats.max_deviation <= 1e-10);
      CHECK(stats.mean == doctest::Approx(sol.S()).epsilon(1e-9));
    }
  }

  SUBCASE("non-solution w = 1 + t^2 has large deviation") {
    const Eigen::Vector3d xi(0, 0, 1);
    const ScalarField w = ScalarField::generic(
        [xi](const SpherePoint& x) {
          const double t = x.coords.dot(xi);
          return 1.0 + t * t;
        },
        3, 1.0);
    const auto pts = sample_sphere(2, 100, SampleStrategy::fibonacci, 0);
    const SConstancyStats stats = s_constancy(w, pts, 0.0);
    CHECK(stats.max_deviation > 0.1);

    // closed-form oracle: S(t) = (1 + 6t^2 - 3t^4) / (2 (1 + t^2))
    double mean = 0.0;
    std::vector<double> svals;
    for (const auto& p : pts) {
      const double t = p.coords.dot(xi);
      const double t2 = t * t;
      svals.push_back((1.0 + 6.0 * t2 - 3.0 * t2 * t2) / (2.0 * (1.0 + t2)));
      mean += svals.back();
    }
    mean /= static_cast<double>(svals.size());
    double expected_dev = 0.0;
    for (double s : svals) expected_dev = std::max(expected_dev, std::abs(s - mean));
    CHECK(stats.max_deviation == doctest::Approx(expected_dev).epsilon(1e-4));
  }

  SUBCASE("constant field") {
    const ScalarField w = ScalarField::constant(2.0, 3);
    const auto pts = unit_points(2, 10, 5);
    const double A = 0.5;
    const SConstancyStats stats = s_constancy(w, pts, A);
    CHECK(stats.mean == doctest::Approx((4.0 + A) / 4.0).epsilon(1e-15));
    CHECK(stats.max_deviation <= 1e-15);
  }

  SUBCASE("needs two admissible samples") {
    const ScalarField w = ScalarField::constant(2.0, 3);
    const auto pts = unit_points(2, 1, 5);
    CHECK_THROWS_AS(s_constancy(w, pts, 0.0), Error);
  }
}

TEST_CASE("obata_shifted_residual") {
  SUBCASE("solution with its S") {
    const ScalarField w = ScalarField::affine(kSqrt2, Eigen::Vector3d(1, 0, 0));
    SplitMix64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      const SpherePoint x(rng.unit_vector(3), 1.0);
      CHECK(obata_shifted_residual(w, x, kSqrt2).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  SUBCASE("pure harmonic with S = 0") {
    const ScalarField w = ScalarField::affine(0.0, Eigen::Vector3d(0, 0.8, 0));
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(obata_shifted_residual(w, x, 0.0).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("constant with wrong S") {
    const ScalarField w = ScalarField::constant(1.0, 3);
    const SpherePoint x(Eigen::Vector3d(1, 0, 0), 1.0);
    const Eigen::MatrixXd r = obata_shifted_residual(w, x, 0.0);
    CHECK((r - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("trace_residual") {
  SUBCASE("solution family") {
    const ScalarField w = ScalarField::affine(kSqrt2, Eigen::Vector3d(1, 0, 0));
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(std::abs(trace_residual(w, x, kSqrt2)) <= 1e-14);
  }
  SUBCASE("constant with matching S") {
    const ScalarField w = ScalarField::constant(5.0, 3);
    const SpherePoint x(Eigen::Vector3d(1, 0, 0), 1.0);
    CHECK(trace_residual(w, x, 5.0) == 0.0);
  }
  SUBCASE("squared height: 2 - 2t^2 - n t^2 oracle") {
    const Eigen::Vector3d xi(0, 0, 1);
    const ScalarField w = squared_height(xi);
    const SpherePoint equator(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(trace_residual(w, equator, 0.0) == doctest::Approx(2.0).epsilon(1e-5));
    const SpherePoint pole(xi, 1.0);
    CHECK(trace_residual(w, pole, 0.0) == doctest::Approx(-2.0).epsilon(1e-5));
  }
}

TEST_CASE("schouten_residual") {
  SUBCASE("positive solutions of the main system") {
    for (int index = 0; index < 8; ++index) {
      SolutionParams sol = draw_solution(4 * index, 31);  // case (a): w > 0 everywhere
      const ScalarField w = sol.field();
      const auto pts = unit_points(sol.xi.size() - 1, 20, 400 + index);
      for (const auto& x : pts) {
        CHECK(schouten_residual(w, x, sol.c2).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  SUBCASE("constant field: w = e, c2 = e^2 + 1") {
    const double e = std::exp(1.0);
    const ScalarField w = ScalarField::constant(e, 3);
    const SpherePoint x(Eigen::Vector3d(0, 1, 0), 1.0);
    CHECK(schouten_residual(w, x, e * e + 1.0).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("positivity is required") {
    const ScalarField w = ScalarField::affine(0.0, Eigen::Vector3d(1, 0, 0));
    const SpherePoint x(Eigen::Vector3d(-1, 0, 0), 1.0);
    CHECK_THROWS_AS(schouten_residual(w, x, 1.0), Error);
  }

  SUBCASE("half identity against the main residual, both paths") {
    SplitMix64 rng(37);
    const Eigen::VectorXd xi = rng.unit_vector(3);
    const ScalarField affine = ScalarField::affine(1.4, 0.6 * xi);
    const ScalarField generic = ScalarField::generic(
        [xi](const SpherePoint& x) { return 1.4 + 0.3 * std::pow(x.coords.dot(xi), 2.0); }, 3,
        1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const SpherePoint x(rng.unit_vector(3), 1.0);
      const double c2 = 0.5 + 2.0 * rng.uniform01();
      for (const ScalarField& w : {affine, generic}) {
        const EvalOptions opts{};
        const Eigen::MatrixXd half = 0.5 * main_residual(w, x, c2, opts);
        const Eigen::MatrixXd sch = schouten_residual(w, x, c2, opts);
        CHECK((sch - half).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
  }
}

TEST_CASE("residual invariants") {
  SplitMix64 rng(41);

  SUBCASE("isotropy: affine residuals are scalar matrices") {
    for (int index = 0; index < 16; ++index) {
      const SolutionParams sol = draw_solution(index, 53);
      const ScalarField w =
          ScalarField::affine(sol.S() + 0.1, sol.C * sol.xi);  // deliberately off the family
      const SpherePoint x(rng.unit_vector(sol.xi.size()), 1.0);
      const Eigen::MatrixXd r = main_residual(w, x, sol.c2);
      const int n = static_cast<int>(r.rows());
      const Eigen::MatrixXd iso = r(0, 0) * Eigen::MatrixXd::Identity(n, n);
      CHECK((r - iso).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  SUBCASE("trace consistency") {
    for (int index = 0; index < 8; ++index) {
      const SolutionParams sol = draw_solution(index, 59);
      const ScalarField w = sol.field();
      const SpherePoint x(rng.unit_vector(sol.xi.size()), 1.0);
      const double S = sol.S() + 0.05;
      CHECK(std::abs(obata_shifted_residual(w, x, S).trace() - trace_residual(w, x, S)) <=
            1e-10);
    }
  }

  SUBCASE("lemma chain: small main residual implies constant S and small shifted residual") {
    const SolutionParams sol = draw_solution(0, 61);
    const ScalarField w = sol.field();
    const auto pts = unit_points(sol.xi.size() - 1, 100, 62);
    const SystemStats main_stats = stats_main(w, pts, sol.c2);
    REQUIRE(main_stats.max_norm <= 1e-12);
    const SConstancyStats sc = s_constancy(w, pts, sol.c2 - 1.0);
    CHECK(sc.max_deviation <= 100 * main_stats.max_norm + 1e-12);
    const SystemStats shifted = stats_obata_shifted(w, pts, sc.mean);
    CHECK(shifted.max_norm <= 100 * main_stats.max_norm + 1e-11);
  }

  SUBCASE("excluded branch is flagged by classification") {
    const double w0 = 2.0;
    const double c2 = w0 * w0 + 1.0;
    const ScalarField w = ScalarField::constant(w0, 3);
    const SpherePoint x(Eigen::Vector3d(0, 0, 1), 1.0);
    CHECK(main_residual(w, x, c2).cwiseAbs().maxCoeff() == 0.0);
    const Tolerances tol = default_tolerances(w0, 0.0);
    CHECK(classify(w0, 0.0, tol) == QuadricKind::centered_sphere);
  }
}

TEST_CASE("residual stats report the path taken") {
  const ScalarField w = ScalarField::affine(1.2, Eigen::Vector3d(0.3, 0, 0));
  const auto pts = unit_points(2, 10, 71);
  CHECK(stats_main(w, pts, 2.0).path == "analytic");
  EvalOptions fd{DerivPath::finite_difference, {}};
  CHECK(stats_main(w, pts, 2.0, fd).path == "finite_difference");
  CHECK(stats_main(w, pts, 2.0).count == 10);
}
