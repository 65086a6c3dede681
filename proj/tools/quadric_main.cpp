#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quadric/errors.hpp"
#include "quadric/fit.hpp"
#include "quadric/io.hpp"
#include "quadric/quadric.hpp"
#include "quadric/residuals.hpp"
#include "quadric/rng.hpp"

using json = nlohmann::json;
using namespace quadric;

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"code", code}, {"message", message}}.dump() << "\n";
}

void write_json(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) errors::parse("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

Eigen::VectorXd parse_axis(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(token, &pos));
      if (pos != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      errors::invalid("bad axis component '" + token + "'");
    }
  }
  if (values.size() < 3) errors::invalid("axis needs at least 3 components (n >= 2)");
  Eigen::VectorXd axis(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) axis[i] = values[i];
  const double norm = axis.norm();
  if (norm == 0.0) errors::invalid("axis must be nonzero");
  return axis / norm;
}

Eigen::VectorXd resolve_axis(const std::string& axis_text, int dim) {
  if (!axis_text.empty()) return parse_axis(axis_text);
  if (dim < 2) errors::invalid("dimension must be at least 2");
  return Eigen::VectorXd::Unit(dim + 1, 0);
}

Branch parse_branch(const std::string& text) {
  if (text == "plus") return Branch::plus;
  if (text == "minus") return Branch::minus;
  errors::invalid("branch must be 'plus' or 'minus'");
}

QuadricKind parse_kind(const std::string& text) {
  if (text == "ellipsoid") return QuadricKind::ellipsoid;
  if (text == "paraboloid") return QuadricKind::paraboloid;
  if (text == "hyperboloid" || text == "hyperboloid_sheet") {
    return QuadricKind::hyperboloid_sheet;
  }
  if (text == "hyperplane") return QuadricKind::hyperplane;
  if (text == "sphere" || text == "centered_sphere") return QuadricKind::centered_sphere;
  if (text == "hyperboloid1sheet" || text == "one_sheeted_hyperboloid") {
    errors::unrepresentable(
        "a one-sheeted hyperboloid admits no radial form f/(1 - eps<x,axis>): that form "
        "requires a directrix hyperplane orthogonal to the rotation axis");
  }
  errors::invalid("unknown kind '" + text + "'");
}

std::vector<RadialSample> apply_noise(std::vector<RadialSample> samples, double sigma,
                                      std::uint64_t seed) {
  if (sigma < 0.0) errors::invalid("--noise-sigma must be nonnegative");
  if (sigma == 0.0) return samples;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SplitMix64 rng(SplitMix64::stream_seed(seed ^ kNoiseTag, i));
    samples[i].rho *= 1.0 + sigma * rng.normal();
    if (!(samples[i].rho > 0.0)) {
      errors::invalid("noise drove a radial value nonpositive; reduce --noise-sigma");
    }
  }
  return samples;
}

EvalOptions eval_options(const std::string& path, double h_grad, double h_hess) {
  EvalOptions opts;
  if (path == "auto") {
    opts.path = DerivPath::automatic;
  } else if (path == "analytic") {
    opts.path = DerivPath::analytic;
  } else if (path == "fd") {
    opts.path = DerivPath::finite_difference;
  } else {
    errors::invalid("--path must be auto, analytic or fd");
  }
  opts.fd.gradient = h_grad;
  opts.fd.hessian = h_hess;
  return opts;
}

struct GenerateArgs {
  std::string kind;
  double f = 1.0;
  double eps = -1.0;  // -1 marks "not given"
  double c2 = 0.0, C = 0.0;
  bool have_c2 = false, have_C = false;
  std::string branch = "plus";
  std::string axis;
  int dim = 2;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::string output_kind = "cloud";
  std::string out;
  std::string meta;
};

int cmd_generate(const GenerateArgs& a) {
  QuadricParams q;
  std::optional<SolutionParams> sol;

  if (!a.kind.empty() == a.have_c2) {
    errors::invalid("give either --kind (geometry parameters) or --c2/--C (solution parameters)");
  }
  if (a.have_c2) {
    if (!a.have_C) errors::invalid("--c2 requires --C");
    SolutionParams s;
    s.c2 = a.c2;
    s.C = a.C;
    s.xi = resolve_axis(a.axis, a.dim);
    s.branch = parse_branch(a.branch);
    sol = s;
    q = solution_to_quadric(s);
  } else {
    q.kind = parse_kind(a.kind);
    q.f = a.f;
    q.axis = resolve_axis(a.axis, a.dim);
    switch (q.kind) {
      case QuadricKind::ellipsoid:
      case QuadricKind::hyperboloid_sheet:
        if (a.eps < 0.0) errors::invalid("--eps is required for this kind");
        q.eps = a.eps;
        break;
      case QuadricKind::paraboloid:
        if (a.eps >= 0.0 && a.eps != 1.0) errors::invalid("a paraboloid has eps = 1");
        q.eps = 1.0;
        break;
      default:
        if (a.eps > 0.0) errors::invalid("eps is not meaningful for this kind");
        q.eps = 0.0;
        break;
    }
    q.validate();
    if (q.kind != QuadricKind::centered_sphere) {
      sol = quadric_to_solution(q);
    }
  }

  std::vector<RadialSample> samples = sample_radial(q, a.count, a.seed);
  samples = apply_noise(std::move(samples), a.noise_sigma, a.seed);

  if (a.output_kind == "cloud") {
    std::vector<Eigen::VectorXd> cloud;
    cloud.reserve(samples.size());
    for (const auto& s : samples) cloud.push_back(s.rho * s.x.coords);
    io::write_cloud_csv(a.out, cloud);
  } else if (a.output_kind == "radial") {
    io::write_radial_csv(a.out, samples);
  } else {
    errors::invalid("--output-kind must be cloud or radial");
  }

  json meta{{"command", "generate"},
            {"seed", a.seed},
            {"count", a.count},
            {"dimension", q.ambient_dim() - 1},
            {"noise_sigma", a.noise_sigma},
            {"output_kind", a.output_kind},
            {"output", a.out},
            {"quadric", io::to_json(q)}};
  meta["solution"] = sol ? io::to_json(*sol) : json(nullptr);
  meta["excluded_branch"] = q.kind == QuadricKind::centered_sphere;
  if (q.kind == QuadricKind::ellipsoid || q.kind == QuadricKind::hyperboloid_sheet) {
    meta["elements"] = io::to_json(geometric_elements(q));
  } else {
    meta["elements"] = json(nullptr);
  }
  write_json(meta, a.meta);
  return 0;
}

struct FitArgs {
  std::string input;
  std::string out;
  bool weighted = false;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  double cond_max = 1e8;
  double z = 4.0;
  double tol_scale_c = 1e-6, tol_scale_S = 1e-6, tol_scale_C = 1e-6;
};

int cmd_fit(const FitArgs& a) {
  io::LoadedSamples loaded = io::read_samples_csv(a.input);
  if (a.noise_sigma > 0.0 && !a.have_seed) {
    errors::invalid("--noise-sigma needs --seed");
  }
  loaded.samples = apply_noise(std::move(loaded.samples), a.noise_sigma, a.seed);

  FitOptions opts;
  opts.weighted = a.weighted;
  opts.cond_max = a.cond_max;
  opts.z = a.z;
  opts.tol_scale_c = a.tol_scale_c;
  opts.tol_scale_S = a.tol_scale_S;
  opts.tol_scale_C = a.tol_scale_C;

  const FitResult fit = fit_inverse_radial(loaded.samples, opts);
  json j = io::to_json(fit);
  j["command"] = "fit";
  j["input"] = a.input;
  j["sample_count"] = loaded.samples.size();
  write_json(j, a.out);
  return 0;
}

struct VerifyArgs {
  std::string input;
  std::string fit_path;
  double c2 = 0.0, C = 0.0;
  bool have_c2 = false, have_C = false;
  std::string branch = "plus";
  std::string axis;
  int dim = 2;
  double k = 1.0;
  double radius = 0.0;
  bool have_radius = false;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  bool have_seed = false;
  double fail_above = 0.0;
  bool have_fail_above = false;
  std::string path = "auto";
  double h_grad = 1e-4, h_hess = 1e-3;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  const EvalOptions opts = eval_options(a.path, a.h_grad, a.h_hess);
  ResidualReport report;
  json extra;

  if (!a.input.empty() && (a.have_c2 || a.have_C)) {
    errors::invalid("give either --input or explicit --c2/--C, not both");
  }
  if (!a.input.empty()) {
    io::LoadedSamples loaded = io::read_samples_csv(a.input);
    FitResult fit;
    if (!a.fit_path.empty()) {
      std::ifstream in(a.fit_path);
      if (!in) errors::parse("cannot open " + a.fit_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        errors::parse(std::string("bad fit JSON: ") + e.what());
      }
      fit = io::fit_from_json(j);
    } else {
      fit = fit_inverse_radial(loaded.samples);
    }
    report = verify_solution(loaded.samples, fit);
    extra["fit"] = io::to_json(fit);
    extra["input"] = a.input;
  } else {
    if (!a.have_c2 || !a.have_C) {
      errors::invalid("verify needs either --input or explicit --c2/--C parameters");
    }
    if (!a.have_seed) errors::invalid("--seed is required when sampling the sphere");
    if (a.k <= 0.0) errors::invalid("--k must be positive");
    if (a.have_radius && std::abs(a.radius - 1.0 / a.k) > 1e-12 * (1.0 + 1.0 / a.k)) {
      errors::parameter_mismatch("--radius must equal 1/k");
    }
    SolutionParams sol;
    sol.c2 = a.c2;
    sol.C = a.C;
    sol.xi = resolve_axis(a.axis, a.dim);
    sol.branch = parse_branch(a.branch);
    sol.validate();
    const double S = sol.S();
    const int n = static_cast<int>(sol.xi.size()) - 1;

    auto unit_pts = sample_sphere(n, a.samples, SampleStrategy::uniform_random, a.seed);
    report.sample_count = unit_pts.size();
    report.params.c2 = a.c2;
    report.params.k = a.k;
    report.params.A = a.c2 - 1.0;
    report.params.S = S;

    if (a.k == 1.0) {
      const ScalarField w = sol.field();
      report.systems.push_back(stats_main(w, unit_pts, a.c2, opts));
      report.systems.push_back(stats_obata_shifted(w, unit_pts, S, opts));
      report.systems.push_back(stats_trace(w, unit_pts, S, opts));
      report.systems.push_back(stats_norm_identity(w, unit_pts, S, a.C * a.C, opts));
      try {
        report.s_stats = s_constancy(w, unit_pts, a.c2 - 1.0, opts);
      } catch (const Error&) {
        // all samples in the zero set; the report simply omits the statistic
      }
    } else {
      const double r = 1.0 / a.k;
      const ScalarField w = ScalarField::affine(S / a.k, sol.C * sol.xi, r);
      std::vector<SpherePoint> pts;
      pts.reserve(unit_pts.size());
      for (const auto& p : unit_pts) pts.push_back(p.rescaled(r));
      report.systems.push_back(stats_main_k(w, pts, a.c2, a.k, opts));
    }
    extra["solution"] = io::to_json(sol);
  }

  json j = io::to_json(report);
  j["command"] = "verify";
  for (auto& [key, value] : extra.items()) j[key] = value;
  if (a.have_fail_above) j["fail_above"] = a.fail_above;
  const bool failed = a.have_fail_above && report.worst() > a.fail_above;
  j["passed"] = !failed;
  write_json(j, a.out);
  return failed ? 4 : 0;
}

struct ClassifyArgs {
  double S = 0.0, C = 0.0;
  double tol_c = -1.0, tol_S = -1.0, tol_C = -1.0;
  std::string out;
};

int cmd_classify(const ClassifyArgs& a) {
  Tolerances tol = default_tolerances(a.S, a.C);
  if (a.tol_c >= 0.0) tol.c = a.tol_c;
  if (a.tol_S >= 0.0) tol.S = a.tol_S;
  if (a.tol_C >= 0.0) tol.C = a.tol_C;
  const QuadricKind kind = classify(a.S, a.C, tol);
  json j{{"command", "classify"},
         {"S", a.S},
         {"C", a.C},
         {"c2", a.S * a.S - a.C * a.C + 1.0},
         {"kind", kind_name(kind)},
         {"excluded_branch", kind == QuadricKind::centered_sphere},
         {"tolerances", io::to_json(tol)}};
  write_json(j, a.out);
  return 0;
}

struct ElementsArgs {
  std::string kind;
  double f = 1.0;
  double eps = -1.0;
  double c2 = 0.0, C = 0.0;
  bool have_c2 = false, have_C = false;
  std::string branch = "plus";
  std::string axis;
  int dim = 2;
  std::string out;
};

int cmd_elements(const ElementsArgs& a) {
  QuadricParams q;
  if (!a.kind.empty() == a.have_c2) {
    errors::invalid("give either --kind/--f/--eps or --c2/--C");
  }
  if (a.have_c2) {
    if (!a.have_C) errors::invalid("--c2 requires --C");
    SolutionParams sol;
    sol.c2 = a.c2;
    sol.C = a.C;
    sol.xi = resolve_axis(a.axis, a.dim);
    sol.branch = parse_branch(a.branch);
    q = solution_to_quadric(sol);
  } else {
    q.kind = parse_kind(a.kind);
    q.f = a.f;
    q.eps = a.eps < 0.0 ? 0.0 : a.eps;
    q.axis = resolve_axis(a.axis, a.dim);
    q.validate();
  }
  const GeometricElements el = geometric_elements(q);
  json j{{"command", "elements"},
         {"quadric", io::to_json(q)},
         {"elements", io::to_json(el)}};
  write_json(j, a.out);
  return 0;
}

struct ScanArgs {
  std::string h_list;
  double c2 = 2.0, C = 0.3;
  std::string branch = "plus";
  std::string axis;
  int dim = 2;
  std::size_t points = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_residual_scan(const ScanArgs& a) {
  std::vector<double> hs;
  {
    std::stringstream ss(a.h_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      try {
        std::size_t pos = 0;
        hs.push_back(std::stod(token, &pos));
        if (pos != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        errors::invalid("bad step '" + token + "' in --h");
      }
      if (hs.back() <= 0.0) errors::invalid("steps must be positive");
    }
  }
  if (hs.empty()) errors::invalid("--h needs at least one step");

  SolutionParams sol;
  sol.c2 = a.c2;
  sol.C = a.C;
  sol.xi = resolve_axis(a.axis, a.dim);
  sol.branch = parse_branch(a.branch);
  const ScalarField w = sol.field();
  const int n = static_cast<int>(sol.xi.size()) - 1;
  const auto pts = sample_sphere(n, a.points, SampleStrategy::uniform_random, a.seed);

  // errors within ~100 ulps of the second-difference roundoff floor cannot
  // exhibit the truncation order
  const double scale = 1.0 + std::abs(sol.S()) + std::abs(sol.C);
  std::vector<double> errs(hs.size());
  std::vector<bool> reliable(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    EvalOptions fd{DerivPath::finite_difference, {1e-4, hs[i]}};
    std::vector<double> point_err(pts.size());
    batch::for_each_index(pts.size(), batch::Exec::parallel, [&](std::size_t pi) {
      const TangentFrame frame = tangent_frame(pts[pi]);
      const Eigen::MatrixXd exact = hessian(w, pts[pi], frame);
      const Eigen::MatrixXd approx = hessian(w, pts[pi], frame, fd);
      point_err[pi] = (approx - exact).cwiseAbs().maxCoeff();
    });
    double worst = 0.0;
    for (double e : point_err) worst = std::max(worst, e);
    errs[i] = worst;
    reliable[i] = worst > 100.0 * 2.220446049250313e-16 * scale / (hs[i] * hs[i]);
  }

  std::vector<double> orders(hs.size(), std::nan(""));
  for (std::size_t i = 1; i < hs.size(); ++i) {
    orders[i] = std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]);
  }

  std::ostringstream csv;
  csv << "h,max_error,order_vs_prev,reliable\n";
  for (std::size_t i = 0; i < hs.size(); ++i) {
    csv << io::format17(hs[i]) << "," << io::format17(errs[i]) << ","
        << io::format17(orders[i]) << "," << (reliable[i] ? 1 : 0) << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out);
    if (!out) errors::parse("cannot open " + a.out + " for writing");
    out << csv.str();
  }

  // least-squares slope of log err vs log h over the reliable rows
  json fitted = json(nullptr);
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (!reliable[i]) continue;
      const double lx = std::log(hs[i]);
      const double ly = std::log(errs[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
    if (count >= 2) {
      const double denom = count * sxx - sx * sx;
      if (denom != 0.0) fitted = (count * sxy - sx * sy) / denom;
    }
  }
  json j{{"command", "residual-scan"},
         {"h", hs},
         {"max_error", errs},
         {"order_vs_prev", json::array()},
         {"reliable", reliable},
         {"fitted_order", fitted},
         {"points", a.points},
         {"seed", a.seed}};
  for (std::size_t i = 1; i < hs.size(); ++i) j["order_vs_prev"].push_back(orders[i]);
  if (!a.out.empty()) write_json(j, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadrics of revolution: generation, verification and fitting of focal "
               "radial-function models"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* sub_gen = app.add_subcommand("generate", "sample a quadric surface into a CSV cloud");
  sub_gen->add_option("--kind", gen.kind, "ellipsoid|paraboloid|hyperboloid|hyperplane|sphere");
  sub_gen->add_option("--f", gen.f, "focal parameter (signed for hyperboloid sheets)");
  sub_gen->add_option("--eps", gen.eps, "eccentricity");
  sub_gen->add_option("--c2", gen.c2)->each([&gen](const std::string&) { gen.have_c2 = true; });
  sub_gen->add_option("--C", gen.C)->each([&gen](const std::string&) { gen.have_C = true; });
  sub_gen->add_option("--branch", gen.branch, "plus|minus (sign of S when c2 < 1)");
  sub_gen->add_option("--axis", gen.axis, "comma-separated axis vector");
  sub_gen->add_option("--dim", gen.dim, "sphere dimension n when no --axis is given");
  sub_gen->add_option("--count", gen.count)->required();
  sub_gen->add_option("--seed", gen.seed)->required();
  sub_gen->add_option("--noise-sigma", gen.noise_sigma, "relative Gaussian noise on rho");
  sub_gen->add_option("--output-kind", gen.output_kind, "cloud|radial");
  sub_gen->add_option("--out", gen.out, "output CSV path")->required();
  sub_gen->add_option("--meta", gen.meta, "metadata JSON path (stdout when omitted)");

  FitArgs fit;
  auto* sub_fit = app.add_subcommand("fit", "recover (S, v) from radial samples");
  sub_fit->add_option("--input", fit.input)->required();
  sub_fit->add_option("--out", fit.out, "fit JSON path (stdout when omitted)");
  sub_fit->add_flag("--weighted", fit.weighted, "weight squared residuals by rho^2");
  sub_fit->add_option("--noise-sigma", fit.noise_sigma, "perturb loaded rho before fitting");
  sub_fit->add_option("--seed", fit.seed)->each([&fit](const std::string&) {
    fit.have_seed = true;
  });
  sub_fit->add_option("--cond-max", fit.cond_max);
  sub_fit->add_option("--z", fit.z, "statistical band width in standard errors");
  sub_fit->add_option("--tol-scale-c", fit.tol_scale_c);
  sub_fit->add_option("--tol-scale-S", fit.tol_scale_S);
  sub_fit->add_option("--tol-scale-C", fit.tol_scale_C);

  VerifyArgs ver;
  auto* sub_ver = app.add_subcommand("verify", "residual report for data or explicit parameters");
  sub_ver->add_option("--input", ver.input, "radial or cloud CSV");
  sub_ver->add_option("--fit", ver.fit_path, "fit JSON (otherwise fitted internally)");
  sub_ver->add_option("--c2", ver.c2)->each([&ver](const std::string&) { ver.have_c2 = true; });
  sub_ver->add_option("--C", ver.C)->each([&ver](const std::string&) { ver.have_C = true; });
  sub_ver->add_option("--branch", ver.branch);
  sub_ver->add_option("--axis", ver.axis);
  sub_ver->add_option("--dim", ver.dim);
  sub_ver->add_option("--k", ver.k, "sphere radius is 1/k");
  sub_ver->add_option("--radius", ver.radius)->each([&ver](const std::string&) {
    ver.have_radius = true;
  });
  sub_ver->add_option("--samples", ver.samples);
  sub_ver->add_option("--seed", ver.seed)->each([&ver](const std::string&) {
    ver.have_seed = true;
  });
  sub_ver->add_option("--fail-above", ver.fail_above)->each([&ver](const std::string&) {
    ver.have_fail_above = true;
  });
  sub_ver->add_option("--path", ver.path, "auto|analytic|fd");
  sub_ver->add_option("--h-grad", ver.h_grad);
  sub_ver->add_option("--h-hess", ver.h_hess);
  sub_ver->add_option("--out", ver.out);

  ClassifyArgs cls;
  auto* sub_cls = app.add_subcommand("classify", "case split for given S and C");
  sub_cls->add_option("--S", cls.S)->required();
  sub_cls->add_option("--C", cls.C)->required();
  sub_cls->add_option("--tol-c", cls.tol_c, "absolute band on |c2 - 1|");
  sub_cls->add_option("--tol-S", cls.tol_S, "absolute band on |S|");
  sub_cls->add_option("--tol-C", cls.tol_C, "absolute band on |C|");
  sub_cls->add_option("--out", cls.out);

  ElementsArgs ele;
  auto* sub_ele = app.add_subcommand("elements", "center, foci and semi-axes");
  sub_ele->add_option("--kind", ele.kind);
  sub_ele->add_option("--f", ele.f);
  sub_ele->add_option("--eps", ele.eps);
  sub_ele->add_option("--c2", ele.c2)->each([&ele](const std::string&) { ele.have_c2 = true; });
  sub_ele->add_option("--C", ele.C)->each([&ele](const std::string&) { ele.have_C = true; });
  sub_ele->add_option("--branch", ele.branch);
  sub_ele->add_option("--axis", ele.axis);
  sub_ele->add_option("--dim", ele.dim);
  sub_ele->add_option("--out", ele.out);

  ScanArgs scan;
  auto* sub_scan = app.add_subcommand("residual-scan", "finite-difference convergence table");
  sub_scan->add_option("--h-list", scan.h_list, "comma-separated step list")->required();
  sub_scan->add_option("--c2", scan.c2);
  sub_scan->add_option("--C", scan.C);
  sub_scan->add_option("--branch", scan.branch);
  sub_scan->add_option("--axis", scan.axis);
  sub_scan->add_option("--dim", scan.dim);
  sub_scan->add_option("--points", scan.points);
  sub_scan->add_option("--seed", scan.seed)->required();
  sub_scan->add_option("--out", scan.out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("invalid_argument", e.what());
    return 2;
  }

  try {
    if (sub_gen->parsed()) return cmd_generate(gen);
    if (sub_fit->parsed()) return cmd_fit(fit);
    if (sub_ver->parsed()) return cmd_verify(ver);
    if (sub_cls->parsed()) return cmd_classify(cls);
    if (sub_ele->parsed()) return cmd_elements(ele);
    if (sub_scan->parsed()) return cmd_residual_scan(scan);
    emit_error("invalid_argument", "no subcommand given");
    return 2;
  } catch (const Error& e) {
    emit_error(e.code(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
}
