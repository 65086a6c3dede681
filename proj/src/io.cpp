#include "quadric/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quadric/errors.hpp"

namespace quadric::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream ss(line);
  while (std::getline(ss, token, ',')) out.push_back(token);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    errors::parse("line " + std::to_string(line_no) + ": bad float '" + token + "'");
  }
  if (!std::isfinite(value)) {
    errors::parse("line " + std::to_string(line_no) + ": non-finite value");
  }
  return value;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

std::string format17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_cloud_csv(const std::filesystem::path& path,
                     std::span<const Eigen::VectorXd> points) {
  std::ofstream out(path);
  if (!out) errors::parse("cannot open " + path.string() + " for writing");
  if (points.empty()) errors::invalid("refusing to write an empty cloud");
  const Eigen::Index d = points[0].size();
  for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << "p" << j;
  out << "\n";
  for (const Eigen::VectorXd& p : points) {
    for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << format17(p[j]);
    out << "\n";
  }
}

void write_radial_csv(const std::filesystem::path& path,
                      std::span<const RadialSample> samples) {
  std::ofstream out(path);
  if (!out) errors::parse("cannot open " + path.string() + " for writing");
  if (samples.empty()) errors::invalid("refusing to write an empty sample set");
  const int d = samples[0].x.ambient_dim();
  for (int j = 0; j < d; ++j) out << "x" << j << ",";
  out << "rho\n";
  for (const RadialSample& s : samples) {
    const Eigen::VectorXd u = s.x.unit();
    for (int j = 0; j < d; ++j) out << format17(u[j]) << ",";
    out << format17(s.rho) << "\n";
  }
}

LoadedSamples read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) errors::parse("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) errors::parse(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  LoadedSamples loaded;
  std::size_t columns = header.size();
  if (columns >= 3 && header.front() == "p0") {
    loaded.schema = CsvSchema::cloud;
    for (std::size_t j = 0; j < columns; ++j) {
      if (header[j] != "p" + std::to_string(j)) errors::parse("malformed cloud header");
    }
  } else if (columns >= 4 && header.front() == "x0" && header.back() == "rho") {
    loaded.schema = CsvSchema::radial;
    for (std::size_t j = 0; j + 1 < columns; ++j) {
      if (header[j] != "x" + std::to_string(j)) errors::parse("malformed radial header");
    }
  } else {
    errors::parse(path.string() + ": unrecognized header '" + line + "'");
  }

  const std::size_t coord_cols = loaded.schema == CsvSchema::cloud ? columns : columns - 1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> tokens = split_line(line);
    if (tokens.size() != columns) {
      errors::parse("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                    " columns, got " + std::to_string(tokens.size()));
    }
    Eigen::VectorXd coords(coord_cols);
    for (std::size_t j = 0; j < coord_cols; ++j) coords[j] = parse_double(tokens[j], line_no);
    double rho;
    if (loaded.schema == CsvSchema::cloud) {
      rho = coords.norm();
      if (rho == 0.0) errors::parse("line " + std::to_string(line_no) + ": zero point");
    } else {
      rho = parse_double(tokens.back(), line_no);
    }
    if (!(rho > 0.0)) {
      errors::parse("line " + std::to_string(line_no) + ": rho must be positive");
    }
    loaded.samples.push_back({project_to_sphere(coords, 1.0), rho});
  }
  if (loaded.samples.empty()) errors::parse(path.string() + ": no data rows");
  return loaded;
}

json to_json(const QuadricParams& q) {
  return json{{"kind", kind_name(q.kind)},
              {"f", q.f},
              {"eps", q.eps},
              {"axis", vector_to_json(q.axis)}};
}

json to_json(const SolutionParams& sol) {
  return json{{"c2", sol.c2},
              {"C", sol.C},
              {"S", sol.S()},
              {"branch", sol.branch == Branch::plus ? "plus" : "minus"},
              {"xi", vector_to_json(sol.xi)}};
}

json to_json(const GeometricElements& el) {
  return json{{"center", vector_to_json(el.center)},
              {"second_focus", vector_to_json(el.second_focus)},
              {"semi_major", el.semi_major},
              {"semi_minor", el.semi_minor}};
}

json to_json(const Tolerances& tol) {
  return json{{"c", tol.c}, {"S", tol.S}, {"C", tol.C}};
}

json to_json(const FitResult& fit) {
  json j{{"S", fit.S},
         {"v", vector_to_json(fit.v)},
         {"C", fit.C},
         {"c2", fit.c2},
         {"kind", kind_name(fit.kind)},
         {"rms_residual", fit.rms_residual},
         {"condition", fit.condition},
         {"tolerances", to_json(fit.tolerances)},
         {"stderr", json{{"S", fit.se_S}, {"C", fit.se_C}, {"c2", fit.se_c2}}}};
  j["axis"] = fit.axis ? vector_to_json(*fit.axis) : json(nullptr);
  j["quadric"] = fit.quadric ? to_json(*fit.quadric) : json(nullptr);
  j["excluded_branch"] = fit.kind == QuadricKind::centered_sphere;
  return j;
}

json to_json(const ResidualReport& report) {
  json systems = json::array();
  for (const SystemStats& s : report.systems) {
    systems.push_back(json{{"system", s.system},
                           {"max_norm", s.max_norm},
                           {"rms", s.rms},
                           {"count", s.count},
                           {"path", s.path}});
  }
  json params;
  if (report.params.c2) params["c2"] = *report.params.c2;
  if (report.params.k) params["k"] = *report.params.k;
  if (report.params.A) params["A"] = *report.params.A;
  if (report.params.S) params["S"] = *report.params.S;
  json j{{"sample_count", report.sample_count},
         {"params", params},
         {"systems", systems},
         {"under_determined", report.under_determined},
         {"worst", report.worst()}};
  if (report.s_stats) {
    j["s_constancy"] = json{{"mean", report.s_stats->mean},
                            {"max_deviation", report.s_stats->max_deviation},
                            {"admissible", report.s_stats->admissible}};
  } else {
    j["s_constancy"] = json(nullptr);
  }
  if (report.reciprocity) {
    j["reciprocity"] = json{{"max", report.reciprocity->max_norm},
                            {"rms", report.reciprocity->rms},
                            {"count", report.reciprocity->count}};
  } else {
    j["reciprocity"] = json(nullptr);
  }
  return j;
}

FitResult fit_from_json(const json& j) {
  FitResult fit;
  try {
    fit.S = j.at("S").get<double>();
    const auto& arr = j.at("v");
    fit.v.resize(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      fit.v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    fit.C = fit.v.norm();
    fit.c2 = fit.S * fit.S - fit.v.squaredNorm() + 1.0;
    if (j.contains("rms_residual")) fit.rms_residual = j["rms_residual"].get<double>();
    if (j.contains("condition")) fit.condition = j["condition"].get<double>();
  } catch (const json::exception& e) {
    errors::parse(std::string("bad fit JSON: ") + e.what());
  }
  fit.tolerances = default_tolerances(fit.S, fit.C);
  fit.kind = classify(fit.S, fit.C, fit.tolerances);
  if (fit.kind != QuadricKind::centered_sphere && fit.C > 0.0) fit.axis = fit.v / fit.C;
  return fit;
}

}  // namespace quadric::io
