#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "quadric/fit.hpp"
#include "quadric/quadric.hpp"
#include "quadric/residuals.hpp"

namespace quadric::io {

/// 17 significant digits, enough for a lossless double round trip.
std::string format17(double x);

enum class CsvSchema { cloud, radial };

/// Ambient point clouds use header p0,...,pn; radial samples x0,...,xn,rho.
void write_cloud_csv(const std::filesystem::path& path,
                     std::span<const Eigen::VectorXd> points);
void write_radial_csv(const std::filesystem::path& path, std::span<const RadialSample> samples);

struct LoadedSamples {
  std::vector<RadialSample> samples;
  CsvSchema schema = CsvSchema::radial;
};

/// Reads either schema (detected from the header). Cloud rows are converted
/// to radial samples via x = p/|p|, rho = |p|.
LoadedSamples read_samples_csv(const std::filesystem::path& path);

nlohmann::json to_json(const QuadricParams& q);
nlohmann::json to_json(const SolutionParams& sol);
nlohmann::json to_json(const GeometricElements& el);
nlohmann::json to_json(const Tolerances& tol);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const ResidualReport& report);

FitResult fit_from_json(const nlohmann::json& j);

}  // namespace quadric::io
