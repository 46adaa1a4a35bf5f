#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "happrs/baseline.hpp"
#include "happrs/params.hpp"

namespace happrs::io {

inline constexpr int kSchemaVersion = 1;

/// Problem selection. Quadratic instances always come from a file written by
/// gen-data; the generated families may also be loaded from one.
struct ProblemSpec {
  enum class Kind { Quadratic, Classification, HuberLasso };
  Kind kind = Kind::Classification;
  std::size_t n = 100;
  std::size_t t = 100;
  std::size_t m = 128;
  double mu = 1e-3;
  double density = 0.5;
  double tau = 1e-3;
  std::filesystem::path file;  // resolved against the config's directory
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::uint64_t seed = 0;
  SolverParams params;
  std::filesystem::path output_dir = "out";
  bool baseline = false;
  GdParams baseline_params;
  std::size_t snapshot_every = 0;
};

struct SweepConfig {
  ExperimentConfig base;
  std::vector<std::pair<double, double>> rs_grid;
  std::vector<double> alpha_grid{0.0};
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Parse errors throw Error(ErrorKind::Config). Unknown keys are errors.
/// Relative paths inside the document resolve against `base_dir`.
ExperimentConfig parse_experiment(const nlohmann::json& j, const std::filesystem::path& base_dir);
SweepConfig parse_sweep(const nlohmann::json& j, const std::filesystem::path& base_dir);

nlohmann::json read_json_file(const std::filesystem::path& path);
ExperimentConfig load_experiment(const std::filesystem::path& path);
SweepConfig load_sweep(const std::filesystem::path& path);

nlohmann::ordered_json params_to_json(const SolverParams& p);

}  // namespace happrs::io
