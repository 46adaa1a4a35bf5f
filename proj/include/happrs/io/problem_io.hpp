#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "happrs/problem.hpp"

namespace happrs::io {

/// JSON container for problem instances:
///   {"schema": 1, "type": "quadratic" | "classification" | "huber_lasso",
///    "seed": <u64, optional>, ...}
/// Matrices are {"rows": r, "cols": c, "data": [row-major values]}.
/// quadratic: "c_f", "c_g", "A". classification: "mu", "features", "labels".
/// huber_lasso: "tau", "mu", "A", "d", "u".
/// Doubles are written with 17 significant digits and reload bit-exactly.
nlohmann::ordered_json problem_to_json(const CompositeProblem& p);
CompositeProblem problem_from_json(const nlohmann::json& j);

void save_problem(const CompositeProblem& p, const std::filesystem::path& path,
                  std::uint64_t seed);
CompositeProblem load_problem(const std::filesystem::path& path);

nlohmann::ordered_json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j, const std::string& what);
Vec vec_from_json(const nlohmann::json& j, const std::string& what);

}  // namespace happrs::io
