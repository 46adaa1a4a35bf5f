#include "happrs/io/problem_io.hpp"

#include <fstream>
#include <type_traits>

#include "happrs/io/config.hpp"
#include "json_util.hpp"

namespace happrs::io {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace detail;

ordered_json mat_to_json(const Mat& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = m.values();
  return j;
}

Mat mat_from_json(const json& j, const std::string& what) {
  expect_object(j, what);
  reject_unknown(j, what, {"rows", "cols", "data"});
  const auto rows = as_u64(field(j, what, "rows"), what + ".rows");
  const auto cols = as_u64(field(j, what, "cols"), what + ".cols");
  Vec data = vec_from_json(field(j, what, "data"), what + ".data");
  if (data.size() != rows * cols) config_error(what + ": data length does not match rows*cols");
  return Mat::from_row_major(rows, cols, data.values());
}

Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) config_error(what + ": expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_double(e, what));
  return Vec(std::move(v));
}

ordered_json problem_to_json(const CompositeProblem& p) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, QuadraticData>) {
          j["type"] = "quadratic";
          j["c_f"] = d.c_f.values();
          j["c_g"] = d.c_g.values();
          j["A"] = mat_to_json(d.a);
        } else if constexpr (std::is_same_v<T, ClassificationData>) {
          j["type"] = "classification";
          j["mu"] = d.mu;
          j["features"] = mat_to_json(d.features);
          j["labels"] = d.labels.values();
        } else if constexpr (std::is_same_v<T, LassoData>) {
          j["type"] = "huber_lasso";
          j["tau"] = d.tau;
          j["mu"] = d.mu_huber;
          j["A"] = mat_to_json(d.a);
          j["d"] = d.d.values();
          j["u"] = d.u.values();
        } else {
          throw Error(ErrorKind::InvalidArgument,
                      "problem \"" + p.name() + "\" carries no serializable data");
        }
      },
      p.data());
  return j;
}

CompositeProblem problem_from_json(const json& j) {
  const std::string where = "problem file";
  expect_object(j, where);
  check_schema(j, where, kSchemaVersion);
  const auto type = as_string(field(j, where, "type"), where + ".type");
  try {
    if (type == "quadratic") {
      reject_unknown(j, where, {"schema", "type", "seed", "c_f", "c_g", "A"});
      return make_quadratic(vec_from_json(field(j, where, "c_f"), "c_f"),
                            vec_from_json(field(j, where, "c_g"), "c_g"),
                            mat_from_json(field(j, where, "A"), "A"));
    }
    if (type == "classification") {
      reject_unknown(j, where, {"schema", "type", "seed", "mu", "features", "labels"});
      ClassificationData d;
      d.mu = as_double(field(j, where, "mu"), "mu");
      d.features = mat_from_json(field(j, where, "features"), "features");
      d.labels = vec_from_json(field(j, where, "labels"), "labels");
      return make_classification(std::move(d));
    }
    if (type == "huber_lasso") {
      reject_unknown(j, where, {"schema", "type", "seed", "tau", "mu", "A", "d", "u"});
      LassoData d;
      d.tau = as_double(field(j, where, "tau"), "tau");
      d.mu_huber = as_double(field(j, where, "mu"), "mu");
      d.a = mat_from_json(field(j, where, "A"), "A");
      d.d = vec_from_json(field(j, where, "d"), "d");
      d.u = vec_from_json(field(j, where, "u"), "u");
      return make_huber_lasso(std::move(d));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(where + ": " + e.what());
  }
  config_error(where + ": unknown type \"" + type + "\"");
}

void save_problem(const CompositeProblem& p, const std::filesystem::path& path,
                  std::uint64_t seed) {
  ordered_json j = problem_to_json(p);
  j["seed"] = seed;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

CompositeProblem load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_json_file(path));
}

}  // namespace happrs::io
