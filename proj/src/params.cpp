#include "happrs/params.hpp"

#include "happrs/core/error.hpp"

namespace happrs {

std::vector<std::string> validate_params(const SolverParams& p, bool relaxed) {
  std::vector<std::string> v;
  if (!(p.rho > 0.0 && p.rho < 1.0)) v.emplace_back("rho not in (0, 1)");
  if (!(p.nu > 0.0 && p.nu < 1.0)) v.emplace_back("nu not in (0, 1)");
  if (!(p.alpha > -1.0)) v.emplace_back("alpha <= -1");
  if (!relaxed && p.rho > 0.0 && !(p.alpha < 1.0 / p.rho - 1.0)) {
    v.emplace_back("alpha >= 1/rho - 1");
  }
  if (!(p.beta > 0.0)) v.emplace_back("beta <= 0");
  if (!(p.ell > 0.0)) v.emplace_back("ell <= 0");
  if (!(p.sigma > 0.0)) v.emplace_back("sigma <= 0");
  if (!(p.r + p.s != 0.0)) v.emplace_back("r + s = 0");
  if (p.max_iter < 1) v.emplace_back("max_iter < 1");
  return v;
}

void ensure_valid(const SolverParams& params) {
  const auto v = validate_params(params, params.relaxed_alpha);
  if (v.empty()) return;
  std::string msg = "invalid solver parameters:";
  for (const auto& item : v) msg += " [" + item + "]";
  throw Error(ErrorKind::InvalidArgument, msg);
}

}  // namespace happrs
