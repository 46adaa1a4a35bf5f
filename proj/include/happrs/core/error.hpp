#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace happrs {

enum class ErrorKind {
  DimensionMismatch,
  NotPositiveDefinite,
  InvalidArgument,
  UnknownLipschitz,
  ProximalNotPD,
  LineSearchFailed,
  NumericalError,
  NonPositiveEta1,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace happrs
