#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smig {

enum class ErrorKind {
  domain,
  singularity,
  config,
  kind,
  shape,
  data,
  geometry,
  truncation,
  rank,
  division,
  io,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::config: return "config";
    case ErrorKind::kind: return "kind";
    case ErrorKind::shape: return "shape";
    case ErrorKind::data: return "data";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::rank: return "rank";
    case ErrorKind::division: return "division";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// Every failure raised by the library. what() reads "<module>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& detail)
      : std::runtime_error(module + ": " + detail),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace smig
