#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magnonic {

enum class ErrorKind {
  InvalidParams,
  DegenerateDenominator,
  InadmissibleBranch,
  PhaseInconsistent,
  ZeroCoupling,
  NoRealThreshold,
  ConvergenceFailure,
  UnstableDrift,
  SingularSystem,
  UnstableRegion,
  Diverged,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::InadmissibleBranch: return "InadmissibleBranch";
    case ErrorKind::PhaseInconsistent: return "PhaseInconsistent";
    case ErrorKind::ZeroCoupling: return "ZeroCoupling";
    case ErrorKind::NoRealThreshold: return "NoRealThreshold";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::UnstableDrift: return "UnstableDrift";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::UnstableRegion: return "UnstableRegion";
    case ErrorKind::Diverged: return "Diverged";
  }
  return "Unknown";
}

/// Every numerical failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace magnonic
