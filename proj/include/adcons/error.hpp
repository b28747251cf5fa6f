#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adcons {

enum class ErrorCode {
  RejectNegativeWeight,
  RejectNonzeroDiagonal,
  NoSpanningTree,
  NotStronglyConnected,
  SingularBlock,
  NotStabilizable,
  DivergedIteration,
  NonpositiveGain,
  DimensionMismatch,
  ConfigInvalid,
  InconsistentGrids,
  NonpositiveData,
  AsymmetricLaplacian,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RejectNegativeWeight: return "RejectNegativeWeight";
    case ErrorCode::RejectNonzeroDiagonal: return "RejectNonzeroDiagonal";
    case ErrorCode::NoSpanningTree: return "NoSpanningTree";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::NotStabilizable: return "NotStabilizable";
    case ErrorCode::DivergedIteration: return "DivergedIteration";
    case ErrorCode::NonpositiveGain: return "NonpositiveGain";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InconsistentGrids: return "InconsistentGrids";
    case ErrorCode::NonpositiveData: return "NonpositiveData";
    case ErrorCode::AsymmetricLaplacian: return "AsymmetricLaplacian";
  }
  return "Unknown";
}

}  // namespace adcons
