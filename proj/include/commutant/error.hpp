#pragma once

#include <stdexcept>
#include <string>

namespace commutant {

enum class ErrorCode {
  ParameterDomain,
  Degenerate,
  DegreeOverflow,
  PoleHit,
  IllConditioned,
  NoConvergence,
  RankCollapse,
  ZeroLeading,
  ConventionMismatch,
  IoFailure,
  InvalidArgument,
  Internal
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace commutant
