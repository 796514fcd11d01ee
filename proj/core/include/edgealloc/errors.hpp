#pragma once

#include <stdexcept>
#include <string>

namespace edgealloc {

enum class Errc {
  CyclicDependency,
  UnknownVertex,
  TooManyFlows,
  Unreachable,
  GenerationExhausted,
  ConstraintViolation,
  InvalidPrefix,
  InfeasibleMemoryPlacement,
  Infeasible,
  OracleTooLarge,
  ConfigError,
  IoError,
};

/// Library error with a machine-readable code; the CLI maps codes to exit
/// codes (infeasible -> 2, config/IO -> 3).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::CyclicDependency: return "CyclicDependency";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::TooManyFlows: return "TooManyFlows";
    case Errc::Unreachable: return "Unreachable";
    case Errc::GenerationExhausted: return "GenerationExhausted";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::InvalidPrefix: return "InvalidPrefix";
    case Errc::InfeasibleMemoryPlacement: return "InfeasibleMemoryPlacement";
    case Errc::Infeasible: return "Infeasible";
    case Errc::OracleTooLarge: return "OracleTooLarge";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace edgealloc
