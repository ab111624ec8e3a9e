#pragma once

#include <stdexcept>
#include <string>

namespace nvsim {

enum class Errc {
  NotHermitian,
  NotUnitary,
  InvalidArgument,
  EmptyScan,
  TransverseFieldNotSupported,
  StrainTooWeak,
  DegenerateDenominator,
  ZeroStrain,
  AmbiguousBranch,
  DivisionByZeroDetuning,
  InvalidState,
  DegenerateSteadyState,
  OutOfRange,
  FitDidNotConverge,
  InsufficientSpan,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyScan: return "EmptyScan";
    case Errc::TransverseFieldNotSupported: return "TransverseFieldNotSupported";
    case Errc::StrainTooWeak: return "StrainTooWeak";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::ZeroStrain: return "ZeroStrain";
    case Errc::AmbiguousBranch: return "AmbiguousBranch";
    case Errc::DivisionByZeroDetuning: return "DivisionByZeroDetuning";
    case Errc::InvalidState: return "InvalidState";
    case Errc::DegenerateSteadyState: return "DegenerateSteadyState";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::FitDidNotConverge: return "FitDidNotConverge";
    case Errc::InsufficientSpan: return "InsufficientSpan";
  }
  return "Unknown";
}

// Numerical or physical-model failure. The CLI maps these to exit code 3.
class ModelError : public std::runtime_error {
 public:
  ModelError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Bad configuration input. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };

  ConfigError(Kind kind, std::string key, int line, const std::string& what)
      : std::runtime_error(format(kind, key, line, what)),
        kind_(kind), key_(std::move(key)), line_(line) {}

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(Kind kind, const std::string& key, int line, const std::string& what) {
    std::string s = kind == Kind::Parse ? "ConfigParseError" : "ValidationError";
    if (line > 0) s += " (line " + std::to_string(line) + ")";
    if (!key.empty()) s += " [" + key + "]";
    return s + ": " + what;
  }

  Kind kind_;
  std::string key_;
  int line_;
};

}  // namespace nvsim
