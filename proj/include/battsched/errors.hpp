#pragma once

#include <stdexcept>
#include <string>

namespace battsched {

// Failure categories. The CLI maps these onto process exit classes:
// configuration problems -> 2, data/coverage problems -> 3, solver -> 4.
enum class Errc {
  Coverage,
  IncompatibleWindow,
  WrongKind,
  NoOverlap,
  UndefinedMetric,
  SizeMismatch,
  NumericDomain,
  ZeroVariance,
  Config,
  InvalidSpec,
  Commitment,
  Period,
  Format,
  SolverLimit,
  Unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::Coverage: return "coverage";
    case Errc::IncompatibleWindow: return "incompatible-window";
    case Errc::WrongKind: return "wrong-kind";
    case Errc::NoOverlap: return "no-overlap";
    case Errc::UndefinedMetric: return "undefined-metric";
    case Errc::SizeMismatch: return "size-mismatch";
    case Errc::NumericDomain: return "numeric-domain";
    case Errc::ZeroVariance: return "zero-variance";
    case Errc::Config: return "config";
    case Errc::InvalidSpec: return "invalid-spec";
    case Errc::Commitment: return "commitment";
    case Errc::Period: return "period";
    case Errc::Format: return "format";
    case Errc::SolverLimit: return "solver-limit";
    case Errc::Unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace battsched
