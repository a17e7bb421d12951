#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nptasmc {

// Diagnostics are collected (not thrown) by the parser and the validator so
// that a single pass can report every problem in a document.
enum class DiagCode {
    SyntaxError,
    DuplicateIdentifier,
    UnresolvedReference,
    ClockOverlap,
    OutputPartitionViolation,
    GuardKindViolation,
    MissingExpRate,
    ProbabilityOutOfRange,
    UnknownObserver,
    ReservedWord,
};

struct Diagnostic {
    DiagCode code;
    std::string message;
    int line = 0;
    int col = 0;
};

std::string to_string(DiagCode code);
std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// Runtime faults raised by the simulation engine, the monitor, the oracle
// and the statistical procedures.
enum class Errc {
    DeterminismViolation,
    NoEnabledOutput,
    UnknownClock,
    UnknownIdentifier,
    ObserverMismatch,
    IntRangeViolation,
    NotComposable,
    DepthExceeded,
    UnsupportedStructure,
    SourceExhausted,
    InvalidParams,
    InfeasibleDemand,
    StepLimitExceeded,
};

class model_error : public std::runtime_error {
  public:
    model_error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

} // namespace nptasmc
