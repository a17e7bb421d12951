#include "nptasmc/diagnostics.hpp"

#include <sstream>

namespace nptasmc {

std::string to_string(DiagCode code) {
    switch (code) {
    case DiagCode::SyntaxError: return "SyntaxError";
    case DiagCode::DuplicateIdentifier: return "DuplicateIdentifier";
    case DiagCode::UnresolvedReference: return "UnresolvedReference";
    case DiagCode::ClockOverlap: return "ClockOverlap";
    case DiagCode::OutputPartitionViolation: return "OutputPartitionViolation";
    case DiagCode::GuardKindViolation: return "GuardKindViolation";
    case DiagCode::MissingExpRate: return "MissingExpRate";
    case DiagCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case DiagCode::UnknownObserver: return "UnknownObserver";
    case DiagCode::ReservedWord: return "ReservedWord";
    }
    return "Unknown";
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
    std::ostringstream out;
    for (const auto& d : diags) {
        out << to_string(d.code);
        if (d.line > 0) {
            out << " at " << d.line << ':' << d.col;
        }
        out << ": " << d.message << '\n';
    }
    return out.str();
}

} // namespace nptasmc
