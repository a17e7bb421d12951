#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nptasmc/diagnostics.hpp"
#include "nptasmc/document.hpp"
#include "nptasmc/engine.hpp"
#include "nptasmc/model.hpp"
#include "nptasmc/property.hpp"

namespace nptasmc {

// Text surface: .nptam model files, .npq query files, .nprun run traces.
// All line-oriented UTF-8 with '#' comments; CRLF is normalized.

struct ParseResult {
    std::optional<ModelDocument> document;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return document.has_value(); }
};

ParseResult parse_model(std::string_view text);
std::string serialize_model(const ModelDocument& doc);

struct QueryParseResult {
    std::optional<PwctlQuery> query;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return query.has_value(); }
};

// Queries resolve identifiers against a validated model.
QueryParseResult parse_query(std::string_view text, const NetworkModel& model);

std::string serialize_run(const NetworkModel& model, const Run& run);

struct RunParseResult {
    std::optional<Run> run;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return run.has_value(); }
};

RunParseResult parse_run(std::string_view text, const NetworkModel& model);

// Shortest round-trippable decimal representation.
std::string format_double(double value);

} // namespace nptasmc
