#pragma once

#include <string>
#include <vector>

#include "stochround/harness.hpp"

namespace stochround {

// Versioned JSON rendering with a fixed field order: the same report always
// serializes to the same bytes.  Ends with a newline.
std::string report_json(const TrialReport& rep);

// Inverse of report_json.  ParseError on malformed documents or on a schema
// tag this build does not understand.
TrialReport report_from_json(const std::string& text);

// Single-report summary block for terminals.
std::string report_text(const TrialReport& rep);

// One row per report, sorted by overall mean cost (cheapest first).
std::string comparison_table(std::vector<TrialReport> reports);

}  // namespace stochround
